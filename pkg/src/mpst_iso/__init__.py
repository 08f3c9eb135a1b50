"""Multiparty session global types: projection, trace semantics and isomorphism combinators."""

from importlib import resources
from pathlib import Path

from .combinators import (
    RewriteSite,
    applicable_sites,
    apply_site,
    branch_distrib,
    contr,
    exp,
    invert_witness,
    replay,
    swap_prefix,
)
from .equiv import IsoVerdict, check_iso, check_lemma1, check_theorem1, check_theorem2
from .errors import (
    DuplicateLabel,
    IndexOutOfChain,
    MPSTError,
    ParseError,
    ProjectionFailure,
    SelfCommunication,
    UnboundRecVar,
    UnguardedRecursion,
    Unmergeable,
)
from .global_semantics import UnrollBudget, global_steps, traces
from .local_semantics import Configuration, ConfigTrace, LocalAction, config_steps, config_traces, delta, denotation, identify, local_steps
from .parser import parse_global, print_global, print_local
from .projection import merge, mergeable, project, project_all
from .syntax import END, Branch, End, Label, Offer, Prefix, Rec, Recv, Select, Send, Seq, Sort, Var, participants, prefix_at, tail_at
from .wellformed import Violation, check_formation, check_projectable, is_well_formed

__version__ = "0.1.0"


def corpus_path(name: str) -> Path:
    """Path of a bundled protocol file, e.g. ``corpus_path("ehealth")``."""
    if not name.endswith(".mpst"):
        name += ".mpst"
    return Path(str(resources.files(__name__).joinpath("corpus", name)))


def load(name: str):
    """Parse a bundled protocol file."""
    return parse_global(corpus_path(name).read_text(encoding="utf-8"))
