import random

from hypothesis import HealthCheck, settings, strategies as st

from mpst_iso.generators import GlobalTypeGenerator
from mpst_iso.wellformed import is_well_formed

settings.register_profile("default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
settings.load_profile("default")


@st.composite
def raw_global_types(draw, max_depth: int = 4):
    seed = draw(st.integers(0, 2**32 - 1))
    depth = draw(st.integers(1, max_depth))
    return GlobalTypeGenerator(random.Random(seed), max_depth=max_depth).gen(depth)


def projectable_types(max_depth: int = 4):
    return raw_global_types(max_depth).filter(is_well_formed)
