import json
import random
from fractions import Fraction
from importlib import resources

import pytest
from hypothesis import settings, strategies as st

from ellimod.elltorus import ELambdaPoint, EPoint
from ellimod.rootsys import all_types, build_root_system

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SMALL_TYPES = all_types(6)


def load_schema(name: str) -> dict:
    with resources.files("ellimod").joinpath(f"schemas/{name}.schema.json").open() as fh:
        return json.load(fh)


@st.composite
def epoints(draw, max_den: int = 12):
    q1 = draw(st.integers(1, max_den))
    q2 = draw(st.integers(1, max_den))
    return EPoint(Fraction(draw(st.integers(0, q1 - 1)), q1), Fraction(draw(st.integers(0, q2 - 1)), q2))


@st.composite
def systems(draw, types=SMALL_TYPES):
    kind, rank = draw(st.sampled_from(types))
    return build_root_system(kind, rank)


@st.composite
def points(draw, types=SMALL_TYPES, max_den: int = 6):
    system = draw(systems(types))
    coords = tuple(draw(epoints(max_den)) for _ in range(system.rank))
    return ELambdaPoint(system, coords)


@st.composite
def weyl_words(draw, system, max_len: int = 30):
    return draw(st.lists(st.integers(0, system.rank - 1), max_size=max_len))


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
