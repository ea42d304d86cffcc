import os

import pytest

from khow.model import Lts, Ltsu

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def demo_base() -> Lts:
    """Four-state model: w --a--> u --b--> v, plus w --c--> x."""
    return Lts(
        states=("w", "u", "v", "x"),
        actions=("a", "b", "c"),
        relations={
            "a": frozenset({("w", "u")}),
            "b": frozenset({("u", "v")}),
            "c": frozenset({("w", "x")}),
        },
        valuation={
            "w": frozenset({"p"}),
            "u": frozenset({"q"}),
            "v": frozenset({"r"}),
            "x": frozenset(),
        },
    )


def demo_model() -> Ltsu:
    """demo_base plus agent i's cells {a}, {b}, {ab, c}.

    The composite plan ab reaches r from p, but it sits in a cell with c,
    which strands the agent; this separates the two Kh semantics.
    """
    return Ltsu(
        demo_base(),
        {"i": (
            frozenset({("a",)}),
            frozenset({("b",)}),
            frozenset({("a", "b"), ("c",)}),
        )},
    )


@pytest.fixture
def base():
    return demo_base()


@pytest.fixture
def model():
    return demo_model()


@pytest.fixture
def fixtures_dir():
    return FIXTURES
