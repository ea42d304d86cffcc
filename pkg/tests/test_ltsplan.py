import random

import pytest
from hypothesis import given, settings, strategies as st

from khow.formula import Kh, Atom, implies, conj, parse, universally
from khow.harness import GenConfig, gen_ltsu, plan_search_bruteforce
from khow.ltsplan import SearchSpaceError, extension_lts, kh_lts, lift_to_ultsclass
from khow.mcheck import extension
from khow.model import image_plan, se_states


class TestDemoBase:
    def test_finds_composite_plan(self, base):
        # ab reaches r from p even though the uncertainty semantics rejects it
        assert kh_lts(base, {"w"}, {"v"}) == ("a", "b")

    def test_empty_cond_vacuous(self, base):
        assert kh_lts(base, set(), {"v"}) == ()

    def test_empty_plan_when_already_there(self, base):
        assert kh_lts(base, {"w"}, {"w"}) == ()

    def test_not_found(self, base):
        assert kh_lts(base, {"x"}, {"v"}) is None

    def test_extension_lts_goldens(self, base):
        everything = frozenset(base.states)
        assert extension_lts(base, parse("Kh[i](p, r)", ["i"])).states == everything
        assert extension_lts(base, parse("Kh[i](p, p)", ["i"])).states == everything
        assert extension_lts(base, parse("A (p -> p)", ["i"])).states == everything
        assert extension_lts(base, parse("A p", ["i"])).states == frozenset()

    def test_multi_agent_rejected(self, base):
        f = Kh("i", Kh("j", Atom("p"), Atom("q")), Atom("r"))
        with pytest.raises(SearchSpaceError):
            extension_lts(base, f)

    def test_state_guard(self):
        from khow.harness import scaling_model
        big = scaling_model(20).base
        with pytest.raises(SearchSpaceError):
            kh_lts(big, {"w0"}, {"w1"})
        assert kh_lts(big, {"w0"}, {"w1"}, max_states=20) == ("a",)


class TestLifting:
    def test_lift_zero_is_epsilon_only(self, base):
        lifted = lift_to_ultsclass(base, 0)
        assert lifted.strategies["i"] == (frozenset({()}),)

    def test_lift_one_enumerates_actions(self, base):
        lifted = lift_to_ultsclass(base, 1)
        cells = set(lifted.strategies["i"])
        assert cells == {frozenset({()}), frozenset({("a",)}),
                         frozenset({("b",)}), frozenset({("c",)})}

    def test_lift_two_recovers_plan_semantics(self, base):
        lifted = lift_to_ultsclass(base, 2)
        f = parse("Kh[i](p, r)", ["i"])
        assert extension(lifted, f).states == frozenset(base.states)
        assert extension(lifted, f).states == extension_lts(base, f).states

    def test_lift_guard(self, base):
        with pytest.raises(SearchSpaceError):
            lift_to_ultsclass(base, 12)
        with pytest.raises(ValueError):
            lift_to_ultsclass(base, -1)


def _search_case(seed):
    cfg = GenConfig(seed=seed, max_states=5, max_actions=3)
    m = gen_ltsu(cfg).base
    rng = random.Random(seed)
    cond = frozenset(s for s in m.states if rng.random() < 0.4)
    goal = frozenset(s for s in m.states if rng.random() < 0.5)
    return m, cond, goal


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_agrees_with_plan_enumeration(seed):
    m, cond, goal = _search_case(seed)
    mine = kh_lts(m, cond, goal)
    reference = plan_search_bruteforce(m, cond, goal, max_len=4)
    if mine is None:
        assert reference is None
    else:
        # witness soundness by the plain definitions
        assert cond <= se_states(m, mine)
        assert image_plan(m, mine, cond) <= goal
        if len(mine) <= 4:
            assert mine == reference


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_correspondence_with_lifting(seed):
    cfg = GenConfig(seed=seed, max_states=4, max_actions=2, max_formula_depth=3)
    m = gen_ltsu(cfg).base
    from khow.harness import gen_formula
    from khow.formula import kh_atoms
    f = gen_formula(cfg, ["i"])
    ext = extension_lts(m, f)
    # bound the lift length by the witnesses the search itself produces
    longest = 0
    for atom in kh_atoms(f):
        sub = extension_lts(m, atom.cond).states
        goal = extension_lts(m, atom.goal).states
        found = kh_lts(m, sub, goal)
        if found is not None:
            longest = max(longest, len(found))
    if longest > 3:
        return
    lifted = lift_to_ultsclass(m, longest)
    assert extension(lifted, f).states == ext.states


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_emp_and_compkh_hold_under_plan_semantics(seed):
    cfg = GenConfig(seed=seed, max_states=4, max_actions=2, max_formula_depth=2)
    m = gen_ltsu(cfg).base
    from khow.harness import gen_formula
    psi = gen_formula(GenConfig(seed=seed * 3 + 1, max_formula_depth=2), ["i"])
    phi = gen_formula(GenConfig(seed=seed * 3 + 2, max_formula_depth=2), ["i"])
    chi = gen_formula(GenConfig(seed=seed * 3 + 3, max_formula_depth=2), ["i"])
    everything = frozenset(m.states)
    emp = implies(universally(implies(psi, phi), ["i"]), Kh("i", psi, phi))
    comp = implies(conj(Kh("i", psi, phi), Kh("i", phi, chi)), Kh("i", psi, chi))
    assert extension_lts(m, emp).states == everything
    assert extension_lts(m, comp).states == everything
