import pytest
from hypothesis import given, settings, strategies as st

from khow.formula import Atom, Kh, Not, Or, conj, implies, parse, universally
from khow.harness import (AGENT_POOL, GenConfig, gen_formula, gen_ltsu,
                          naive_extension)
from khow.mcheck import ModelCheckError, check, extension, witness
from khow.model import Ltsu


def ext(model, text):
    return set(extension(model, parse(text, list(model.strategies))).states)


ALL = {"w", "u", "v", "x"}


class TestDemoModelGoldens:
    def test_kh_p_q_holds_everywhere(self, model):
        assert ext(model, "Kh[i](p, q)") == ALL

    def test_kh_q_r_holds_everywhere(self, model):
        assert ext(model, "Kh[i](q, r)") == ALL

    def test_kh_p_r_fails(self, model):
        assert ext(model, "Kh[i](p, r)") == set()

    def test_kh_p_p_fails(self, model):
        assert ext(model, "Kh[i](p, p)") == set()

    def test_universal_tautology_holds(self, model):
        assert ext(model, "A (p -> p)") == ALL

    def test_check_at_states(self, model):
        assert check(model, "w", parse("Kh[i](q, r)", ["i"]))
        assert not check(model, "w", parse("bot", ["i"]))
        # Kh truth does not depend on the evaluation state
        assert check(model, "x", parse("Kh[i](p, q)", ["i"]))

    def test_witness_is_first_cell_in_file_order(self, model):
        assert witness(model, parse("Kh[i](p, q)", ["i"])) == frozenset({("a",)})
        assert witness(model, parse("Kh[i](p, r)", ["i"])) is None
        # vacuous condition: first cell stands in
        assert witness(model, parse("Kh[i](bot, p)", ["i"])) == frozenset({("a",)})


class TestErrors:
    def test_unknown_state(self, model):
        with pytest.raises(ModelCheckError):
            check(model, "zz", parse("p", ["i"]))

    def test_undeclared_agent(self, model):
        f = Kh("j", Atom("p"), Atom("q"))
        with pytest.raises(ModelCheckError):
            extension(model, f)

    def test_invalid_model_rejected(self, model):
        broken = Ltsu(model.base, {"i": (frozenset(),)})
        with pytest.raises(ModelCheckError):
            extension(broken, parse("p", ["i"]))


def _case(seed, num_agents=1):
    cfg = GenConfig(seed=seed, num_agents=num_agents)
    m = gen_ltsu(cfg)
    f = gen_formula(cfg, AGENT_POOL[:num_agents])
    return m, f


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_agrees_with_naive_evaluator(seed):
    m, f = _case(seed)
    assert extension(m, f).states == naive_extension(m, f)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_kh_acts_globally(seed):
    m, f = _case(seed)
    everything = frozenset(m.base.states)
    g = Kh("i", f, Not(f))
    assert extension(m, g).states in (frozenset(), everything)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_universal_modality_semantics(seed):
    # A f labels everything iff f labels everything, else nothing
    m, f = _case(seed)
    everything = frozenset(m.base.states)
    a_ext = extension(m, universally(f, ["i"])).states
    f_ext = extension(m, f).states
    assert a_ext == (everything if f_ext == everything else frozenset())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_khe_schema_instances_hold(seed):
    # (E psi & Kh[i](psi, phi)) -> E phi is true everywhere
    from khow.formula import existentially
    cfg = GenConfig(seed=seed, num_agents=2, max_formula_depth=3)
    m = gen_ltsu(cfg)
    psi = gen_formula(GenConfig(seed=seed * 2 + 1, max_formula_depth=2), ["i", "j"])
    phi = gen_formula(GenConfig(seed=seed * 2 + 2, max_formula_depth=2), ["i", "j"])
    agents = ["i", "j"]
    inst = implies(conj(existentially(psi, agents), Kh("i", psi, phi)),
                   existentially(phi, agents))
    assert extension(m, inst).states == frozenset(m.base.states)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_kha_schema_instances_hold(seed):
    # (A(chi->psi) & Kh[i](psi,phi) & A(phi->theta)) -> Kh[i](chi,theta)
    cfg = GenConfig(seed=seed, num_agents=2, max_formula_depth=3)
    m = gen_ltsu(cfg)
    agents = ["i", "j"]
    parts = [gen_formula(GenConfig(seed=seed * 4 + t, max_formula_depth=2), agents)
             for t in range(4)]
    chi, psi, phi, theta = parts
    inst = implies(
        conj(universally(implies(chi, psi), agents),
             conj(Kh("j", psi, phi), universally(implies(phi, theta), agents))),
        Kh("j", chi, theta))
    assert extension(m, inst).states == frozenset(m.base.states)
