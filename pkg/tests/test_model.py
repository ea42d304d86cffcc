import json
import os

import pytest
from hypothesis import given, settings, strategies as st

from khow.harness import GenConfig, gen_ltsu, naive_se_at
from khow.model import (Ltsu, ModelFormatError, dumps_model, image_plan,
                        image_planset, load_model, model_from_dict,
                        se_planset, se_states, validate)

from conftest import demo_model

AB = ("a", "b")
C = ("c",)


class TestValidate:
    def test_demo_model_ok(self, model):
        assert validate(model, ["i"]) == []

    def test_empty_cell_collection(self, model):
        bad = Ltsu(model.base, {"i": ()})
        assert any("empty" in v for v in validate(bad, ["i"]))

    def test_overlapping_cells(self, model):
        bad = Ltsu(model.base, {"i": (
            frozenset({("a",)}), frozenset({("a",), ("b",)}))})
        assert any("overlap" in v for v in validate(bad, ["i"]))

    def test_empty_cell(self, model):
        bad = Ltsu(model.base, {"i": (frozenset(),)})
        assert any("cell 0 empty" in v for v in validate(bad, ["i"]))

    def test_agent_mismatch(self, model):
        assert any("no plan cells" in v for v in validate(model, ["i", "j"]))
        assert any("undeclared agent" in v for v in validate(model, []))

    def test_unknown_action_in_plan(self, model):
        bad = Ltsu(model.base, {"i": (frozenset({("zz",)}),)})
        assert any("undeclared action" in v for v in validate(bad, ["i"]))


class TestPlanAlgebra:
    def test_empty_plan_is_identity(self, base):
        assert image_plan(base, (), {"w"}) == frozenset({"w"})

    def test_image_composes_edges(self, base):
        # a then b from w: w -a-> u -b-> v
        assert image_plan(base, AB, {"w"}) == frozenset({"v"})

    def test_image_of_missing_edge_is_empty(self, base):
        assert image_plan(base, C, {"u"}) == frozenset()

    def test_se_empty_plan_everywhere(self, base):
        assert se_states(base, ()) == frozenset(base.states)

    def test_se_ab(self, base):
        # only w starts ab safely: u, v, x have no a-successor at step one
        assert se_states(base, AB) == frozenset({"w"})
        assert all(naive_se_at(base, AB, s) == (s == "w") for s in base.states)

    def test_se_c(self, base):
        assert se_states(base, C) == frozenset({"w"})

    def test_se_planset_is_intersection(self, base):
        cell = frozenset({AB, C})
        assert se_planset(base, cell) == se_states(base, AB) & se_states(base, C)

    def test_se_planset_epsilon(self, base):
        assert se_planset(base, frozenset({()})) == frozenset(base.states)

    def test_se_planset_single(self, base):
        assert se_planset(base, frozenset({("a",)})) == frozenset({"w"})

    def test_image_planset_union(self, base):
        cell = frozenset({AB, C})
        assert image_planset(base, cell, {"w"}) == frozenset({"v", "x"})

    def test_image_planset_epsilon(self, base):
        assert image_planset(base, frozenset({()}), {"u", "v"}) == frozenset({"u", "v"})

    def test_image_planset_single_edge(self, base):
        assert image_planset(base, frozenset({("b",)}), {"u"}) == frozenset({"v"})

    def test_planset_ops_reject_empty_cell(self, base):
        with pytest.raises(ValueError):
            se_planset(base, frozenset())
        with pytest.raises(ValueError):
            image_planset(base, frozenset(), {"w"})


def _model_and_plans(seed):
    cfg = GenConfig(seed=seed, max_states=6, max_actions=3, max_plan_len=3)
    m = gen_ltsu(cfg).base
    import random
    rng = random.Random(seed)
    plans = []
    for _ in range(2):
        length = rng.randint(0, 3)
        plans.append(tuple(m.actions[rng.randrange(len(m.actions))]
                           for _ in range(length)))
    return m, plans


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_image_composition(seed):
    m, (sigma, tau) = _model_and_plans(seed)
    source = frozenset(m.states[::2])
    assert image_plan(m, sigma + tau, source) == \
        image_plan(m, tau, image_plan(m, sigma, source))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_image_monotone(seed):
    m, (sigma, _) = _model_and_plans(seed)
    small = frozenset(m.states[:1])
    large = frozenset(m.states)
    assert image_plan(m, sigma, small) <= image_plan(m, sigma, large)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_se_matches_bruteforce(seed):
    m, (sigma, _) = _model_and_plans(seed)
    assert se_states(m, sigma) == frozenset(
        u for u in m.states if naive_se_at(m, sigma, u))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_se_implies_nonempty_image(seed):
    m, (sigma, _) = _model_and_plans(seed)
    if not sigma:
        return
    for u in se_states(m, sigma):
        assert image_plan(m, sigma, {u})


class TestFileFormat:
    def test_load_countermodel(self, fixtures_dir):
        m, designated = load_model(os.path.join(fixtures_dir, "countermodel.json"))
        assert designated is None
        assert m == demo_model()

    def test_round_trip(self, model, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(dumps_model(model, designated="w"))
        loaded, designated = load_model(str(path))
        assert loaded == model
        assert designated == "w"

    def test_dump_is_deterministic(self, model):
        assert dumps_model(model) == dumps_model(model)

    def test_lts_file_omits_strategies(self, base):
        doc = json.loads(dumps_model(base))
        assert "strategies" not in doc
        loaded, _ = model_from_dict(doc)
        assert loaded == base

    def test_malformed_document(self):
        with pytest.raises(ModelFormatError):
            model_from_dict({"states": 3})
        with pytest.raises(ModelFormatError):
            model_from_dict([])
