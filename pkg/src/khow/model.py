"""Labeled transition systems, plan-uncertainty models, and plan algebra.

An ``Lts`` is a finite set of states with one binary relation per action
name and a propositional valuation.  An ``Ltsu`` adds, per agent, a tuple of
plan cells: pairwise-disjoint, non-empty sets of finite action sequences.
A cell collects the plans an agent cannot tell apart, so choosing the cell
means committing to every plan in it.

State sets returned by the operations here are plain frozensets; use
``Lts.sort_states`` when a deterministic order is needed for output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

ActionId = str
StateId = str
Plan = Tuple[ActionId, ...]
PlanSet = FrozenSet[Plan]

EMPTY_PLAN: Plan = ()


class ModelFormatError(ValueError):
    """Raised when a model document cannot be decoded at all."""


@dataclass(frozen=True)
class Lts:
    states: Tuple[StateId, ...]
    actions: Tuple[ActionId, ...]
    relations: Mapping[ActionId, FrozenSet[Tuple[StateId, StateId]]]
    valuation: Mapping[StateId, FrozenSet[str]]
    _succ: Dict[ActionId, Dict[StateId, FrozenSet[StateId]]] = field(
        init=False, repr=False, compare=False)
    _order: Dict[StateId, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        succ: Dict[ActionId, Dict[StateId, FrozenSet[StateId]]] = {}
        for a, pairs in self.relations.items():
            per_state: Dict[StateId, set] = {}
            for (u, v) in pairs:
                per_state.setdefault(u, set()).add(v)
            succ[a] = {u: frozenset(vs) for u, vs in per_state.items()}
        object.__setattr__(self, "_succ", succ)
        object.__setattr__(self, "_order", {s: t for t, s in enumerate(self.states)})

    def successors(self, action: ActionId, state: StateId) -> FrozenSet[StateId]:
        return self._succ.get(action, {}).get(state, frozenset())

    def sort_states(self, states: Iterable[StateId]) -> List[StateId]:
        """Sort by declared order; unknown ids go last, alphabetically."""
        return sorted(states, key=lambda s: (self._order.get(s, len(self.states)), s))


@dataclass(frozen=True)
class Ltsu:
    base: Lts
    strategies: Mapping[str, Tuple[PlanSet, ...]]


def _plan_key(plan: Plan) -> Tuple[int, Plan]:
    return (len(plan), plan)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_lts(m: Lts) -> List[str]:
    problems: List[str] = []
    if not m.states:
        problems.append("state set empty")
    if len(set(m.states)) != len(m.states):
        problems.append("duplicate state ids")
    if len(set(m.actions)) != len(m.actions):
        problems.append("duplicate action ids")
    states = set(m.states)
    actions = set(m.actions)
    for a in sorted(m.relations):
        if a not in actions:
            problems.append(f"relation for undeclared action {a!r}")
        for (u, v) in sorted(m.relations[a]):
            if u not in states or v not in states:
                problems.append(f"relation {a!r} has edge ({u!r}, {v!r}) outside the state set")
    for s in sorted(m.valuation):
        if s not in states:
            problems.append(f"valuation for undeclared state {s!r}")
    return problems


def validate(m: Ltsu, agents: Sequence[str]) -> List[str]:
    """Structural checks for an Ltsu; returns violations, empty when ok."""
    problems = validate_lts(m.base)
    declared = list(dict.fromkeys(agents))
    have = set(m.strategies)
    for agent in declared:
        if agent not in have:
            problems.append(f"agent {agent!r} has no plan cells")
    for agent in sorted(have - set(declared)):
        problems.append(f"plan cells for undeclared agent {agent!r}")
    actions = set(m.base.actions)
    for agent in sorted(have):
        cells = m.strategies[agent]
        if not cells:
            problems.append(f"agent {agent!r}: cell collection empty")
            continue
        owner: Dict[Plan, int] = {}
        for ci, cell in enumerate(cells):
            if not cell:
                problems.append(f"agent {agent!r}: cell {ci} empty")
            for plan in sorted(cell, key=_plan_key):
                for a in plan:
                    if a not in actions:
                        problems.append(
                            f"agent {agent!r}: cell {ci} uses undeclared action {a!r}")
                if plan in owner:
                    problems.append(
                        f"agent {agent!r}: cells {owner[plan]} and {ci} overlap "
                        f"on plan {list(plan)}")
                else:
                    owner[plan] = ci
    return problems


# ---------------------------------------------------------------------------
# Plan algebra
# ---------------------------------------------------------------------------

def image_plan(m: Lts, plan: Plan, source: Iterable[StateId]) -> FrozenSet[StateId]:
    """The states reached by running the plan from every source state."""
    current = frozenset(source)
    for a in plan:
        if not current:
            return current
        current = frozenset().union(*(m.successors(a, u) for u in current))
    return current


def se_states(m: Lts, plan: Plan) -> FrozenSet[StateId]:
    """States where the plan is strongly executable.

    Walks the frontier of partial executions: at every step, every state
    in the frontier must have a successor under the next action.  The
    empty plan is strongly executable everywhere.
    """
    good: List[StateId] = []
    for u in m.states:
        frontier: Iterable[StateId] = (u,)
        ok = True
        for a in plan:
            nexts = [m.successors(a, v) for v in frontier]
            if any(not vs for vs in nexts):
                ok = False
                break
            frontier = frozenset().union(*nexts)
        if ok:
            good.append(u)
    return frozenset(good)


def se_planset(m: Lts, cell: PlanSet) -> FrozenSet[StateId]:
    """States where every plan of the cell is strongly executable."""
    if not cell:
        raise ValueError("plan cell must be non-empty")
    result = frozenset(m.states)
    for plan in sorted(cell, key=_plan_key):
        result &= se_states(m, plan)
    return result


def image_planset(m: Lts, cell: PlanSet, source: Iterable[StateId]) -> FrozenSet[StateId]:
    """Union of the plan images of the cell over the source states."""
    if not cell:
        raise ValueError("plan cell must be non-empty")
    src = frozenset(source)
    out: FrozenSet[StateId] = frozenset()
    for plan in sorted(cell, key=_plan_key):
        out |= image_plan(m, plan, src)
    return out


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------

def lts_from_dict(doc: Mapping) -> Lts:
    try:
        states = tuple(str(s) for s in doc["states"])
        actions = tuple(str(a) for a in doc["actions"])
        relations = {
            str(a): frozenset((str(u), str(v)) for (u, v) in pairs)
            for a, pairs in doc.get("relations", {}).items()
        }
        valuation = {
            str(s): frozenset(str(p) for p in props)
            for s, props in doc.get("valuation", {}).items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model document: {exc}") from exc
    return Lts(states, actions, relations, valuation)


def ltsu_from_dict(doc: Mapping) -> Ltsu:
    base = lts_from_dict(doc)
    if "strategies" not in doc:
        raise ModelFormatError("model document has no 'strategies' field")
    try:
        strategies = {
            str(agent): tuple(
                frozenset(tuple(str(a) for a in plan) for plan in cell)
                for cell in cells
            )
            for agent, cells in doc["strategies"].items()
        }
    except (TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed strategies: {exc}") from exc
    return Ltsu(base, strategies)


def model_from_dict(doc: Mapping) -> Tuple[Union[Lts, Ltsu], Optional[str]]:
    """Decode a model document; returns (model, designated-state-or-None)."""
    if not isinstance(doc, Mapping):
        raise ModelFormatError("model document must be an object")
    designated = doc.get("designated")
    if designated is not None:
        designated = str(designated)
    if "strategies" in doc:
        return ltsu_from_dict(doc), designated
    return lts_from_dict(doc), designated


def model_to_dict(m: Union[Lts, Ltsu], designated: Optional[str] = None) -> dict:
    base = m.base if isinstance(m, Ltsu) else m
    doc: dict = {
        "states": list(base.states),
        "actions": list(base.actions),
        "valuation": {s: sorted(base.valuation.get(s, frozenset())) for s in base.states},
        "relations": {
            a: [list(pair) for pair in sorted(
                base.relations.get(a, frozenset()),
                key=lambda p: (base._order.get(p[0], 0), base._order.get(p[1], 0)))]
            for a in base.actions
        },
    }
    if isinstance(m, Ltsu):
        doc["strategies"] = {
            agent: [[list(plan) for plan in sorted(cell, key=_plan_key)]
                    for cell in m.strategies[agent]]
            for agent in sorted(m.strategies)
        }
    if designated is not None:
        doc["designated"] = designated
    return doc


def load_model(path: str) -> Tuple[Union[Lts, Ltsu], Optional[str]]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"{path}: {exc}") from exc
    return model_from_dict(doc)


def save_model(path: str, m: Union[Lts, Ltsu], designated: Optional[str] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_model(m, designated))


def dumps_model(m: Union[Lts, Ltsu], designated: Optional[str] = None) -> str:
    return json.dumps(model_to_dict(m, designated), indent=2) + "\n"
