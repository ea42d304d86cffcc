"""Bottom-up labeling model checker for the knowing-how modality.

Subformulas are labeled once each, children before parents.  A formula
``Kh[i](cond, goal)`` is true everywhere or nowhere: it holds iff some plan
cell of agent ``i`` is strongly executable on every cond-state and its
image of the cond-states lands inside the goal-states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional

from .formula import Atom, Bot, Formula, Kh, Not, Or, Top, agents_of, subformulas
from .model import (Ltsu, PlanSet, StateId, image_planset, se_planset, validate)


class ModelCheckError(ValueError):
    pass


@dataclass(frozen=True)
class Extension:
    """The set of states of a fixed model satisfying a formula."""

    formula: Formula
    states: FrozenSet[StateId]


def label_table(m: Ltsu, f: Formula) -> Dict[Formula, FrozenSet[StateId]]:
    """Label every subformula of f; assumes the model already validated."""
    everything = frozenset(m.base.states)
    table: Dict[Formula, FrozenSet[StateId]] = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            table[g] = frozenset(
                s for s in m.base.states if g.name in m.base.valuation.get(s, frozenset()))
        elif isinstance(g, Top):
            table[g] = everything
        elif isinstance(g, Bot):
            table[g] = frozenset()
        elif isinstance(g, Not):
            table[g] = everything - table[g.sub]
        elif isinstance(g, Or):
            table[g] = table[g.left] | table[g.right]
        elif isinstance(g, Kh):
            cell = _witness_cell(m, g.agent, table[g.cond], table[g.goal])
            table[g] = everything if cell is not None else frozenset()
        else:
            raise ModelCheckError(f"not a formula node: {g!r}")
    return table


def _witness_cell(m: Ltsu, agent: str, cond_states: FrozenSet[StateId],
                  goal_states: FrozenSet[StateId]) -> Optional[PlanSet]:
    cells = m.strategies[agent]
    if not cond_states:
        # vacuously true; the first cell in file order stands as witness
        return cells[0]
    for cell in cells:
        if cond_states <= se_planset(m.base, cell) and \
                image_planset(m.base, cell, cond_states) <= goal_states:
            return cell
    return None


def _require_checkable(m: Ltsu, f: Formula) -> None:
    problems = validate(m, list(m.strategies))
    if problems:
        raise ModelCheckError("invalid model: " + "; ".join(problems))
    missing = agents_of(f) - set(m.strategies)
    if missing:
        raise ModelCheckError(f"formula uses undeclared agents: {sorted(missing)}")


def extension(m: Ltsu, f: Formula) -> Extension:
    """The set of states satisfying f, computed by bottom-up labeling."""
    _require_checkable(m, f)
    return Extension(f, label_table(m, f)[f])


def check(m: Ltsu, state: StateId, f: Formula) -> bool:
    """Truth of f at one state of a validated model."""
    if state not in m.base.states:
        raise ModelCheckError(f"unknown state {state!r}")
    return state in extension(m, f).states


def witness(m: Ltsu, f: Kh) -> Optional[PlanSet]:
    """The first plan cell (in file order) witnessing a true Kh formula.

    Returns None when the formula is false.  Diagnostic companion to
    ``check``; for a vacuously true formula the first cell is reported.
    """
    _require_checkable(m, f)
    table = label_table(m, f)
    return _witness_cell(m, f.agent, table[f.cond], table[f.goal])
