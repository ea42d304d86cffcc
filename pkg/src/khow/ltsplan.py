"""Plan-existence semantics over a bare Lts, and the singleton-cell lifting.

Here ``Kh`` quantifies over all finite action sequences instead of an
agent's declared cells: the formula holds iff *some* plan is strongly
executable on every cond-state and maps them only into goal-states.  The
search runs breadth-first over frontiers (subset construction): an action
is applicable at a frontier iff every frontier state has a successor, which
aggregates strong executability from a set of sources exactly.
"""

from __future__ import annotations

from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .formula import Atom, Bot, Formula, Kh, Not, Or, Top, kh_atoms, subformulas
from .mcheck import Extension
from .model import EMPTY_PLAN, Lts, Ltsu, Plan, StateId

MAX_SEARCH_STATES = 15


class SearchSpaceError(ValueError):
    """The model is too large for the exhaustive frontier search."""


def kh_lts(m: Lts, cond_states: Iterable[StateId], goal_states: Iterable[StateId],
           *, max_states: int = MAX_SEARCH_STATES) -> Optional[Plan]:
    """Shortest plan from cond-states into goal-states, or None.

    Returns the lexicographically least witness (by declared action order)
    among the shortest ones; returns the empty plan () when cond_states is
    already inside goal_states, including the vacuous empty-cond case.
    Compare results against None, not by truthiness.
    """
    if len(m.states) > max_states:
        raise SearchSpaceError(
            f"frontier search needs at most {max_states} states, model has {len(m.states)}; "
            "raise max_states to override")
    cond = frozenset(cond_states)
    goal = frozenset(goal_states)
    if cond <= goal:
        return EMPTY_PLAN
    visited = {cond}
    layer: List[Tuple[Plan, FrozenSet[StateId]]] = [(EMPTY_PLAN, cond)]
    while layer:
        nxt: List[Tuple[Plan, FrozenSet[StateId]]] = []
        for plan, frontier in layer:
            for a in m.actions:
                succs = [m.successors(a, u) for u in frontier]
                if any(not vs for vs in succs):
                    continue
                new_frontier = frozenset().union(*succs)
                if new_frontier in visited:
                    continue
                visited.add(new_frontier)
                candidate = plan + (a,)
                if new_frontier <= goal:
                    return candidate
                nxt.append((candidate, new_frontier))
        layer = nxt
    return None


def extension_lts(m: Lts, f: Formula, *, max_states: int = MAX_SEARCH_STATES) -> Extension:
    """Labeling over plan-existence semantics; Kh agent indices are ignored.

    Rejects formulas mentioning more than one agent, since the bare model
    carries no per-agent structure.
    """
    agents = {a.agent for a in kh_atoms(f)}
    if len(agents) > 1:
        raise SearchSpaceError(
            f"plan-existence semantics is single-agent; formula uses {sorted(agents)}")
    everything = frozenset(m.states)
    table: Dict[Formula, FrozenSet[StateId]] = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            table[g] = frozenset(
                s for s in m.states if g.name in m.valuation.get(s, frozenset()))
        elif isinstance(g, Top):
            table[g] = everything
        elif isinstance(g, Bot):
            table[g] = frozenset()
        elif isinstance(g, Not):
            table[g] = everything - table[g.sub]
        elif isinstance(g, Or):
            table[g] = table[g.left] | table[g.right]
        elif isinstance(g, Kh):
            found = kh_lts(m, table[g.cond], table[g.goal], max_states=max_states)
            table[g] = everything if found is not None else frozenset()
    return Extension(f, table[f])


def lift_to_ultsclass(m: Lts, max_len: int, agents: Sequence[str] = ("i",),
                      *, max_cells: int = 20000) -> Ltsu:
    """Wrap an Lts so every plan up to max_len is its own singleton cell.

    A finite approximation of the class where agents hold all of ACT* fully
    distinguished; on witnesses of length <= max_len the two semantics of
    Kh coincide.
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    total = sum(len(m.actions) ** k for k in range(max_len + 1))
    if total > max_cells:
        raise SearchSpaceError(f"lifting would create {total} cells (cap {max_cells})")
    plans: List[Plan] = [EMPTY_PLAN]
    for length in range(1, max_len + 1):
        plans.extend(product(m.actions, repeat=length))
    cells = tuple(frozenset({p}) for p in plans)
    return Ltsu(m, {agent: cells for agent in agents})
