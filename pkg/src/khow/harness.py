"""Seeded generators and first-principles oracles for differential testing.

The oracles re-derive their answers from the semantic definitions with
code paths independent of the production implementations: the naive model
checker evaluates the Kh clause by literal quantification per state, the
plan oracle enumerates action sequences outright, and the satisfiability
oracle exhaustively sweeps small models with freely chosen relations.
All randomness flows from a single seed through labeled child streams, so
adding a generator never shifts existing cases.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, replace
from itertools import combinations_with_replacement, product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from . import sat as satmod
from .formula import (Atom, BOT, Bot, Formula, Kh, Not, Or, TOP, Top, kh_atoms,
                      prop_atoms, render, subformulas)
from .mcheck import label_table
from .model import EMPTY_PLAN, Lts, Ltsu, Plan, StateId, validate

ATOM_POOL = ("p", "q", "r")
AGENT_POOL = ("i", "j", "k")


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_states: int = 5
    max_actions: int = 3
    max_plan_len: int = 2
    max_cells: int = 3
    max_formula_depth: int = 4
    num_agents: int = 1


def child_seed(seed: int, *labels) -> int:
    """Stable derived seed; independent of PYTHONHASHSEED."""
    tag = ":".join([str(seed), *map(str, labels)]).encode()
    return int.from_bytes(hashlib.sha256(tag).digest()[:8], "big")


def _rng(seed: int, *labels) -> random.Random:
    return random.Random(child_seed(seed, *labels))


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def gen_ltsu(config: GenConfig) -> Ltsu:
    """A random model; identical config (incl. seed) gives an equal model."""
    rng = _rng(config.seed, "model")
    n_states = rng.randint(1, config.max_states)
    states = tuple(f"w{t}" for t in range(n_states))
    n_actions = rng.randint(1, config.max_actions)
    actions = tuple(f"a{t}" for t in range(n_actions))
    relations = {}
    for a in actions:
        pairs = set()
        for u in states:
            for v in states:
                if rng.random() < 0.3:
                    pairs.add((u, v))
        relations[a] = frozenset(pairs)
    valuation = {
        s: frozenset(x for x in ATOM_POOL if rng.random() < 0.45) for s in states
    }
    strategies = {}
    for agent in AGENT_POOL[:config.num_agents]:
        target = rng.randint(1, config.max_cells * 2)
        plans: List[Plan] = []
        for _ in range(target * 4):
            if len(plans) >= target:
                break
            length = rng.randint(0, config.max_plan_len)
            plan = tuple(actions[rng.randrange(n_actions)] for _ in range(length))
            if plan not in plans:
                plans.append(plan)
        if not plans:
            plans = [EMPTY_PLAN]
        rng.shuffle(plans)
        n_cells = rng.randint(1, min(config.max_cells, len(plans)))
        cuts: Set[int] = set()
        while len(cuts) < n_cells - 1:
            cuts.add(rng.randint(1, len(plans) - 1))
        bounds = [0, *sorted(cuts), len(plans)]
        strategies[agent] = tuple(
            frozenset(plans[lo:hi]) for lo, hi in zip(bounds, bounds[1:]))
    return Ltsu(Lts(states, actions, relations, valuation), strategies)


def gen_formula(config: GenConfig, agents: Sequence[str]) -> Formula:
    """A random core formula of bounded depth over the given agents."""
    if not agents:
        raise ValueError("agent list must be non-empty")
    rng = _rng(config.seed, "formula")
    agent_list = list(agents)

    def leaf() -> Formula:
        r = rng.random()
        if r < 0.8:
            return Atom(ATOM_POOL[rng.randrange(len(ATOM_POOL))])
        return TOP if r < 0.9 else BOT

    def go(depth: int) -> Formula:
        if depth <= 1:
            return leaf()
        r = rng.random()
        if r < 0.18:
            return leaf()
        if r < 0.40:
            return Not(go(depth - 1))
        if r < 0.70:
            return Or(go(depth - 1), go(depth - 1))
        return Kh(agent_list[rng.randrange(len(agent_list))],
                  go(depth - 1), go(depth - 1))

    return go(config.max_formula_depth)


def scaling_model(n_states: int) -> Ltsu:
    """Constant-out-degree family used for runtime scaling measurements."""
    states = tuple(f"w{t}" for t in range(n_states))
    ring = frozenset((states[t], states[(t + 1) % n_states]) for t in range(n_states))
    hops = frozenset((states[t], states[(2 * t + 1) % n_states]) for t in range(n_states))
    relations = {"a": ring, "b": hops}
    valuation = {
        states[t]: frozenset(("p",) if t % 2 == 0 else ("q",)) for t in range(n_states)
    }
    cells = (frozenset({("a",)}), frozenset({("b",)}), frozenset({("a", "b")}))
    return Ltsu(Lts(states, ("a", "b"), relations, valuation), {"i": cells})


# ---------------------------------------------------------------------------
# Naive model-checking oracle
# ---------------------------------------------------------------------------

def naive_run(m: Lts, plan: Plan, state: StateId) -> Set[StateId]:
    reached = {state}
    for a in plan:
        reached = {v for u in reached for v in m.successors(a, u)}
    return reached


def naive_se_at(m: Lts, plan: Plan, state: StateId) -> bool:
    # every partial execution must offer the next action
    for k in range(len(plan)):
        for v in naive_run(m, plan[:k], state):
            if not m.successors(plan[k], v):
                return False
    return True


def naive_holds(m: Ltsu, state: StateId, f: Formula) -> bool:
    """Truth at one state, re-derived clause by clause.

    Deliberately recomputes extensions inside the Kh clause instead of
    labeling; usable only at small scale.
    """
    if isinstance(f, Atom):
        return f.name in m.base.valuation.get(state, frozenset())
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Not):
        return not naive_holds(m, state, f.sub)
    if isinstance(f, Or):
        return naive_holds(m, state, f.left) or naive_holds(m, state, f.right)
    if isinstance(f, Kh):
        cond_states = [u for u in m.base.states if naive_holds(m, u, f.cond)]
        goal_states = {u for u in m.base.states if naive_holds(m, u, f.goal)}
        for cell in m.strategies[f.agent]:
            executable = all(
                naive_se_at(m.base, plan, u) for plan in cell for u in cond_states)
            on_target = all(
                naive_run(m.base, plan, u) <= goal_states
                for plan in cell for u in cond_states)
            if executable and on_target:
                return True
        return False
    raise TypeError(f"not a formula: {f!r}")


def naive_extension(m: Ltsu, f: Formula) -> FrozenSet[StateId]:
    return frozenset(s for s in m.base.states if naive_holds(m, s, f))


# ---------------------------------------------------------------------------
# Plan-search oracle
# ---------------------------------------------------------------------------

def plan_search_bruteforce(m: Lts, cond_states: Iterable[StateId],
                           goal_states: Iterable[StateId],
                           max_len: int = 4) -> Optional[Plan]:
    """First plan (by length, then declared action order) meeting both
    conditions, enumerated up to max_len; None if no such plan exists
    within the horizon."""
    cond = list(cond_states)
    goal = set(goal_states)
    for length in range(max_len + 1):
        for plan in product(m.actions, repeat=length):
            if all(naive_se_at(m, plan, u) for u in cond) and \
                    all(naive_run(m, plan, u) <= goal for u in cond):
                return plan
    return None


# ---------------------------------------------------------------------------
# Satisfiability oracle
# ---------------------------------------------------------------------------

_GOOD_MEMO: Dict[Tuple[int, int, int], int] = {}


def _good_relations(m: int, cond_mask: int, goal_mask: int) -> int:
    """Bitmask over all m-state relations r: bit r is set iff the one-step
    plan with relation r is strongly executable on every cond state and
    maps the cond states inside the goal states."""
    key = (m, cond_mask, goal_mask)
    cached = _GOOD_MEMO.get(key)
    if cached is not None:
        return cached
    width = 1 << m
    result = 0
    for r in range(1 << (m * m)):
        image = 0
        ok = True
        for u in range(m):
            if not (cond_mask >> u) & 1:
                continue
            succ = (r >> (u * m)) & (width - 1)
            if succ == 0:
                ok = False
                break
            image |= succ
        if ok and image & ~goal_mask == 0:
            result |= 1 << r
    _GOOD_MEMO[key] = result
    return result


def _state_masks(f: Formula, vals: Sequence[int], names: Sequence[str],
                 vector: Sequence[bool],
                 kh_order: Sequence[Kh]) -> Dict[Formula, int]:
    m = len(vals)
    full = (1 << m) - 1
    truth_of = dict(zip(kh_order, vector))
    table: Dict[Formula, int] = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            t = names.index(g.name)
            table[g] = sum(1 << s for s in range(m) if (vals[s] >> t) & 1)
        elif isinstance(g, Top):
            table[g] = full
        elif isinstance(g, Bot):
            table[g] = 0
        elif isinstance(g, Not):
            table[g] = full & ~table[g.sub]
        elif isinstance(g, Or):
            table[g] = table[g.left] | table[g.right]
        elif isinstance(g, Kh):
            table[g] = full if truth_of[g] else 0
    return table


def satisfiable_bruteforce(f: Formula, agents: Sequence[str],
                           max_states: int = 3) -> bool:
    """Exhaustive sweep of all models with at most max_states states, one
    action per Kh-subformula (relations unrestricted), and singleton
    one-step plan cells.

    Exact within that family. Kept deliberately independent of the solver:
    no canonical relation shape, no labeling engine.
    """
    khs = [a.formula() for a in kh_atoms(f)]
    k = len(khs)
    names = prop_atoms(f)
    n = len(names)
    if k > 3 or n > 3 or max_states > 3:
        raise ValueError("oracle scope: at most 3 Kh-subformulas, 3 atoms, 3 states")
    agent_list = list(dict.fromkeys(agents))

    for m in range(1, max_states + 1):
        full_rel = (1 << (1 << (m * m))) - 1
        for vals in combinations_with_replacement(range(1 << n), m):
            for vector in product((False, True), repeat=k):
                masks = _state_masks(f, vals, names, vector, khs)
                if masks[f] == 0:
                    continue
                # a guessed-false Kh with no cond state would be vacuously true
                if any(not vector[j] and masks[khs[j].cond] == 0 for j in range(k)):
                    continue
                good = [
                    _good_relations(m, masks[khs[j].cond], masks[khs[j].goal])
                    for j in range(k)
                ]
                if _relations_exist(khs, vector, masks, good, full_rel, agent_list):
                    return True
    return False


def _relations_exist(khs: Sequence[Kh], vector: Sequence[bool],
                     masks: Dict[Formula, int], good: Sequence[int],
                     full_rel: int, agents: Sequence[str]) -> bool:
    k = len(khs)
    # which Kh-subformulas still need a real witness (non-vacuous, true)
    need = [j for j in range(k) if vector[j] and masks[khs[j].cond] != 0]
    deny = [j for j in range(k) if not vector[j]]
    for cells in product(*(list(_subsets(k)) for _ in agents)):
        cells_of = dict(zip(agents, cells))
        allowed = [full_rel] * k  # permitted relation values per action coordinate
        ok = True
        for j in deny:
            for c in cells_of[khs[j].agent]:
                allowed[c] &= ~good[j]
        choice_sets: List[List[int]] = []
        for j in need:
            coords = cells_of[khs[j].agent]
            if not coords:
                ok = False
                break
            choice_sets.append(list(coords))
        if not ok:
            continue
        for assignment in product(*choice_sets):
            required = dict.fromkeys(range(k), full_rel)
            for j, c in zip(need, assignment):
                required[c] &= good[j]
            if all(required[c] & allowed[c] != 0 for c in range(k)):
                return True
    return False


def _subsets(k: int):
    for mask in range(1 << k):
        yield tuple(c for c in range(k) if (mask >> c) & 1)


# ---------------------------------------------------------------------------
# Differential driver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CaseResult:
    kind: str
    index: int
    seed: int
    ok: bool
    detail: str = ""


@dataclass
class DifferentialReport:
    cases: List[CaseResult]

    @property
    def mismatches(self) -> List[CaseResult]:
        return [c for c in self.cases if not c.ok]

    def to_text(self) -> str:
        lines = []
        for c in self.cases:
            status = "OK" if c.ok else "MISMATCH"
            detail = f" {c.detail}" if c.detail else ""
            lines.append(f"{c.kind} case={c.index} seed={c.seed} {status}{detail}")
        lines.append(f"total={len(self.cases)} mismatches={len(self.mismatches)}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "cases": [
                {"kind": c.kind, "index": c.index, "seed": c.seed,
                 "ok": c.ok, "detail": c.detail}
                for c in self.cases
            ],
            "total": len(self.cases),
            "mismatches": len(self.mismatches),
        }


def _mcheck_case(config: GenConfig, index: int) -> CaseResult:
    seed = child_seed(config.seed, "mcheck", index)
    cfg = replace(config, seed=seed)
    m = gen_ltsu(cfg)
    f = gen_formula(cfg, AGENT_POOL[:config.num_agents])
    table = label_table(m, f)
    for g in subformulas(f):
        expected = naive_extension(m, g)
        if table[g] != expected:
            return CaseResult("mcheck", index, seed, False,
                              f"formula={render(g)!r}")
    return CaseResult("mcheck", index, seed, True)


def _plan_case(config: GenConfig, index: int) -> CaseResult:
    from .ltsplan import kh_lts
    from .model import image_plan, se_states

    seed = child_seed(config.seed, "ltsplan", index)
    cfg = replace(config, seed=seed)
    m = gen_ltsu(cfg).base
    rng = _rng(seed, "sets")
    cond = frozenset(s for s in m.states if rng.random() < 0.4)
    goal = frozenset(s for s in m.states if rng.random() < 0.5)
    mine = kh_lts(m, cond, goal)
    horizon = 4
    reference = plan_search_bruteforce(m, cond, goal, max_len=horizon)
    if mine is not None:
        sound = cond <= se_states(m, mine) and image_plan(m, mine, cond) <= goal
        if not sound:
            return CaseResult("ltsplan", index, seed, False, "unsound witness")
        if len(mine) <= horizon and mine != reference:
            return CaseResult("ltsplan", index, seed, False,
                              f"witness {mine} vs {reference}")
    elif reference is not None:
        return CaseResult("ltsplan", index, seed, False,
                          f"missed witness {reference}")
    return CaseResult("ltsplan", index, seed, True)


def sat_case_formula(config: GenConfig, index: int) -> Tuple[Formula, int]:
    """A formula within the oracle's scope, deterministically resampled."""
    agents = AGENT_POOL[:min(config.num_agents, 2)]
    for attempt in range(200):
        seed = child_seed(config.seed, "sat", index, attempt)
        cfg = replace(config, seed=seed, max_formula_depth=3)
        f = gen_formula(cfg, agents)
        if len(kh_atoms(f)) <= 2 and len(prop_atoms(f)) <= 2:
            return f, seed
    fallback = Kh(agents[0], Atom("p"), Atom("q"))
    return fallback, child_seed(config.seed, "sat", index, "fallback")


def _sat_case(config: GenConfig, index: int) -> CaseResult:
    agents = AGENT_POOL[:min(config.num_agents, 2)]
    f, seed = sat_case_formula(config, index)
    mine = satmod.satisfiable(f, agents)
    reference = satisfiable_bruteforce(f, agents)
    if mine.is_sat != reference:
        return CaseResult("sat", index, seed, False,
                          f"{mine.verdict} vs oracle {reference} on {render(f)!r}")
    if mine.is_sat and not satmod.certify(mine, f):
        return CaseResult("sat", index, seed, False,
                          f"certificate rejected for {render(f)!r}")
    return CaseResult("sat", index, seed, True)


def differential_run(n_cases: int, config: GenConfig) -> DifferentialReport:
    """Run all three comparisons n_cases times each.

    The report is a pure function of (n_cases, config); mismatches carry
    the child seed that reproduces them.
    """
    cases: List[CaseResult] = []
    for index in range(n_cases):
        cases.append(_mcheck_case(config, index))
    for index in range(n_cases):
        cases.append(_plan_case(config, index))
    for index in range(n_cases):
        cases.append(_sat_case(config, index))
    return DifferentialReport(cases)
