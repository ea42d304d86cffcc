"""Satisfiability and validity via a bounded canonical-style model search.

The logic has a small-model property: a satisfiable formula has a model
whose states carry propositional valuations over the formula's own atoms,
whose actions are one per Kh-subformula plus one reserved never-executable
action, whose plan cells are all singleton one-step plans, and whose
relations either are empty or link every cond-state to every goal-state of
their Kh-subformula.

The solver therefore runs in two phases.  Phase one guesses which
Kh-subformulas hold globally (legal because Kh truth is state-independent).
Phase two searches over which valuations are realized as states, builds the
candidate model with the relation shape above, and accepts iff the guess is
realized exactly and some state satisfies the input.  Every accepted
candidate is re-checked with the model checker before being reported, and
``certify`` re-validates shipped certificates from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from . import mcheck
from .formula import (Atom, Bot, Formula, Kh, KhAtom, Not, Or, Top, agents_of,
                      kh_atoms, prop_atoms, subformulas)
from .model import Lts, Ltsu, StateId, validate

RESERVED_ACTION = "nil"

DEFAULT_GUESS_CAP = 2 ** 20
DEFAULT_STATE_CAP = 2 ** 12


class ResourceCapExceeded(RuntimeError):
    """Search budget exhausted before reaching a definite verdict."""


@dataclass(frozen=True)
class CanonicalAction:
    """An action of the candidate models: a (cond, goal) formula pair."""

    cond: Formula
    goal: Formula


@dataclass(frozen=True)
class SatResult:
    verdict: str  # "sat" | "unsat"
    model: Optional[Ltsu] = None
    state: Optional[StateId] = None

    @property
    def is_sat(self) -> bool:
        return self.verdict == "sat"


@dataclass(frozen=True)
class ValidityResult:
    valid: bool
    model: Optional[Ltsu] = None
    state: Optional[StateId] = None


def size_bound(f: Formula) -> int:
    """A state-count bound for the candidate models of f.

    Boolean cases sum the bounds of their children.  A Kh node needs at
    most 2 states plus its children's states when it holds; when it fails,
    each candidate action may demand up to 2 fresh states plus the
    children's states again.  Polynomial in the size of f.
    """
    k = len(kh_atoms(f))

    def bound(g: Formula) -> int:
        if isinstance(g, (Atom, Top, Bot)):
            return 1
        if isinstance(g, Not):
            return bound(g.sub)
        if isinstance(g, Or):
            return bound(g.left) + bound(g.right)
        if isinstance(g, Kh):
            holds = 2 + bound(g.cond) + bound(g.goal)
            fails = k * (3 + 2 * bound(g.cond) + bound(g.goal))
            return max(holds, fails)
        raise TypeError(f"not a formula: {g!r}")

    return bound(f)


def _guess_order(k: int) -> List[int]:
    # fewest Kh-subformulas true first, then lexicographic over the truth vector
    def key(mask: int) -> Tuple[int, Tuple[int, ...]]:
        vec = tuple((mask >> j) & 1 for j in range(k))
        return (sum(vec), vec)

    return sorted(range(1 << k), key=key)


def _valuation_bits(names: Sequence[str], n_val: int) -> Dict[Formula, int]:
    # bit t of atom_mask[name] is set iff valuation t makes the atom true
    out: Dict[Formula, int] = {}
    for t, name in enumerate(names):
        mask = 0
        for v in range(n_val):
            if (v >> t) & 1:
                mask |= 1 << v
        out[Atom(name)] = mask
    return out


def _truth_masks(f: Formula, names: Sequence[str], guess: int,
                 kh_index: Dict[Formula, int]) -> Dict[Formula, int]:
    """Per-subformula bitmask over all valuations, under a Kh-truth guess."""
    n_val = 1 << len(names)
    full = (1 << n_val) - 1
    atom_masks = _valuation_bits(names, n_val)
    table: Dict[Formula, int] = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            table[g] = atom_masks[g]
        elif isinstance(g, Top):
            table[g] = full
        elif isinstance(g, Bot):
            table[g] = 0
        elif isinstance(g, Not):
            table[g] = full & ~table[g.sub]
        elif isinstance(g, Or):
            table[g] = table[g.left] | table[g.right]
        elif isinstance(g, Kh):
            table[g] = full if (guess >> kh_index[g]) & 1 else 0
    return table


def _realizable(khs: List[KhAtom], guess: int, qmask: int,
                masks: Dict[Formula, int]) -> bool:
    """Whether the candidate over the chosen valuations realizes the guess.

    Works from the relation shape directly: a true Kh-subformula needs a
    same-agent true cell whose cond covers it and whose goal stays inside
    its goal (and whose goal is realized somewhere); a false one needs a
    realized cond-state and no such cell.
    """

    def nonempty(g: Formula) -> bool:
        return masks[g] & qmask != 0

    def included(g: Formula, h: Formula) -> bool:
        return masks[g] & qmask & ~masks[h] == 0

    def witnessed(agent: str, cond: Formula, goal: Formula) -> bool:
        for j2, other in enumerate(khs):
            if not (guess >> j2) & 1 or other.agent != agent:
                continue
            if nonempty(other.goal) and included(cond, other.cond) \
                    and included(other.goal, goal):
                return True
        return False

    for j, atom in enumerate(khs):
        if (guess >> j) & 1:
            if not nonempty(atom.cond):
                continue  # vacuously true
            if not witnessed(atom.agent, atom.cond, atom.goal):
                return False
        else:
            if not nonempty(atom.cond):
                return False  # would be vacuously true
            if witnessed(atom.agent, atom.cond, atom.goal):
                return False
    return True


def _build_candidate(f: Formula, khs: List[KhAtom], names: Sequence[str],
                     guess: int, combo: Tuple[int, ...], agents: Sequence[str],
                     masks: Dict[Formula, int]) -> Optional[Tuple[Ltsu, StateId]]:
    states = tuple(f"s{v}" for v in combo)
    state_of = {v: f"s{v}" for v in combo}
    valuation = {
        state_of[v]: frozenset(names[t] for t in range(len(names)) if (v >> t) & 1)
        for v in combo
    }
    actions = tuple(f"kh{j}" for j in range(len(khs))) + (RESERVED_ACTION,)
    relations: Dict[str, frozenset] = {RESERVED_ACTION: frozenset()}
    for j, atom in enumerate(khs):
        if (guess >> j) & 1:
            sources = [v for v in combo if (masks[atom.cond] >> v) & 1]
            targets = [v for v in combo if (masks[atom.goal] >> v) & 1]
            relations[f"kh{j}"] = frozenset(
                (state_of[u], state_of[v]) for u in sources for v in targets)
        else:
            relations[f"kh{j}"] = frozenset()
    strategies = {
        agent: tuple(frozenset({(f"kh{j}",)})
                     for j, atom in enumerate(khs) if atom.agent == agent)
        + (frozenset({(RESERVED_ACTION,)}),)
        for agent in agents
    }
    model = Ltsu(Lts(states, actions, relations, valuation), strategies)

    # re-check the analytic acceptance with the model checker before reporting
    table = mcheck.label_table(model, f)
    everything = frozenset(states)
    for j, atom in enumerate(khs):
        expected = everything if (guess >> j) & 1 else frozenset()
        if table[atom.formula()] != expected:
            return None
    satisfied = table[f]
    if not satisfied:
        return None
    return model, model.base.sort_states(satisfied)[0]


def satisfiable(f: Formula, agents: Sequence[str], *,
                max_guesses: int = DEFAULT_GUESS_CAP,
                max_states: int = DEFAULT_STATE_CAP) -> SatResult:
    """Decide satisfiability over the full model class.

    Deterministic: guesses are tried fewest-true-first then lexicographic,
    valuation subsets smallest-first then lexicographic, so the certificate
    for a satisfiable formula is reproducible.  Exceeding the resource caps
    raises ResourceCapExceeded rather than reporting unsat.
    """
    agent_list = list(dict.fromkeys(agents))
    if not agent_list:
        raise ValueError("agent list must be non-empty")
    missing = agents_of(f) - set(agent_list)
    if missing:
        raise ValueError(f"formula uses undeclared agents: {sorted(missing)}")

    khs = kh_atoms(f)
    k = len(khs)
    names = prop_atoms(f)
    n_val = 1 << len(names)
    if n_val > max_states:
        raise ResourceCapExceeded(
            f"{len(names)} atoms need {n_val} candidate states (cap {max_states})")
    kh_index = {atom.formula(): j for j, atom in enumerate(khs)}
    qmax = min(n_val, max(size_bound(f), 1), max_states)

    tried = 0
    for guess in _guess_order(k):
        masks = _truth_masks(f, names, guess, kh_index)
        if masks[f] == 0:
            continue  # no valuation satisfies f under this guess
        for size in range(1, qmax + 1):
            for combo in combinations(range(n_val), size):
                tried += 1
                if tried > max_guesses:
                    raise ResourceCapExceeded(
                        f"exceeded {max_guesses} candidate evaluations")
                qmask = 0
                for v in combo:
                    qmask |= 1 << v
                if masks[f] & qmask == 0:
                    continue
                if not _realizable(khs, guess, qmask, masks):
                    continue
                built = _build_candidate(f, khs, names, guess, combo, agent_list, masks)
                if built is not None:
                    return SatResult("sat", built[0], built[1])
    return SatResult("unsat")


def valid(f: Formula, agents: Sequence[str], *,
          max_guesses: int = DEFAULT_GUESS_CAP,
          max_states: int = DEFAULT_STATE_CAP) -> ValidityResult:
    """Validity by duality; an invalid formula comes with a countermodel."""
    result = satisfiable(Not(f), agents, max_guesses=max_guesses, max_states=max_states)
    if result.verdict == "unsat":
        return ValidityResult(True)
    return ValidityResult(False, result.model, result.state)


def certify(result: SatResult, f: Formula) -> bool:
    """Re-validate a sat certificate and re-check f at its state."""
    if result.verdict != "sat" or result.model is None or result.state is None:
        raise ValueError("certify needs a sat result carrying a witness")
    if validate(result.model, list(result.model.strategies)):
        return False
    try:
        return mcheck.check(result.model, result.state, f)
    except mcheck.ModelCheckError:
        return False
