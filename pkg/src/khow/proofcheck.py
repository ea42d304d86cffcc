"""Hilbert-style derivation checking with axiom-schema matching.

Two systems are supported.  ``KHi`` carries the schemas TAUT, DISTA, TA,
4KhA, 5KhA, KhE, and KhA with the rules MP and NECA; ``KH`` adds EMP and
COMPKh.  Schemas are matched structurally, so uniform substitution comes
for free; TAUT is decided propositionally with every Kh-subformula treated
as an opaque atom.  NECA may only be applied to lines whose ancestry is
premise-free.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .formula import (Atom, Bot, Formula, Kh, Not, Or, ParseError, Top, conj,
                      implies, parse, universally)

SYSTEM_KHI = "KHi"
SYSTEM_KH = "KH"

SYSTEM_AXIOMS = {
    SYSTEM_KHI: ("TAUT", "DISTA", "TA", "4KhA", "5KhA", "KhE", "KhA"),
    SYSTEM_KH: ("TAUT", "DISTA", "TA", "4KhA", "5KhA", "KhE", "KhA", "EMP", "COMPKh"),
}


@dataclass(frozen=True)
class AxiomStep:
    name: str


@dataclass(frozen=True)
class PremiseStep:
    pass


@dataclass(frozen=True)
class MpStep:
    antecedent: int
    implication: int


@dataclass(frozen=True)
class NecaStep:
    source: int


Justification = Union[AxiomStep, PremiseStep, MpStep, NecaStep]


@dataclass(frozen=True)
class ProofLine:
    index: int
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class ProofScript:
    system: str
    agents: Tuple[str, ...]
    lines: Tuple[ProofLine, ...]


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    line: Optional[int] = None
    reason: Optional[str] = None


# ---------------------------------------------------------------------------
# Schema matching
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _FVar(Formula):
    """Pattern node matching any formula."""

    name: str


@dataclass(frozen=True)
class _UnivPat(Formula):
    """Pattern node matching the declared-agent expansion of A body."""

    body: Formula


_AGENT_VAR = "?i"


def _split_universal(f: Formula, agents: Sequence[str]) -> Optional[Formula]:
    """Invert the A-expansion: recover x from the folded Kh disjunction."""
    parts: List[Formula] = []
    g = f
    while isinstance(g, Or) and len(parts) < len(agents) - 1:
        parts.append(g.right)
        g = g.left
    parts.append(g)
    parts.reverse()
    if len(parts) != len(agents):
        return None
    first = parts[0]
    if not (isinstance(first, Kh) and isinstance(first.cond, Not)
            and first.goal == Bot()):
        return None
    body = first.cond.sub
    if f != universally(body, agents):
        return None
    return body


def _match(pat: Formula, f: Formula, env: Dict[str, object],
           agents: Sequence[str]) -> bool:
    if isinstance(pat, _FVar):
        bound = env.get(pat.name)
        if bound is None:
            env[pat.name] = f
            return True
        return bound == f
    if isinstance(pat, _UnivPat):
        body = _split_universal(f, agents)
        return body is not None and _match(pat.body, body, env, agents)
    if isinstance(pat, Kh):
        if not isinstance(f, Kh):
            return False
        if pat.agent == _AGENT_VAR:
            bound = env.get(_AGENT_VAR)
            if bound is None:
                env[_AGENT_VAR] = f.agent
            elif bound != f.agent:
                return False
        elif pat.agent != f.agent:
            return False
        return _match(pat.cond, f.cond, env, agents) and \
            _match(pat.goal, f.goal, env, agents)
    if isinstance(pat, Not):
        return isinstance(f, Not) and _match(pat.sub, f.sub, env, agents)
    if isinstance(pat, Or):
        return isinstance(f, Or) and _match(pat.left, f.left, env, agents) \
            and _match(pat.right, f.right, env, agents)
    return pat == f  # Atom / Top / Bot literals


def _A(x: Formula) -> Formula:
    return _UnivPat(x)


def _E(x: Formula) -> Formula:
    return Not(_UnivPat(Not(x)))


def _kh(c: Formula, g: Formula) -> Formula:
    return Kh(_AGENT_VAR, c, g)


_PSI = _FVar("psi")
_PHI = _FVar("phi")
_CHI = _FVar("chi")
_THETA = _FVar("theta")

# conjunctions associate to the right, matching the parser's expansion of &
_SCHEMAS: Dict[str, Formula] = {
    "DISTA": implies(_A(implies(_PHI, _PSI)), implies(_A(_PHI), _A(_PSI))),
    "TA": implies(_A(_PHI), _PHI),
    "4KhA": implies(_kh(_PSI, _PHI), _A(_kh(_PSI, _PHI))),
    "5KhA": implies(Not(_kh(_PSI, _PHI)), _A(Not(_kh(_PSI, _PHI)))),
    "KhE": implies(conj(_E(_PSI), _kh(_PSI, _PHI)), _E(_PHI)),
    "KhA": implies(
        conj(_A(implies(_CHI, _PSI)), conj(_kh(_PSI, _PHI), _A(implies(_PHI, _THETA)))),
        _kh(_CHI, _THETA)),
    "EMP": implies(_A(implies(_PSI, _PHI)), _kh(_PSI, _PHI)),
    "COMPKh": implies(conj(_kh(_PSI, _PHI), _kh(_PHI, _CHI)), _kh(_PSI, _CHI)),
}

_MAX_TAUT_UNITS = 20


def _tautology(f: Formula) -> bool:
    """Propositional tautology check with Kh-subformulas as opaque units."""
    units: Dict[Formula, int] = {}

    def unit_of(g: Formula) -> int:
        if g not in units:
            units[g] = len(units)
        return units[g]

    def collect(g: Formula) -> None:
        if isinstance(g, (Atom, Kh)):
            unit_of(g)
        elif isinstance(g, Not):
            collect(g.sub)
        elif isinstance(g, Or):
            collect(g.left)
            collect(g.right)

    collect(f)
    if len(units) > _MAX_TAUT_UNITS:
        raise ValueError(f"tautology check limited to {_MAX_TAUT_UNITS} distinct units")

    def evaluate(g: Formula, row: Tuple[bool, ...]) -> bool:
        if isinstance(g, (Atom, Kh)):
            return row[units[g]]
        if isinstance(g, Top):
            return True
        if isinstance(g, Bot):
            return False
        if isinstance(g, Not):
            return not evaluate(g.sub, row)
        if isinstance(g, Or):
            return evaluate(g.left, row) or evaluate(g.right, row)
        raise TypeError(f"not a formula: {g!r}")

    return all(evaluate(f, row) for row in product((False, True), repeat=len(units)))


def axiom_instance(name: str, f: Formula, agents: Sequence[str] = ("i",)) -> bool:
    """Whether f instantiates the named schema over the given agent set."""
    if name == "TAUT":
        return _tautology(f)
    if name not in _SCHEMAS:
        raise ValueError(f"unknown axiom schema {name!r}")
    return _match(_SCHEMAS[name], f, {}, agents)


# ---------------------------------------------------------------------------
# Proof checking
# ---------------------------------------------------------------------------

def check_proof(script: ProofScript) -> CheckResult:
    """Verify a script line by line; reports the first bad line."""
    if script.system not in SYSTEM_AXIOMS:
        return CheckResult(False, None, f"unknown system {script.system!r}")
    allowed = set(SYSTEM_AXIOMS[script.system])
    by_index: Dict[int, ProofLine] = {}
    tainted: set = set()  # lines whose ancestry contains a premise
    previous = 0
    for line in script.lines:
        idx = line.index
        if idx <= previous:
            return CheckResult(False, idx, "line indices must strictly increase")
        previous = idx
        step = line.justification
        if isinstance(step, PremiseStep):
            tainted.add(idx)
        elif isinstance(step, AxiomStep):
            if step.name not in allowed:
                return CheckResult(False, idx,
                                   f"schema {step.name} not in system {script.system}")
            try:
                good = axiom_instance(step.name, line.formula, script.agents)
            except ValueError as exc:
                return CheckResult(False, idx, str(exc))
            if not good:
                return CheckResult(False, idx, f"not an instance of {step.name}")
        elif isinstance(step, MpStep):
            for cited in (step.antecedent, step.implication):
                if cited >= idx or cited not in by_index:
                    return CheckResult(False, idx, f"bad citation of line {cited}")
            premise = by_index[step.antecedent].formula
            wanted = implies(premise, line.formula)
            if by_index[step.implication].formula != wanted:
                return CheckResult(False, idx,
                                   "cited implication does not yield this line")
            if step.antecedent in tainted or step.implication in tainted:
                tainted.add(idx)
        elif isinstance(step, NecaStep):
            cited = step.source
            if cited >= idx or cited not in by_index:
                return CheckResult(False, idx, f"bad citation of line {cited}")
            if cited in tainted:
                return CheckResult(False, idx,
                                   "necessitation applied to a premise-dependent line")
            wanted = universally(by_index[cited].formula, script.agents)
            if line.formula != wanted:
                return CheckResult(False, idx,
                                   "formula is not the universal closure of the cited line")
        else:
            return CheckResult(False, idx, f"unknown justification {step!r}")
        by_index[idx] = line
    return CheckResult(True)


# ---------------------------------------------------------------------------
# Proof file format
# ---------------------------------------------------------------------------

class ProofFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


_LINE_RE = re.compile(r"^\s*(\d+)\s*\.\s*(.+?)\s*;\s*(.+?)\s*$")


def _parse_justification(text: str, lineno: int) -> Justification:
    words = text.split()
    if words == ["premise"]:
        return PremiseStep()
    if len(words) == 2 and words[0] == "axiom":
        return AxiomStep(words[1])
    if len(words) == 3 and words[0] == "mp" and words[1].isdigit() and words[2].isdigit():
        return MpStep(int(words[1]), int(words[2]))
    if len(words) == 2 and words[0] == "neca" and words[1].isdigit():
        return NecaStep(int(words[1]))
    raise ProofFormatError(lineno, f"bad justification {text!r}")


def parse_proof(text: str, system: str, agents: Sequence[str] = ("i",)) -> ProofScript:
    """Read the line-oriented format ``<index>. <formula> ; <justification>``.

    Blank lines and lines starting with '#' are skipped.
    """
    lines: List[ProofLine] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _LINE_RE.match(raw)
        if not m:
            raise ProofFormatError(lineno, "expected '<index>. <formula> ; <justification>'")
        index = int(m.group(1))
        try:
            formula = parse(m.group(2), agents)
        except ParseError as exc:
            raise ProofFormatError(lineno, f"bad formula: {exc}") from exc
        lines.append(ProofLine(index, formula, _parse_justification(m.group(3), lineno)))
    return ProofScript(system, tuple(agents), tuple(lines))


def load_proof(path: str, system: str, agents: Sequence[str] = ("i",)) -> ProofScript:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_proof(fh.read(), system, agents)
