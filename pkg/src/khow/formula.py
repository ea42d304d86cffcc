"""AST, parser, and printer for the multi-agent knowing-how language.

Core connectives are propositional atoms, ``top``/``bot``, negation,
disjunction, and the binary modality ``Kh[i](cond, goal)``: agent ``i`` can
guarantee ``goal`` from any situation satisfying ``cond``.  Conjunction,
implication, equivalence, and the global modalities ``A``/``E`` are surface
syntax that the parser expands into the core.  ``A phi`` becomes the
disjunction, over all declared agents, of ``Kh[i](~phi, bot)``; ``E phi`` is
``~A ~phi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Dict, List, Optional, Sequence, Set

AgentId = str

RESERVED_WORDS = frozenset({"Kh", "A", "E", "top", "bot"})


class Formula:
    """Base class for formula nodes. All nodes are immutable and hashable."""


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Kh(Formula):
    agent: AgentId
    cond: Formula
    goal: Formula


TOP = Top()
BOT = Bot()


def conj(a: Formula, b: Formula) -> Formula:
    """a & b, expressed with the core connectives."""
    return Not(Or(Not(a), Not(b)))


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def equiv(a: Formula, b: Formula) -> Formula:
    return conj(implies(a, b), implies(b, a))


def universally(f: Formula, agents: Sequence[AgentId]) -> Formula:
    """The global modality A f over a fixed agent set.

    Expands to the left-folded disjunction of Kh[i](~f, bot) in declared
    agent order; with one agent no disjunction is wrapped.
    """
    if not agents:
        raise ValueError("agent list must be non-empty")
    return reduce(Or, [Kh(i, Not(f), BOT) for i in agents])


def existentially(f: Formula, agents: Sequence[AgentId]) -> Formula:
    """E f, the dual of the global modality."""
    return Not(universally(Not(f), agents))


@dataclass(frozen=True)
class KhAtom:
    """One Kh-subformula, identified up to structural equality."""

    agent: AgentId
    cond: Formula
    goal: Formula

    def formula(self) -> Kh:
        return Kh(self.agent, self.cond, self.goal)


def _children(f: Formula) -> Sequence[Formula]:
    if isinstance(f, Not):
        return (f.sub,)
    if isinstance(f, Or):
        return (f.left, f.right)
    if isinstance(f, Kh):
        return (f.cond, f.goal)
    return ()


def subformulas(f: Formula) -> List[Formula]:
    """Post-order list of distinct subformulas; the last element is f."""
    seen: Set[Formula] = set()
    out: List[Formula] = []

    def walk(g: Formula) -> None:
        if g in seen:
            return
        seen.add(g)
        for child in _children(g):
            walk(child)
        out.append(g)

    walk(f)
    return out


def kh_atoms(f: Formula) -> List[KhAtom]:
    """All Kh-subformulas of f, each once, in post-order."""
    return [KhAtom(g.agent, g.cond, g.goal) for g in subformulas(f) if isinstance(g, Kh)]


def prop_atoms(f: Formula) -> List[str]:
    """Sorted propositional atom names occurring in f."""
    return sorted({g.name for g in subformulas(f) if isinstance(g, Atom)})


def agents_of(f: Formula) -> Set[AgentId]:
    return {g.agent for g in subformulas(f) if isinstance(g, Kh)}


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    """Malformed formula text; carries the 1-based line and column."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


_PUNCT = {"(": "LPAREN", ")": "RPAREN", "[": "LBRACK", "]": "RBRACK",
          ",": "COMMA", "~": "NOT", "&": "AND", "|": "OR"}


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("<->", i):
            tokens.append(_Token("IFF", "<->", line, col))
            i += 3
            col += 3
            continue
        if text.startswith("->", i):
            tokens.append(_Token("IMP", "->", line, col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT:
            tokens.append(_Token(_PUNCT[ch], ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = word if word in RESERVED_WORDS else "IDENT"
            tokens.append(_Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: List[_Token], agents: Sequence[AgentId]):
        self.tokens = tokens
        self.pos = 0
        self.agents = list(agents)

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {what}, found {tok.text or 'end of input'!r}",
                             tok.line, tok.col)
        return self.advance()

    def formula(self) -> Formula:
        return self.implication()

    def implication(self) -> Formula:
        left = self.disjunction()
        tok = self.peek()
        if tok.kind == "IMP":
            self.advance()
            return implies(left, self.implication())
        if tok.kind == "IFF":
            self.advance()
            return equiv(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        if self.peek().kind == "OR":
            self.advance()
            return Or(left, self.disjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        if self.peek().kind == "AND":
            self.advance()
            return conj(left, self.conjunction())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "NOT":
            self.advance()
            return Not(self.unary())
        if tok.kind == "A":
            self.advance()
            return universally(self.unary(), self.agents)
        if tok.kind == "E":
            self.advance()
            return existentially(self.unary(), self.agents)
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "LPAREN":
            self.advance()
            inner = self.formula()
            self.expect("RPAREN", "')'")
            return inner
        if tok.kind == "top":
            self.advance()
            return TOP
        if tok.kind == "bot":
            self.advance()
            return BOT
        if tok.kind == "Kh":
            self.advance()
            self.expect("LBRACK", "'['")
            agent_tok = self.expect("IDENT", "agent name")
            if agent_tok.text not in self.agents:
                raise ParseError(f"unknown agent {agent_tok.text!r}",
                                 agent_tok.line, agent_tok.col)
            self.expect("RBRACK", "']'")
            self.expect("LPAREN", "'('")
            cond = self.formula()
            self.expect("COMMA", "','")
            goal = self.formula()
            self.expect("RPAREN", "')'")
            return Kh(agent_tok.text, cond, goal)
        if tok.kind == "IDENT":
            self.advance()
            return Atom(tok.text)
        raise ParseError(f"expected a formula, found {tok.text or 'end of input'!r}",
                         tok.line, tok.col)


def parse(text: str, agents: Sequence[AgentId]) -> Formula:
    """Parse formula text over a declared, non-empty agent set.

    Precedence (tightest first): ~, A, E; then &; then |; then -> and <->.
    The binary connectives associate to the right.
    """
    if not agents:
        raise ValueError("agent list must be non-empty")
    parser = _Parser(_tokenize(text), agents)
    f = parser.formula()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise ParseError(f"trailing input starting at {tok.text!r}", tok.line, tok.col)
    return f


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

def render(f: Formula) -> str:
    """Minimal-parentheses text for a core formula; parse(render(f)) == f."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Not):
        inner = render(f.sub)
        if isinstance(f.sub, Or):
            inner = f"({inner})"
        return "~" + inner
    if isinstance(f, Or):
        left = render(f.left)
        if isinstance(f.left, Or):
            left = f"({left})"
        return f"{left} | {render(f.right)}"
    if isinstance(f, Kh):
        return f"Kh[{f.agent}]({render(f.cond)}, {render(f.goal)})"
    raise TypeError(f"not a formula: {f!r}")
