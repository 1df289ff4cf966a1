"""Propositional kernel: formulas, parsing, truth tables and entailment.

Everything is decided semantically over a finite, ordered :class:`Signature`.
A formula's truth table is stored as a Python ``int`` with one bit per
valuation.  Valuation ``v`` assigns atom ``i`` the value of bit ``n - 1 - i``
of ``v`` (the first atom is the most significant digit), and bit ``v`` of the
table is set iff the formula holds under ``v``.

Because tables are plain integers, the canonical representative of a logical
equivalence class is indexed by its own table: ``canonical(t, sig)`` is the
``t``-th element of ``enumerate_universe(sig)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache, reduce
from typing import Iterable, Iterator

MAX_ATOMS = 4
KEYWORDS = frozenset({"true", "false"})
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class LogicError(Exception):
    pass


class SignatureError(LogicError):
    pass


class CeilingExceeded(SignatureError):
    pass


class ParseError(LogicError):
    """Syntax error.  ``offset`` is a 1-based byte offset into the UTF-8 text,
    so an error at end of input reports ``len(text) + 1``."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownAtomError(LogicError):
    def __init__(self, name: str, offset: int | None = None):
        super().__init__(f"unknown atom {name!r}")
        self.name = name
        self.offset = offset


@dataclass(frozen=True)
class Signature:
    atoms: tuple[str, ...]

    def __init__(self, atoms: Iterable[str] = ()):
        atoms = tuple(atoms)
        for a in atoms:
            if not isinstance(a, str) or not _IDENT.match(a) or a in KEYWORDS:
                raise SignatureError(f"invalid atom name {a!r}")
        if len(set(atoms)) != len(atoms):
            raise SignatureError(f"duplicate atom names in {atoms}")
        if len(atoms) > MAX_ATOMS:
            raise CeilingExceeded(
                f"{len(atoms)} atoms exceeds the ceiling of {MAX_ATOMS}")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def of(cls, spec: str) -> Signature:
        """``Signature.of("p q r")``."""
        return cls(spec.split())

    def __len__(self) -> int:
        return len(self.atoms)

    def __contains__(self, name: object) -> bool:
        return name in self.atoms

    @cached_property
    def valuations(self) -> int:
        return 1 << len(self.atoms)

    @cached_property
    def full(self) -> int:
        """Table of a tautology."""
        return (1 << self.valuations) - 1

    @cached_property
    def universe_size(self) -> int:
        return 1 << self.valuations

    def atom_table(self, name: str) -> int:
        return _atom_table(self, self.atoms.index(name))

    def __str__(self) -> str:
        return " ".join(self.atoms)


@lru_cache(maxsize=None)
def _atom_table(sig: Signature, i: int) -> int:
    shift = len(sig.atoms) - 1 - i
    return sum(1 << v for v in range(sig.valuations) if (v >> shift) & 1)


# -- formulas ---------------------------------------------------------------

class Formula:
    __slots__ = ()

    def __invert__(self) -> Formula:
        return Not(self)

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __rshift__(self, other: Formula) -> Formula:
        return Implies(self, other)

    def atoms(self) -> set[str]:
        out: set[str] = set()
        stack = [self]
        while stack:
            f = stack.pop()
            if isinstance(f, Atom):
                out.add(f.name)
            else:
                stack.extend(f.children())
        return out

    def children(self) -> tuple[Formula, ...]:
        return ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"


@dataclass(frozen=True, slots=True)
class Top(Formula):
    def __repr__(self) -> str:
        return "TOP"


@dataclass(frozen=True, slots=True)
class Bottom(Formula):
    def __repr__(self) -> str:
        return "BOTTOM"


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True, slots=True)
class Not(Formula):
    operand: Formula

    def children(self):
        return (self.operand,)


@dataclass(frozen=True, slots=True)
class _Binary(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class And(_Binary):
    pass


@dataclass(frozen=True, slots=True)
class Or(_Binary):
    pass


@dataclass(frozen=True, slots=True)
class Implies(_Binary):
    pass


@dataclass(frozen=True, slots=True)
class Iff(_Binary):
    pass


def atoms(spec: str) -> tuple[Atom, ...]:
    """``p, q = atoms("p q")``."""
    return tuple(Atom(n) for n in spec.split())


def conjoin(fs: Iterable[Formula]) -> Formula:
    fs = list(fs)
    return reduce(And, fs) if fs else TOP


def disjoin(fs: Iterable[Formula]) -> Formula:
    fs = list(fs)
    return reduce(Or, fs) if fs else BOTTOM


# -- rendering --------------------------------------------------------------

# binding strength; higher binds tighter
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def render(f: Formula) -> str:
    """Surface syntax with the fewest parentheses that re-parse to ``f``."""
    return _render(f, 0)


def _render(f: Formula, need: int) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Not):
        return "!" + _render(f.operand, 5)
    kind = type(f)
    p = _PREC[kind]
    if kind is Implies:
        lhs, rhs = _render(f.left, p + 1), _render(f.right, p)
    else:
        lhs, rhs = _render(f.left, p), _render(f.right, p + 1)
    text = f"{lhs} {_SYMBOL[kind]} {rhs}"
    return f"({text})" if p < need else text


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(<->|->|[!&|()])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m or m.start(m.lastindex) != pos:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             _byte_offset(text, pos))
        if m.group(1):
            out.append(("op", m.group(1), pos))
        else:
            word = m.group(2)
            out.append(("kw" if word in KEYWORDS else "atom", word, pos))
        pos = m.end()
    out.append(("eof", "", n))
    return out


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8")) + 1


class _Parser:
    def __init__(self, text: str, sig: Signature | None):
        self.text = text
        self.sig = sig
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def accept(self, op: str) -> bool:
        kind, value, _ = self.tokens[self.i]
        if kind == "op" and value == op:
            self.i += 1
            return True
        return False

    def fail(self, message: str):
        kind, value, pos = self.peek()
        found = "end of input" if kind == "eof" else repr(value)
        raise ParseError(f"{message}, found {found}", _byte_offset(self.text, pos))

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek()[0] != "eof":
            self.fail("expected end of input")
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.accept("<->"):
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.accept("->"):
            return Implies(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("|"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.neg()
        while self.accept("&"):
            f = And(f, self.neg())
        return f

    def neg(self) -> Formula:
        if self.accept("!"):
            return Not(self.neg())
        kind, value, pos = self.peek()
        if kind == "kw":
            self.i += 1
            return TOP if value == "true" else BOTTOM
        if kind == "atom":
            if self.sig is not None and value not in self.sig:
                raise UnknownAtomError(value, _byte_offset(self.text, pos))
            self.i += 1
            return Atom(value)
        if self.accept("("):
            f = self.iff()
            if not self.accept(")"):
                self.fail("expected ')'")
            return f
        self.fail("expected a formula")


def parse(text: str, sig: Signature | None = None) -> Formula:
    """Parse ``text``; when ``sig`` is given every atom must belong to it.

    Precedence, tightest first: ``!``, ``&``, ``|``, ``->``, ``<->``.
    ``->`` associates to the right, the other binary connectives to the left.
    """
    return _Parser(text, sig).parse()


# -- semantics --------------------------------------------------------------

@dataclass(frozen=True)
class TruthTable:
    signature: Signature
    bits: int

    @property
    def size(self) -> int:
        return self.signature.valuations

    def __iter__(self) -> Iterator[bool]:
        return (bool(self.bits >> v & 1) for v in range(self.size))


def truth_table(f: Formula, sig: Signature) -> TruthTable:
    return TruthTable(sig, table(f, sig))


@lru_cache(maxsize=1 << 16)
def table(f: Formula, sig: Signature) -> int:
    """Truth table of ``f`` over ``sig`` as an integer bitset."""
    full = sig.full
    if isinstance(f, Atom):
        if f.name not in sig:
            raise UnknownAtomError(f.name)
        return sig.atom_table(f.name)
    if isinstance(f, Top):
        return full
    if isinstance(f, Bottom):
        return 0
    if isinstance(f, Not):
        return full & ~table(f.operand, sig)
    a, b = table(f.left, sig), table(f.right, sig)
    if isinstance(f, And):
        return a & b
    if isinstance(f, Or):
        return a | b
    if isinstance(f, Implies):
        return (full & ~a) | b
    if isinstance(f, Iff):
        return full & ~(a ^ b)
    raise TypeError(f"not a formula: {f!r}")


def conj_table(fs: Iterable[Formula], sig: Signature) -> int:
    t = sig.full
    for f in fs:
        t &= table(f, sig)
    return t


def entails(premises: Iterable[Formula], goal: Formula, sig: Signature) -> bool:
    """``premises |- goal``: every valuation satisfying all premises satisfies goal."""
    return conj_table(premises, sig) & ~table(goal, sig) == 0


def is_tautology(f: Formula, sig: Signature) -> bool:
    return table(f, sig) == sig.full


def equivalent(f: Formula, g: Formula, sig: Signature) -> bool:
    return table(f, sig) == table(g, sig)


def closed_set_equal(xs: Iterable[Formula], ys: Iterable[Formula],
                     sig: Signature) -> bool:
    """Decide ``Cn(xs) == Cn(ys)`` for finite sets."""
    return conj_table(xs, sig) == conj_table(ys, sig)


def expand(base: Iterable[Formula], f: Formula) -> frozenset[Formula]:
    return frozenset(base) | {f}


# -- universe ---------------------------------------------------------------

def _minterm(v: int, sig: Signature) -> Formula:
    n = len(sig.atoms)
    lits = [Atom(a) if (v >> (n - 1 - i)) & 1 else Not(Atom(a))
            for i, a in enumerate(sig.atoms)]
    return conjoin(lits)


@lru_cache(maxsize=1 << 17)
def canonical(bits: int, sig: Signature) -> Formula:
    """Full-DNF representative of the class with truth table ``bits``."""
    if not 0 <= bits <= sig.full:
        raise ValueError(f"table {bits} out of range for {sig}")
    if bits == sig.full:
        return TOP
    return disjoin(_minterm(v, sig) for v in range(sig.valuations)
                   if bits >> v & 1)


def enumerate_universe(sig: Signature) -> list[Formula]:
    """One representative per equivalence class, ordered by truth table."""
    return [canonical(t, sig) for t in range(sig.universe_size)]


def signature_for(formulas: Iterable[Formula]) -> Signature:
    """Smallest signature covering ``formulas``, atoms sorted by name."""
    names: set[str] = set()
    for f in formulas:
        names |= f.atoms()
    return Signature(sorted(names))


# -- short representatives --------------------------------------------------

SHORT_FORM_ATOMS = 3


@lru_cache(maxsize=8)
def _short_forms(sig: Signature) -> tuple[tuple[Formula, ...], tuple[int, ...]]:
    """Smallest formula of every class, found by increasing formula size.

    Size counts connectives plus leaves.  Ties are broken by discovery order:
    constants, atoms in signature order, then at each size binary
    combinations (left operand first, connectives in ``& | -> <->`` order)
    before negations.
    """
    n, full = sig.universe_size, sig.full
    best: list[Formula | None] = [None] * n
    order: list[int] = []
    by_size: dict[int, list[int]] = {1: []}

    def add(t: int, f: Formula, s: int) -> None:
        if best[t] is None:
            best[t] = f
            order.append(t)
            by_size[s].append(t)

    add(0, BOTTOM, 1)
    add(full, TOP, 1)
    for a in sig.atoms:
        add(sig.atom_table(a), Atom(a), 1)
    s = 1
    while len(order) < n:
        s += 1
        by_size[s] = []
        for i in range(1, s - 1):
            for a in by_size[i]:
                fa = best[a]
                for b in by_size[s - 1 - i]:
                    fb = best[b]
                    add(a & b, And(fa, fb), s)
                    add(a | b, Or(fa, fb), s)
                    add((full & ~a) | b, Implies(fa, fb), s)
                    add(full & ~(a ^ b), Iff(fa, fb), s)
        for t in by_size[s - 1]:
            add(full & ~t, Not(best[t]), s)
    return tuple(best), tuple(order)


def simplest(t: int, sig: Signature) -> Formula:
    """A shortest formula with truth table ``t`` (the DNF representative
    above :data:`SHORT_FORM_ATOMS` atoms)."""
    if len(sig) > SHORT_FORM_ATOMS:
        return canonical(t, sig)
    return _short_forms(sig)[0][t]


def probe_order(sig: Signature) -> tuple[int, ...]:
    """Truth tables in the order quantifiers visit them: shortest
    representative first, so reported counterexamples stay small."""
    if len(sig) > SHORT_FORM_ATOMS:
        return tuple(range(sig.universe_size))
    return _short_forms(sig)[1]
