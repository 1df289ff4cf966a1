"""Ranked belief bases (ensconcements), their axioms and the two cuts.

A total preorder on a finite base is stored as integer ranks; higher ranks
are more ensconced, ``a ⪯ b`` iff ``rank(a) <= rank(b)``.

Naming of the cuts.  The literature writes the two cuts with subscripts that
are swapped relative to the comparison used *inside* them:

* :func:`cut_nonstrict` keeps ``b`` when the formulas ranked *strictly above*
  ``b`` fail to entail the target.  It is only defined for targets in
  ``Cn(A)``.
* :func:`cut_proper` keeps ``b`` when the formulas ranked *at or above* ``b``
  (``b`` itself included) fail to entail the target.  Defined everywhere.

Internally subsets of the base are bitmasks over entry positions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from .logic import (Formula, LogicError, Signature, conj_table, parse, render,
                    signature_for, table)

AXIOMS = ("(⪯1)", "(⪯2)", "(⪯3)")


class EnsconcementError(LogicError):
    pass


class Violation(NamedTuple):
    axiom: str
    witnesses: tuple[Formula, ...]
    message: str

    def __str__(self) -> str:
        return f"{self.axiom}: {self.message}"


class ValidationResult(NamedTuple):
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def lines(self) -> list[str]:
        return ["ok"] if self.ok else [str(v) for v in self.violations]


class Cut(NamedTuple):
    """Result of :func:`cut_nonstrict`; ``in_domain`` is False when the
    target is not in ``Cn(A)`` and ``members`` is then empty."""
    members: frozenset[Formula]
    in_domain: bool


def subset_tables(tables: tuple[int, ...], full: int) -> list[int]:
    """Conjunction table of every sub-base, indexed by bitmask."""
    out = [full] * (1 << len(tables))
    for mask in range(1, len(out)):
        low = mask & -mask
        out[mask] = out[mask ^ low] & tables[low.bit_length() - 1]
    return out


@dataclass(frozen=True)
class BeliefSetRepr:
    """``Cn(generators)``; membership is decided by entailment.  Generators
    keep their first-seen order so a generating base can be recovered."""
    generators: tuple[Formula, ...]
    sig: Signature

    def __init__(self, generators: Iterable[Formula], sig: Signature):
        object.__setattr__(self, "generators", tuple(dict.fromkeys(generators)))
        object.__setattr__(self, "sig", sig)

    @cached_property
    def table(self) -> int:
        return conj_table(self.generators, self.sig)

    def contains_table(self, t: int) -> bool:
        return self.table & ~t == 0

    def __contains__(self, f: Formula) -> bool:
        return self.contains_table(table(f, self.sig))

    @property
    def consistent(self) -> bool:
        return self.table != 0


@dataclass(frozen=True)
class Ensconcement:
    sig: Signature
    entries: tuple[tuple[Formula, int], ...]

    def __init__(self, sig: Signature, entries: Iterable[tuple[Formula, int]]):
        entries = tuple((f, int(r)) for f, r in entries)
        seen = set()
        for f, r in entries:
            if r < 0:
                raise EnsconcementError(f"negative rank {r} for {render(f)}")
            if f in seen:
                raise EnsconcementError(f"duplicate formula {render(f)}")
            seen.add(f)
            table(f, sig)  # raises on atoms outside sig
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, sig: Signature | str, *pairs: tuple[str | Formula, int]) -> Ensconcement:
        """``Ensconcement.of("p q", ("p", 0), ("q", 1))``."""
        if isinstance(sig, str):
            sig = Signature.of(sig)
        return cls(sig, [(parse(f, sig) if isinstance(f, str) else f, r)
                         for f, r in pairs])

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def formulas(self) -> tuple[Formula, ...]:
        return tuple(f for f, _ in self.entries)

    @property
    def base(self) -> frozenset[Formula]:
        return frozenset(self.formulas)

    @cached_property
    def belief_set(self) -> BeliefSetRepr:
        return BeliefSetRepr(self.formulas, self.sig)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(r for _, r in self.entries)

    def rank(self, f: Formula) -> int:
        for g, r in self.entries:
            if g == f:
                return r
        raise KeyError(render(f))

    def __str__(self) -> str:
        return dumps(self)

    # -- bitmask machinery --------------------------------------------------

    @cached_property
    def tables(self) -> tuple[int, ...]:
        return tuple(table(f, self.sig) for f in self.formulas)

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self.entries)) - 1

    @cached_property
    def cn(self) -> list[int]:
        """``cn[mask]`` is the conjunction table of the masked sub-base."""
        return subset_tables(self.tables, self.sig.full)

    @cached_property
    def _above(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        ranks = self.ranks
        strict = tuple(sum(1 << j for j, s in enumerate(ranks) if s > r) for r in ranks)
        weak = tuple(sum(1 << j for j, s in enumerate(ranks) if s >= r) for r in ranks)
        return strict, weak

    @property
    def strictly_above(self) -> tuple[int, ...]:
        return self._above[0]

    @property
    def at_or_above(self) -> tuple[int, ...]:
        return self._above[1]

    def entails_mask(self, mask: int, t: int) -> bool:
        return self.cn[mask] & ~t == 0

    def in_cn(self, t: int) -> bool:
        """Whether the class with table ``t`` belongs to ``Cn(A)``."""
        return self.cn[self.full_mask] & ~t == 0

    def mask_of(self, fs: Iterable[Formula]) -> int:
        idx = {f: i for i, f in enumerate(self.formulas)}
        return sum(1 << idx[f] for f in set(fs))

    def formulas_of(self, mask: int) -> frozenset[Formula]:
        return frozenset(f for i, f in enumerate(self.formulas) if mask >> i & 1)

    @cached_property
    def _cut_memo(self) -> tuple[dict[int, int], dict[int, int]]:
        return {}, {}

    def cut_proper_mask(self, t: int) -> int:
        memo = self._cut_memo[0]
        if t not in memo:
            cn = self.cn
            memo[t] = sum(1 << i for i, up in enumerate(self.at_or_above)
                          if cn[up] & ~t)
        return memo[t]

    def cut_nonstrict_mask(self, t: int) -> int:
        """Mask form of :func:`cut_nonstrict`; callers check the domain."""
        memo = self._cut_memo[1]
        if t not in memo:
            cn = self.cn
            memo[t] = sum(1 << i for i, up in enumerate(self.strictly_above)
                          if cn[up] & ~t)
        return memo[t]


# -- axioms -----------------------------------------------------------------

def validate(e: Ensconcement) -> ValidationResult:
    full = e.sig.full
    taut = [t == full for t in e.tables]
    out = []
    for i, f in enumerate(e.formulas):
        if not taut[i] and e.entails_mask(e.strictly_above[i], e.tables[i]):
            above = e.formulas_of(e.strictly_above[i])
            shown = ", ".join(sorted(render(g) for g in above))
            out.append(Violation(
                AXIOMS[0], (f,),
                f"{{{shown}}} entails {render(f)} from strictly higher ranks"))
    for i, f in enumerate(e.formulas):
        for j, g in enumerate(e.formulas):
            if not taut[i] and taut[j] and e.ranks[i] >= e.ranks[j]:
                out.append(Violation(
                    AXIOMS[1], (f, g),
                    f"non-tautology {render(f)} not strictly below tautology {render(g)}"))
    taut_ranks = {e.ranks[i] for i in range(len(e)) if taut[i]}
    if len(taut_ranks) > 1:
        ts = tuple(f for i, f in enumerate(e.formulas) if taut[i])
        out.append(Violation(AXIOMS[2], ts,
                             f"tautologies at different ranks {sorted(taut_ranks)}"))
    return ValidationResult(tuple(out))


def lift_tautologies(e: Ensconcement) -> Ensconcement:
    """Move every tautology to one rank above the highest non-tautology."""
    full = e.sig.full
    plain = [r for f, r in e.entries if table(f, e.sig) != full]
    top = max(plain, default=-1) + 1
    return Ensconcement(e.sig, [(f, top if table(f, e.sig) == full else r)
                                for f, r in e.entries])


# -- cuts -------------------------------------------------------------------

def cut_nonstrict(e: Ensconcement, f: Formula) -> Cut:
    """``{b in A : {c in A : rank(b) < rank(c)} does not entail f}``, for f in Cn(A)."""
    t = table(f, e.sig)
    if not e.in_cn(t):
        return Cut(frozenset(), False)
    return Cut(e.formulas_of(e.cut_nonstrict_mask(t)), True)


def cut_proper(e: Ensconcement, f: Formula) -> frozenset[Formula]:
    """``{b in A : {c in A : rank(b) <= rank(c)} does not entail f}``."""
    return e.formulas_of(e.cut_proper_mask(table(f, e.sig)))


# -- file format ------------------------------------------------------------

_LINE = re.compile(r"^\s*(\d+)\s*:\s*(.*?)\s*$")


def loads(text: str, *, lift: bool = False, strict: bool = True) -> Ensconcement:
    """Parse the line format ``<rank> : <formula>`` with optional ``atoms`` header.

    With ``strict`` the result must validate; ``lift`` first repairs the
    tautology axioms with :func:`lift_tautologies`.
    """
    sig = None
    raw: list[tuple[int, str, int]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        if not line.strip():
            continue
        words = line.split()
        if words[0] == "atoms" and ":" not in line:
            if sig is not None or raw:
                raise EnsconcementError(f"line {lineno}: misplaced atoms header")
            sig = Signature(words[1:])
            continue
        m = _LINE.match(line)
        if not m:
            raise EnsconcementError(f"line {lineno}: expected '<rank> : <formula>'")
        raw.append((int(m.group(1)), m.group(2), lineno))
    entries = []
    for rank, src, lineno in raw:
        try:
            entries.append((parse(src, sig), rank))
        except LogicError as exc:
            raise EnsconcementError(f"line {lineno}: {exc}") from exc
    if sig is None:
        sig = signature_for(f for f, _ in entries)
    e = Ensconcement(sig, entries)
    if lift:
        e = lift_tautologies(e)
    if strict:
        result = validate(e)
        if not result:
            raise EnsconcementError("invalid ensconcement: "
                                    + "; ".join(result.lines()))
    return e


def load(path, **kwargs) -> Ensconcement:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), **kwargs)


def dumps(e: Ensconcement) -> str:
    lines = [f"atoms {e.sig}"] if len(e.sig) else []
    lines += [f"{r} : {render(f)}" for f, r in e.entries]
    return "\n".join(lines) + "\n"
