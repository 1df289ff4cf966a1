"""Change operators built from ensconcements, and the reverse constructions.

Three operator kinds are modelled, each as a small class hierarchy:

* :class:`BaseContraction` maps a formula to a subset of a finite base.
* :class:`WithdrawalOp` answers ``beta in K ÷ alpha`` for a belief set ``K``.
  Withdrawal results are infinite closed sets and are never materialized;
  where a finite generating sub-base exists, ``generating_base`` returns it.
* :class:`EntrenchmentRelation` is a total comparison on formulas.

Every operator answers at the level of truth tables (``*_t`` methods), and
offers a ``matrix``/``masks`` view over the whole universe for the postulate
checker.  Matrices are indexed by truth table, which is also the position of
the class representative in :func:`~ensconce.logic.enumerate_universe`.
"""
from __future__ import annotations

from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .ensconcement import (BeliefSetRepr, Ensconcement, EnsconcementError,
                           subset_tables)
from .logic import Formula, LogicError, Signature, canonical, render, table

MATRIX_LIMIT = 256


class UniverseTooLarge(LogicError, ValueError):
    """Raised by universe-wide matrices above :data:`MATRIX_LIMIT` classes."""


def check_matrix_size(sig: Signature) -> None:
    n = sig.universe_size
    if n > MATRIX_LIMIT:
        raise UniverseTooLarge(f"universe of {n} classes is too large for pairwise "
                               f"matrices (limit {MATRIX_LIMIT}, i.e. 3 atoms)")


class ConstructionError(EnsconcementError):
    def __init__(self, message: str, pair: tuple[Formula, Formula] | None = None):
        super().__init__(message)
        self.pair = pair


def _universe(sig: Signature) -> np.ndarray:
    check_matrix_size(sig)
    return np.arange(sig.universe_size, dtype=np.int64)


# -- base contraction -------------------------------------------------------

class BaseContraction:
    """A contraction operator on the finite base ``base``."""

    def __init__(self, base: Sequence[Formula], sig: Signature):
        self.base = tuple(base)
        self.sig = sig

    def contract(self, f: Formula) -> frozenset[Formula]:
        raise NotImplementedError

    def __call__(self, f: Formula) -> frozenset[Formula]:
        return self.contract(f)

    @cached_property
    def tables(self) -> tuple[int, ...]:
        return tuple(table(f, self.sig) for f in self.base)

    @cached_property
    def cn(self) -> list[int]:
        return subset_tables(self.tables, self.sig.full)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.base)) - 1

    def mask(self, fs: Iterable[Formula]) -> int:
        """Bitmask of the base members in ``fs``; other formulas are dropped."""
        fs = set(fs)
        return sum(1 << i for i, f in enumerate(self.base) if f in fs)

    def formulas_of(self, mask: int) -> frozenset[Formula]:
        return frozenset(f for i, f in enumerate(self.base) if mask >> i & 1)

    def result_mask(self, t: int) -> int:
        return self.mask(self.contract(canonical(t, self.sig)))

    def masks(self) -> list[int]:
        """Result mask for every class of the universe, by truth table."""
        return [self.result_mask(t) for t in range(self.sig.universe_size)]


class BrutalContraction(BaseContraction):
    """Keep the proper cut of the target, or everything for a tautology."""

    def __init__(self, e: Ensconcement):
        super().__init__(e.formulas, e.sig)
        self.ensconcement = e

    def result_mask(self, t: int) -> int:
        e = self.ensconcement
        return e.full_mask if t == self.sig.full else e.cut_proper_mask(t)

    def contract(self, f: Formula) -> frozenset[Formula]:
        return self.ensconcement.formulas_of(self.result_mask(table(f, self.sig)))

    @cached_property
    def cn(self) -> list[int]:
        return self.ensconcement.cn


class TableContraction(BaseContraction):
    """An operator given extensionally, keyed by truth table."""

    def __init__(self, base: Sequence[Formula], sig: Signature,
                 results: Mapping[int, Iterable[Formula]]):
        super().__init__(base, sig)
        self.results = {t: frozenset(r) for t, r in results.items()}

    @classmethod
    def from_masks(cls, base: Sequence[Formula], sig: Signature,
                   masks: Sequence[int]) -> TableContraction:
        base = tuple(base)
        return cls(base, sig, {t: [f for i, f in enumerate(base) if m >> i & 1]
                               for t, m in enumerate(masks)})

    @classmethod
    def tabulate(cls, op: BaseContraction) -> TableContraction:
        return cls.from_masks(op.base, op.sig, op.masks())

    def contract(self, f: Formula) -> frozenset[Formula]:
        t = table(f, self.sig)
        try:
            return self.results[t]
        except KeyError:
            raise KeyError(f"operator undefined at {render(f)}") from None

    @cached_property
    def _masks(self) -> dict[int, int]:
        return {t: self.mask(r) for t, r in self.results.items()}

    def result_mask(self, t: int) -> int:
        return self._masks[t]


def brutal_contract(e: Ensconcement, f: Formula) -> frozenset[Formula]:
    return BrutalContraction(e).contract(f)


# -- entrenchment -----------------------------------------------------------

class EntrenchmentRelation:
    """Total preorder on formulas relative to ``belief_set``."""

    def __init__(self, belief_set: BeliefSetRepr):
        self.belief_set = belief_set
        self.sig = belief_set.sig

    def leq_t(self, a: int, b: int) -> bool:
        raise NotImplementedError

    def leq(self, a: Formula, b: Formula) -> bool:
        return self.leq_t(table(a, self.sig), table(b, self.sig))

    def lt(self, a: Formula, b: Formula) -> bool:
        ta, tb = table(a, self.sig), table(b, self.sig)
        return self.leq_t(ta, tb) and not self.leq_t(tb, ta)

    def compare(self, a: Formula, b: Formula) -> str:
        """One of ``"<"``, ``">"`` or ``"="``."""
        ab, ba = self.leq(a, b), self.leq(b, a)
        if ab and ba:
            return "="
        if ab:
            return "<"
        if ba:
            return ">"
        raise ValueError(f"{render(a)} and {render(b)} are incomparable")

    @cached_property
    def matrix(self) -> np.ndarray:
        """``matrix[a, b]`` is ``a <= b`` over the universe."""
        u = _universe(self.sig)
        return np.array([[self.leq_t(a, b) for b in u] for a in u], dtype=bool)

    @cached_property
    def strict(self) -> np.ndarray:
        m = self.matrix
        return m & ~m.T


class DerivedEntrenchment(EntrenchmentRelation):
    """``a <= b`` iff a is not in Cn(A), or both are and
    ``cut_nonstrict(b) ⊆ cut_nonstrict(a)``.

    For ``a`` in Cn(A) and ``b`` outside it neither clause applies, so
    ``a <= b`` fails while ``b <= a`` holds by the first clause.
    """

    def __init__(self, e: Ensconcement):
        super().__init__(e.belief_set)
        self.ensconcement = e

    def leq_t(self, a: int, b: int) -> bool:
        e = self.ensconcement
        if not e.in_cn(a):
            return True
        if not e.in_cn(b):
            return False
        return e.cut_nonstrict_mask(b) & ~e.cut_nonstrict_mask(a) == 0

    @cached_property
    def matrix(self) -> np.ndarray:
        e = self.ensconcement
        u = _universe(self.sig)
        k = self.belief_set.table
        in_k = (u & k) == k
        cuts = np.array([e.cut_nonstrict_mask(t) if in_k[t] else 0 for t in u],
                        dtype=np.int64)
        sub = (cuts[None, :] & ~cuts[:, None]) == 0
        return ~in_k[:, None] | (in_k[:, None] & in_k[None, :] & sub)


def derived_entrenchment(e: Ensconcement) -> DerivedEntrenchment:
    return DerivedEntrenchment(e)


class WithdrawalEntrenchment(EntrenchmentRelation):
    """``a <= b`` iff ``a not in K ÷ b`` or ``|- b``."""

    def __init__(self, w: WithdrawalOp, belief_set: BeliefSetRepr | None = None):
        super().__init__(belief_set or w.belief_set)
        self.withdrawal = w

    def leq_t(self, a: int, b: int) -> bool:
        return b == self.sig.full or not self.withdrawal.member_t(b, a)

    @cached_property
    def matrix(self) -> np.ndarray:
        u = _universe(self.sig)
        return ~self.withdrawal.matrix.T | (u == self.sig.full)[None, :]


def entrenchment_from_withdrawal(w: WithdrawalOp,
                                 K: BeliefSetRepr | None = None) -> WithdrawalEntrenchment:
    return WithdrawalEntrenchment(w, K)


# -- withdrawal -------------------------------------------------------------

class WithdrawalOp:
    """Membership oracle for ``K ÷ alpha``."""

    def __init__(self, belief_set: BeliefSetRepr):
        self.belief_set = belief_set
        self.sig = belief_set.sig

    def member_t(self, a: int, b: int) -> bool:
        raise NotImplementedError

    def member(self, alpha: Formula, beta: Formula) -> bool:
        return self.member_t(table(alpha, self.sig), table(beta, self.sig))

    def generating_base(self, alpha: Formula) -> frozenset[Formula] | None:
        """A finite set whose closure is ``K ÷ alpha``, when one is known."""
        return None

    def row(self, alpha: Formula) -> np.ndarray:
        """Membership of every universe class in ``K ÷ alpha``."""
        a = table(alpha, self.sig)
        return np.array([self.member_t(a, b) for b in _universe(self.sig)], dtype=bool)

    @cached_property
    def matrix(self) -> np.ndarray:
        """``matrix[a, b]`` is ``b in K ÷ a`` over the universe."""
        u = _universe(self.sig)
        return np.array([[self.member_t(a, b) for b in u] for a in u], dtype=bool)


class EntrenchmentWithdrawal(WithdrawalOp):
    """Severe withdrawal from an entrenchment: ``b in K ÷ a`` iff ``b in K``
    and either ``|- a`` or ``a < b``."""

    def __init__(self, rel: EntrenchmentRelation):
        super().__init__(rel.belief_set)
        self.relation = rel

    def member_t(self, a: int, b: int) -> bool:
        if not self.belief_set.contains_table(b):
            return False
        rel = self.relation
        return a == self.sig.full or (rel.leq_t(a, b) and not rel.leq_t(b, a))

    def row(self, alpha: Formula) -> np.ndarray:
        return self.matrix[table(alpha, self.sig)]

    @cached_property
    def matrix(self) -> np.ndarray:
        u = _universe(self.sig)
        k = self.belief_set.table
        in_k = (u & k) == k
        taut = u == self.sig.full
        return in_k[None, :] & (taut[:, None] | self.relation.strict)


class SevereWithdrawal(EntrenchmentWithdrawal):
    """Severe withdrawal on ``Cn(A)`` through the derived entrenchment of ``e``."""

    def __init__(self, e: Ensconcement):
        super().__init__(DerivedEntrenchment(e))
        self.ensconcement = e

    def generating_base(self, alpha: Formula) -> frozenset[Formula]:
        return severe_withdraw_base(self.ensconcement, alpha)


class GardenforsContraction(WithdrawalOp):
    """``b in K ÷ a`` iff ``b in K`` and either ``|- a`` or ``a < a | b``."""

    def __init__(self, rel: EntrenchmentRelation):
        super().__init__(rel.belief_set)
        self.relation = rel

    def member_t(self, a: int, b: int) -> bool:
        if not self.belief_set.contains_table(b):
            return False
        rel = self.relation
        ab = a | b
        return a == self.sig.full or (rel.leq_t(a, ab) and not rel.leq_t(ab, a))

    @cached_property
    def matrix(self) -> np.ndarray:
        u = _universe(self.sig)
        k = self.belief_set.table
        in_k = (u & k) == k
        taut = u == self.sig.full
        strict = self.relation.strict
        joined = strict[u[:, None], u[:, None] | u[None, :]]
        return in_k[None, :] & (taut[:, None] | joined)


class InducedWithdrawal(WithdrawalOp):
    """``Cn(A) ÷ a = Cn(A - a)`` for a base contraction ``-``."""

    def __init__(self, op: BaseContraction):
        super().__init__(BeliefSetRepr(op.base, op.sig))
        self.contraction = op

    def member_t(self, a: int, b: int) -> bool:
        return self.contraction.cn[self.contraction.result_mask(a)] & ~b == 0

    def generating_base(self, alpha: Formula) -> frozenset[Formula]:
        return self.contraction.contract(alpha)

    def row(self, alpha: Formula) -> np.ndarray:
        op = self.contraction
        gen = op.cn[op.result_mask(table(alpha, self.sig))]
        return (gen & ~_universe(self.sig)) == 0

    @cached_property
    def matrix(self) -> np.ndarray:
        u = _universe(self.sig)
        op = self.contraction
        gen = np.array([op.cn[m] for m in op.masks()], dtype=np.int64)
        return (gen[:, None] & ~u[None, :]) == 0


def severe_withdrawal(e: Ensconcement) -> SevereWithdrawal:
    return SevereWithdrawal(e)


def withdrawal_from_entrenchment(rel: EntrenchmentRelation) -> EntrenchmentWithdrawal:
    return EntrenchmentWithdrawal(rel)


def severe_withdraw_member(e: Ensconcement, alpha: Formula, beta: Formula) -> bool:
    return SevereWithdrawal(e).member(alpha, beta)


def severe_withdraw_base(e: Ensconcement, alpha: Formula) -> frozenset[Formula]:
    """``(Cn(A) ÷ alpha) ∩ A``."""
    w = EntrenchmentWithdrawal(DerivedEntrenchment(e))
    a = table(alpha, e.sig)
    return frozenset(f for f, t in zip(e.formulas, e.tables) if w.member_t(a, t))


def g_contract_member(e: Ensconcement, alpha: Formula, beta: Formula) -> bool:
    return GardenforsContraction(DerivedEntrenchment(e)).member(alpha, beta)


# -- reverse constructions --------------------------------------------------

def _layer(sig: Signature, formulas: Sequence[Formula],
           leq: Callable[[int, int], bool]) -> Ensconcement:
    n = len(formulas)
    rel = [[leq(i, j) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if not (rel[i][j] or rel[j][i]):
                a, b = formulas[i], formulas[j]
                raise ConstructionError(
                    f"relation not total: {render(a)} and {render(b)} are incomparable",
                    (a, b))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if rel[i][j] and rel[j][k] and not rel[i][k]:
                    raise ConstructionError(
                        f"relation not transitive through {render(formulas[j])}: "
                        f"{render(formulas[i])} vs {render(formulas[k])}",
                        (formulas[i], formulas[k]))
    # longest chain in the strict part; for a total preorder this counts
    # the equivalence classes strictly below
    ranks = [len({frozenset(k for k in range(n) if rel[j][k] and rel[k][j])
                  for j in range(n) if rel[j][i] and not rel[i][j]})
             for i in range(n)]
    return Ensconcement(sig, zip(formulas, ranks))


def ensconcement_from_operator(op: BaseContraction,
                               base: Sequence[Formula] | None = None) -> Ensconcement:
    """Rank the base by ``a ⪯ b`` iff ``(op(b) ⊆ op(a) and not |- a)`` or ``|- b``."""
    base = tuple(op.base if base is None else base)
    full = op.sig.full
    ts = [table(f, op.sig) for f in base]
    res = [op.contract(f) for f in base]

    def leq(i: int, j: int) -> bool:
        return (res[j] <= res[i] and ts[i] != full) or ts[j] == full

    return _layer(op.sig, base, leq)


def ensconcement_from_withdrawal(w: WithdrawalOp,
                                 base: Sequence[Formula]) -> Ensconcement:
    """Rank the base by ``a ⪯ b`` iff ``a not in Cn(A) ÷ b`` or ``|- b``."""
    base = tuple(base)
    full = w.sig.full
    ts = [table(f, w.sig) for f in base]

    def leq(i: int, j: int) -> bool:
        return ts[j] == full or not w.member_t(ts[j], ts[i])

    return _layer(w.sig, base, leq)
