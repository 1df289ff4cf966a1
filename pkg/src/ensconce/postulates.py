"""Executable postulates over a finite universe, with counterexample reports.

Each postulate is registered with

* a quantifier ``domain``: bindings of ``alpha``/``beta``/``gamma``/``X`` to
  formulas, visited in :func:`~ensconce.logic.probe_order`;
* ``holds``: the predicate for one binding, evaluated through the operator's
  public interface (``contract``/``row``/``member``/``leq``), returning a
  reason string when the binding violates the postulate;
* optionally ``fast``: a vectorized scan over precomputed universe matrices
  that must find the same first violating binding as walking ``domain``.

A FAIL report carries the binding; :func:`recheck` re-evaluates ``holds`` on
it.  Quantifiers range over one representative per equivalence class, which
is sound because every operator here answers through truth tables; the
extensionality postulates probe that assumption with syntactic variants.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .ensconcement import Ensconcement
from .logic import (BOTTOM, TOP, And, Formula, Not, Or, canonical, probe_order,
                    render, simplest, table)
from .operators import (BaseContraction, BrutalContraction, DerivedEntrenchment,
                        EntrenchmentRelation, GardenforsContraction,
                        InducedWithdrawal, SevereWithdrawal, WithdrawalOp)

PASS, FAIL = "PASS", "FAIL"
SUBSET_SCAN_LIMIT = 12
_GREEK = {"alpha": "α", "beta": "β", "gamma": "γ", "X": "X"}

Binding = Mapping[str, object]


class PostulateKindError(TypeError):
    pass


def _fmt(value) -> str:
    if isinstance(value, Formula):
        return render(value)
    return "{" + ", ".join(render(f) for f in value) + "}"


@dataclass(frozen=True)
class PostulateReport:
    id: str
    status: str
    counterexample: tuple[tuple[str, object], ...] = ()
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def binding(self) -> dict[str, object]:
        return dict(self.counterexample)

    def line(self) -> str:
        if self.passed:
            return f"{self.id}: PASS"
        parts = [f"{_GREEK[k]}={_fmt(v)}" for k, v in self.counterexample]
        return f"{self.id}: FAIL {' '.join(parts)} — {self.reason}"

    def record(self) -> str:
        rows = [f"postulate: {self.id}", f"status: {self.status}"]
        rows += [f"{k}: {_fmt(v)}" for k, v in self.counterexample]
        if self.reason:
            rows.append(f"reason: {self.reason}")
        return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class Postulate:
    id: str
    kind: str
    statement: str
    domain: Callable[[object], Iterator[dict]]
    holds: Callable[[object, Binding], str | None]
    fast: Callable[[object], dict | None] | None = None


CATALOG: dict[str, Postulate] = {}


def _postulate(id: str, kind: str, statement: str, domain, fast=None):
    def register(holds):
        CATALOG[id] = Postulate(id, kind, statement, domain, holds, fast)
        return holds
    return register


# -- views --------------------------------------------------------------------

class _View:
    def __init__(self, op):
        self.op = op
        self.sig = op.sig
        self.full = self.sig.full
        self.n = self.sig.universe_size
        self.T = np.arange(self.n, dtype=np.int64)
        self.order = np.array(probe_order(self.sig), dtype=np.int64)

    def u(self, t) -> Formula:
        return simplest(int(t), self.sig)

    def t(self, f: Formula) -> int:
        return table(f, self.sig)

    def universe(self) -> Iterator[Formula]:
        return (self.u(t) for t in self.order)

    def first(self, v: np.ndarray, name: str = "alpha") -> dict | None:
        hit = np.flatnonzero(v[self.order])
        return {name: self.u(self.order[hit[0]])} if hit.size else None

    def first_pair(self, V: np.ndarray, names=("alpha", "beta"),
                   rows: Sequence | None = None) -> dict | None:
        """First violation of ``V`` in row-major probe order.  Rows are
        universe tables unless ``rows`` (formulas, already ordered) is given."""
        o = self.order
        P = V[:, o] if rows is not None else V[np.ix_(o, o)]
        hit = np.flatnonzero(P)
        if not hit.size:
            return None
        i, j = divmod(int(hit[0]), len(o))
        a = rows[i] if rows is not None else self.u(o[i])
        return {names[0]: a, names[1]: self.u(o[j])}


def _variants(f: Formula, sig) -> list[Formula]:
    out = [Not(Not(f)), And(f, f), Or(f, BOTTOM), canonical(table(f, sig), sig)]
    return [g for g in out if g != f]


class BaseView(_View):
    kind = "base"

    def __init__(self, op: BaseContraction):
        super().__init__(op)
        self.base = op.base
        self.m = len(self.base)
        self.full_mask = op.full_mask
        self.tables = op.tables
        self.cn = op.cn
        self.CN = np.array(self.cn, dtype=np.int64)
        self.k = self.cn[self.full_mask]
        self.index = {f: i for i, f in enumerate(self.base)}
        self.plain = [i for i in range(self.m) if self.tables[i] != self.full]

    @cached_property
    def R(self) -> np.ndarray:
        return np.array(self.op.masks(), dtype=np.int64)

    @cached_property
    def Rb(self) -> list[int]:
        return [self.res(f) for f in self.base]

    @cached_property
    def inR(self) -> np.ndarray:
        """``inR[t, i]``: base member ``i`` survives contraction by ``t``."""
        return ((self.R[:, None] >> np.arange(self.m)) & 1).astype(bool)

    def res(self, f: Formula) -> int:
        return self.op.mask(self.op.contract(f))

    def entails(self, mask: int, t: int) -> bool:
        return self.cn[mask] & ~t == 0

    def show(self, mask: int) -> str:
        return _fmt(sorted(self.op.formulas_of(mask), key=render))

    def members(self) -> list[Formula]:
        return list(self.base)

    def sub(self, mask: int) -> tuple[Formula, ...]:
        return tuple(f for i, f in enumerate(self.base) if mask >> i & 1)


class WithdrawalView(_View):
    kind = "withdrawal"

    def __init__(self, op: WithdrawalOp):
        super().__init__(op)
        self.K = op.belief_set
        self.k = self.K.table
        self.in_k = (self.T & self.k) == self.k
        self.base = tuple(self.K.generators)
        self.btables = np.array([table(f, self.sig) for f in self.base], dtype=np.int64)

    @cached_property
    def M(self) -> np.ndarray:
        return self.op.matrix

    @cached_property
    def S(self) -> np.ndarray:
        """``S[a, b]``: ``K ÷ a ⊆ K ÷ b``."""
        m = self.M.astype(np.float32)
        return (m @ (1.0 - m).T) == 0

    @cached_property
    def conj(self) -> np.ndarray:
        """Conjunction table of each withdrawal result."""
        return np.array([np.bitwise_and.reduce(self.T[row], initial=self.full)
                         for row in self.M], dtype=np.int64)

    @cached_property
    def base_conj(self) -> np.ndarray:
        """Conjunction table of ``(K ÷ a) ∩ A``."""
        inside = self.M[:, self.btables] if len(self.base) else np.zeros((self.n, 0), bool)
        out = np.full(self.n, self.full, dtype=np.int64)
        for j, t in enumerate(self.btables):
            out[inside[:, j]] &= t
        return out

    def row(self, f: Formula) -> np.ndarray:
        return np.asarray(self.op.row(f), dtype=bool)

    def conj_of(self, row: np.ndarray) -> int:
        return int(np.bitwise_and.reduce(self.T[row], initial=self.full))

    def first_in(self, row: np.ndarray) -> Formula:
        return self.u(self.order[np.flatnonzero(row[self.order])[0]])

    def nontrivial_beliefs(self) -> list[Formula]:
        return [self.u(t) for t in self.order if self.in_k[t] and t != self.full]


class EntrenchmentView(_View):
    kind = "entrenchment"

    def __init__(self, op: EntrenchmentRelation):
        super().__init__(op)
        self.K = op.belief_set
        self.k = self.K.table
        self.in_k = (self.T & self.k) == self.k

    @cached_property
    def L(self) -> np.ndarray:
        return self.op.matrix


_VIEWS: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()


def view_for(op):
    if op not in _VIEWS:
        if isinstance(op, BaseContraction):
            _VIEWS[op] = BaseView(op)
        elif isinstance(op, WithdrawalOp):
            _VIEWS[op] = WithdrawalView(op)
        elif isinstance(op, EntrenchmentRelation):
            _VIEWS[op] = EntrenchmentView(op)
        else:
            raise PostulateKindError(f"not an operator: {op!r}")
    return _VIEWS[op]


# -- domains ------------------------------------------------------------------

def _each_alpha(v) -> Iterator[dict]:
    for a in v.universe():
        yield {"alpha": a}


def _each_pair(v) -> Iterator[dict]:
    us = list(v.universe())
    for a in us:
        for b in us:
            yield {"alpha": a, "beta": b}


def _each_triple(v) -> Iterator[dict]:
    us = list(v.universe())
    for a in us:
        for b in us:
            for c in us:
                yield {"alpha": a, "beta": b, "gamma": c}


def _alpha_with_variants(v) -> Iterator[dict]:
    for a in v.universe():
        t = v.t(a)
        extra = [f for f in getattr(v, "base", ()) if v.t(f) == t and f != a]
        for b in _variants(a, v.sig) + extra:
            yield {"alpha": a, "beta": b}


def _base_then_universe(v: BaseView) -> Iterator[dict]:
    us = list(v.universe())
    for a in v.base:
        for b in us:
            yield {"alpha": a, "beta": b}


def _universe_then_base(v: BaseView) -> Iterator[dict]:
    for a in v.universe():
        for b in v.base:
            yield {"alpha": a, "beta": b}


def _each_member(v: BaseView) -> Iterator[dict]:
    for b in v.base:
        yield {"beta": b}


def _plain_subsets(v: BaseView) -> Iterator[dict]:
    """Non-empty sets of non-tautological base members.  All of them when
    the base is small; otherwise pairs, which decide the bound postulates
    because a finite family has extrema in every subfamily iff it is a
    chain under inclusion."""
    plain = v.plain
    if len(plain) <= SUBSET_SCAN_LIMIT:
        for sel in range(1, 1 << len(plain)):
            yield {"X": tuple(v.base[plain[j]] for j in range(len(plain)) if sel >> j & 1)}
    else:
        for i, j in combinations(plain, 2):
            yield {"X": (v.base[i], v.base[j])}


def _belief_pairs(v: WithdrawalView) -> Iterator[dict]:
    """Pairs of non-tautological beliefs; see :func:`_plain_subsets`."""
    for a, b in combinations(v.nontrivial_beliefs(), 2):
        yield {"X": (a, b)}


# -- base contraction postulates ---------------------------------------------

def _fast_success(v: BaseView):
    ent = (v.CN[v.R] & ~v.T) == 0
    return v.first((v.T != v.full) & ent)


@_postulate("success", "base", "if not |- a then A - a does not entail a",
            _each_alpha, _fast_success)
def _success(v: BaseView, b):
    a = b["alpha"]
    t = v.t(a)
    r = v.res(a)
    if t != v.full and v.entails(r, t):
        return f"A - α = {v.show(r)} still entails α"


@_postulate("inclusion", "base", "A - a ⊆ A", _each_alpha)
def _inclusion(v: BaseView, b):
    extra = v.op.contract(b["alpha"]) - set(v.base)
    if extra:
        return f"A - α contains {_fmt(sorted(extra, key=render))} outside A"


def _fast_vacuity(v: BaseView):
    return v.first(((v.k & ~v.T) != 0) & (v.R != v.full_mask))


@_postulate("vacuity", "base", "if A does not entail a then A ⊆ A - a",
            _each_alpha, _fast_vacuity)
def _vacuity(v: BaseView, b):
    a = b["alpha"]
    r = v.res(a)
    if not v.entails(v.full_mask, v.t(a)) and r != v.full_mask:
        return f"A does not entail α but A - α = {v.show(r)}"


def _fast_failure(v: BaseView):
    return v.first((v.T == v.full) & (v.R != v.full_mask))


@_postulate("failure", "base", "if |- a then A - a = A", _each_alpha, _fast_failure)
def _failure(v: BaseView, b):
    a = b["alpha"]
    r = v.res(a)
    if v.t(a) == v.full and r != v.full_mask:
        return f"α is a tautology but A - α = {v.show(r)}"


def _fast_relative_closure(v: BaseView):
    if not v.m:
        return None
    tb = np.array(v.tables, dtype=np.int64)
    ent = (v.CN[v.R][:, None] & ~tb[None, :]) == 0
    return v.first((ent & ~v.inR).any(axis=1))


@_postulate("relative-closure", "base", "A ∩ Cn(A - a) ⊆ A - a",
            _each_alpha, _fast_relative_closure)
def _relative_closure(v: BaseView, b):
    r = v.res(b["alpha"])
    for i, f in enumerate(v.base):
        if not r >> i & 1 and v.entails(r, v.tables[i]):
            return f"A - α entails base member {render(f)} but drops it"


def _fast_strong_inclusion(v: BaseView):
    R, T = v.R, v.T
    not_ent = (v.CN[R][None, :] & ~T[:, None]) != 0       # [alpha, beta]
    not_sub = (R[None, :] & ~R[:, None]) != 0
    return v.first_pair(not_ent & not_sub)


@_postulate("strong-inclusion", "base",
            "if A - b does not entail a then A - b ⊆ A - a",
            _each_pair, _fast_strong_inclusion)
def _strong_inclusion(v: BaseView, b):
    ra, rb = v.res(b["alpha"]), v.res(b["beta"])
    if not v.entails(rb, v.t(b["alpha"])) and rb & ~ra:
        return f"A - β = {v.show(rb)} does not entail α yet is not within A - α = {v.show(ra)}"


def _cluster(v: BaseView, r: int) -> int:
    return r | sum(1 << j for j, rj in enumerate(v.Rb) if rj == r)


def _fast_uniform(v: BaseView):
    if not v.m:
        return None
    Rb = np.array(v.Rb, dtype=np.int64)
    cl = np.array([_cluster(v, r) for r in v.Rb], dtype=np.int64)
    in_a = (v.k & ~v.T) == 0
    same = v.R[:, None] == Rb[None, :]
    ent = (v.CN[cl][None, :] & ~v.T[:, None]) == 0
    V = in_a[:, None] & same & ~ent                         # [alpha, beta]
    o = v.order
    hit = np.flatnonzero(V[o])
    if not hit.size:
        return None
    i, j = divmod(int(hit[0]), v.m)
    return {"alpha": v.u(o[i]), "beta": v.base[j]}


@_postulate("uniform-behaviour", "base",
            "if b ∈ A, A |- a and A - a = A - b then "
            "a ∈ Cn((A - b) ∪ {c ∈ A : A - b = A - c})",
            _universe_then_base, _fast_uniform)
def _uniform(v: BaseView, b):
    a, beta = b["alpha"], b["beta"]
    if beta not in v.index:
        return None
    ra, rb = v.res(a), v.res(beta)
    if v.entails(v.full_mask, v.t(a)) and ra == rb:
        cl = rb | sum(1 << j for j, f in enumerate(v.base) if v.res(f) == rb)
        if not v.entails(cl, v.t(a)):
            return f"{v.show(cl)} does not entail α"


@_postulate("extensionality", "base", "if |- a <-> b then A - a = A - b",
            _alpha_with_variants)
def _extensionality(v: BaseView, b):
    ra, rb = v.op.contract(b["alpha"]), v.op.contract(b["beta"])
    if ra != rb:
        return f"A - α = {_fmt(sorted(ra, key=render))} but A - β = {_fmt(sorted(rb, key=render))}"


def _bound_fast(pick):
    def fast(v: BaseView):
        plain = v.plain
        rs = [v.Rb[i] for i in plain]
        chain = all((x & ~y == 0) or (y & ~x == 0) for x, y in combinations(rs, 2))
        if len(plain) > SUBSET_SCAN_LIMIT:
            if chain:
                return None
            for (i, x), (j, y) in combinations(zip(plain, rs), 2):
                if x & ~y and y & ~x:
                    return {"X": (v.base[i], v.base[j])}
        found = None
        for sel in range(1, 1 << len(plain)):
            xs = [rs[j] for j in range(len(plain)) if sel >> j & 1]
            if not any(all(pick(x, y) for y in xs) for x in xs):
                found = {"X": tuple(v.base[plain[j]] for j in range(len(plain))
                                    if sel >> j & 1)}
                break
        assert (found is None) == chain, "subset scan disagrees with chain test"
        return found
    return fast


def _bound_holds(pick, word):
    def holds(v: BaseView, b):
        xs = [v.res(f) for f in b["X"]]
        if not any(all(pick(x, y) for y in xs) for x in xs):
            return f"no member of X has the {word} contraction result"
    return holds


def _contains(x: int, y: int) -> bool:
    return y & ~x == 0


def _contained(x: int, y: int) -> bool:
    return x & ~y == 0


_postulate("upper-bound", "base",
           "every non-empty X ⊆ A \\ Cn(∅) has a ∈ X with A - b ⊆ A - a for all b ∈ X",
           _plain_subsets, _bound_fast(_contains))(_bound_holds(_contains, "largest"))
_postulate("lower-bound", "base",
           "every non-empty X ⊆ A \\ Cn(∅) has a ∈ X with A - a ⊆ A - b for all b ∈ X",
           _plain_subsets, _bound_fast(_contained))(_bound_holds(_contained, "smallest"))


@_postulate("clustering", "base",
            "if b ∈ A there is a ∈ A ∪ Cn(∅) with "
            "A - a = (A - b) ∪ {c ∈ A : A - b = A - c}",
            _each_member)
def _clustering(v: BaseView, b):
    rb = v.res(b["beta"])
    target = rb | sum(1 << j for j, f in enumerate(v.base) if v.res(f) == rb)
    if not any(v.res(a) == target for a in list(v.base) + [TOP]):
        return f"no α in A ∪ Cn(∅) has A - α = {v.show(target)}"


def _fast_afterpost_a(v: BaseView):
    if not v.m:
        return None
    Rb = np.array(v.Rb, dtype=np.int64)
    V = ~v.inR.T & ((v.R[None, :] & ~Rb[:, None]) != 0)     # [alpha in A, beta]
    return v.first_pair(V, rows=v.base)


@_postulate("afterpost-a", "base", "if a ∈ A \\ (A - b) then A - b ⊆ A - a",
            _base_then_universe, _fast_afterpost_a)
def _afterpost_a(v: BaseView, b):
    a, beta = b["alpha"], b["beta"]
    if a not in v.index:
        return None
    rb = v.res(beta)
    if not rb >> v.index[a] & 1 and rb & ~v.res(a):
        return f"α was removed by β but A - β = {v.show(rb)} is not within A - α"


def _fast_afterpost_b(v: BaseView):
    R, T = v.R, v.T
    proper = ((R[:, None] & ~R[None, :]) == 0) & (R[:, None] != R[None, :])
    ent = (v.CN[R][None, :] & ~T[:, None]) == 0
    return v.first_pair(proper & ~ent)


@_postulate("afterpost-b", "base", "if A - a ⊂ A - b then A - b |- a",
            _each_pair, _fast_afterpost_b)
def _afterpost_b(v: BaseView, b):
    ra, rb = v.res(b["alpha"]), v.res(b["beta"])
    if ra != rb and ra & ~rb == 0 and not v.entails(rb, v.t(b["alpha"])):
        return f"A - α ⊂ A - β = {v.show(rb)} but A - β does not entail α"


def _fast_afterpost_c(v: BaseView):
    if not v.m:
        return None
    taut = np.array([t == v.full for t in v.tables])
    return v.first_pair(taut[:, None] & ~v.inR.T, rows=v.base)


@_postulate("afterpost-c", "base", "if |- a and a ∈ A then a ∈ A - b",
            _base_then_universe, _fast_afterpost_c)
def _afterpost_c(v: BaseView, b):
    a = b["alpha"]
    if a in v.index and v.t(a) == v.full and a not in v.op.contract(b["beta"]):
        return "tautology α dropped from A - β"


# -- withdrawal postulates ----------------------------------------------------

def _fast_recovery(v: WithdrawalView):
    return v.first(((v.conj & v.T) & ~v.k) != 0)


@_postulate("recovery", "withdrawal", "K ⊆ (K ÷ a) + a", _each_alpha, _fast_recovery)
def _recovery(v: WithdrawalView, b):
    t = v.t(b["alpha"])
    m = v.conj_of(v.row(b["alpha"])) & t
    if m & ~v.k:
        return (f"{render(v.u(v.k))} ∈ K is not in (K ÷ α) + α = Cn({render(v.u(m))})")


def _fast_div1(v: WithdrawalView):
    closure = (v.T[None, :] & v.conj[:, None]) == v.conj[:, None]
    return v.first((closure & ~v.M).any(axis=1))


@_postulate("div1", "withdrawal", "K ÷ a = Cn(K ÷ a)", _each_alpha, _fast_div1)
def _div1(v: WithdrawalView, b):
    row = v.row(b["alpha"])
    m = v.conj_of(row)
    missing = ((v.T & m) == m) & ~row
    if missing.any():
        return f"K ÷ α entails {render(v.first_in(missing))} but does not contain it"


def _fast_div2(v: WithdrawalView):
    return v.first((v.M & ~v.in_k[None, :]).any(axis=1))


@_postulate("div2", "withdrawal", "K ÷ a ⊆ K", _each_alpha, _fast_div2)
def _div2(v: WithdrawalView, b):
    extra = v.row(b["alpha"]) & ~v.in_k
    if extra.any():
        return f"{render(v.first_in(extra))} ∈ K ÷ α is not in K"


def _fast_div3(v: WithdrawalView):
    cond = ~v.in_k | (v.T == v.full)
    return v.first(cond & (v.in_k[None, :] & ~v.M).any(axis=1))


@_postulate("div3", "withdrawal", "if a ∉ K or |- a then K ⊆ K ÷ a",
            _each_alpha, _fast_div3)
def _div3(v: WithdrawalView, b):
    t = v.t(b["alpha"])
    if not v.in_k[t] or t == v.full:
        lost = v.in_k & ~v.row(b["alpha"])
        if lost.any():
            return f"{render(v.first_in(lost))} ∈ K is missing from K ÷ α"


def _fast_div4(v: WithdrawalView):
    return v.first((v.T != v.full) & v.M[v.T, v.T])


@_postulate("div4", "withdrawal", "if not |- a then a ∉ K ÷ a", _each_alpha, _fast_div4)
def _div4(v: WithdrawalView, b):
    a = b["alpha"]
    if v.t(a) != v.full and v.op.member(a, a):
        return "α ∈ K ÷ α"


@_postulate("div6", "withdrawal", "if Cn(a) = Cn(b) then K ÷ a = K ÷ b",
            _alpha_with_variants)
def _div6(v: WithdrawalView, b):
    diff = v.row(b["alpha"]) != v.row(b["beta"])
    if diff.any():
        return f"K ÷ α and K ÷ β differ at {render(v.first_in(diff))}"


def _fast_div7a(v: WithdrawalView):
    ab = v.T[:, None] & v.T[None, :]
    return v.first_pair((v.T != v.full)[:, None] & ~v.S[v.T[:, None], ab])


@_postulate("div7a", "withdrawal", "if not |- a then K ÷ a ⊆ K ÷ (a & b)",
            _each_pair, _fast_div7a)
def _div7a(v: WithdrawalView, b):
    a = b["alpha"]
    if v.t(a) != v.full:
        extra = v.row(a) & ~v.row(And(a, b["beta"]))
        if extra.any():
            return f"{render(v.first_in(extra))} ∈ K ÷ α but not in K ÷ (α & β)"


def _fast_div8(v: WithdrawalView):
    ab = v.T[:, None] & v.T[None, :]
    a = np.broadcast_to(v.T[:, None], ab.shape)
    return v.first_pair(~v.M[ab, a] & ~v.S[ab, a])


@_postulate("div8", "withdrawal", "if a ∉ K ÷ (a & b) then K ÷ (a & b) ⊆ K ÷ a",
            _each_pair, _fast_div8)
def _div8(v: WithdrawalView, b):
    a, ab = b["alpha"], And(b["alpha"], b["beta"])
    if not v.op.member(ab, a):
        extra = v.row(ab) & ~v.row(a)
        if extra.any():
            return f"{render(v.first_in(extra))} ∈ K ÷ (α & β) but not in K ÷ α"


def _fast_div9(v: WithdrawalView):
    return v.first_pair(~v.M.T & ~v.S.T)


@_postulate("div9", "withdrawal", "if a ∉ K ÷ b then K ÷ b ⊆ K ÷ a",
            _each_pair, _fast_div9)
def _div9(v: WithdrawalView, b):
    a, beta = b["alpha"], b["beta"]
    if not v.op.member(beta, a):
        extra = v.row(beta) & ~v.row(a)
        if extra.any():
            return f"{render(v.first_in(extra))} ∈ K ÷ β but not in K ÷ α"


def _fast_div10(v: WithdrawalView):
    return v.first_pair((v.T != v.full)[:, None] & v.M.T & ~v.S)


@_postulate("div10", "withdrawal", "if not |- a and a ∈ K ÷ b then K ÷ a ⊆ K ÷ b",
            _each_pair, _fast_div10)
def _div10(v: WithdrawalView, b):
    a, beta = b["alpha"], b["beta"]
    if v.t(a) != v.full and v.op.member(beta, a):
        extra = v.row(a) & ~v.row(beta)
        if extra.any():
            return f"{render(v.first_in(extra))} ∈ K ÷ α but not in K ÷ β"


def _fast_linearity(v: WithdrawalView):
    return v.first_pair(~v.S & ~v.S.T)


@_postulate("linearity", "withdrawal", "K ÷ a ⊆ K ÷ b or K ÷ b ⊆ K ÷ a",
            _each_pair, _fast_linearity)
def _linearity(v: WithdrawalView, b):
    ra, rb = v.row(b["alpha"]), v.row(b["beta"])
    if (ra & ~rb).any() and (rb & ~ra).any():
        return "K ÷ α and K ÷ β are incomparable"


def _fast_expulsiveness(v: WithdrawalView):
    nt = v.T != v.full
    return v.first_pair(nt[:, None] & nt[None, :] & v.M.T & v.M)


@_postulate("expulsiveness", "withdrawal",
            "if not |- a and not |- b then a ∉ K ÷ b or b ∉ K ÷ a",
            _each_pair, _fast_expulsiveness)
def _expulsiveness(v: WithdrawalView, b):
    a, beta = b["alpha"], b["beta"]
    if (v.t(a) != v.full and v.t(beta) != v.full
            and v.op.member(beta, a) and v.op.member(a, beta)):
        return "α ∈ K ÷ β and β ∈ K ÷ α"


def _fast_base_reduction(v: WithdrawalView):
    c = v.conj[:, None]
    entailed = (v.T[None, :] & c) == c
    reduced = (v.base_conj[:, None] & ~v.T[None, :]) == 0
    return v.first_pair(entailed & ~reduced)


@_postulate("base-reduction", "withdrawal",
            "if Cn(A) ÷ a |- b then (Cn(A) ÷ a) ∩ A |- b",
            _each_pair, _fast_base_reduction)
def _base_reduction(v: WithdrawalView, b):
    row = v.row(b["alpha"])
    t = v.t(b["beta"])
    m = v.conj_of(row)
    kept = [f for f, bt in zip(v.base, v.btables) if row[bt]]
    c = v.full
    for bt in (table(f, v.sig) for f in kept):
        c &= bt
    if m & ~t == 0 and c & ~t:
        return f"(K ÷ α) ∩ A = {_fmt(sorted(kept, key=render))} does not entail β"


def _div_bound_fast(v: WithdrawalView):
    idx = np.array([v.t(f) for f in v.nontrivial_beliefs()], dtype=np.int64)
    if len(idx) < 2:
        return None
    S = v.S[np.ix_(idx, idx)]
    V = np.triu(~S & ~S.T, 1)
    hit = np.flatnonzero(V)
    if not hit.size:
        return None
    i, j = divmod(int(hit[0]), len(idx))
    return {"X": (v.u(idx[i]), v.u(idx[j]))}


def _div_bound_holds(pick, word):
    def holds(v: WithdrawalView, b):
        rows = [v.row(f) for f in b["X"]]
        if not any(all(pick(x, y) for y in rows) for x in rows):
            return f"no member of X has the {word} withdrawal result"
    return holds


def _row_contains(x, y) -> bool:
    return not (y & ~x).any()


def _row_contained(x, y) -> bool:
    return not (x & ~y).any()


_postulate("div-upper-bound", "withdrawal",
           "every non-empty X ⊆ Cn(A) \\ Cn(∅) has a ∈ X with "
           "Cn(A) ÷ b ⊆ Cn(A) ÷ a for all b ∈ X",
           _belief_pairs, _div_bound_fast)(_div_bound_holds(_row_contains, "largest"))
_postulate("div-lower-bound", "withdrawal",
           "every non-empty X ⊆ Cn(A) \\ Cn(∅) has a ∈ X with "
           "Cn(A) ÷ a ⊆ Cn(A) ÷ b for all b ∈ X",
           _belief_pairs, _div_bound_fast)(_div_bound_holds(_row_contained, "smallest"))


# -- entrenchment postulates --------------------------------------------------

def _fast_ee1(v: EntrenchmentView):
    L = v.L
    f = L.astype(np.float32)
    if not ((f @ f > 0) & ~L).any():
        return None
    o = v.order
    P = L[np.ix_(o, o)]
    for i in range(len(o)):
        V = P[i][:, None] & P & ~P[i][None, :]
        hit = np.flatnonzero(V)
        if hit.size:
            j, k = divmod(int(hit[0]), len(o))
            return {"alpha": v.u(o[i]), "beta": v.u(o[j]), "gamma": v.u(o[k])}
    raise AssertionError("matrix screen found a transitivity failure the scan missed")


@_postulate("EE1", "entrenchment", "if a <= b and b <= c then a <= c",
            _each_triple, _fast_ee1)
def _ee1(v: EntrenchmentView, b):
    a, beta, c = b["alpha"], b["beta"], b["gamma"]
    if v.op.leq(a, beta) and v.op.leq(beta, c) and not v.op.leq(a, c):
        return "α <= β and β <= γ but not α <= γ"


def _fast_ee2(v: EntrenchmentView):
    ent = (v.T[:, None] & ~v.T[None, :]) == 0
    return v.first_pair(ent & ~v.L)


@_postulate("EE2", "entrenchment", "if a |- b then a <= b", _each_pair, _fast_ee2)
def _ee2(v: EntrenchmentView, b):
    a, beta = b["alpha"], b["beta"]
    if v.t(a) & ~v.t(beta) == 0 and not v.op.leq(a, beta):
        return "α |- β but not α <= β"


def _fast_ee3(v: EntrenchmentView):
    ab = v.T[:, None] & v.T[None, :]
    left = v.L[v.T[:, None], ab]
    right = v.L[v.T[None, :], ab]
    return v.first_pair(~left & ~right)


@_postulate("EE3", "entrenchment", "a <= a & b or b <= a & b", _each_pair, _fast_ee3)
def _ee3(v: EntrenchmentView, b):
    a, beta = b["alpha"], b["beta"]
    ab = And(a, beta)
    if not v.op.leq(a, ab) and not v.op.leq(beta, ab):
        return "neither α <= α & β nor β <= α & β"


def _fast_ee4(v: EntrenchmentView):
    if not v.K.consistent:
        return None
    return v.first(~v.in_k != v.L.all(axis=1))


@_postulate("EE4", "entrenchment",
            "if K is consistent then a ∉ K iff a <= b for all b", _each_alpha, _fast_ee4)
def _ee4(v: EntrenchmentView, b):
    if not v.K.consistent:
        return None
    a = b["alpha"]
    minimal = all(v.op.leq(a, beta) for beta in v.universe())
    if (a not in v.K) != minimal:
        if minimal:
            return "α ∈ K but α <= β for every β"
        return "α ∉ K but some β is strictly below α"


def _fast_ee5(v: EntrenchmentView):
    return v.first(v.L.all(axis=0) & (v.T != v.full))


@_postulate("EE5", "entrenchment", "if b <= a for all b then |- a", _each_alpha, _fast_ee5)
def _ee5(v: EntrenchmentView, b):
    a = b["alpha"]
    if v.t(a) != v.full and all(v.op.leq(beta, a) for beta in v.universe()):
        return "every β is <= α but α is not a tautology"


# -- checking -----------------------------------------------------------------

SUITES: dict[str, tuple[str, ...]] = {
    "brutal-base": ("success", "inclusion", "vacuity", "failure", "relative-closure",
                    "strong-inclusion", "uniform-behaviour"),
    "bounded-brutal-base": ("success", "inclusion", "vacuity", "failure",
                            "relative-closure", "lower-bound", "upper-bound",
                            "strong-inclusion"),
    "severe-withdrawal": ("div1", "div2", "div3", "div4", "div6", "div7a", "div8"),
    "ensconcement-severe": ("div1", "div2", "div3", "div4", "div6", "div9",
                            "base-reduction", "div-upper-bound", "div-lower-bound"),
    "entrenchment": ("EE1", "EE2", "EE3", "EE4", "EE5"),
}


def _kind(op) -> str:
    return view_for(op).kind


def _report(p: Postulate, v, binding: dict | None) -> PostulateReport:
    if binding is None:
        return PostulateReport(p.id, PASS)
    reason = p.holds(v, binding)
    if reason is None:
        raise AssertionError(f"{p.id}: fast scan flagged a binding that holds: {binding}")
    return PostulateReport(p.id, FAIL, tuple(binding.items()), reason)


def scan_slow(p: Postulate, v) -> dict | None:
    for binding in p.domain(v):
        if p.holds(v, binding) is not None:
            return binding
    return None


def check_postulate(id: str, op, *, fast: bool = True) -> PostulateReport:
    """Check one catalog postulate of ``op`` over its universe.

    ``fast=False`` walks the quantifier domain with the scalar predicate
    only, which is slower but shares no code with the vectorized scans.
    """
    try:
        p = CATALOG[id]
    except KeyError:
        raise KeyError(f"unknown postulate {id!r}") from None
    v = view_for(op)
    if p.kind != v.kind:
        raise PostulateKindError(f"{id} applies to {p.kind} operators, not {v.kind}")
    binding = p.fast(v) if fast and p.fast else scan_slow(p, v)
    return _report(p, v, binding)


def check_suite(profile: str, op, **kwargs) -> list[PostulateReport]:
    try:
        ids = SUITES[profile]
    except KeyError:
        raise KeyError(f"unknown suite {profile!r}") from None
    return [check_postulate(i, op, **kwargs) for i in ids]


def all_pass(reports: Sequence[PostulateReport]) -> bool:
    return all(r.passed for r in reports)


def recheck(report: PostulateReport, op) -> bool:
    """True when the report's counterexample still violates the postulate."""
    if report.passed:
        return False
    p = CATALOG[report.id]
    return p.holds(view_for(op), report.binding) is not None


# -- interderivability --------------------------------------------------------

@dataclass(frozen=True)
class Implication:
    name: str
    premises: tuple[str, ...]
    conclusions: tuple[str, ...]
    induced: bool = False   # conclusions concern Cn(A) ÷ a = Cn(A - a)


IMPLICATIONS = {i.name: i for i in [
    Implication("s2lemma1", ("success", "inclusion", "failure", "relative-closure",
                             "strong-inclusion", "lower-bound"), ("clustering",)),
    Implication("s2lemma2", ("failure", "success", "strong-inclusion", "clustering"),
                ("uniform-behaviour",)),
    Implication("afterpost", SUITES["brutal-base"] + ("vacuity",),
                ("afterpost-a", "afterpost-b", "afterpost-c", "extensionality")),
    Implication("ultimo2", ("success", "inclusion", "vacuity", "failure",
                            "relative-closure", "strong-inclusion"),
                ("div1", "div2", "div3", "div4", "div6", "div9", "base-reduction"),
                induced=True),
    Implication("ultimo3", ("success", "inclusion", "failure", "relative-closure",
                            "upper-bound", "lower-bound", "strong-inclusion"),
                ("div-upper-bound", "div-lower-bound"), induced=True),
    Implication("severe-consequences", SUITES["severe-withdrawal"],
                ("div9", "div10", "linearity", "expulsiveness")),
]}


@dataclass(frozen=True)
class ImplicationReport:
    name: str
    premises_hold: bool
    conclusions: tuple[PostulateReport, ...]

    @property
    def holds(self) -> bool:
        return not self.premises_hold or all(r.passed for r in self.conclusions)


def check_implication(name: str, op) -> ImplicationReport:
    imp = IMPLICATIONS[name]
    premises = all(check_postulate(i, op).passed for i in imp.premises)
    if not premises:
        return ImplicationReport(name, False, ())
    target = InducedWithdrawal(op) if imp.induced else op
    return ImplicationReport(name, True,
                             tuple(check_postulate(i, target) for i in imp.conclusions))


# -- counterexample search ----------------------------------------------------

FAMILIES: dict[str, Callable[[Ensconcement], object]] = {
    "brutal": BrutalContraction,
    "severe": SevereWithdrawal,
    "gardenfors": lambda e: GardenforsContraction(DerivedEntrenchment(e)),
    "induced": lambda e: InducedWithdrawal(BrutalContraction(e)),
    "entrenchment": DerivedEntrenchment,
}
DEFAULT_FAMILY = {"base": "brutal", "withdrawal": "severe", "entrenchment": "entrenchment"}


def search_counterexample(id: str, generator: Callable[[int], Ensconcement],
                          budget: int, family: str | None = None
                          ) -> tuple[Ensconcement, PostulateReport] | None:
    """First generated ensconcement whose operator fails ``id``."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    build = FAMILIES[family or DEFAULT_FAMILY[CATALOG[id].kind]]
    for index in range(budget):
        e = generator(index)
        report = check_postulate(id, build(e))
        if not report.passed:
            return e, report
    return None
