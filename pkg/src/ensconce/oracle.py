"""Brute-force verifiers and seeded corpora of ensconcements.

The verifiers recompute everything from the definitions: formulas are
evaluated by direct recursion over valuations, entailment is inclusion of
model sets, and cuts, entrenchment and withdrawal membership are set
comprehensions.  None of the bitmask or matrix shortcuts used by
:mod:`ensconce.operators` are involved, so agreement between the two is
evidence rather than tautology.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations, product
from operator import and_
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .ensconcement import Ensconcement, EnsconcementError, cut_nonstrict, cut_proper, dumps, validate
from .logic import (BOTTOM, And, Atom, Bottom, Formula, Iff, Implies, Not, Or,
                    Signature, Top, enumerate_universe, render, simplest, table)
from .operators import (BrutalContraction, DerivedEntrenchment, GardenforsContraction,
                        SevereWithdrawal, brutal_contract, check_matrix_size,
                        ensconcement_from_operator, ensconcement_from_withdrawal,
                        entrenchment_from_withdrawal, g_contract_member,
                        severe_withdraw_base, withdrawal_from_entrenchment)
from .postulates import check_postulate, check_suite

THEOREMS = ("thm2-bridge", "thm3-closure", "thm1-roundtrip", "thm4-roundtrip",
            "lemma2-representation", "cut-lemma-suite", "obs-lemmaIMP", "obs-AAZ",
            "interpolation")
MAX_RETRIES = 1000


class GenerationExhausted(RuntimeError):
    pass


# -- independent semantics ----------------------------------------------------

def _eval(f: Formula, val: dict[str, bool]) -> bool:
    if isinstance(f, Atom):
        return val[f.name]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not _eval(f.operand, val)
    left, right = _eval(f.left, val), _eval(f.right, val)
    if isinstance(f, And):
        return left and right
    if isinstance(f, Or):
        return left or right
    if isinstance(f, Implies):
        return not left or right
    if isinstance(f, Iff):
        return left == right
    raise TypeError(f"unknown connective {type(f).__name__}")


class Semantics:
    """Model sets over the valuations of one signature."""

    def __init__(self, sig: Signature):
        self.sig = sig
        self.valuations = [dict(zip(sig.atoms, bits))
                           for bits in product((False, True), repeat=len(sig))]
        self.everything = frozenset(range(len(self.valuations)))
        self._memo: dict[Formula, frozenset[int]] = {}

    def models(self, f: Formula) -> frozenset[int]:
        if f not in self._memo:
            self._memo[f] = frozenset(i for i, v in enumerate(self.valuations) if _eval(f, v))
        return self._memo[f]

    def models_of_set(self, fs: Iterable[Formula]) -> frozenset[int]:
        out = self.everything
        for f in fs:
            out = out & self.models(f)
        return out

    def entails(self, fs: Iterable[Formula], f: Formula) -> bool:
        return self.models_of_set(fs) <= self.models(f)

    def valid(self, f: Formula) -> bool:
        return self.models(f) == self.everything


class Definitions:
    """Cuts, brutal contraction, derived entrenchment and severe withdrawal
    of one ensconcement, spelled out over the universe.

    Universe classes are indexed by position in :func:`enumerate_universe`
    and identified by their model sets, encoded as integers with one bit per
    valuation.  Cuts are bitmasks over base positions.  Relations on pairs
    are boolean matrices built by broadcasting the definitions.
    """

    def __init__(self, e: Ensconcement):
        check_matrix_size(e.sig)
        self.e = e
        self.sem = sem = Semantics(e.sig)
        self.A = e.formulas
        self.m = len(self.A)
        self.rank = dict(e.entries)
        self.universe = enumerate_universe(e.sig)
        enc = lambda ms: sum(1 << v for v in ms)
        self.keys = np.array([enc(sem.models(f)) for f in self.universe], dtype=np.int64)
        everything = enc(sem.everything)
        self.pos = np.zeros(everything + 1, dtype=np.int64)
        self.pos[self.keys] = np.arange(len(self.keys))
        base = [enc(sem.models(f)) for f in self.A]
        # model set of every sub-base, by base-position bitmask
        self.sub_models = np.array(
            [reduce(and_, (base[i] for i in range(self.m) if s >> i & 1), everything)
             for s in range(1 << self.m)], dtype=np.int64)
        A_models = self.sub_models[-1]
        K = self.keys
        self.in_cn = (A_models & ~K) == 0
        self.valid = K == everything
        self.full_cut = (1 << self.m) - 1

        def cut(strict: bool) -> np.ndarray:
            out = np.zeros(len(K), dtype=np.int64)
            for i, b in enumerate(self.A):
                cohort = self.sub_models[sum(
                    1 << j for j, c in enumerate(self.A)
                    if (self.rank[b] < self.rank[c] if strict else self.rank[b] <= self.rank[c]))]
                out |= ((cohort & ~K) != 0).astype(np.int64) << i
            return out

        self.cut_n = cut(strict=True)
        self.cut_p = cut(strict=False)
        self.brutal = np.where(self.valid, self.full_cut, self.cut_p)
        self.AND = self.pos[K[:, None] & K[None, :]]
        self.OR = self.pos[K[:, None] | K[None, :]]
        self.ENT = (K[:, None] & ~K[None, :]) == 0        # [a, b]: a |- b
        inside = lambda x, y: (x & ~y) == 0
        self.L = ~self.in_cn[:, None] | (self.in_cn[:, None] & self.in_cn[None, :]
                                         & inside(self.cut_n[None, :], self.cut_n[:, None]))
        self.LT = self.L & ~self.L.T
        self.SEV = self.in_cn[None, :] & (self.valid[:, None] | self.LT)
        self.GARD = self.in_cn[None, :] & (
            self.valid[:, None] | self.LT[np.arange(len(K))[:, None], self.OR])
        self.base_index = np.array([self.index(f) for f in self.A], dtype=np.int64)

    def index(self, f: Formula) -> int:
        return int(self.pos[sum(1 << v for v in self.sem.models(f))])

    def members(self, mask: int) -> frozenset[Formula]:
        return frozenset(f for i, f in enumerate(self.A) if mask >> i & 1)

    def name(self, i: int) -> str:
        return render(simplest(table(self.universe[i], self.e.sig), self.e.sig))

    def entails_sub(self, masks: np.ndarray, idx: np.ndarray) -> np.ndarray:
        return (self.sub_models[masks] & ~self.keys[idx]) == 0

    def cut_of(self, f: Formula, strict: bool) -> frozenset[Formula]:
        return self.members(int((self.cut_n if strict else self.cut_p)[self.index(f)]))

    def severe(self, a: Formula, b: Formula) -> bool:
        return bool(self.SEV[self.index(a), self.index(b)])

    def leq(self, a: Formula, b: Formula) -> bool:
        return bool(self.L[self.index(a), self.index(b)])


# -- verification -------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    id: str
    passed: bool
    witness: str = ""
    ensconcement: str = ""

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def __str__(self) -> str:
        if self.passed:
            return f"{self.id}: PASS"
        return f"{self.id}: FAIL {self.witness}\n{self.ensconcement}"


def _show(fs: Iterable[Formula]) -> str:
    return "{" + ", ".join(sorted(render(f) for f in fs)) + "}"


def _first(d: Definitions, bad: np.ndarray, label: str, names=("α", "β")) -> Iterator[str]:
    hit = np.argwhere(bad)
    if len(hit):
        parts = " ".join(f"{n}={d.name(int(i))}" for n, i in zip(names, hit[0]))
        yield f"{label} {parts}".strip()


def _lib_tables(d: Definitions) -> np.ndarray:
    return np.array([table(f, d.e.sig) for f in d.universe], dtype=np.int64)


def _thm2(d: Definitions) -> Iterator[str]:
    kept = (d.SEV[:, d.base_index].astype(np.int64) << np.arange(d.m)).sum(axis=1) \
        if d.m else np.zeros(len(d.keys), dtype=np.int64)
    yield from _first(d, d.brutal != kept, "A - α differs from (K ÷ α) ∩ A at")
    for i, a in enumerate(d.universe):
        want = d.members(int(d.brutal[i]))
        if brutal_contract(d.e, a) != want or severe_withdraw_base(d.e, a) != want:
            yield f"library result differs from {_show(want)} at α={d.name(i)}"


def _thm3(d: Definitions) -> Iterator[str]:
    n = len(d.keys)
    closure = d.entails_sub(d.brutal[:, None], np.arange(n)[None, :])
    yield from _first(d, closure != d.SEV, "K ÷ α differs from Cn(A - α) at")
    t = _lib_tables(d)
    lib = SevereWithdrawal(d.e).matrix[np.ix_(t, t)]
    yield from _first(d, lib != d.SEV, "library withdrawal membership differs at")


def _thm1(d: Definitions) -> Iterator[str]:
    rebuilt = ensconcement_from_operator(BrutalContraction(d.e))
    if not validate(rebuilt):
        yield f"rebuilt ensconcement invalid: {'; '.join(validate(rebuilt).lines())}"
        return
    d2 = Definitions(rebuilt)
    same = [d.members(int(x)) == d2.members(int(y)) for x, y in zip(d.brutal, d2.brutal)]
    yield from _first(d, ~np.array(same), "rebuilt contraction differs at")


def _thm4(d: Definitions) -> Iterator[str]:
    w = SevereWithdrawal(d.e)
    for r in check_suite("ensconcement-severe", w):
        if not r.passed:
            yield r.line()
    rebuilt = ensconcement_from_withdrawal(w, d.e.formulas)
    if not validate(rebuilt):
        yield f"rebuilt ensconcement invalid: {'; '.join(validate(rebuilt).lines())}"
        return
    yield from _first(d, Definitions(rebuilt).SEV != d.SEV, "rebuilt withdrawal differs at")


def _lemma2(d: Definitions) -> Iterator[str]:
    w = SevereWithdrawal(d.e)
    again = withdrawal_from_entrenchment(entrenchment_from_withdrawal(w, w.belief_set))
    t = _lib_tables(d)
    yield from _first(d, again.matrix[np.ix_(t, t)] != d.SEV,
                      "withdrawal rebuilt from its entrenchment differs at")


def _cut_lemmas(d: Definitions) -> Iterator[str]:
    n = len(d.keys)
    idx = np.arange(n)
    cp, cn = d.cut_p, d.cut_n
    inside = lambda x, y: (x & ~y) == 0
    proper = lambda x, y: inside(x, y) & (x != y)
    for i, a in enumerate(d.universe):
        if cut_proper(d.e, a) != d.members(int(cp[i])):
            yield f"library proper cut differs at α={d.name(i)}"
        lib = cut_nonstrict(d.e, a)
        if lib.in_domain != d.in_cn[i] or (lib.in_domain and lib.members != d.members(int(cn[i]))):
            yield f"library non-strict cut differs at α={d.name(i)}"
    yield from _first(d, ~d.valid & d.entails_sub(cp, idx), "1(a) proper cut entails")
    yield from _first(d, ~d.in_cn & (cp != d.full_cut), "1(b) proper cut is not A for")
    yield from _first(d, d.ENT.T & ~inside(cp[:, None], cp[None, :]), "1(c) fails at")
    ent = d.entails_sub(cp[:, None], idx[None, :])
    cab = cp[d.AND]
    yield from _first(d, ent & (cab != cp[:, None]), "1(e) fails at")
    yield from _first(d, ~ent & (cab != cp[None, :]), "1(f) fails at")
    both = d.in_cn[:, None] & d.in_cn[None, :]
    yield from _first(d, both & ~d.valid[None, :] & inside(cp[:, None], cp[None, :])
                      & ~inside(cn[:, None], cn[None, :]), "obs2(a) fails at")
    yield from _first(d, both & d.valid[None, :] & ~d.valid[:, None]
                      & ~proper(cn[None, :], cn[:, None]), "obs2(b) fails at")
    yield from _first(d, both & proper(cp[:, None], cp[None, :])
                      & ~proper(cn[:, None], cn[None, :]), "5 fails at")
    yield from _first(d, d.in_cn & ~d.entails_sub(cn, idx), "4 non-strict cut misses")
    for i in np.flatnonzero(d.in_cn & (cn != 0)):
        members = [j for j in range(d.m) if cn[i] >> j & 1]
        if not any(cn[d.base_index[j]] == cn[i] for j in members):
            yield f"3 no member of the cut of α={d.name(i)} shares it"
    for j, a in enumerate(d.A):
        above = sum(1 << k for k, b in enumerate(d.A) if d.rank[a] < d.rank[b])
        if cp[d.base_index[j]] != above:
            yield f"obs1 proper cut of {render(a)} is not its strictly higher members"
        for k, b in enumerate(d.A):
            if d.rank[a] <= d.rank[b] and not inside(cp[d.base_index[k]], cp[d.base_index[j]]):
                yield f"1(d) fails at α={render(a)} β={render(b)}"
    yield from _afterpost(d)


def _afterpost(d: Definitions) -> Iterator[str]:
    n = len(d.keys)
    br = d.brutal
    inside = lambda x, y: (x & ~y) == 0
    for j, a in enumerate(d.A):
        gone = (br >> j & 1) == 0
        bad = gone & ~inside(br, br[d.base_index[j]])
        if bad.any():
            yield f"afterpost(a) α={render(a)} β={d.name(int(np.flatnonzero(bad)[0]))}"
        if d.valid[d.base_index[j]] and gone.any():
            yield f"afterpost(c) α={render(a)} β={d.name(int(np.flatnonzero(gone)[0]))}"
    sub = inside(br[:, None], br[None, :]) & (br[:, None] != br[None, :])
    yield from _first(d, sub & ~d.entails_sub(br[None, :], np.arange(n)[:, None]),
                      "afterpost(b) fails at")
    op = BrutalContraction(d.e)
    for i, a in enumerate(d.universe):
        want = d.members(int(br[i]))
        for v in (Not(Not(a)), And(a, a), Or(a, BOTTOM), simplest(table(a, d.e.sig), d.e.sig)):
            if op.contract(v) != want:
                yield f"afterpost(d) α={d.name(i)} β={render(v)}"


def _imp(d: Definitions) -> Iterator[str]:
    targets = set(d.brutal[d.base_index].tolist())
    for i in np.flatnonzero(d.in_cn & ~d.valid):
        if int(d.brutal[i]) not in targets:
            yield f"no β in A has A - β = A - α at α={d.name(int(i))}"


def _aaz(d: Definitions) -> Iterator[str]:
    rows = {d.SEV[j].tobytes() for j in d.base_index}
    for i in np.flatnonzero(d.in_cn & ~d.valid):
        if d.SEV[i].tobytes() not in rows:
            yield f"no β in A has K ÷ β = K ÷ α at α={d.name(int(i))}"


def _interpolation(d: Definitions) -> Iterator[str]:
    yield from _first(d, d.SEV & ~d.GARD, "severe keeps β but the G-contraction drops it at")
    yield from _first(d, d.GARD & ~d.in_cn[None, :], "G-contraction keeps β outside K at")
    t = _lib_tables(d)
    lib = GardenforsContraction(DerivedEntrenchment(d.e)).matrix[np.ix_(t, t)]
    yield from _first(d, lib != d.GARD, "library G-membership differs at")
    for a in d.A:
        for j, b in enumerate(d.universe):
            if g_contract_member(d.e, a, b) != d.GARD[d.index(a), j]:
                yield f"library G-membership differs at α={render(a)} β={d.name(j)}"


_CHECKS: dict[str, Callable[[Definitions], Iterator[str]]] = {
    "thm2-bridge": _thm2,
    "thm3-closure": _thm3,
    "thm1-roundtrip": _thm1,
    "thm4-roundtrip": _thm4,
    "lemma2-representation": _lemma2,
    "cut-lemma-suite": _cut_lemmas,
    "obs-lemmaIMP": _imp,
    "obs-AAZ": _aaz,
    "interpolation": _interpolation,
}


def verify_theorem(id: str, e: Ensconcement, defs: Definitions | None = None
                   ) -> VerificationReport:
    """Check one identity for every universe formula; the first mismatch is
    reported together with the ensconcement's file text."""
    try:
        check = _CHECKS[id]
    except KeyError:
        raise KeyError(f"unknown theorem {id!r}") from None
    d = defs if defs is not None else Definitions(e)
    witness = next(check(d), None)
    if witness is None:
        return VerificationReport(id, True)
    return VerificationReport(id, False, witness, dumps(e))


# -- generation ---------------------------------------------------------------

_ATOM_NAMES = ("p", "q", "r")


@dataclass(frozen=True)
class GeneratorConfig:
    """``base_size`` bounds the base; each sample draws its size in
    ``1..base_size`` and its ranks in ``0..rank_levels - 1``."""
    seed: int
    atom_count: int = 2
    base_size: int = 3
    rank_levels: int = 3
    sample_count: int = 100
    stress: bool = False   # admit contradictions as base members

    def __post_init__(self):
        if not 1 <= self.atom_count <= 3:
            raise ValueError("atom_count must be in 1..3")
        if not 1 <= self.base_size <= 6:
            raise ValueError("base_size must be in 1..6")
        if not 1 <= self.rank_levels <= 4:
            raise ValueError("rank_levels must be in 1..4")
        if self.sample_count < 0:
            raise ValueError("sample_count must be non-negative")

    @property
    def sig(self) -> Signature:
        return Signature(_ATOM_NAMES[:self.atom_count])

    def __call__(self, index: int) -> Ensconcement:
        return generate_ensconcement(self, index)


def generate_ensconcement(cfg: GeneratorConfig, index: int) -> Ensconcement:
    """Deterministic in ``(cfg.seed, index)``; always validated."""
    sig = cfg.sig
    lo = 0 if cfg.stress else 1
    candidates = np.arange(lo, sig.full, dtype=np.int64)
    rng = np.random.default_rng([cfg.seed & (2**64 - 1), index])
    for _ in range(MAX_RETRIES):
        size = int(rng.integers(1, min(cfg.base_size, len(candidates)) + 1))
        tables = rng.choice(candidates, size=size, replace=False)
        ranks = rng.integers(0, cfg.rank_levels, size=size)
        e = Ensconcement(sig, [(simplest(int(t), sig), int(r)) for t, r in zip(tables, ranks)])
        if validate(e):
            return e
    raise GenerationExhausted(f"no valid ensconcement after {MAX_RETRIES} draws for {cfg!r}, "
                              f"index {index}")


def generated(cfg: GeneratorConfig) -> list[Ensconcement]:
    return [generate_ensconcement(cfg, i) for i in range(cfg.sample_count)]


def exhaustive_two_atom(max_size: int = 3, max_levels: int = 3) -> list[Ensconcement]:
    """Every valid ensconcement over the non-trivial two-atom classes with
    at most ``max_size`` members on at most ``max_levels`` ranks."""
    sig = Signature(("p", "q"))
    reps = [simplest(t, sig) for t in range(1, sig.full)]
    out = []
    for size in range(1, max_size + 1):
        for members in combinations(reps, size):
            for ranks in product(range(max_levels), repeat=size):
                used = sorted(set(ranks))
                if used != list(range(len(used))):
                    continue   # only gap-free rankings starting at 0
                e = Ensconcement(sig, zip(members, ranks))
                if validate(e):
                    out.append(e)
    return out


def hand_corpus() -> list[Ensconcement]:
    """Small worked examples, including tautology-bearing and empty bases."""
    return [
        Ensconcement.of("p q", ("p", 0), ("q", 1)),
        Ensconcement.of("p q", ("p", 0), ("q", 0), ("p | q", 1)),
        Ensconcement.of("p q", ("p & q", 0)),
        Ensconcement.of("p q", ("p", 0), ("q", 1), ("p | !p", 2)),
        Ensconcement.of("p q", ("p | !p", 0)),
        Ensconcement.of("p q"),
        Ensconcement.of("p q r", ("p", 0), ("q", 1), ("r", 2)),
        Ensconcement.of("p q r", ("p -> q", 0), ("p", 1), ("q -> r", 1)),
        Ensconcement.of("p q r", ("p & q", 0), ("r", 0), ("p | r", 2), ("q | !q", 3)),
    ]


# -- corpus runs --------------------------------------------------------------

@dataclass
class CorpusRow:
    theorem: str
    samples: int = 0
    passed: int = 0
    failed: int = 0
    first_failure: str = "-"


@dataclass
class CorpusSummary:
    rows: list[CorpusRow]
    failures: list[tuple[str, VerificationReport]] = field(default_factory=list)
    negative: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.failed == 0 for r in self.rows)

    def table(self) -> str:
        head = ("theorem", "samples", "pass", "fail", "first-failing-seed")
        cells = [head] + [(r.theorem, str(r.samples), str(r.passed), str(r.failed),
                           r.first_failure) for r in self.rows]
        widths = [max(len(c[i]) for c in cells) for i in range(len(head))]
        return "\n".join(" | ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
                         for row in cells) + "\n"


def run_corpus(cfg: GeneratorConfig, ids: Sequence[str] = THEOREMS,
               extra: Iterable[Ensconcement] = ()) -> CorpusSummary:
    """Verify ``ids`` on the hand corpus, ``extra`` and ``cfg``'s samples.

    Sample labels are ``hand:i``, ``extra:i`` and ``seed:index``.  The
    negative list records recovery failures of severe withdrawal on the hand
    corpus, which are expected and do not affect ``ok``.
    """
    rows = {i: CorpusRow(i) for i in ids}
    summary = CorpusSummary(list(rows.values()))
    labelled: list[tuple[str, Ensconcement]] = []
    labelled += [(f"hand:{i}", e) for i, e in enumerate(hand_corpus())]
    labelled += [(f"extra:{i}", e) for i, e in enumerate(extra)]
    labelled += [(f"{cfg.seed}:{i}", generate_ensconcement(cfg, i))
                 for i in range(cfg.sample_count)]
    for label, e in labelled:
        d = Definitions(e)
        for id in ids:
            report = verify_theorem(id, e, d)
            row = rows[id]
            row.samples += 1
            if report.passed:
                row.passed += 1
            else:
                row.failed += 1
                if row.first_failure == "-":
                    row.first_failure = label
                summary.failures.append((label, report))
    for i, e in enumerate(hand_corpus()):
        r = check_postulate("recovery", SevereWithdrawal(e))
        if not r.passed:
            summary.negative.append(f"hand:{i} {r.line()}")
    return summary


__all__ = ["THEOREMS", "GenerationExhausted", "Semantics", "Definitions",
           "VerificationReport", "verify_theorem", "GeneratorConfig",
           "generate_ensconcement", "generated", "exhaustive_two_atom", "hand_corpus",
           "CorpusRow", "CorpusSummary", "run_corpus", "EnsconcementError"]
