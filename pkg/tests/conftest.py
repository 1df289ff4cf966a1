import numpy as np
import pytest
from hypothesis import settings, strategies as st

from ensconce.ensconcement import Ensconcement
from ensconce.logic import (BOTTOM, TOP, And, Atom, Iff, Implies, Not, Or, Signature,
                            simplest)
from ensconce.operators import BrutalContraction, TableContraction
from ensconce.oracle import GeneratorConfig, exhaustive_two_atom, generate_ensconcement

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

P, Q, R = Atom("p"), Atom("q"), Atom("r")
SIG2 = Signature.of("p q")
SIG3 = Signature.of("p q r")


def formulas(names=("p", "q", "r"), max_leaves=12):
    leaves = st.sampled_from([Atom(n) for n in names] + [TOP, BOTTOM])
    binary = st.sampled_from([And, Or, Implies, Iff])

    def extend(children):
        return st.one_of(children.map(Not),
                         st.builds(lambda c, a, b: c(a, b), binary, children, children))
    return st.recursive(leaves, extend, max_leaves=max_leaves)


@pytest.fixture(scope="session")
def two_atom_corpus():
    return exhaustive_two_atom()


def ensconcements(atoms=2):
    """Seeded random validated ensconcements."""
    cfg = GeneratorConfig(seed=99, atom_count=atoms, base_size=5, rank_levels=4)
    return st.integers(0, 10_000).map(lambda i: generate_ensconcement(cfg, i))


ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(
            f"criterion {n} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else ""))


# -- mutant base contractions ------------------------------------------------

def selection_operator(rng, base, sig):
    """Extensional contraction picking, for each non-theorem belief, a closed
    sub-base that fails to entail it; mostly maximal ones."""
    e = Ensconcement(sig, [(f, 0) for f in base])
    cn, full = e.cn, e.full_mask
    closed = [m for m in range(full + 1)
              if all(m >> i & 1 or cn[m] & ~t for i, t in enumerate(e.tables))]
    masks = []
    for t in range(sig.universe_size):
        if t == sig.full or cn[full] & ~t:
            masks.append(full)
            continue
        ok = [m for m in closed if cn[m] & ~t]
        maximal = [m for m in ok if not any(o != m and o & m == m for o in ok)]
        masks.append(int(rng.choice(maximal if rng.random() < 0.7 else ok)))
    return TableContraction.from_masks(base, sig, masks)


def unranked_brutal(rng, base, sig):
    """Brutal contraction over random ranks that need not satisfy the axioms."""
    ranks = rng.integers(0, 3, len(base))
    return BrutalContraction(Ensconcement(sig, [(f, int(r)) for f, r in zip(base, ranks)]))


def mutant_contractions(seed, count, sig=SIG2):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        size = int(rng.integers(1, 4))
        base = [simplest(int(t), sig) for t in rng.choice(sig.universe_size, size, replace=False)]
        yield selection_operator(rng, base, sig)
        yield unranked_brutal(rng, base, sig)
