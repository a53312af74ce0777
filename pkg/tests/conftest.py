"""Shared fixtures: standard structures and a deterministic mixed corpus."""

from fractions import Fraction

import numpy as np
import pytest

from actlab import (
    RATIONAL,
    combine,
    conjugate_structure,
    from_form,
    r0,
    r_theta,
    random_act,
    random_signed_permutation,
    standard_complex_structure,
)


@pytest.fixture(scope="session")
def std4():
    return standard_complex_structure(4)


@pytest.fixture(scope="session")
def rtheta4(std4):
    return r_theta(std4, 1)


@pytest.fixture(scope="session")
def mix4(std4):
    return combine([(1, r0(4, 1)), (1, r_theta(std4, 1))])


def random_fraction(rng, lo=1, hi=12, den=6, signed=True):
    num = int(rng.integers(lo, hi + 1))
    d = int(rng.integers(1, den + 1))
    if signed and rng.integers(0, 2):
        num = -num
    return Fraction(num, d)


def build_corpus(n=200, ms=(3, 4, 5, 6), seed=1234):
    """Deterministic list of tensors from every constructor family."""
    rng = np.random.default_rng(seed)
    corpus = []
    while len(corpus) < n:
        m = int(ms[len(corpus) % len(ms)])
        kind = len(corpus) % 6
        s = int(rng.integers(0, 2**31))
        if kind == 0:
            corpus.append(r0(m, random_fraction(rng)))
        elif kind == 1 and m % 2 == 0:
            cs = conjugate_structure(
                standard_complex_structure(m), random_signed_permutation(m, s)
            )
            corpus.append(r_theta(cs, random_fraction(rng)))
        elif kind == 2:
            a = rng.integers(-2, 3, size=(m, m))
            phi = np.array(
                [[Fraction(int(a[i, j] + a[j, i])) for j in range(m)] for i in range(m)],
                dtype=object,
            )
            corpus.append(from_form(phi, RATIONAL))
        elif kind == 3:
            diag = [Fraction(int(rng.integers(-3, 4))) for _ in range(m)]
            phi = np.array(
                [[diag[i] if i == j else Fraction(0) for j in range(m)] for i in range(m)],
                dtype=object,
            )
            corpus.append(from_form(phi, RATIONAL))
        elif kind == 4:
            corpus.append(random_act(m, int(rng.integers(1, 4)), s))
        else:
            base = r0(m, random_fraction(rng))
            if m % 2 == 0:
                extra = r_theta(standard_complex_structure(m), random_fraction(rng))
                corpus.append(combine([(1, base), (1, extra)]))
            else:
                corpus.append(combine([(0, base)]))  # the zero tensor
    return corpus


@pytest.fixture(scope="session")
def corpus200():
    return build_corpus(200)
