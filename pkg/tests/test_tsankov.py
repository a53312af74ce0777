"""Commutator polynomials, divisibility decision, and the two commutation tests."""

from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from actlab import (
    RATIONAL,
    InvalidPolynomial,
    BiQuadraticMatrixPoly,
    combine,
    commutator,
    commutator_poly,
    divisible_by_pairing,
    full_commutation_test,
    r0,
    r_theta,
    random_act,
    standard_complex_structure,
    tsankov_test,
)

from conftest import build_corpus


def frac_vec(entries):
    return np.array([Fraction(v) for v in entries], dtype=object)


def solve_exact(rows, rhs):
    """Gaussian elimination over the rationals; any solution or None."""
    n, cols = len(rows), len(rows[0])
    m = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    piv_cols, r = [], 0
    for c in range(cols):
        piv = next((i for i in range(r, n) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [v / pv for v in m[r]]
        for i in range(n):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if m[i][cols] != 0:
            return None
    sol = [Fraction(0)] * cols
    for rr, c in enumerate(piv_cols):
        sol[c] = m[rr][cols]
    return sol


def divisibility_by_linear_system(coeffs, m):
    """Independent oracle: solve for the m^2 quotient coefficients directly."""
    monos = [
        (i, j, k, l)
        for i in range(m)
        for j in range(i, m)
        for k in range(m)
        for l in range(k, m)
    ]
    index = {mono: n for n, mono in enumerate(monos)}
    rows = [[Fraction(0)] * (m * m) for _ in monos]
    for col, (p, q) in enumerate(product(range(m), range(m))):
        for t in range(m):
            mono = (min(p, t), max(p, t), min(q, t), max(q, t))
            rows[index[mono]][col] += 1
    rhs = [coeffs.get(mono, Fraction(0)) for mono in monos]
    sol = solve_exact(rows, rhs)
    if sol is None:
        return None
    return {
        (p, q): sol[p * m + q]
        for p in range(m)
        for q in range(m)
        if sol[p * m + q] != 0
    }


class TestCommutator:
    def test_r0_orthogonal_pair_commutes(self):
        C = commutator(r0(4, 1), [1, 0, 0, 0], [0, 1, 0, 0])
        assert (C == 0).all()

    def test_self_pair_commutes(self, mix4):
        C = commutator(mix4, [1, 2, 0, 1], [1, 2, 0, 1])
        assert (C == 0).all()

    def test_mix_canonical_pair(self, mix4):
        # hand oracle: J(e1) = diag(0,4,1,1) against J(y) = I - y y^T + 3 w w^T
        # with y = (e2+e3)/sqrt(2), w = Theta y; evaluated at the scaled
        # representative e2+e3 the commutator picks up a factor <y,y> = 2
        C = commutator(mix4, [1, 0, 0, 0], [0, 1, 1, 0])
        expected = np.zeros((4, 4), dtype=object)
        expected[1, 2], expected[2, 1] = Fraction(-3), Fraction(3)
        expected[0, 3], expected[3, 0] = Fraction(3), Fraction(-3)
        assert (C == expected).all()

    def test_antisymmetric_matrix(self):
        rng = np.random.default_rng(5)
        for R in build_corpus(10, seed=321):
            x = frac_vec([int(v) for v in rng.integers(-3, 4, size=R.m)])
            y = frac_vec([int(v) for v in rng.integers(-3, 4, size=R.m)])
            C = commutator(R, x, y)
            assert (C == -C.T).all()


class TestCommutatorPoly:
    def test_zero_tensor(self):
        P = commutator_poly(combine([(0, r0(3, 1))]))
        assert P.is_zero()

    def test_matches_dense_commutator_exactly(self):
        rng = np.random.default_rng(17)
        for R in build_corpus(10, seed=99):
            P = commutator_poly(R)
            for _ in range(20):
                x = [Fraction(int(v)) for v in rng.integers(-3, 4, size=R.m)]
                y = [Fraction(int(v)) for v in rng.integers(-3, 4, size=R.m)]
                assert (P.evaluate(x, y) == commutator(R, x, y)).all()

    def test_swap_antisymmetry_of_coefficients(self):
        # C(x,y) = -C(y,x): the coefficient at (i,j,k,l) is minus the one at (k,l,i,j)
        R = random_act(4, 3, seed=12)
        P = commutator_poly(R)
        for coeffs in P.entries.values():
            for (i, j, k, l), c in coeffs.items():
                assert coeffs.get((k, l, i, j), Fraction(0)) == -c

    def test_rtheta_vanishes_on_orthogonal_sample(self):
        P = commutator_poly(r_theta(standard_complex_structure(4), 1))
        rng = np.random.default_rng(23)
        hits = 0
        while hits < 100:
            x = rng.integers(-4, 5, size=4)
            v = rng.integers(-4, 5, size=4)
            y = int(x @ x) * v - int(v @ x) * x
            if not np.any(x) or not np.any(y):
                continue
            hits += 1
            val = P.evaluate([Fraction(int(t)) for t in x], [Fraction(int(t)) for t in y])
            assert (val == 0).all()


class TestDivisibility:
    def test_trivial_multiple(self):
        # P = (sum_i x_i y_i) * x1 y1 -> quotient x1 y1 (indices 0-based)
        m = 3
        entries = {(0, 1): {}}
        for t in range(m):
            mono = (min(0, t), max(0, t), min(0, t), max(0, t))
            entries[(0, 1)][mono] = entries[(0, 1)].get(mono, Fraction(0)) + 1
        P = BiQuadraticMatrixPoly.from_entries(m, RATIONAL, entries)
        L = divisible_by_pairing(P)
        assert L is not None
        assert L.entries == {(0, 1): {(0, 0): Fraction(1)}}
        assert L.multiply_pairing().entries == P.entries

    def test_pure_monomial_not_in_ideal(self):
        # P = x1^2 y2^2
        P = BiQuadraticMatrixPoly.from_entries(
            3, RATIONAL, {(0, 1): {(0, 0, 1, 1): Fraction(1)}}
        )
        assert divisible_by_pairing(P) is None

    def test_mix_entry_not_divisible(self, mix4):
        P = commutator_poly(mix4)
        assert divisible_by_pairing(P) is None
        # pin the specific entry: the (2,3) matrix slot is not in the ideal
        entry = P.entry(1, 2)
        assert divisibility_by_linear_system(entry, 4) is None

    def test_agrees_with_linear_system_oracle(self):
        for R in build_corpus(30, ms=(3, 4), seed=1001):
            P = commutator_poly(R)
            L = divisible_by_pairing(P)
            for (a, b), coeffs in P.entries.items():
                oracle = divisibility_by_linear_system(coeffs, R.m)
                if L is None:
                    if oracle is None:
                        break  # confirmed: at least this entry is outside the ideal
                else:
                    assert oracle is not None
                    assert oracle == L.entries.get((a, b), {})

    def test_quotient_remultiplies_exactly(self):
        for R in [r0(4, Fraction(5, 3)), r_theta(standard_complex_structure(6), -2)]:
            P = commutator_poly(R)
            L = divisible_by_pairing(P)
            assert L is not None
            assert L.multiply_pairing().entries == P.entries

    def test_malformed_key_rejected(self):
        with pytest.raises(InvalidPolynomial):
            BiQuadraticMatrixPoly.from_entries(3, RATIONAL, {(0, 1): {(1, 0, 0, 0): Fraction(1)}})
        with pytest.raises(InvalidPolynomial):
            BiQuadraticMatrixPoly.from_entries(3, RATIONAL, {(1, 0): {(0, 0, 0, 0): Fraction(1)}})


class TestFullCommutation:
    def test_zero_tensor_holds(self):
        v = full_commutation_test(combine([(0, r0(3, 1))]))
        assert v.holds and v.witness is None and v.method == "CoefficientExpansion"

    def test_r0_fails_with_half_entry_witness(self):
        # oracle: J(e1) = diag(0,1,1) against J((e1+e2)/sqrt 2) = I - y y^T
        # gives commutator entries +-1/2; at the scaled pair (e1, e1+e2) the
        # unit-equivalent norm is still 1/2
        R = r0(3, 1)
        C = commutator(R, [1, 0, 0], [1, 1, 0])
        assert C[0, 1] == Fraction(1) and np.dot(frac_vec([1, 1, 0]), frac_vec([1, 1, 0])) == 2
        unit_equivalent = C[0, 1] / 2
        assert abs(unit_equivalent) == Fraction(1, 2)
        v = full_commutation_test(R)
        assert not v.holds
        assert v.witness.commutator_norm > 0

    def test_rtheta_fails(self):
        v = full_commutation_test(r_theta(standard_complex_structure(4), 1))
        assert not v.holds

    def test_random_act_nonzero_fails_with_witness(self):
        R = random_act(4, 3, seed=7)
        assert R.max_abs() != 0
        v = full_commutation_test(R, seed=7)
        assert not v.holds
        C = commutator(R, v.witness.x, v.witness.y)
        assert (C != 0).any()

    def test_only_zero_passes_on_corpus(self):
        for R in build_corpus(40, seed=2024):
            v = full_commutation_test(R)
            assert v.holds == (R.max_abs() == 0)


class TestTsankovTest:
    def test_r0_holds_both_methods(self):
        for m in range(3, 7):
            for c in (-2, 1, 5):
                R = r0(m, c)
                assert tsankov_test(R, "exact").holds
                assert tsankov_test(R, "sampled", n_samples=60, seed=m).holds

    def test_rtheta_holds_both_methods(self):
        from actlab import conjugate_structure, random_signed_permutation

        for m in (4, 6):
            cs = conjugate_structure(
                standard_complex_structure(m), random_signed_permutation(m, seed=m)
            )
            R = r_theta(cs, Fraction(4, 7))
            assert tsankov_test(R, "exact").holds
            assert tsankov_test(R, "sampled", n_samples=60, seed=m).holds

    def test_mix_fails_with_orthogonal_witness(self, mix4):
        v = tsankov_test(mix4, "exact")
        assert not v.holds and v.method == "ExactDivisibility"
        w = v.witness
        assert np.dot(w.x, w.y) == 0
        assert w.commutator_norm >= Fraction(3, 2)
        assert (commutator(mix4, w.x, w.y) != 0).any()

    def test_sampled_witness_first_violator_is_deterministic(self, mix4):
        a = tsankov_test(mix4, "sampled", n_samples=50, seed=5)
        b = tsankov_test(mix4, "sampled", n_samples=50, seed=5)
        assert not a.holds and not b.holds
        assert np.array_equal(a.witness.x, b.witness.x)
        assert np.array_equal(a.witness.y, b.witness.y)
        assert np.dot(a.witness.x, a.witness.y) == 0

    def test_methods_agree_on_corpus(self, corpus200):
        for R in corpus200:
            exact = tsankov_test(R, "exact", seed=3)
            sampled = tsankov_test(R, "sampled", n_samples=120, seed=3)
            assert exact.holds == sampled.holds

    def test_float_mode_decisions(self, mix4):
        assert tsankov_test(r0(4, 1.5).to_float(), "exact").holds
        assert tsankov_test(r_theta(standard_complex_structure(4), 2).to_float(), "exact").holds
        fv = tsankov_test(mix4.to_float(), "exact")
        assert not fv.holds
        assert abs(np.dot(fv.witness.x, fv.witness.y)) <= 1e-12

    def test_huge_entries_take_bigint_path(self):
        # entries beyond int64 force the object-array fallbacks end to end
        from actlab import classify

        huge = Fraction(2**70 + 1, 3)
        R = combine(
            [
                (huge, r0(4, 1)),
                (Fraction(1, 2**68), r_theta(standard_complex_structure(4), 1)),
            ]
        )
        ve = tsankov_test(R, "exact")
        vs = tsankov_test(R, "sampled", n_samples=30, seed=2)
        assert not ve.holds and not vs.holds
        assert np.dot(ve.witness.x, ve.witness.y) == 0
        res = classify(combine([(huge, r_theta(standard_complex_structure(4), 1))]))
        assert res.tag == "ComplexForm" and res.c == huge and res.residual == 0
