"""Commutators of Jacobi operators and the commutation decision procedures.

The field of commutators ``C(x,y) = J(x)J(y) - J(y)J(x)`` is a matrix of
bihomogeneous polynomials of bidegree (2,2) in (x,y).  Two decisions are
implemented on top of it:

* ``full_commutation_test`` -- does C vanish identically?  Equivalent to
  checking that every polynomial coefficient is zero; only the zero tensor
  passes.
* ``tsankov_test`` -- does C vanish whenever x is orthogonal to y?  The
  zero set of the pairing form q(x,y) = sum_i x_i y_i is an irreducible
  quadric with dense real points, so a bidegree-(2,2) polynomial vanishes
  on it iff q divides the polynomial.  Divisibility by q is decided exactly
  by reducing each entry to its normal form modulo q (single-divisor
  polynomial division in a lexicographic order with leading term x0*y0):
  the remainder is zero iff the entry lies in the ideal, and the division
  produces the bidegree-(1,1) quotient.  In rational arithmetic this is a
  decision procedure, not a heuristic.

A seeded sampling mode cross-checks the divisibility decision and supplies
witness pairs for failures.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ClassificationInconsistency, DegenerateInput, InvalidPolynomial
from .jacobi import jacobi
from .scalars import ScalarMode, max_abs, vector
from .tensors import _INT64_LIMIT, CurvatureTensor, _coerce_vector, _int_view

__all__ = [
    "Witness",
    "TsankovVerdict",
    "BiQuadraticMatrixPoly",
    "BilinearMatrixPoly",
    "commutator",
    "commutator_poly",
    "divisible_by_pairing",
    "full_commutation_test",
    "tsankov_test",
]

@dataclass
class Witness:
    """A pair with a nonzero Jacobi commutator.

    ``commutator_norm`` is the sup norm of the commutator evaluated at the
    unit rescaling of (x, y): max|C(x,y)| / (<x,x> <y,y>).  Exact-mode
    witnesses keep rational (generally non-unit) coordinates because the
    unit rescaling itself may be irrational; the reported norm already
    refers to unit vectors.
    """

    x: np.ndarray
    y: np.ndarray
    commutator_norm: object


@dataclass
class TsankovVerdict:
    holds: bool
    witness: Witness | None
    method: str


def commutator(R: CurvatureTensor, x, y) -> np.ndarray:
    """J(x)J(y) - J(y)J(x); antisymmetric since both factors are symmetric."""
    x = _coerce_vector(x, R)
    y = _coerce_vector(y, R)
    jx, jy = jacobi(R, x), jacobi(R, y)
    return np.dot(jx, jy) - np.dot(jy, jx)


# ---------------------------------------------------------------------------
# canonical monomial bookkeeping
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _canonical_monomials(m: int):
    monos = [
        (i, j, k, l)
        for i in range(m)
        for j in range(i, m)
        for k in range(m)
        for l in range(k, m)
    ]
    idx = np.array(monos, dtype=np.intp)
    counts = np.array(
        [(2 if i < j else 1) * (2 if k < l else 1) for (i, j, k, l) in monos], dtype=np.int64
    )
    return monos, idx[:, 0], idx[:, 1], idx[:, 2], idx[:, 3], counts


# ---------------------------------------------------------------------------
# polynomial containers
# ---------------------------------------------------------------------------


def _check_canonical_keys(m, coeffs):
    for key in coeffs:
        if len(key) != 4:
            raise InvalidPolynomial(f"monomial key {key} is malformed")
        i, j, k, l = key
        if not (0 <= i <= j < m and 0 <= k <= l < m):
            raise InvalidPolynomial(f"monomial key {key} is not canonical for m={m}")


@dataclass
class BiQuadraticMatrixPoly:
    """Matrix-valued bidegree-(2,2) polynomial, antisymmetric in the matrix slot.

    ``entries[(a, b)]`` with a < b maps canonical monomials (i, j, k, l)
    (i <= j, k <= l, standing for x_i x_j y_k y_l) to coefficients; the
    lower triangle is the negative and the diagonal is zero.
    """

    m: int
    mode: ScalarMode
    entries: dict

    @classmethod
    def from_entries(cls, m: int, mode: ScalarMode, entries: dict) -> "BiQuadraticMatrixPoly":
        for (a, b), coeffs in entries.items():
            if not 0 <= a < b < m:
                raise InvalidPolynomial(f"matrix position {(a, b)} must satisfy a < b")
            _check_canonical_keys(m, coeffs)
        return cls(m, mode, {pos: dict(coeffs) for pos, coeffs in entries.items()})

    def entry(self, a: int, b: int) -> dict:
        if a == b:
            return {}
        if a < b:
            return self.entries.get((a, b), {})
        return {mono: -c for mono, c in self.entries.get((b, a), {}).items()}

    def max_coeff(self):
        vals = [abs(c) for coeffs in self.entries.values() for c in coeffs.values()]
        if not vals:
            return Fraction(0) if self.mode.exact else 0.0
        return max(vals)

    def is_zero(self, zero_tol=None) -> bool:
        if self.mode.exact:
            return all(c == 0 for coeffs in self.entries.values() for c in coeffs.values())
        zt = self.mode.tol if zero_tol is None else zero_tol
        return float(self.max_coeff()) <= zt

    def evaluate(self, x, y) -> np.ndarray:
        x = vector(x, self.mode)
        y = vector(y, self.mode)
        out = np.zeros((self.m, self.m), dtype=object if self.mode.exact else float)
        if self.mode.exact:
            out.fill(Fraction(0))
        for (a, b), coeffs in self.entries.items():
            val = self.mode.zero()
            for (i, j, k, l), c in coeffs.items():
                val += c * x[i] * x[j] * y[k] * y[l]
            out[a, b] = val
            out[b, a] = -val
        return out


@dataclass
class BilinearMatrixPoly:
    """Matrix-valued bidegree-(1,1) polynomial (the quotient by the pairing form)."""

    m: int
    mode: ScalarMode
    entries: dict  # (a, b) with a < b -> {(p, q): coeff} for x_p y_q

    def evaluate(self, x, y) -> np.ndarray:
        x = vector(x, self.mode)
        y = vector(y, self.mode)
        out = np.zeros((self.m, self.m), dtype=object if self.mode.exact else float)
        if self.mode.exact:
            out.fill(Fraction(0))
        for (a, b), coeffs in self.entries.items():
            val = self.mode.zero()
            for (p, q), c in coeffs.items():
                val += c * x[p] * y[q]
            out[a, b] = val
            out[b, a] = -val
        return out

    def multiply_pairing(self) -> BiQuadraticMatrixPoly:
        """(sum_t x_t y_t) * L, folded to canonical monomials."""
        out = {}
        for pos, coeffs in self.entries.items():
            acc = {}
            for (p, q), c in coeffs.items():
                for t in range(self.m):
                    mono = (min(p, t), max(p, t), min(q, t), max(q, t))
                    acc[mono] = acc.get(mono, self.mode.zero()) + c
            acc = {mono: c for mono, c in acc.items() if c != 0}
            if acc:
                out[pos] = acc
        return BiQuadraticMatrixPoly(self.m, self.mode, out)


# ---------------------------------------------------------------------------
# commutator polynomial
# ---------------------------------------------------------------------------


def commutator_poly(R: CurvatureTensor) -> BiQuadraticMatrixPoly:
    """Expand C(x,y) = J(x)J(y) - J(y)J(x) into canonical coefficients.

    Evaluating the result at any concrete (x, y) reproduces
    ``commutator(R, x, y)``, exactly so in rational mode.
    """
    cached = R._cache.get("commutator_poly")
    if cached is not None:
        return cached
    m = R.m
    if R.mode.exact:
        v, s, maxv = _int_view(R)
        if v.dtype == np.int64 and 2 * m * maxv * maxv >= _INT64_LIMIT:
            v = v.astype(object)
        q = v.transpose((3, 0, 1, 2))  # q[a,c,i,j] = R[c,i,j,a], the x_i x_j coefficient of J(x)[a,c]
        denom = s * s
    else:
        q = R.components.transpose((3, 0, 1, 2))
        denom = None
    t = np.einsum("acij,cbkl->abijkl", q, q) - np.einsum("ackl,cbij->abijkl", q, q)

    monos, ii, jj, kk, ll, counts = _canonical_monomials(m)
    flat = t.reshape(m * m, m, m, m, m)
    g = (
        flat[:, ii, jj, kk, ll]
        + flat[:, jj, ii, kk, ll]
        + flat[:, ii, jj, ll, kk]
        + flat[:, jj, ii, ll, kk]
    )
    if denom is not None:
        vals_all = (g * counts) // 4
    else:
        vals_all = g * counts / 4.0
    entries = {}
    for a in range(m):
        for b in range(a + 1, m):
            vals = vals_all[a * m + b]
            if denom is not None:
                coeffs = {
                    mono: Fraction(int(val), denom)
                    for mono, val in zip(monos, vals.tolist())
                    if val
                }
            else:
                coeffs = {mono: float(val) for mono, val in zip(monos, vals) if val != 0.0}
            if coeffs:
                entries[(a, b)] = coeffs
    poly = BiQuadraticMatrixPoly(m, R.mode, entries)
    R._cache["commutator_poly"] = poly
    return poly


# ---------------------------------------------------------------------------
# divisibility by the pairing form
# ---------------------------------------------------------------------------


def _divide_entry(coeffs: dict, m: int, is_zero) -> dict | None:
    """Quotient of one bidegree-(2,2) entry by the pairing form, or None.

    Normal-form division: monomials are processed in ascending canonical
    tuple order, which is descending lexicographic monomial order with the
    x-block ordered before the y-block.  The pairing form's leading term is
    then x0*y0, every reduction step only introduces strictly later
    monomials, and a leading term without both x0 and y0 certifies that the
    entry is not in the ideal.
    """
    work = {key: c for key, c in coeffs.items() if not is_zero(c)}
    heap = sorted(work)
    quotient: dict = {}
    seen = set()
    while heap:
        key = heapq.heappop(heap)
        if key in seen:
            continue
        seen.add(key)
        c = work.get(key)
        if c is None or is_zero(c):
            continue
        i, j, k, l = key
        if i != 0 or k != 0:
            return None
        p, q = j, l
        quotient[(p, q)] = quotient.get((p, q), 0) + c
        for tt in range(m):
            mono = (min(p, tt), max(p, tt), min(q, tt), max(q, tt))
            prev = work.get(mono)
            if prev is None:
                work[mono] = -c
                heapq.heappush(heap, mono)
            else:
                work[mono] = prev - c
    return {key: c for key, c in quotient.items() if not is_zero(c)}


def divisible_by_pairing(P: BiQuadraticMatrixPoly, zero_tol=None) -> BilinearMatrixPoly | None:
    """The bidegree-(1,1) quotient L with P = (sum_i x_i y_i) * L, or None.

    The zero polynomial is divisible (zero quotient).  In float mode
    coefficients below ``zero_tol`` (default tol * max(1, max|coeff|))
    are treated as zero.
    """
    for (a, b), coeffs in P.entries.items():
        if not 0 <= a < b < P.m:
            raise InvalidPolynomial(f"matrix position {(a, b)} must satisfy a < b")
        _check_canonical_keys(P.m, coeffs)
    if P.mode.exact:
        is_zero = lambda c: c == 0  # noqa: E731
    else:
        zt = zero_tol if zero_tol is not None else P.mode.tol * max(1.0, float(P.max_coeff()))
        is_zero = lambda c: abs(c) <= zt  # noqa: E731
    quotients = {}
    for pos, coeffs in P.entries.items():
        q = _divide_entry(coeffs, P.m, is_zero)
        if q is None:
            return None
        if q:
            quotients[pos] = q
    return BilinearMatrixPoly(P.m, P.mode, quotients)


# ---------------------------------------------------------------------------
# sampling machinery
# ---------------------------------------------------------------------------


def _sample_pair(rng, m: int, exact: bool, orthogonal: bool, span: int = 4):
    """One deterministic (x, y) pair, orthogonal exactly when requested."""
    if exact:
        while True:
            x = rng.integers(-span, span + 1, size=m)
            if np.any(x):
                break
        while True:
            v = rng.integers(-span, span + 1, size=m)
            if orthogonal:
                y = int(x @ x) * v - int(v @ x) * x
            else:
                y = v
            if np.any(y):
                break
        return x.astype(object), y.astype(object)
    while True:
        x = rng.standard_normal(m)
        nx = np.linalg.norm(x)
        if nx > 1e-8:
            x = x / nx
            break
    while True:
        v = rng.standard_normal(m)
        y = v - (v @ x) * x if orthogonal else v
        ny = np.linalg.norm(y)
        if ny > 1e-8:
            return x, y / ny


def _batch_commutators(R: CurvatureTensor, xs, ys):
    """Commutator matrices for a batch of integer or float pairs.

    Returns (C, scale): true commutators are C / scale.  Integer batches run
    through int64 einsum when a worst-case bound fits, otherwise through
    object (big-int) arithmetic.
    """
    m = R.m
    if R.mode.exact:
        v, s, maxv = _int_view(R)
        span = max(
            max((abs(int(e)) for x in xs for e in x), default=1),
            max((abs(int(e)) for y in ys for e in y), default=1),
        )
        bound = 2 * (m**5) * (span**4) * (maxv**2)
        if v.dtype == np.int64 and bound < _INT64_LIMIT:
            xa = np.array([[int(e) for e in x] for x in xs], dtype=np.int64)
            ya = np.array([[int(e) for e in y] for y in ys], dtype=np.int64)
            jx = np.einsum("pi,pj,bija->pab", xa, xa, v)
            jy = np.einsum("pi,pj,bija->pab", ya, ya, v)
            c = np.matmul(jx, jy) - np.matmul(jy, jx)
        else:
            va = v.astype(object)
            xa = np.array([[int(e) for e in x] for x in xs], dtype=object)
            ya = np.array([[int(e) for e in y] for y in ys], dtype=object)
            jx = np.einsum("pi,pj,bija->pab", xa, xa, va)
            jy = np.einsum("pi,pj,bija->pab", ya, ya, va)
            c = np.array(
                [np.dot(jx[p], jy[p]) - np.dot(jy[p], jx[p]) for p in range(len(xs))], dtype=object
            )
        return c, s * s
    xa = np.array(xs, dtype=float)
    ya = np.array(ys, dtype=float)
    jx = np.einsum("pi,pj,bija->pab", xa, xa, R.components)
    jy = np.einsum("pi,pj,bija->pab", ya, ya, R.components)
    return jx @ jy - jy @ jx, None


def _unit_norm(c_slice, x, y, scale):
    """Sup norm of a commutator at the unit rescaling of (x, y)."""
    raw = max_abs(c_slice)
    if scale is None:
        return float(raw) / (float(np.dot(x, x)) * float(np.dot(y, y)))
    return Fraction(int(raw), scale * int(np.dot(x, x)) * int(np.dot(y, y)))


def _float_threshold(R: CurvatureTensor):
    scale = float(R.max_abs())
    return R.mode.tol * max(1.0, scale * scale)


def _violation_scan(R, xs, ys, pick: str):
    """Evaluate a batch and pick a violating pair ('first' or 'largest')."""
    c, scale = _batch_commutators(R, xs, ys)
    thr = None if R.mode.exact else _float_threshold(R)
    best = None
    for p in range(len(xs)):
        raw = max_abs(c[p])
        violating = (raw != 0) if R.mode.exact else (float(raw) > thr)
        if not violating:
            continue
        if pick == "first":
            return Witness(xs[p], ys[p], _unit_norm(c[p], xs[p], ys[p], scale))
        norm = _unit_norm(c[p], xs[p], ys[p], scale)
        if best is None or norm > best.commutator_norm:
            best = Witness(xs[p], ys[p], norm)
    return best


def _basis_pair_candidates(m: int, exact: bool):
    """Small deterministic pairs tried before random sampling."""
    if exact:
        eye = np.array(
            [[Fraction(1) if i == j else Fraction(0) for j in range(m)] for i in range(m)],
            dtype=object,
        )
    else:
        eye = np.eye(m, dtype=float)
    pairs = []
    for a in range(m):
        for b in range(m):
            if a != b:
                pairs.append((eye[a], eye[b]))
    for a in range(m):
        for b in range(m):
            for cidx in range(b + 1, m):
                if a != b and a != cidx:
                    pairs.append((eye[a], eye[b] + eye[cidx]))
    for a in range(m):
        for b in range(a + 1, m):
            pairs.append((eye[a] + eye[b], eye[a] - eye[b]))
    return pairs


def _search_witness(R: CurvatureTensor, seed: int, n_samples: int, orthogonal: bool) -> Witness:
    """Find a violating pair; the polynomial certificate guarantees one exists.

    Scans deterministic basis-combination pairs plus seeded random pairs and
    returns the largest violator found (sample order breaks ties).  Widens
    the sampling span if a round finds nothing; a degree-4 polynomial that
    is nonzero on the quadric cannot dodge random points indefinitely.
    """
    cands = [
        (x, y)
        for x, y in _basis_pair_candidates(R.m, R.mode.exact)
        if not orthogonal or np.dot(x, y) == 0
    ]
    rng = np.random.default_rng(seed)
    best = None
    for round_no in range(64):
        span = 4 + 2 * round_no
        pool = cands if round_no == 0 else []
        pool = pool + [
            _sample_pair(rng, R.m, R.mode.exact, orthogonal, span=span)
            for _ in range(max(n_samples, 16))
        ]
        xs = [p[0] for p in pool]
        ys = [p[1] for p in pool]
        found = _violation_scan(R, xs, ys, pick="largest")
        if found is not None:
            if best is None or found.commutator_norm > best.commutator_norm:
                best = found
            return best
    raise ClassificationInconsistency(
        "a nonzero commutator polynomial produced no violating sample; arithmetic is broken"
    )


# ---------------------------------------------------------------------------
# the two decision procedures
# ---------------------------------------------------------------------------


def full_commutation_test(R: CurvatureTensor, n_samples: int = 200, seed: int = 0) -> TsankovVerdict:
    """Does J(x) commute with J(y) for ALL pairs?  Only the zero tensor passes.

    Decided by coefficient expansion of the commutator polynomial; failures
    carry a witness pair of maximal sampled commutator norm (the pair need
    not be orthogonal).
    """
    poly = commutator_poly(R)
    zt = None if R.mode.exact else _float_threshold(R)
    if poly.is_zero(zt):
        return TsankovVerdict(True, None, "CoefficientExpansion")
    witness = _search_witness(R, seed, n_samples, orthogonal=False)
    return TsankovVerdict(False, witness, "CoefficientExpansion")


def tsankov_test(
    R: CurvatureTensor, method: str = "exact", n_samples: int = 200, seed: int = 0
) -> TsankovVerdict:
    """Does J(x) commute with J(y) whenever x is orthogonal to y?

    ``method="exact"`` decides by divisibility of the commutator polynomial
    by the pairing form (a true decision procedure in rational mode);
    ``method="sampled"`` draws seeded orthogonal pairs and reports the first
    violator.  Witnesses are exactly orthogonal in rational mode.
    """
    method = method.lower()
    if method in ("exact", "exactdivisibility"):
        poly = commutator_poly(R)
        quotient = divisible_by_pairing(poly)
        if quotient is not None:
            return TsankovVerdict(True, None, "ExactDivisibility")
        witness = _search_witness(R, seed, n_samples, orthogonal=True)
        return TsankovVerdict(False, witness, "ExactDivisibility")
    if method != "sampled":
        raise DegenerateInput(f"unknown method {method!r}; use 'exact' or 'sampled'")
    if n_samples < 1:
        raise DegenerateInput("sampled mode needs n_samples >= 1")
    rng = np.random.default_rng(seed)
    pairs = [_sample_pair(rng, R.m, R.mode.exact, orthogonal=True) for _ in range(n_samples)]
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    witness = _violation_scan(R, xs, ys, pick="first")
    return TsankovVerdict(witness is None, witness, "Sampled")
