"""Scalar backends and small dense self-adjoint linear algebra.

Two scalar modes run through the whole library:

* ``rational`` -- entries are :class:`fractions.Fraction` stored in
  object-dtype numpy arrays; every comparison is exact and tolerance-free.
* ``float`` -- entries are float64; comparisons use a relative tolerance.

Eigendecompositions exist only in float mode.  Exact callers use ranks,
kernels, and fraction-free elimination instead, which is all the decision
procedures downstream actually need.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm

import numpy as np

from .errors import DegenerateInput, InvalidDimension, InvalidOperator

__all__ = [
    "ScalarMode",
    "RATIONAL",
    "FLOAT",
    "float_mode",
    "vector",
    "matrix",
    "zeros",
    "max_abs",
    "fraction_sqrt",
    "is_selfadjoint",
    "require_selfadjoint",
    "eig_selfadjoint",
    "rank_with_mode",
    "random_unit_vector",
    "random_rational_unit_vector",
    "orthocomplement_basis",
    "orthonormalize_exact",
    "complete_orthonormal_exact",
]

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class ScalarMode:
    """Arithmetic backend selector: exact rationals or float64 with tolerance."""

    kind: str
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.kind not in ("rational", "float"):
            raise ValueError(f"unknown scalar kind {self.kind!r}")
        if self.kind == "float" and not self.tol > 0:
            raise ValueError("float mode requires tol > 0")

    @property
    def exact(self) -> bool:
        return self.kind == "rational"

    def scalar(self, v):
        """Coerce a number (or 'p/q' string) into this mode's scalar type."""
        return Fraction(v) if self.exact else float(Fraction(v) if isinstance(v, str) else v)

    def zero(self):
        return Fraction(0) if self.exact else 0.0


RATIONAL = ScalarMode("rational")
FLOAT = ScalarMode("float")


def float_mode(tol: float = DEFAULT_TOL) -> ScalarMode:
    return ScalarMode("float", tol)


def mode_of(a: np.ndarray) -> ScalarMode:
    """Infer the scalar mode of an array from its dtype (default tolerance)."""
    return RATIONAL if a.dtype == object else FLOAT


def vector(entries, mode: ScalarMode) -> np.ndarray:
    v = np.array([mode.scalar(e) for e in entries], dtype=object if mode.exact else float)
    if v.ndim != 1 or v.size < 1:
        raise InvalidDimension("vectors need at least one entry")
    return v


def matrix(rows, mode: ScalarMode) -> np.ndarray:
    return np.array(
        [[mode.scalar(e) for e in row] for row in rows],
        dtype=object if mode.exact else float,
    )


def zeros(shape, mode: ScalarMode) -> np.ndarray:
    if mode.exact:
        a = np.empty(shape, dtype=object)
        a.fill(Fraction(0))
        return a
    return np.zeros(shape, dtype=float)


def max_abs(a) -> Fraction | float:
    """Sup norm of an array; the zero of the ambient scalar type if empty."""
    a = np.asarray(a)
    if a.size == 0:
        return Fraction(0) if a.dtype == object else 0.0
    return np.abs(a).max()


def fraction_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def is_selfadjoint(a: np.ndarray, mode: ScalarMode | None = None) -> bool:
    mode = mode or mode_of(a)
    dev = max_abs(a - a.T)
    if mode.exact:
        return dev == 0
    return dev <= mode.tol * max(1.0, float(max_abs(a)))


def require_selfadjoint(a: np.ndarray, mode: ScalarMode | None = None, what: str = "operator"):
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidOperator(f"{what} must be a square matrix, got shape {a.shape}")
    if not is_selfadjoint(a, mode):
        raise InvalidOperator(f"{what} is not symmetric")


def eig_selfadjoint(a: np.ndarray, tol: float = DEFAULT_TOL):
    """Eigendecomposition of a symmetric float matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors as orthonormal matrix columns.  Float mode only: exact
    rational inputs should use ranks/kernels instead of spectra.
    """
    a = np.asarray(a)
    if a.dtype == object:
        raise InvalidOperator("eig_selfadjoint is float-only; rational callers use ranks/kernels")
    a = a.astype(float)
    require_selfadjoint(a, float_mode(tol))
    w, v = np.linalg.eigh(a)
    return w, v


def _integer_rows(a: np.ndarray) -> list[list[int]]:
    """Per-row denominator clearing; row scaling preserves rank."""
    rows = []
    for row in a:
        fr = [Fraction(x) for x in row]
        scale = lcm(*(f.denominator for f in fr)) if fr else 1
        rows.append([int(f * scale) for f in fr])
    return rows


def _rank_bareiss(rows: list[list[int]]) -> int:
    """Rank by fraction-free (Bareiss) elimination over the integers."""
    n = len(rows)
    if n == 0:
        return 0
    ncols = len(rows[0])
    prev = 1
    r = 0
    for c in range(ncols):
        if r == n:
            break
        piv = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(r + 1, n):
            ric = rows[i][c]
            ri, rr = rows[i], rows[r]
            for k in range(c, ncols):
                ri[k] = (ri[k] * p - ric * rr[k]) // prev
        prev = p
        r += 1
    return r


def rank_with_mode(a: np.ndarray, mode: ScalarMode | None = None) -> int:
    """Rank of a symmetric matrix: exact elimination or thresholded spectrum."""
    a = np.asarray(a)
    mode = mode or mode_of(a)
    require_selfadjoint(a, mode)
    if mode.exact:
        return _rank_bareiss(_integer_rows(a))
    w = np.linalg.eigvalsh(a.astype(float))
    scale = max(1.0, float(np.abs(w).max())) if w.size else 1.0
    return int(np.count_nonzero(np.abs(w) > mode.tol * scale))


def random_unit_vector(m: int, seed: int) -> np.ndarray:
    """Seeded uniform point on the unit sphere (Gaussian, normalized)."""
    if m < 1:
        raise InvalidDimension("dimension must be >= 1")
    rng = np.random.default_rng(seed)
    while True:
        v = rng.standard_normal(m)
        n = np.linalg.norm(v)
        if n > 1e-12:
            return v / n


def random_rational_unit_vector(m: int, seed: int, span: int = 4) -> np.ndarray:
    """Seeded exact-unit-norm rational vector.

    Rational points on the sphere come from the stereographic parametrization
    x = ((1 - |t|^2), 2t) / (1 + |t|^2) with rational t, followed by a seeded
    signed permutation of the coordinates.
    """
    if m < 1:
        raise InvalidDimension("dimension must be >= 1")
    rng = np.random.default_rng(seed)
    if m == 1:
        return np.array([Fraction(1 if rng.integers(0, 2) else -1)], dtype=object)
    t = [
        Fraction(int(rng.integers(-span, span + 1)), int(rng.integers(1, span + 1)))
        for _ in range(m - 1)
    ]
    s = sum(ti * ti for ti in t)
    head = (1 - s) / (1 + s)
    rest = [2 * ti / (1 + s) for ti in t]
    raw = [head, *rest]
    perm = rng.permutation(m)
    signs = rng.integers(0, 2, size=m) * 2 - 1
    out = np.empty(m, dtype=object)
    for i in range(m):
        out[int(perm[i])] = Fraction(int(signs[i])) * raw[i]
    return out


def orthonormalize_exact(vs: list[np.ndarray]) -> list[np.ndarray]:
    """Exact Gram-Schmidt.

    Raises DegenerateInput when the input is dependent, or when a resulting
    norm is an irrational square root (no rational orthonormal basis exists;
    use float mode for such inputs).
    """
    out: list[np.ndarray] = []
    for v in vs:
        u = np.array([Fraction(x) for x in v], dtype=object)
        for b in out:
            u = u - np.dot(b, u) * b
        n2 = Fraction(np.dot(u, u))
        if n2 == 0:
            raise DegenerateInput("vectors are linearly dependent")
        root = fraction_sqrt(n2)
        if root is None:
            raise DegenerateInput(
                "no rational orthonormalization exists for these vectors; use float mode"
            )
        out.append(u / root)
    return out


def complete_orthonormal_exact(vs: list[np.ndarray], m: int) -> list[np.ndarray]:
    """Extend exactly-orthonormal rational vectors to a full orthonormal basis.

    Works by accumulating Householder reflections (each maps v_i to e_i and
    has rational entries because the inputs are unit vectors), so the
    completion is rational for *any* rational orthonormal input.
    Returns only the m - len(vs) new vectors.
    """
    k = len(vs)
    h = zeros((m, m), RATIONAL)
    for i in range(m):
        h[i, i] = Fraction(1)
    for i, v in enumerate(vs):
        u = np.dot(h, np.array([Fraction(x) for x in v], dtype=object))
        w = u.copy()
        w[i] = w[i] - 1
        n2 = Fraction(np.dot(w, w))
        if n2 != 0:
            h = h - np.outer(w, np.dot(w, h)) * (Fraction(2) / n2)
    # h maps v_j to e_j; rows k..m-1 of h are the orthocomplement
    return [h[j, :].copy() for j in range(k, m)]


def orthocomplement_basis(vs: list[np.ndarray], mode: ScalarMode | None = None) -> list[np.ndarray]:
    """Orthonormal basis of the orthocomplement of span(vs).

    Together with an orthonormalization of ``vs`` the result is a full
    orthonormal basis.  Exact mode requires the orthonormalization of ``vs``
    to stay rational (always true for unit inputs completed one at a time).
    """
    if not vs:
        raise DegenerateInput("need at least one spanning vector")
    m = len(vs[0])
    if any(len(v) != m for v in vs):
        raise DegenerateInput("spanning vectors must share one dimension")
    if len(vs) > m:
        raise DegenerateInput("more vectors than the dimension allows")
    if mode is None:
        mode = mode_of(np.asarray(vs[0]))
    if mode.exact:
        ortho = orthonormalize_exact(vs)
        return complete_orthonormal_exact(ortho, m)
    a = np.column_stack([np.asarray(v, dtype=float) for v in vs])
    q, r = np.linalg.qr(a, mode="complete")
    scale = max(1.0, float(np.abs(a).max()))
    diag = np.abs(np.diag(r[: len(vs), : len(vs)]))
    if diag.size < len(vs) or np.any(diag <= mode.tol * scale):
        raise DegenerateInput("vectors are numerically dependent")
    return [q[:, j].copy() for j in range(len(vs), m)]
