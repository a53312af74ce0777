"""Algebraic curvature tensors on a finite-dimensional inner product space.

A curvature tensor is stored as its dense array of components
``R[i][j][k][l] = R(e_i, e_j, e_k, e_l)`` in a fixed orthonormal frame, with
the classical symmetries

    R(x,y,z,w) =  R(z,w,x,y) = -R(y,x,z,w),
    R(x,y,z,w) + R(y,z,x,w) + R(z,x,y,w) = 0.

This module provides the constructors (constant sectional curvature, the
form built from a skew complex structure, Gauss tensors of symmetric forms,
seeded random sums of Gauss tensors, linear combinations), the symmetry
validator, and the curvature operator action.  All values are immutable
after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import lcm

import numpy as np

from .errors import (
    IncompatibleTensors,
    InvalidComplexStructure,
    InvalidDimension,
    InvalidOperator,
    InvalidShape,
)
from .scalars import (
    RATIONAL,
    ScalarMode,
    float_mode,
    is_selfadjoint,
    matrix,
    max_abs,
    mode_of,
    vector,
    zeros,
)

__all__ = [
    "CurvatureTensor",
    "ComplexStructure",
    "ValidationReport",
    "validate",
    "r0",
    "r_theta",
    "from_form",
    "random_act",
    "combine",
    "apply",
    "rotate",
    "from_metric_components",
    "standard_complex_structure",
    "random_signed_permutation",
    "conjugate_structure",
]

SYMMETRY_NAMES = ("pair_exchange", "antisym_12", "antisym_34", "bianchi")

_INT64_LIMIT = 2**62


def _int_view(R: "CurvatureTensor"):
    """Integer-scaled components (V, s, max|V|) with V = s * components.

    Cached on the tensor; the basis of every fast exact contraction path.
    V is int64 when the entries fit comfortably, otherwise an object array
    of Python ints (never overflows).
    """
    cached = R._cache.get("int_view")
    if cached is not None:
        return cached
    flat = [Fraction(v) for v in R.components.reshape(-1)]
    s = reduce(lcm, {f.denominator for f in flat}, 1)
    ints = [int(f * s) for f in flat]
    maxv = max((abs(v) for v in ints), default=0)
    if maxv < _INT64_LIMIT:
        v = np.array(ints, dtype=np.int64).reshape(R.components.shape)
    else:
        v = np.array(ints, dtype=object).reshape(R.components.shape)
    R._cache["int_view"] = (v, s, maxv)
    return v, s, maxv


def _int_vector(x) -> tuple[list[int], int, int]:
    """Clear denominators of a rational vector: (integers, scale, max abs)."""
    fr = [Fraction(v) for v in x]
    s = reduce(lcm, (f.denominator for f in fr), 1)
    ints = [int(f * s) for f in fr]
    maxa = max((abs(v) for v in ints), default=0)
    return ints, s, max(maxa, 1)


@dataclass(eq=False)
class CurvatureTensor:
    """Dense rank-4 curvature tensor in an orthonormal frame.

    Treat instances as immutable: every operation returns new values.  The
    ``_cache`` slot holds derived data (an integer-scaled view used by the
    fast contraction paths) and never changes observable behavior.
    """

    m: int
    components: np.ndarray
    mode: ScalarMode
    _cache: dict = field(default_factory=dict, repr=False)

    def max_abs(self):
        return max_abs(self.components)

    def is_zero(self) -> bool:
        if self.mode.exact:
            return self.max_abs() == 0
        return float(self.max_abs()) <= self.mode.tol

    def to_float(self, tol: float | None = None) -> "CurvatureTensor":
        if not self.mode.exact:
            return self
        comps = self.components.astype(float)
        return CurvatureTensor(self.m, comps, float_mode(tol if tol is not None else self.mode.tol))

    def float_components(self) -> np.ndarray:
        if self.mode.exact:
            return self.to_float().components
        return self.components


@dataclass
class ValidationReport:
    """Per-symmetry maximum violations of a raw component array."""

    m: int
    mode: ScalarMode
    violations: dict
    worst_index: dict
    threshold: object
    accepted: bool

    def lines(self) -> list[str]:
        out = [f"symmetry={name} max_violation={self.violations[name]}" for name in SYMMETRY_NAMES]
        out.append(f"accepted={'true' if self.accepted else 'false'}")
        return out


def _as_components(raw, mode: ScalarMode) -> np.ndarray:
    if isinstance(raw, CurvatureTensor):
        raw = raw.components
    a = np.asarray(raw, dtype=object if mode.exact else float)
    if a.ndim != 4 or len(set(a.shape)) != 1:
        raise InvalidShape(f"expected an m^4 array, got shape {a.shape}")
    m = a.shape[0]
    if m < 2:
        raise InvalidShape("curvature tensors need dimension m >= 2")
    if mode.exact:
        flat = a.reshape(-1)
        a = np.array([Fraction(v) for v in flat], dtype=object).reshape(a.shape)
    return a


def validate(raw, mode: ScalarMode) -> ValidationReport:
    """Check the four tensor symmetries, reporting the worst violation of each.

    Accepts iff every violation is exactly zero (rational mode) or at most
    tol * max|R| (float mode).
    """
    a = _as_components(raw, mode)
    m = a.shape[0]
    deviations = {
        "pair_exchange": a - a.transpose((2, 3, 0, 1)),
        "antisym_12": a + a.transpose((1, 0, 2, 3)),
        "antisym_34": a + a.transpose((0, 1, 3, 2)),
        # Bianchi: R[i,j,k,l] + R[j,k,i,l] + R[k,i,j,l]
        "bianchi": a + a.transpose((2, 0, 1, 3)) + a.transpose((1, 2, 0, 3)),
    }
    violations, worst = {}, {}
    for name, dev in deviations.items():
        absdev = np.abs(dev)
        violations[name] = absdev.max()
        worst[name] = tuple(int(i) for i in np.unravel_index(int(absdev.argmax()), dev.shape))
    if mode.exact:
        threshold = Fraction(0)
        accepted = all(v == 0 for v in violations.values())
    else:
        threshold = mode.tol * max(1.0, float(max_abs(a)))
        accepted = all(float(v) <= threshold for v in violations.values())
    return ValidationReport(m, mode, violations, worst, threshold, accepted)


def _gauss_components(phi: np.ndarray) -> np.ndarray:
    """R(x,y,z,w) = phi(x,w) phi(y,z) - phi(x,z) phi(y,w) from a symmetric form."""
    o = np.multiply.outer(phi, phi)
    return o.transpose((0, 2, 3, 1)) - o.transpose((0, 2, 1, 3))


def r0(m: int, c, mode: ScalarMode = RATIONAL) -> CurvatureTensor:
    """The tensor c * R0 of constant sectional curvature c.

    Components: R[i][j][k][l] = c * (d_jk d_il - d_ik d_jl).
    """
    if m < 2:
        raise InvalidDimension("curvature tensors need dimension m >= 2")
    c = mode.scalar(c)
    eye = zeros((m, m), mode)
    for i in range(m):
        eye[i, i] = mode.scalar(1)
    return CurvatureTensor(m, _gauss_components(eye) * c, mode)


@dataclass(eq=False)
class ComplexStructure:
    """A skew endomorphism with theta^2 = -identity (exists iff m is even)."""

    theta: np.ndarray
    mode: ScalarMode | None = None

    def __post_init__(self):
        if self.mode is None:
            self.mode = mode_of(np.asarray(self.theta))
        th = matrix(self.theta, self.mode)
        if th.ndim != 2 or th.shape[0] != th.shape[1]:
            raise InvalidComplexStructure(f"theta must be square, got shape {th.shape}")
        m = th.shape[0]
        if m % 2:
            raise InvalidComplexStructure("complex structures exist only in even dimensions")
        scale = max(1.0, float(max_abs(th))) if not self.mode.exact else None
        skew = max_abs(th + th.T)
        eye = zeros((m, m), self.mode)
        for i in range(m):
            eye[i, i] = self.mode.scalar(1)
        square = max_abs(np.dot(th, th) + eye)
        if self.mode.exact:
            ok = skew == 0 and square == 0
        else:
            ok = float(skew) <= self.mode.tol * scale and float(square) <= self.mode.tol * scale
        if not ok:
            raise InvalidComplexStructure(
                f"theta violates its invariants (skew deviation {skew}, square deviation {square})"
            )
        self.theta = th
        self.m = m


def standard_complex_structure(m: int, mode: ScalarMode = RATIONAL) -> ComplexStructure:
    """Block-diagonal structure sending e1 -> e2, e2 -> -e1, e3 -> e4, ..."""
    if m % 2:
        raise InvalidComplexStructure("complex structures exist only in even dimensions")
    th = zeros((m, m), mode)
    one = mode.scalar(1)
    for t in range(m // 2):
        th[2 * t, 2 * t + 1] = -one
        th[2 * t + 1, 2 * t] = one
    return ComplexStructure(th, mode)


def random_signed_permutation(m: int, seed: int, mode: ScalarMode = RATIONAL) -> np.ndarray:
    """Seeded orthogonal matrix with entries in {0, +-1}."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(m)
    signs = rng.integers(0, 2, size=m) * 2 - 1
    q = zeros((m, m), mode)
    for i in range(m):
        q[int(perm[i]), i] = mode.scalar(int(signs[i]))
    return q


def conjugate_structure(cs: ComplexStructure, q: np.ndarray) -> ComplexStructure:
    """The structure q theta q^T for orthogonal q."""
    q = matrix(q, cs.mode)
    return ComplexStructure(np.dot(np.dot(q, cs.theta), q.T), cs.mode)


def r_theta(cs: ComplexStructure, c) -> CurvatureTensor:
    """The tensor c * R_Theta built from a complex structure.

    R_Theta(x,y)z = <Th y, z> Th x - <Th x, z> Th y - 2 <Th x, y> Th z, so in
    components R[i][j][k][l] = c * (Th_kj Th_li - Th_ki Th_lj - 2 Th_ji Th_lk).
    Its Jacobi operator at unit x is the rank-one map 3c <., Th x> Th x.
    """
    mode = cs.mode
    c = mode.scalar(c)
    o = np.multiply.outer(cs.theta, cs.theta)
    comps = (o.transpose((3, 1, 0, 2)) - o.transpose((1, 3, 0, 2)) - 2 * o.transpose((1, 0, 3, 2))) * c
    return CurvatureTensor(cs.m, comps, mode)


def from_form(phi, mode: ScalarMode | None = None) -> CurvatureTensor:
    """Gauss-equation tensor of a symmetric form (shape operator role)."""
    raw = np.asarray(phi)
    if mode is None:
        mode = mode_of(raw)
    p = matrix(raw, mode)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise InvalidShape(f"expected a square matrix, got shape {p.shape}")
    if not is_selfadjoint(p, mode):
        raise InvalidOperator("the form must be symmetric")
    return CurvatureTensor(p.shape[0], _gauss_components(p), mode)


def random_act(m: int, k: int, seed: int, mode: ScalarMode = RATIONAL) -> CurvatureTensor:
    """Seeded random curvature tensor: a signed sum of k Gauss tensors.

    Sums of Gauss tensors satisfy the tensor symmetries by construction and
    span the whole space of algebraic curvature tensors.
    """
    if m < 2:
        raise InvalidDimension("curvature tensors need dimension m >= 2")
    if k < 1:
        raise InvalidDimension("need at least one generator")
    rng = np.random.default_rng(seed)
    total = zeros((m,) * 4, mode)
    for _ in range(k):
        if mode.exact:
            a = rng.integers(-2, 3, size=(m, m))
            phi = matrix(a + a.T, mode)
        else:
            a = rng.standard_normal((m, m))
            phi = np.asarray((a + a.T) / 2.0)
        sign = mode.scalar(int(rng.integers(0, 2) * 2 - 1))
        total = total + _gauss_components(phi) * sign
    return CurvatureTensor(m, total, mode)


def _check_same_frame(tensors, what="tensors"):
    ms = {t.m for t in tensors}
    kinds = {t.mode.kind for t in tensors}
    if len(ms) != 1 or len(kinds) != 1:
        raise IncompatibleTensors(f"{what} must share dimension and scalar mode")


def combine(terms) -> CurvatureTensor:
    """Componentwise linear combination sum_i c_i * R_i."""
    terms = list(terms)
    if not terms:
        raise IncompatibleTensors("need at least one term")
    tensors = [t for _, t in terms]
    _check_same_frame(tensors)
    mode = tensors[0].mode
    total = zeros((tensors[0].m,) * 4, mode)
    for c, t in terms:
        total = total + t.components * mode.scalar(c)
    return CurvatureTensor(tensors[0].m, total, mode)


def _coerce_vector(x, tensor: CurvatureTensor) -> np.ndarray:
    v = vector(x, tensor.mode)
    if len(v) != tensor.m:
        raise IncompatibleTensors(f"vector has dimension {len(v)}, tensor has {tensor.m}")
    return v


def apply(R: CurvatureTensor, x, y, z) -> np.ndarray:
    """Curvature operator action: the vector dual to w -> R(x,y,z,w)."""
    x, y, z = (_coerce_vector(v, R) for v in (x, y, z))
    return np.einsum("i,j,k,ijka->a", x, y, z, R.components)


def rotate(R: CurvatureTensor, q) -> CurvatureTensor:
    """Pull the tensor back along an orthogonal change of frame.

    Returns R' with R'(x,y,z,w) = R(q^T x, q^T y, q^T z, q^T w); conjugating
    the structure of r_theta by q produces exactly this rotation.
    """
    q = matrix(q, R.mode)
    if q.shape != (R.m, R.m):
        raise IncompatibleTensors("rotation matrix does not match the tensor dimension")
    comps = R.components
    for axis in range(4):
        comps = np.tensordot(q, comps, axes=([1], [axis]))
        comps = np.moveaxis(comps, 0, axis)
    return CurvatureTensor(R.m, comps, R.mode)


def from_metric_components(raw, gram, tol: float = 1e-9) -> CurvatureTensor:
    """Ingest components given in a frame with SPD inner product ``gram``.

    A Cholesky congruence maps the frame to an orthonormal one (new basis
    u_a = sum_i B[i,a] v_i with B = L^-T, so B^T gram B = identity) and the
    components are pulled back accordingly.  The square roots make this a
    float-mode operation.
    """
    g = np.asarray(gram, dtype=float)
    a = np.asarray(raw, dtype=float)
    if a.ndim != 4 or len(set(a.shape)) != 1 or g.shape != (a.shape[0],) * 2:
        raise InvalidShape("need an m^4 component array and an m x m Gram matrix")
    if not np.allclose(g, g.T, atol=tol * max(1.0, np.abs(g).max())):
        raise InvalidOperator("the Gram matrix must be symmetric")
    try:
        chol = np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise InvalidOperator("the Gram matrix must be positive definite") from exc
    b = np.linalg.inv(chol).T
    comps = a
    for axis in range(4):
        comps = np.tensordot(b.T, comps, axes=([1], [axis]))
        comps = np.moveaxis(comps, 0, axis)
    return CurvatureTensor(a.shape[0], comps, float_mode(tol))
