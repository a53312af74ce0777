"""Jacobi operators of a curvature tensor and their structure diagnostics.

The Jacobi operator of ``R`` at ``x`` is the self-adjoint map
``J(x): y -> R(y,x)x`` with entries ``J[a][b] = R(e_b, x, x, e_a)``.  It is
quadratic in ``x`` and annihilates ``x``.  The polarized operator
``J(x,y): z -> (R(z,x)y + R(z,y)x) / 2`` is its symmetric bilinear
extension, so ``J(x,x) = J(x)`` and ``J(x,y)y = -J(y)x / 2``.

``block_structure`` verifies the pair structure that commuting Jacobi
operators force on an orthogonal pair with ``J(x)y = 0``: both operators
vanish on each other's kernel directions and become the same block ``A`` in
complementary slots, with the polarized operator equal to ``A/2`` off the
diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateInput, PreconditionFailed, StructureViolation
from .scalars import (
    ScalarMode,
    _integer_rows,
    _rank_bareiss,
    complete_orthonormal_exact,
    fraction_sqrt,
    max_abs,
    orthocomplement_basis,
    orthonormalize_exact,
    rank_with_mode,
    zeros,
)
from .tensors import _INT64_LIMIT, CurvatureTensor, _coerce_vector, _int_vector, _int_view

__all__ = [
    "jacobi",
    "jacobi_polarized",
    "jacobi_rank",
    "w_space",
    "ricci",
    "block_structure",
    "BlockStructureReport",
]


def _bilinear_contraction(R: CurvatureTensor, x, y) -> np.ndarray:
    """B(x,y)[a][b] = sum_ij x_i y_j R[b][i][j][a], the matrix of z -> R(z,x)y.

    Exact tensors contract through the cached integer-scaled view so the
    inner loop runs in machine integers; the result is exact Fractions.
    """
    if not R.mode.exact:
        return np.einsum("i,j,bija->ab", np.asarray(x, float), np.asarray(y, float), R.components)
    v, s, maxv = _int_view(R)
    xi, sx, mx = _int_vector(x)
    yi, sy, my = _int_vector(y)
    denom = s * sx * sy
    bound = R.m * R.m * mx * my * maxv
    if v.dtype == np.int64 and bound < _INT64_LIMIT:
        b = np.einsum(
            "i,j,bija->ab", np.array(xi, dtype=np.int64), np.array(yi, dtype=np.int64), v
        )
    else:
        vo = v if v.dtype == object else v.astype(object)
        b = np.einsum(
            "i,j,bija->ab", np.array(xi, dtype=object), np.array(yi, dtype=object), vo
        )
    return np.array(
        [[Fraction(int(val), denom) for val in row] for row in b.tolist()], dtype=object
    )


def jacobi(R: CurvatureTensor, x) -> np.ndarray:
    """Matrix of the Jacobi operator J(x); symmetric, with J(x) x = 0."""
    x = _coerce_vector(x, R)
    return _bilinear_contraction(R, x, x)


def jacobi_polarized(R: CurvatureTensor, x, y) -> np.ndarray:
    """Matrix of the polarized operator J(x, y); symmetric and bilinear."""
    x = _coerce_vector(x, R)
    y = _coerce_vector(y, R)
    bxy = _bilinear_contraction(R, x, y)
    byx = _bilinear_contraction(R, y, x)
    half = Fraction(1, 2) if R.mode.exact else 0.5
    return (bxy + byx) * half


def jacobi_rank(R: CurvatureTensor, x, mode: ScalarMode | None = None) -> int:
    """rank J(x); always at most m - 1 because x lies in the kernel."""
    x = _coerce_vector(x, R)
    if max_abs(x) == 0:
        raise DegenerateInput("rank of J(x) needs a nonzero x")
    return rank_with_mode(jacobi(R, x), mode or R.mode)


def ricci(R: CurvatureTensor) -> np.ndarray:
    """Ricci form as a symmetric matrix, with rho(x,x) = trace J(x)."""
    return np.trace(R.components, axis1=1, axis2=2)


def _unit_threshold(mode: ScalarMode, scale: float = 1.0):
    return 0 if mode.exact else mode.tol * max(1.0, scale)


def _rank_one_unit(j: np.ndarray, mode: ScalarMode) -> tuple:
    """Decompose a rank-one symmetric matrix as t * w w^T with unit w.

    The sign of w is canonicalized: its first nonzero coordinate is positive.
    In exact mode the unit factor must be rational, which holds exactly when
    the matrix is lam * (Th x)(Th x)^T for rational Th and unit rational x.
    """
    m = j.shape[0]
    if mode.exact:
        t = Fraction(np.trace(j))
        if t == 0:
            raise DegenerateInput("rank-one symmetric matrices have nonzero trace")
        proj = j * (Fraction(1) / t)
        diag = [Fraction(proj[i, i]) for i in range(m)]
        p = max(range(m), key=lambda i: diag[i])
        root = fraction_sqrt(diag[p])
        if root is None or root == 0:
            raise DegenerateInput(
                "the rank-one factor is irrational; no exact representation exists"
            )
        w = proj[:, p] * (Fraction(1) / root)
        if np.any(np.dot(w.reshape(-1, 1), w.reshape(1, -1)) - proj):
            raise DegenerateInput("matrix is not exactly rank one")
    else:
        vals, vecs = np.linalg.eigh(j.astype(float))
        p = int(np.abs(vals).argmax())
        t = float(vals[p])
        w = vecs[:, p]
    first = next((i for i in range(m) if (w[i] != 0 if mode.exact else abs(w[i]) > 1e-12)), None)
    if first is not None and w[first] < 0:
        w = -w
    return t, w


def _range_orthonormal(j: np.ndarray, r: int, mode: ScalarMode):
    """Orthonormal basis of the range of a symmetric matrix of known rank."""
    if r == 0:
        return []
    if mode.exact:
        if r == 1:
            _, w = _rank_one_unit(j, mode)
            return [w]
        cols = []
        for c in range(j.shape[0]):
            candidate = cols + [j[:, c]]
            gram = np.array(
                [[Fraction(np.dot(u, v)) for v in candidate] for u in candidate], dtype=object
            )
            if _rank_bareiss(_integer_rows(gram)) == len(candidate):
                cols = candidate
            if len(cols) == r:
                break
        return orthonormalize_exact(cols)
    vals, vecs = np.linalg.eigh(j.astype(float))
    scale = max(1.0, float(np.abs(vals).max()))
    keep = [i for i in range(len(vals)) if abs(vals[i]) > mode.tol * scale]
    return [vecs[:, i] for i in keep]


def w_space(R: CurvatureTensor, x) -> list[np.ndarray]:
    """Orthonormal basis of span{x} + range J(x); its length is 1 + rank J(x).

    x is orthogonal to the range because x lies in the kernel of the
    symmetric operator J(x).
    """
    x = _coerce_vector(x, R)
    mode = R.mode
    n2 = np.dot(x, x)
    if max_abs(x) == 0:
        raise DegenerateInput("w_space needs a nonzero x")
    if mode.exact:
        root = fraction_sqrt(Fraction(n2))
        if root is None:
            raise DegenerateInput("x has irrational norm; pass a rational-unit x or use float mode")
        xhat = x * (Fraction(1) / root)
    else:
        xhat = x.astype(float) / np.sqrt(float(n2))
    j = jacobi(R, xhat)
    r = rank_with_mode(j, mode)
    if r == R.m - 1:
        # range = x^perp, so the whole space; complete x to a full frame
        if mode.exact:
            rest = complete_orthonormal_exact([xhat], R.m)
        else:
            rest = orthocomplement_basis([xhat], mode)
        return [xhat, *rest]
    return [xhat, *_range_orthonormal(j, r, mode)]


@dataclass
class BlockStructureReport:
    """Frame and residuals of the commuting-pair block decomposition.

    ``e_basis`` spans range J(x) with eigenvalues ``lambda_list``;
    ``f_basis`` is built as f_i = (2 / lambda_i) J(x,y) e_i, which the
    commutation identities force to be orthonormal (asserted, not re-fixed);
    ``g_basis`` spans the complement, where all three operators vanish.
    """

    lambda_list: list
    e_basis: list
    f_basis: list
    g_basis: list
    residuals: dict

    @property
    def rank(self) -> int:
        return len(self.e_basis)

    def max_residual(self):
        return max(self.residuals.values()) if self.residuals else 0


def _precheck_pair(R, x, y, mode):
    scale = float(R.max_abs()) if not mode.exact else 1.0
    thr = _unit_threshold(mode)
    if abs(np.dot(x, x) - 1) > thr:
        raise PreconditionFailed("x unit", f"<x,x> = {np.dot(x, x)}")
    if abs(np.dot(y, y) - 1) > thr:
        raise PreconditionFailed("y unit", f"<y,y> = {np.dot(y, y)}")
    if abs(np.dot(x, y)) > thr:
        raise PreconditionFailed("x orthogonal to y", f"<x,y> = {np.dot(x, y)}")
    jx = jacobi(R, x)
    kdev = max_abs(np.dot(jx, y))
    if (kdev != 0) if mode.exact else (float(kdev) > mode.tol * max(1.0, scale)):
        raise PreconditionFailed("J(x) y = 0", f"|J(x) y| = {kdev}")
    return jx


def _eigenpairs_exact(jx: np.ndarray, mode: ScalarMode):
    """Nonzero eigenpairs of a two-eigenvalue (scaled projector) matrix."""
    r = rank_with_mode(jx, mode)
    if r == 0:
        return [], []
    lam = Fraction(np.trace(jx)) / r
    if lam == 0 or np.any(np.dot(jx, jx) - jx * lam):
        raise StructureViolation(
            "J(x) is not a scaled orthogonal projection; the input is not "
            "Jacobi-Tsankov or needs float mode"
        )
    try:
        basis = _range_orthonormal(jx, r, mode)
    except DegenerateInput as exc:
        raise StructureViolation(f"no exact eigenframe: {exc}") from exc
    return [lam] * r, basis


def _eigenpairs_float(jx: np.ndarray, mode: ScalarMode):
    vals, vecs = np.linalg.eigh(jx.astype(float))
    scale = max(1.0, float(np.abs(vals).max()))
    keep = [i for i in range(len(vals)) if abs(vals[i]) > mode.tol * scale]
    return [float(vals[i]) for i in keep], [vecs[:, i] for i in keep]


def block_structure(R: CurvatureTensor, x, y, mode: ScalarMode | None = None) -> BlockStructureReport:
    """Build the commuting-pair block frame at (x, y) and report residuals.

    Preconditions: x, y unit, orthogonal, and J(x) y = 0.  The residuals
    cover J(y)x = 0, J(x)J(y) = 0, J(y)^2 + J(x)^2 - 4 J(x,y)^2 = 0, the
    intertwining identities, and the three block-matrix identities on the
    constructed frame.  All residuals vanish exactly on rank-one
    Jacobi-Tsankov tensors.
    """
    mode = mode or R.mode
    x = _coerce_vector(x, R)
    y = _coerce_vector(y, R)
    jx = _precheck_pair(R, x, y, mode)
    jy = jacobi(R, y)
    jxy = jacobi_polarized(R, x, y)
    m = R.m

    if mode.exact:
        lambdas, e_basis = _eigenpairs_exact(jx, mode)
    else:
        lambdas, e_basis = _eigenpairs_float(jx, mode)

    f_basis = []
    for lam, e in zip(lambdas, e_basis):
        f_basis.append(np.dot(jxy, e) * ((Fraction(2) if mode.exact else 2.0) / lam))

    frame = e_basis + f_basis
    if frame:
        gram = np.array([[np.dot(u, v) for v in frame] for u in frame])
        eye = zeros((len(frame), len(frame)), mode)
        for i in range(len(frame)):
            eye[i, i] = mode.scalar(1)
        ortho_dev = max_abs(gram - eye)
    else:
        ortho_dev = mode.zero()

    if mode.exact:
        if frame and ortho_dev != 0:
            raise StructureViolation(
                "the e/f frame is not orthonormal; the input is not Jacobi-Tsankov"
            )
        g_basis = complete_orthonormal_exact(frame, m)
    else:
        if frame and float(ortho_dev) > 100 * mode.tol:
            raise StructureViolation(
                "the e/f frame is not orthonormal; the input is not Jacobi-Tsankov"
            )
        if frame:
            g_basis = orthocomplement_basis(frame, mode)
        else:
            g_basis = [np.eye(m)[:, i] for i in range(m)]

    residuals = {
        "jy_x": max_abs(np.dot(jy, x)),
        "jx_jy": max_abs(np.dot(jx, jy)),
        "square_identity": max_abs(np.dot(jy, jy) + np.dot(jx, jx) - 4 * np.dot(jxy, jxy)),
        "intertwine": max(
            max_abs(np.dot(jxy, jx) - np.dot(jy, jxy)),
            max_abs(np.dot(jx, jxy) - np.dot(jxy, jy)),
        ),
        "frame_orthonormal": ortho_dev,
    }

    half = Fraction(1, 2) if mode.exact else 0.5
    devs = {"block_jx": [mode.zero()], "block_jy": [mode.zero()], "block_jxy": [mode.zero()]}
    for lam, e, f in zip(lambdas, e_basis, f_basis):
        devs["block_jx"].append(max_abs(np.dot(jx, e) - lam * e))
        devs["block_jx"].append(max_abs(np.dot(jx, f)))
        devs["block_jy"].append(max_abs(np.dot(jy, e)))
        devs["block_jy"].append(max_abs(np.dot(jy, f) - lam * f))
        devs["block_jxy"].append(max_abs(np.dot(jxy, e) - lam * half * f))
        devs["block_jxy"].append(max_abs(np.dot(jxy, f) - lam * half * e))
    for g in g_basis:
        devs["block_jx"].append(max_abs(np.dot(jx, g)))
        devs["block_jy"].append(max_abs(np.dot(jy, g)))
        devs["block_jxy"].append(max_abs(np.dot(jxy, g)))
    for key, vals in devs.items():
        residuals[key] = max(vals)

    return BlockStructureReport(lambdas, e_basis, f_basis, g_basis, residuals)
