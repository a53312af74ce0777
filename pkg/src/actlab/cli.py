"""Command-line surface and the tensor file format.

Files are JSON with keys ``m``, ``scalar`` ("rational" | "float"),
``storage`` ("sparse" | "dense"), and ``entries``.  Sparse entries are
objects ``{"i":, "j":, "k":, "l":, "v":}`` with 0-based indices and values
as decimal or "p/q" strings; the loader completes each entry's orbit under
the tensor symmetries and rejects conflicting values.  Dense entries are a
flat row-major array of length m^4.  Rational values survive a round trip
losslessly.

Subcommands: gen, validate, jacobi, tsankov, classify, osserman, report.
Exit codes: 0 on success / property holds, 1 on computational errors or
negative decisions, 2 on usage errors.  The environment variable ACT_TOL
overrides the default float tolerance.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from .classify import classify, osserman_check, structure_report
from .errors import (
    ActError,
    BianchiViolation,
    ConflictingEntry,
    FormatError,
)
from .jacobi import jacobi
from .scalars import DEFAULT_TOL, RATIONAL, ScalarMode, float_mode
from .tensors import (
    CurvatureTensor,
    combine,
    from_form,
    r0,
    r_theta,
    random_act,
    standard_complex_structure,
    validate,
)
from .tsankov import tsankov_test

__all__ = ["save_tensor", "load_tensor", "main", "console_main"]


def format_scalar(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def format_vector(vec) -> str:
    return ",".join(format_scalar(v) for v in vec)


def _parse_value(raw, mode: ScalarMode):
    try:
        return mode.scalar(raw)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise FormatError(f"cannot parse value {raw!r}: {exc}") from exc


def _orbit_images(i, j, k, l):
    """Signed orbit of an index tuple under the tensor symmetries.

    Returns a map tuple -> sign, or None when the orbit is self-conflicting
    (the symmetries force the value to be zero, e.g. repeated antisymmetric
    indices).
    """
    images: dict = {}
    for t1, s1 in (((i, j, k, l), 1), ((j, i, k, l), -1)):
        for t2, s2 in ((t1, s1), ((t1[0], t1[1], t1[3], t1[2]), -s1)):
            for t3, s3 in ((t2, s2), ((t2[2], t2[3], t2[0], t2[1]), s2)):
                if t3 in images and images[t3] != s3:
                    return None
                images[t3] = s3
    return images


def tensor_to_doc(R: CurvatureTensor, storage: str = "sparse") -> dict:
    if storage not in ("sparse", "dense"):
        raise FormatError(f"unknown storage {storage!r}")
    exact = R.mode.exact
    doc = {"m": R.m, "scalar": "rational" if exact else "float", "storage": storage}
    if storage == "dense":
        flat = R.components.reshape(-1)
        doc["entries"] = [format_scalar(v) if exact else float(v) for v in flat]
        return doc
    entries = []
    m = R.m
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    v = R.components[i, j, k, l]
                    if v == 0:
                        continue
                    images = _orbit_images(i, j, k, l)
                    if min(images) != (i, j, k, l):
                        continue
                    entries.append(
                        {"i": i, "j": j, "k": k, "l": l, "v": format_scalar(v) if exact else float(v)}
                    )
    doc["entries"] = entries
    return doc


def save_tensor(R: CurvatureTensor, path, storage: str = "sparse"):
    with open(path, "w") as fh:
        json.dump(tensor_to_doc(R, storage), fh, indent=1)
        fh.write("\n")


def _values_conflict(a, b, mode: ScalarMode) -> bool:
    if mode.exact:
        return a != b
    return abs(a - b) > mode.tol * max(1.0, abs(a), abs(b))


def tensor_from_doc(doc: dict, tol: float = DEFAULT_TOL, enforce: bool = True):
    """Build a tensor from a parsed file; returns (tensor, validation report).

    With ``enforce`` the documented loader errors are raised: symmetry
    conflicts as ConflictingEntry, Bianchi failures as BianchiViolation.
    Without it the report carries the verdict (used by the validate command).
    """
    if not isinstance(doc, dict):
        raise FormatError("top-level JSON value must be an object")
    for key in ("m", "scalar", "storage", "entries"):
        if key not in doc:
            raise FormatError(f"missing key {key!r}")
    m = doc["m"]
    if not isinstance(m, int) or m < 2:
        raise FormatError("m must be an integer >= 2")
    if doc["scalar"] not in ("rational", "float"):
        raise FormatError(f"unknown scalar kind {doc['scalar']!r}")
    mode = RATIONAL if doc["scalar"] == "rational" else float_mode(tol)
    storage = doc["storage"]
    entries = doc["entries"]
    if storage == "dense":
        if not isinstance(entries, list) or len(entries) != m**4:
            raise FormatError(f"dense storage needs exactly m^4 = {m**4} entries")
        flat = [_parse_value(v, mode) for v in entries]
        comps = np.array(flat, dtype=object if mode.exact else float).reshape((m,) * 4)
    elif storage == "sparse":
        if not isinstance(entries, list):
            raise FormatError("sparse storage needs a list of entries")
        acc: dict = {}
        for n, ent in enumerate(entries):
            if not isinstance(ent, dict) or not all(key in ent for key in "ijklv"):
                raise FormatError(f"entry {n} must be an object with keys i, j, k, l, v")
            idx = tuple(ent[key] for key in "ijkl")
            if not all(isinstance(t, int) and 0 <= t < m for t in idx):
                raise FormatError(f"entry {n} has indices out of range for m={m}")
            v = _parse_value(ent["v"], mode)
            images = _orbit_images(*idx)
            if images is None:
                if v != 0:
                    raise ConflictingEntry(idx, "the symmetries force this entry to be zero")
                images = {idx: 1}
            for t, sgn in images.items():
                val = sgn * v
                if t in acc and _values_conflict(acc[t], val, mode):
                    raise ConflictingEntry(t, f"{acc[t]} vs {val}")
                acc[t] = val
        comps = np.zeros((m,) * 4, dtype=object if mode.exact else float)
        if mode.exact:
            comps.fill(Fraction(0))
        for t, val in acc.items():
            comps[t] = val
    else:
        raise FormatError(f"unknown storage {storage!r}")
    report = validate(comps, mode)
    if enforce and not report.accepted:
        worst = max(
            (name for name in report.violations if name != "bianchi"),
            key=lambda name: report.violations[name],
        )
        if (report.violations[worst] != 0) if mode.exact else (
            float(report.violations[worst]) > report.threshold
        ):
            raise ConflictingEntry(report.worst_index[worst], f"{worst} symmetry violated")
        raise BianchiViolation(report.violations["bianchi"], report.worst_index["bianchi"])
    return CurvatureTensor(m, comps, mode), report


def load_tensor(path, tol: float = DEFAULT_TOL) -> CurvatureTensor:
    """Load and validate a tensor file (the documented external format)."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise FormatError(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, line=exc.lineno) from exc
    tensor, _ = tensor_from_doc(doc, tol, enforce=True)
    return tensor


def _load_doc(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, line=exc.lineno) from exc


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _parse_vector_arg(raw: str, mode: ScalarMode, m: int):
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != m:
        raise FormatError(f"--x needs {m} comma-separated components, got {len(parts)}")
    return [_parse_value(p, mode) for p in parts]


def _cmd_gen(args, tol):
    mode = RATIONAL if args.mode == "rational" else float_mode(tol)
    c = _parse_value(args.c, mode)
    if args.type == "r0":
        tensor = r0(args.m, c, mode)
    elif args.type == "rtheta":
        tensor = r_theta(standard_complex_structure(args.m, mode), c)
    elif args.type == "gauss":
        if args.diag:
            diag = [_parse_value(p, mode) for p in args.diag.split(",")]
            if len(diag) != args.m:
                raise FormatError(f"--diag needs {args.m} entries")
            phi = np.zeros((args.m, args.m), dtype=object if mode.exact else float)
            if mode.exact:
                phi.fill(Fraction(0))
            for i, d in enumerate(diag):
                phi[i, i] = d
        elif args.phi:
            doc = _load_doc(args.phi)
            rows = doc["phi"] if isinstance(doc, dict) else doc
            phi = np.array(
                [[_parse_value(v, mode) for v in row] for row in rows],
                dtype=object if mode.exact else float,
            )
        else:
            raise FormatError("gauss needs --phi FILE or --diag LIST")
        tensor = from_form(phi, mode)
    elif args.type == "random":
        tensor = random_act(args.m, args.k, args.seed, mode)
    elif args.type == "combo":
        c2 = _parse_value(args.c2, mode)
        tensor = combine(
            [(c, r0(args.m, 1, mode)), (c2, r_theta(standard_complex_structure(args.m, mode), 1))]
        )
    else:  # pragma: no cover - argparse restricts choices
        raise FormatError(f"unknown generator type {args.type!r}")
    save_tensor(tensor, args.output, args.storage)
    print(f"wrote={args.output}")
    return 0


def _cmd_validate(args, tol):
    doc = _load_doc(args.file)
    _, report = tensor_from_doc(doc, tol, enforce=False)
    for line in report.lines():
        print(line)
    return 0 if report.accepted else 1


def _cmd_jacobi(args, tol):
    tensor = load_tensor(args.file, tol)
    x = _parse_vector_arg(args.x, tensor.mode, tensor.m)
    j = jacobi(tensor, x)
    for i in range(tensor.m):
        print(f"jacobi_row_{i}={format_vector(j[i, :])}")
    jf = j.astype(float)
    spectrum = np.linalg.eigvalsh(jf)
    print(f"spectrum={format_vector(spectrum)}")
    return 0


def _cmd_tsankov(args, tol):
    tensor = load_tensor(args.file, tol)
    verdict = tsankov_test(tensor, args.method, n_samples=args.samples, seed=args.seed)
    print(f"holds={'true' if verdict.holds else 'false'}")
    print(f"method={verdict.method}")
    if verdict.witness is not None:
        print(f"witness_x={format_vector(verdict.witness.x)}")
        print(f"witness_y={format_vector(verdict.witness.y)}")
        print(f"comm_norm={format_scalar(verdict.witness.commutator_norm)}")
    return 0 if verdict.holds else 1


def _cmd_classify(args, tol):
    tensor = load_tensor(args.file, tol)
    result = classify(tensor, seed=args.seed)
    print(f"tag={result.tag}")
    if result.c is not None:
        print(f"c={format_scalar(result.c)}")
    if result.theta is not None:
        for i in range(result.theta.m):
            print(f"theta_row_{i}={format_vector(result.theta.theta[i, :])}")
    if result.residual is not None:
        print(f"residual={format_scalar(result.residual)}")
    if result.witness is not None:
        print(f"witness_x={format_vector(result.witness.x)}")
        print(f"witness_y={format_vector(result.witness.y)}")
        print(f"comm_norm={format_scalar(result.witness.commutator_norm)}")
    return 0 if result.tag in ("Zero", "ConstantCurvature", "ComplexForm") else 1


def _cmd_osserman(args, tol):
    tensor = load_tensor(args.file, tol)
    report = osserman_check(tensor, n_samples=args.samples, seed=args.seed)
    print(f"is_osserman={'true' if report.is_osserman else 'false'}")
    print(f"spectrum={format_vector(report.reference_spectrum)}")
    print(f"max_deviation={repr(report.max_deviation)}")
    print(f"n_samples={report.n_samples}")
    return 0


def _cmd_report(args, tol):
    tensor = load_tensor(args.file, tol)
    report = structure_report(tensor, n_samples=args.samples, seed=args.seed)
    print(f"n_samples={report.n_samples}")
    print(f"tsankov={'true' if report.tsankov_holds else 'false'}")
    if report.two_eigenvalue_ok is None:
        print("two_eigenvalue_check=skipped")
    else:
        print(f"two_eigenvalue_check={'pass' if report.two_eigenvalue_ok else 'fail'}")
    for rank in sorted(report.rank_histogram):
        print(f"rank_hist_{rank}={report.rank_histogram[rank]}")
    header = ["sample", "rank", "w_dim"] + [f"eig{i}" for i in range(tensor.m)]
    print(",".join(header))
    for idx, (rank, wdim, spec) in enumerate(zip(report.ranks, report.w_dims, report.spectra)):
        row = [str(idx), str(rank), str(wdim)] + [repr(v) for v in spec]
        print(",".join(row))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="actlab",
        description="Generate, validate, and classify algebraic curvature tensors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a tensor file")
    gen.add_argument("--type", required=True, choices=["r0", "rtheta", "gauss", "random", "combo"])
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--c", default="1", help="curvature scale (combo: the r0 coefficient)")
    gen.add_argument("--c2", default="1", help="combo only: the rtheta coefficient")
    gen.add_argument("--k", type=int, default=3, help="random only: number of generators")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--phi", help="gauss only: JSON file with the symmetric form")
    gen.add_argument("--diag", help="gauss only: comma-separated diagonal")
    gen.add_argument("--mode", choices=["rational", "float"], default="rational")
    gen.add_argument("--storage", choices=["sparse", "dense"], default="sparse")
    gen.add_argument("-o", "--output", required=True)
    gen.set_defaults(func=_cmd_gen)

    val = sub.add_parser("validate", help="check the tensor symmetries")
    val.add_argument("file")
    val.set_defaults(func=_cmd_validate)

    jac = sub.add_parser("jacobi", help="print J(x) and its spectrum")
    jac.add_argument("file")
    jac.add_argument("--x", required=True, help="comma-separated components")
    jac.set_defaults(func=_cmd_jacobi)

    tsk = sub.add_parser("tsankov", help="decide commutation on orthogonal pairs")
    tsk.add_argument("file")
    tsk.add_argument("--method", choices=["exact", "sampled"], default="exact")
    tsk.add_argument("--samples", type=int, default=200)
    tsk.add_argument("--seed", type=int, default=0)
    tsk.set_defaults(func=_cmd_tsankov)

    cls = sub.add_parser("classify", help="run the full classification")
    cls.add_argument("file")
    cls.add_argument("--seed", type=int, default=0)
    cls.set_defaults(func=_cmd_classify)

    oss = sub.add_parser("osserman", help="check spectrum constancy on the unit sphere")
    oss.add_argument("file")
    oss.add_argument("--samples", type=int, default=200)
    oss.add_argument("--seed", type=int, default=0)
    oss.set_defaults(func=_cmd_osserman)

    rep = sub.add_parser("report", help="rank/spectrum diagnostics plus CSV")
    rep.add_argument("file")
    rep.add_argument("--samples", type=int, default=50)
    rep.add_argument("--seed", type=int, default=0)
    rep.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    """Run one subcommand; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    tol = DEFAULT_TOL
    if os.environ.get("ACT_TOL"):
        try:
            tol = float(os.environ["ACT_TOL"])
        except ValueError:
            print(f"error: ACT_TOL is not a number: {os.environ['ACT_TOL']!r}", file=sys.stderr)
            return 2
    try:
        return args.func(args, tol)
    except ActError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def console_main():  # pragma: no cover - thin wrapper
    raise SystemExit(main())
