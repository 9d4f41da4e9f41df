"""Command-line front end.

Every subcommand reads the JSON matrix format, writes one JSON document to
standard output (numbers at 17 significant digits), and sends diagnostics
to standard error.  Exit codes: 0 success, 1 usage error, 2 parse/format
error, 3 numerical failure, 4 property violation.
"""

import argparse
import re
import sys

from .errors import (
    ContourError,
    DimensionMismatchError,
    DivergenceError,
    EmptySpectralSetError,
    FormatError,
    HspecError,
    InconclusiveError,
    InvariantViolationError,
    MethodError,
    PreconditionError,
    SingularScalarError,
    SpectrumMembershipError,
    StoneViolationError,
)
from .funcalc import (
    HoloFunction,
    build_contour,
    cauchy_funcalc,
    laurent_coeffs,
)
from .io import dumps, load_matrix, matrix_to_doc
from .oracle import CorpusSpec
from .quaternion import Quaternion
from .spectra import resolvent, spectrum
from .spectral import eigendecompose, polar_decompose, unitary_group
from .suites import SUITES, run_suite


__all__ = ["run", "main"]

USAGE_EXIT = 1
FORMAT_EXIT = 2
NUMERICAL_EXIT = 3
VIOLATION_EXIT = 4

_NUMERICAL = (
    SingularScalarError,
    SpectrumMembershipError,
    DivergenceError,
    ContourError,
    EmptySpectralSetError,
    InconclusiveError,
    PreconditionError,
    MethodError,
)
_VIOLATION = (InvariantViolationError, StoneViolationError)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse maps usage problems to exit code 2; we need 1."""

    def error(self, message):
        raise _UsageError(message)


def _parse_components(text, what):
    """'[w,x,y,z]' or a bare real -> Quaternion."""
    text = text.strip()
    m = re.fullmatch(r"\[([^\]]*)\]", text)
    try:
        if m:
            parts = [float(p) for p in m.group(1).split(",")]
            if len(parts) != 4:
                raise ValueError(f"expected 4 components, got {len(parts)}")
            return Quaternion(*parts)
        return Quaternion(float(text))
    except ValueError as exc:
        raise FormatError(f"bad {what} {text!r}: {exc}") from None


def _parse_contour(text):
    """'z0=[w,x,y,z] r=RAD M=[0,x,y,z] N=INT' -> ContourPath."""
    fields = {}
    for token in text.split():
        if "=" not in token:
            raise FormatError(f"bad contour token {token!r}")
        key, _, value = token.partition("=")
        fields[key] = value
    missing = {"z0", "r", "M"} - set(fields)
    if missing:
        raise FormatError(
            f"contour needs z0, r and M (missing {sorted(missing)})")
    z0 = _parse_components(fields["z0"], "contour center")
    m = _parse_components(fields["M"], "contour slice unit")
    try:
        r = float(fields["r"])
        n = int(fields.get("N", "1024"))
    except ValueError as exc:
        raise FormatError(f"bad contour parameter: {exc}") from None
    return build_contour(z0, r, m, N=n)


def _parse_function(ns):
    if ns.fn == "exp":
        return HoloFunction.exponential()
    if ns.fn == "poly":
        if not ns.coeffs:
            raise FormatError("--fn poly needs --coeffs \"b0;b1;...\"")
        coeffs = [_parse_components(c, "coefficient")
                  for c in ns.coeffs.split(";") if c.strip()]
        return HoloFunction.polynomial(coeffs)
    raise FormatError(f"unknown function kind {ns.fn!r}")


def _build_parser():
    parser = _Parser(prog="hspec",
                     description="Quaternionic spectral calculus toolkit.")
    parser.add_argument("--quad-tol", type=float, default=None,
                        help="quadrature stabilization tolerance "
                             "(default 1e-7)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="spectrum descriptor of a matrix")
    p.add_argument("matrix")
    p.add_argument("--method", default="right-chiC",
                   help="triangular | right-chiC (default)")

    p = sub.add_parser("resolvent", help="(zI - T)^{-1} at a point")
    p.add_argument("matrix")
    p.add_argument("--at", required=True,
                   help="resolvent point as [w,x,y,z] or a real")

    p = sub.add_parser("funcalc", help="f(T) by the contour calculus")
    p.add_argument("matrix")
    p.add_argument("--fn", required=True, help="exp | poly")
    p.add_argument("--coeffs", default=None,
                   help="poly coefficients \"b0;b1;...\", each [w,x,y,z]")
    p.add_argument("--contour", default=None,
                   help="\"z0=[w,x,y,z] r=RAD M=[0,x,y,z] N=INT\" "
                        "(default: automatic)")

    p = sub.add_parser("spectral",
                       help="projector-valued spectral decomposition")
    p.add_argument("matrix")

    p = sub.add_parser("polar", help="polar decomposition T = PA")
    p.add_argument("matrix")

    p = sub.add_parser("evolve",
                       help="one-parameter unitary group of a generator")
    p.add_argument("matrix")
    p.add_argument("--times", default="1.0",
                   help="comma-separated evaluation times (default 1.0)")

    p = sub.add_parser("laurent",
                       help="Laurent coefficients on an annulus")
    p.add_argument("matrix")
    p.add_argument("--a", required=True, help="expansion center [w,x,y,z]")
    p.add_argument("--r", required=True, type=float, help="inner radius")
    p.add_argument("--R", required=True, type=float, dest="outer",
                   help="outer radius")
    p.add_argument("--M", default=None, help="slice unit [0,x,y,z]")
    p.add_argument("--nmax", type=int, default=4)
    p.add_argument("--N", type=int, default=1024, dest="nodes")

    p = sub.add_parser("check", help="run property suites")
    p.add_argument("--suite", default="all",
                   help=f"all | {' | '.join(sorted(SUITES))}")
    p.add_argument("--family", default="general")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=8)
    p.add_argument("--n", type=int, default=4, help="matrix size")
    return parser


def _cmd_spectrum(ns):
    t = load_matrix(ns.matrix)
    return spectrum(t, method=ns.method).to_doc()


def _cmd_resolvent(ns):
    t = load_matrix(ns.matrix)
    z = _parse_components(ns.at, "resolvent point")
    return matrix_to_doc(resolvent(t, z))


def _cmd_funcalc(ns):
    t = load_matrix(ns.matrix)
    f = _parse_function(ns)
    path = _parse_contour(ns.contour) if ns.contour else None
    return matrix_to_doc(cauchy_funcalc(t, f, path=path, tol=ns.quad_tol))


def _cmd_spectral(ns):
    return eigendecompose(load_matrix(ns.matrix)).to_doc()


def _cmd_polar(ns):
    p, a = polar_decompose(load_matrix(ns.matrix))
    return {"P": matrix_to_doc(p), "A": matrix_to_doc(a)}


def _cmd_evolve(ns):
    group = unitary_group(load_matrix(ns.matrix))
    try:
        times = [float(s) for s in ns.times.split(",") if s.strip()]
    except ValueError as exc:
        raise FormatError(f"bad --times: {exc}") from None
    if not times:
        raise FormatError("--times needs at least one value")
    return {"records": [
        {"t": t, "U": matrix_to_doc(group.slice_matrix(t))} for t in times]}


def _cmd_laurent(ns):
    t = load_matrix(ns.matrix)
    a = _parse_components(ns.a, "expansion center")
    m = _parse_components(ns.M, "slice unit") if ns.M else None
    lc = laurent_coeffs(t, a, ns.r, ns.outer, M=m, nmax=ns.nmax,
                        N=ns.nodes)
    return {
        "center": [a.w, a.x, a.y, a.z],
        "inner": lc.inner,
        "outer": lc.outer,
        "phi": [matrix_to_doc(c) for c in lc.phi],
        "psi": [matrix_to_doc(c) for c in lc.psi],
    }


def _cmd_check(ns):
    names = sorted(SUITES) if ns.suite == "all" else [ns.suite]
    for name in names:
        if name not in SUITES:
            raise _UsageError(
                f"unknown suite {name!r}; available: all, "
                + ", ".join(sorted(SUITES)))
    spec = CorpusSpec(seed=ns.seed, count=ns.cases, family=ns.family,
                      n=ns.n)
    reports = [run_suite(name, spec, qtol=ns.quad_tol) for name in names]
    for rep in reports:
        if not rep.passed:
            print(f"suite {rep.suite} failed: "
                  f"{rep.failures() or 'oracle disagreement'}",
                  file=sys.stderr)
    doc = {"passed": all(r.passed for r in reports),
           "reports": [r.to_doc() for r in reports]}
    return doc


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "resolvent": _cmd_resolvent,
    "funcalc": _cmd_funcalc,
    "spectral": _cmd_spectral,
    "polar": _cmd_polar,
    "evolve": _cmd_evolve,
    "laurent": _cmd_laurent,
    "check": _cmd_check,
}


def run(argv=None, stdout=None, stderr=None):
    """Dispatch one command line; returns the process exit code."""
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return USAGE_EXIT
    if ns.quad_tol is not None and not ns.quad_tol > 0.0:
        print("usage error: --quad-tol must be positive", file=err)
        return USAGE_EXIT
    try:
        doc = _COMMANDS[ns.command](ns)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return USAGE_EXIT
    except (FormatError, DimensionMismatchError) as exc:
        print(f"format error: {exc}", file=err)
        return FORMAT_EXIT
    except _VIOLATION as exc:
        print(f"property violation: {exc}", file=err)
        return VIOLATION_EXIT
    except _NUMERICAL as exc:
        print(f"numerical failure: {exc}", file=err)
        return NUMERICAL_EXIT
    except HspecError as exc:  # anything else from the package
        print(f"error: {exc}", file=err)
        return NUMERICAL_EXIT
    print(dumps(doc), file=out)
    if ns.command == "check" and not doc["passed"]:
        return VIOLATION_EXIT
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
