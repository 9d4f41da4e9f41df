"""Convergence study for the slice-contour quadrature.

Evaluates exp(T) at a fixed circular contour while doubling the node
count, and compares each result against a reference computed through the
complex adjoint (scipy's expm, pulled back).  On slice-confined matrices
the trapezoid rule on a circle converges geometrically until it hits the
floating-point floor, which is exactly what the table should show.

Usage:
    python scripts/quadrature_convergence.py --seed 0 --count 6 --n 4
"""

import argparse
import math

import numpy as np
import scipy.linalg

from hspec import (
    CorpusSpec,
    HoloFunction,
    Quaternion,
    build_contour,
    complex_adjoint,
    from_complex_adjoint,
    generate,
    op_norm,
    slice_unit_of,
    spectrum,
)
from hspec.funcalc import _cauchy_once

NODE_COUNTS = (16, 32, 64, 128, 256, 512, 1024)


def reference_exp(t):
    """exp(T) through the complex adjoint (structure-preserving for
    slice-confined input)."""
    return from_complex_adjoint(scipy.linalg.expm(complex_adjoint(t)))


def contour_for(t):
    """Circle in T's slice plane, centered on the spectrum's real mean."""
    desc = spectrum(t, method="triangular-exact")
    m = slice_unit_of(t)
    data = [(it.center, it.radius) for it in desc.items]
    alpha = sum(c for c, _ in data) / len(data)
    reach = max(math.hypot(c - alpha, b) for c, b in data)
    # Tight margin on purpose: the closer the spectrum sits to the circle,
    # the slower the geometric decay, which makes the table informative.
    return build_contour(Quaternion(alpha), 1.12 * reach + 0.05, m, N=NODE_COUNTS[0])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=6)
    ap.add_argument("--n", type=int, default=4)
    args = ap.parse_args(argv)

    corpus = generate(
        CorpusSpec(seed=args.seed, count=args.count, family="upper-triangular-slice", n=args.n)
    )
    f = HoloFunction.exponential()

    errors = {N: [] for N in NODE_COUNTS}
    for t in corpus:
        ref = reference_exp(t)
        scale = max(1.0, op_norm(ref))
        path = contour_for(t)
        for N in NODE_COUNTS:
            approx = _cauchy_once(t, f, path, N)
            errors[N].append(approx.distance(ref) / scale)

    print(f"exp(T) on {args.count} slice-confined {args.n}x{args.n} matrices (seed {args.seed})")
    print(f"{'nodes':>6}  {'median rel err':>14}  {'max rel err':>14}")
    for N in NODE_COUNTS:
        e = np.asarray(errors[N])
        print(f"{N:>6}  {np.median(e):>14.3e}  {e.max():>14.3e}")

    floor = np.asarray(errors[NODE_COUNTS[-1]]).max()
    print(f"\nfloor at N={NODE_COUNTS[-1]}: {floor:.3e}")


if __name__ == "__main__":
    main()
