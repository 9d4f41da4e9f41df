"""End-to-end tour of the spectral machinery on random matrices.

Draws a self-adjoint matrix, decomposes it into eigenvalue/projector
pairs, and reports the residuals of every identity the decomposition is
supposed to satisfy.  Then polar-decomposes a generic matrix from the
same seed, and finally runs the one-parameter unitary group generated by
the self-adjoint matrix forwards and recovers the generator from group
samples alone.

Usage:
    python scripts/spectral_portrait.py --seed 7 --n 5
"""

import argparse

import numpy as np

from hspec import (
    CorpusSpec,
    HMatrix,
    classify_by_spectrum,
    eigendecompose,
    generate,
    op_norm,
    polar_decompose,
    stone_generator,
    unitary_group,
)


def spectral_section(b):
    dec = eigendecompose(b)
    print(f"self-adjoint {b.shape[0]}x{b.shape[0]}, {len(dec.pairs)} spectral points")
    print(f"{'eigenvalue':>12}  {'rank':>4}  {'||P^2-P||':>10}  {'||P*-P||':>10}")
    for pair in dec.pairs:
        p = pair.projector
        idem = p @ p
        print(
            f"{pair.center:>12.6f}  {pair.rank:>4}"
            f"  {idem.distance(p):>10.2e}  {p.adjoint().distance(p):>10.2e}"
        )
    n = b.shape[0]
    print(f"reconstruction   |sum lambda P - T| = {dec.reconstruct().distance(b):.2e}")
    print(f"identity resolve |sum P - I|        = {dec.identity_sum().distance(HMatrix.identity(n)):.2e}")
    flags = classify_by_spectrum(b)
    print(f"classification: {', '.join(flags.flags())}")
    return dec


def polar_section(t):
    p, a = polar_decompose(t)
    resid = (p @ a).distance(t) / max(1.0, op_norm(t))
    print(f"\npolar T = PA on a generic matrix: |PA - T|/|T| = {resid:.2e}")
    print(f"modulus flags: {', '.join(classify_by_spectrum(a).flags())}")
    print(f"partial isometry |P*P P - P| = {(p.adjoint() @ p @ p).distance(p):.2e}")


def unitary_section(b, times):
    group = unitary_group(b)
    worst_unitary = 0.0
    worst_group = 0.0
    for t in times:
        u = group.at(t)
        eye = np.eye(u.shape[0])
        worst_unitary = max(worst_unitary, float(np.linalg.norm(u.conj().T @ u - eye, 2)))
        for s in times:
            lhs = group.at(t) @ group.at(s)
            worst_group = max(worst_group, float(np.linalg.norm(lhs - group.at(t + s), 2)))
    print(f"\nunitary group on t in {{{times[0]:g}..{times[-1]:g}}}:")
    print(f"  worst |U(t)*U(t) - I|     = {worst_unitary:.2e}")
    print(f"  worst |U(t)U(s) - U(t+s)| = {worst_group:.2e}")
    report = stone_generator(group)
    err = report.generator.distance(b) / max(1.0, op_norm(b))
    print(f"  generator recovery |B_rec - B|/|B| = {err:.2e}")
    print(f"  (hermitian residual {report.hermitian_residual:.2e},"
          f" structure residual {report.structure_residual:.2e}, step {report.step:g})")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--n", type=int, default=5)
    args = ap.parse_args(argv)

    b = generate(CorpusSpec(seed=args.seed, count=1, family="hermitian", n=args.n))[0]
    t = generate(CorpusSpec(seed=args.seed, count=1, family="general", n=args.n))[0]

    spectral_section(b)
    polar_section(t)
    unitary_section(b, times=tuple(np.linspace(-2.0, 2.0, 9)))


if __name__ == "__main__":
    main()
