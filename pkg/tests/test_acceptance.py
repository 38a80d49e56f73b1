"""Acceptance gate: one test per shipping criterion.

Each test prints a single PASS/FAIL line with the measured quantities and
the stated tolerance, then asserts.  Run with -s to see the lines for
passing tests as well:

    python3 -m pytest tests/test_acceptance.py -v -s
"""

import hashlib
import json
import math

import numpy as np

from sphfn import (
    EvalConfig,
    GroupSpec,
    METHOD_CLOSED_FORM,
    METHOD_FINITE_SUM,
    METHOD_MONTE_CARLO,
    METHOD_TORUS_QUADRATURE,
    MotionElement,
    RadialProfile,
    VERDICT_CONSISTENT,
    VERDICT_VIOLATED,
    build_group,
    closed_form_spherical,
    eigen_check,
    equivalent,
    eval_spherical,
    gram_matrix,
    lattice_compatible,
    motion_identity,
    normalization_constant,
    posdef_verdict,
    separation_probe,
    spherical_transform,
    translation,
    verify_functional_equation,
)
from sphfn.cli import main as cli_main

J0_AT_2 = 0.22389077914123562   # scipy.special.jv(0, 2), frozen
I0_AT_3 = 4.880792585865025     # scipy.special.iv(0, 3), frozen

ROT90 = [[0.0, -1.0], [1.0, 0.0]]
REFLECT = [[1.0, 0.0], [0.0, -1.0]]


def report(num: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {num:02d}: {detail}"
    print(line)
    assert ok, line


def c4_group():
    return build_group(GroupSpec.finite([ROT90]))


def d8_group():
    return build_group(GroupSpec.finite([ROT90, REFLECT]))


def test_criterion_01_planar_rotations_match_bessel():
    so2 = build_group(GroupSpec.special_orthogonal(2))
    xi = [2.0, 0.0]
    x = [1.0, 0.0]
    quad = eval_spherical(so2, xi, x)
    mc = eval_spherical(so2, xi, x, EvalConfig(samples=100_000, seed=2024),
                        method=METHOD_MONTE_CARLO)
    quad_err = abs(quad.value - J0_AT_2)
    mc_err = abs(mc.value - J0_AT_2)
    ok = (quad.method == METHOD_TORUS_QUADRATURE and quad_err <= 1e-10
          and mc_err <= 3.0 * mc.stderr)
    report(1, ok,
           f"quadrature err {quad_err:.2e} (tol 1e-10); "
           f"MC err {mc_err:.2e} vs 3*stderr {3.0 * mc.stderr:.2e}")


def test_criterion_02_transitive_groups_share_one_closed_form():
    specs = {
        "SO(4)": GroupSpec.special_orthogonal(4),
        "U(2)": GroupSpec.unitary(2),
        "SU(2)": GroupSpec.special_unitary(2),
        "Sp(1)": GroupSpec.symplectic(1),
    }
    config = EvalConfig(samples=100_000, seed=7)
    worst_pair = 0.0
    worst_closed = 0.0
    for lam, r in [(1.0, 0.5), (2.0, 1.5)]:
        xi = [lam, 0.0, 0.0, 0.0]
        x = [r, 0.0, 0.0, 0.0]
        closed = closed_form_spherical(4, lam, r)
        results = {name: eval_spherical(build_group(spec), xi, x, config,
                                        method=METHOD_MONTE_CARLO)
                   for name, spec in specs.items()}
        vals = list(results.values())
        for i in range(len(vals)):
            z = abs(vals[i].value - closed) / (3.0 * vals[i].stderr)
            worst_closed = max(worst_closed, z)
            for j in range(i + 1, len(vals)):
                se = math.hypot(vals[i].stderr, vals[j].stderr)
                z = abs(vals[i].value - vals[j].value) / (3.0 * se)
                worst_pair = max(worst_pair, z)
    ok = worst_pair <= 1.0 and worst_closed <= 1.0
    report(2, ok,
           f"worst pairwise gap {worst_pair:.2f} of 3*stderr, "
           f"worst closed-form gap {worst_closed:.2f} of 3*stderr (N=1e5)")


def test_criterion_03_three_dim_kernel_is_a_sinc():
    val = closed_form_spherical(3, 1.5, 2.0)
    target = math.sin(3.0) / 3.0
    err = abs(val - target)
    ok = err <= 1e-12
    report(3, ok, f"|quadrature - sin(3)/3| = {err:.2e} (tol 1e-12)")


def test_criterion_04_normalization():
    c2 = normalization_constant(2)
    worst = 0.0
    for n in range(2, 9):
        worst = max(worst, abs(closed_form_spherical(n, 1.7, 0.0) - 1.0))
        worst = max(worst, abs(closed_form_spherical(n, 0.0, 0.9) - 1.0))
    ok = c2 == 1.0 and worst <= 1e-14
    report(4, ok, f"c(2) = {c2!r} (exact 1.0); max |phi - 1| at origin = "
                  f"{worst:.2e} over n=2..8 (tol 1e-14)")


def test_criterion_05_functional_equation_on_finite_groups():
    groups = [c4_group(), d8_group()]
    rng = np.random.default_rng(2024)
    worst = 0.0
    for t in range(50):
        handle = groups[t % 2]
        xi = rng.normal(size=2) * 1.5
        if t % 2 == 1:
            xi = xi + 1j * rng.normal(size=2) * 0.7
        elems = handle.elements
        g1 = MotionElement(rng.normal(size=2),
                           elems[rng.integers(len(elems))])
        g2 = MotionElement(rng.normal(size=2),
                           elems[rng.integers(len(elems))])
        rep = verify_functional_equation(handle, xi, g1, g2)
        worst = max(worst, rep.residual)
    ok = worst <= 1e-10
    report(5, ok, f"max residual over 50 trials (incl. complex xi) = "
                  f"{worst:.2e} (tol 1e-10)")


def test_criterion_06_laplacian_eigenvalue():
    rel1 = abs(eigen_check(c4_group(), [2.0, 0.0], [0.3, 0.7]) - 4.0) / 4.0
    so2 = build_group(GroupSpec.special_orthogonal(2))
    est = eigen_check(so2, [1.0, 0.5j], [0.4, 0.2])
    rel2 = abs(est - 0.75) / 0.75
    ok = rel1 <= 1e-4 and rel2 <= 1e-4
    report(6, ok, f"rel err {rel1:.2e} for b=4 (finite group), "
                  f"{rel2:.2e} for b=0.75 (complex xi, rotations); tol 1e-4")


def test_criterion_07_equivalence_decisions():
    c4 = c4_group()
    s = math.sqrt(0.5)
    eq_axes = equivalent(c4, [1.0, 0.0], [0.0, 1.0])
    eq_diag = equivalent(c4, [1.0, 0.0], [s, s])
    sep, _ = separation_probe(c4, [1.0, 0.0], [s, s])
    so2 = build_group(GroupSpec.special_orthogonal(2))
    eq_null = equivalent(so2, [1.0, 1.0j], [0.0, 0.0])
    probes = np.random.default_rng(3).normal(size=(10, 2)) * 2.0
    dev = max(abs(eval_spherical(so2, [1.0, 1.0j], p).value - 1.0)
              for p in probes)
    ok = (eq_axes and not eq_diag and sep > 1e-6 and eq_null and dev <= 1e-12)
    report(7, ok, f"axes equivalent={eq_axes}, diagonal equivalent={eq_diag} "
                  f"(separation {sep:.2e} > 1e-6), null xi constant within "
                  f"{dev:.2e} (tol 1e-12)")


def test_criterion_08_positive_definiteness_verdicts():
    specs = [GroupSpec.finite([ROT90]),
             GroupSpec.finite([ROT90, REFLECT]),
             GroupSpec.special_orthogonal(2),
             GroupSpec.special_orthogonal(3)]
    rng = np.random.default_rng(90)
    worst = math.inf
    all_consistent = True
    for t in range(10):
        spec = specs[t % 4]
        handle = build_group(spec)
        xi = rng.normal(size=handle.n) * 2.0
        rep = posdef_verdict(handle, xi, EvalConfig(samples=20_000, seed=5),
                             num_motions=12)
        if rep.method == METHOD_MONTE_CARLO:
            floor = -3.0 * rep.propagated_stderr
        else:
            floor = -1e-9
        all_consistent &= (rep.verdict == VERDICT_CONSISTENT
                           and rep.min_eigenvalue >= floor)
        worst = min(worst, rep.min_eigenvalue - floor)
    so2 = build_group(GroupSpec.special_orthogonal(2))
    bad = gram_matrix(so2, [1.0j, 0.0],
                      [motion_identity(2), translation([3.0, 0.0])])
    off = abs(bad.matrix[0, 1] - I0_AT_3)
    eig_err = abs(bad.min_eigenvalue - (1.0 - I0_AT_3))
    ok = (all_consistent and bad.verdict == VERDICT_VIOLATED
          and off <= 1e-9 and eig_err <= 1e-9 and bad.witness is not None)
    report(8, ok, f"10 real-xi verdicts consistent (margin {worst:+.2e}); "
                  f"imaginary xi violated with off-diagonal I0(3) err "
                  f"{off:.2e}, min eig err {eig_err:.2e}")


def test_criterion_09_gaussian_transform():
    so2 = build_group(GroupSpec.special_orthogonal(2))
    profile = RadialProfile.from_function(lambda r: np.exp(-r * r),
                                          r_max=6.0, num=4097)
    xis = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]
    results = spherical_transform(so2, profile, xis, rtol=1e-5)
    worst = 0.0
    for lam, res in zip([0.0, 1.0, 2.0, 3.0], results):
        target = math.pi * math.exp(-lam * lam / 4.0)
        worst = max(worst, abs(res.value - target) / target)
    total_mass = math.pi * (1.0 - math.exp(-36.0))
    zero_rel = abs(results[0].value - total_mass) / total_mass
    ok = worst <= 1e-3 and zero_rel <= 1e-6
    report(9, ok, f"max rel err vs pi*exp(-lam^2/4) = {worst:.2e} (tol 1e-3); "
                  f"transform at xi=0 matches plain integral within "
                  f"{zero_rel:.2e} (tol 1e-6)")


def test_criterion_10_lattice_compatibility():
    basis = [[1.0, 0.0], [0.0, 1.0]]
    hit = lattice_compatible([2.0 * math.pi, 0.0], basis)
    miss = lattice_compatible([1.0, 0.0], basis)
    ok = hit and not miss
    report(10, ok, f"2*pi*e1 compatible={hit}, e1 compatible={miss} "
                   f"(expected True/False, exact)")


def test_criterion_11_cli_thread_determinism(tmp_path):
    cfg = tmp_path / "eval.json"
    cfg.write_text(json.dumps({
        "group": {"kind": "finite", "generators": [ROT90]},
        "xi": [[1.0, 0.3], [0.2, 0.0]],
        "points": [[0.5, 0.0], [1.0, 1.0], [0.0, 2.0], [0.3, 0.9]],
        "eval": {"seed": 6},
    }))
    one = tmp_path / "one.csv"
    many = tmp_path / "many.csv"
    rc1 = cli_main(["eval", "--config", str(cfg), "--out", str(one),
                    "--threads", "1"])
    rc8 = cli_main(["eval", "--config", str(cfg), "--out", str(many),
                    "--threads", "8"])
    b1 = one.read_bytes()
    b8 = many.read_bytes()
    ok = rc1 == 0 and rc8 == 0 and b1 == b8
    report(11, ok, f"CSV bytes: 1 thread sha256 {hashlib.sha256(b1).hexdigest()[:12]}, "
                   f"8 threads sha256 {hashlib.sha256(b8).hexdigest()[:12]} "
                   f"({'identical' if b1 == b8 else 'DIFFER'})")
