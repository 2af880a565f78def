"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Every tolerance is pinned here exactly as stated.  Three checks are known
to fail at desk scale with the pinned discretization (see the repository
README): the operator-oracle bound at the (beta=1, delta=1.5) corner, the
lambda* <= 10 clause of the verification criterion, and the 1e-3 oracle
match of the sandwich solve at n=257.  They are asserted anyway; a red
line here is a measurement, not a malfunction.
"""

import dataclasses
import math

import numpy as np

from oracles import classical_e, newton_fd_bvp
from psifrac import (
    FractionalOrder,
    Grid,
    PsiFunction,
    Side,
    build_pair,
    empirical_mu2,
    frac_integral_matrix,
    hilfer_derivative_matrix,
    hilfer_power_oracle,
    linear_majorant,
    make_spec,
    nonexistence_threshold,
    solve_between,
    verify_weak_inequality,
    zeta_lambda,
)
from psifrac.cli import main
from psifrac.core import Nonlinearity, NonlinearityKind, PsiKind

PI2 = math.pi**2


def conclude(num: int, name: str, ok: bool, detail: str = "") -> None:
    mark = "PASS" if ok else "FAIL"
    tail = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {num} [{name}]: {mark}{tail}")
    assert ok, f"criterion {num} ({name}) failed{tail}"


def test_criterion_1_operator_oracle():
    psis = [PsiFunction(PsiKind.IDENTITY), PsiFunction(PsiKind.EXP_MINUS_ONE, k=1.0)]
    ns = (64, 128, 256, 512)
    failures = []
    worst = 0.0
    for psi in psis:
        for alpha in (0.6, 0.75, 0.9, 1.0):
            for beta in (0.0, 0.5, 1.0):
                order = FractionalOrder(alpha, beta)
                mats = {}
                grids = {}
                for n in ns:
                    grids[n] = Grid.make(1.0, n, psi)
                    mats[n] = hilfer_derivative_matrix(grids[n], psi, order, Side.LEFT)
                for delta in (1.5, 2.5):
                    errs = []
                    for n in ns:
                        g = grids[n]
                        f = (g.u - g.u[0]) ** (delta - 1.0)
                        want = hilfer_power_oracle(order, delta, psi, g)
                        collar = max(2, int(np.ceil(0.05 * n)))
                        errs.append(float(np.abs(mats[n].entries @ f - want)[collar:-1].max()))
                    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
                    final_ok = errs[-1] <= 1e-2
                    worst = max(worst, errs[-1])
                    if not (decreasing and final_ok):
                        failures.append(
                            f"psi={psi.kind.value} a={alpha} b={beta} d={delta}: "
                            f"err512={errs[-1]:.3e} decreasing={decreasing}"
                        )
    detail = f"worst err at n=512: {worst:.3e}"
    if failures:
        detail += "; offenders: " + " | ".join(failures)
    conclude(1, "operator oracle sweep", not failures, detail)


def test_criterion_2_classical_limit(catalog_spec, catalog_eig, catalog_e):
    lam_ok = abs(catalog_eig.lambda1 - PI2) / PI2 <= 0.01
    e_exact = classical_e(catalog_spec.grid.x, 1.0)
    e_field_ok = np.abs(catalog_e - e_exact).max() <= 1e-3
    e_sup_ok = abs(catalog_e.max() - 0.125) / 0.125 <= 0.01
    conclude(
        2,
        "classical limit",
        lam_ok and e_field_ok and e_sup_ok,
        f"lambda1={catalog_eig.lambda1:.6f} vs pi^2, "
        f"|e - x(1-x)/2|={np.abs(catalog_e - e_exact).max():.2e}, "
        f"|e|_inf={catalog_e.max():.6f}",
    )


SMOOTH = {
    "s(1-s)": lambda s: s * (1.0 - s),
    "sin(pi s)": lambda s: np.sin(np.pi * s),
    "expm1(s)": lambda s: np.expm1(s),
}


def test_criterion_3_semigroup_and_left_inverse():
    problems = []
    for kind in PsiKind:
        psi = PsiFunction(kind)
        for p, q in ((0.3, 0.4), (0.5, 0.5)):
            errs = {}
            for n in (128, 256):
                g = Grid.make(1.0, n, psi)
                ip = frac_integral_matrix(g, psi, p, Side.LEFT).entries
                iq = frac_integral_matrix(g, psi, q, Side.LEFT).entries
                ipq = frac_integral_matrix(g, psi, p + q, Side.LEFT).entries
                f = (g.u - g.u[0]) ** 1.5
                errs[n] = np.abs(ip @ (iq @ f) - ipq @ f).max()
            ratio = errs[128] / errs[256]
            if ratio < 1.5:
                problems.append(f"semigroup {kind.value} p={p} q={q} ratio={ratio:.2f}")
        g = Grid.make(1.0, 512, psi)
        order = FractionalOrder(0.75, 0.5)
        integ = frac_integral_matrix(g, psi, order.alpha, Side.LEFT).entries
        deriv = hilfer_derivative_matrix(g, psi, order, Side.LEFT).entries
        s = (g.u - g.u[0]) / (g.u[-1] - g.u[0])
        for fname, fn in SMOOTH.items():
            f = fn(s)
            err = np.abs(deriv @ (integ @ f) - f)[1:-1].max()
            if err >= 1e-2:
                problems.append(f"left-inverse {kind.value} f={fname} err={err:.2e}")
    conclude(3, "semigroup and left-inverse", not problems, "; ".join(problems))


def test_criterion_4_majorant_oracle():
    sqrt_h = Nonlinearity(NonlinearityKind.SQRT)
    zero_h = Nonlinearity(NonlinearityKind.ZERO)
    m1 = linear_majorant(sqrt_h, nu=0.5, a=1.0, s_max=1e6)
    m2 = linear_majorant(zero_h, nu=0.5, a=1.0, s_max=1e6)
    rng = np.random.default_rng(17)
    s = 10.0 ** rng.uniform(-8, 6, 100_000)
    holds = np.all(sqrt_h(s) - s**-0.5 <= m1.a * s - m1.b + 1e-9)
    ok = (
        abs(m1.b - 1.0) <= 1e-4
        and abs(m1.s_star - 1.0) <= 1e-3
        and abs(m2.b - 3.0 * 2.0 ** (-2.0 / 3.0)) <= 1e-4
        and bool(holds)
    )
    conclude(
        4,
        "linear majorant oracle",
        ok,
        f"b_sqrt={m1.b:.8f} s*={m1.s_star:.6f} b_zero={m2.b:.8f} fresh-sample={bool(holds)}",
    )


def test_criterion_5_zeta_oracle():
    sqrt_h = Nonlinearity(NonlinearityKind.SQRT)
    z1 = zeta_lambda(sqrt_h, lam=1.0, zeta0=1.0, e_sup=0.125)
    z4 = zeta_lambda(sqrt_h, lam=4.0, zeta0=1.0, e_sup=0.125)
    minimal = (1.0 * (z1 / 1.01) < 1.0 * sqrt_h(z1 / 1.01 * 0.125)) and (
        1.0 * (z4 / 1.01) < 4.0 * sqrt_h(z4 / 1.01 * 0.125)
    )
    ok = (
        abs(z1 - 0.125) <= 1e-6 * 0.125
        and abs(z4 - 2.0) <= 1e-6 * 2.0
        and minimal
    )
    conclude(5, "zeta threshold oracle", ok, f"zeta(1)={z1:.9f} zeta(4)={z4:.9f}")


def test_criterion_6_verification_window(catalog_spec, catalog_op, catalog_eig, catalog_e):
    lam_star = empirical_mu2(catalog_spec, catalog_op, catalog_eig, catalog_e, 0.8)
    spec01 = dataclasses.replace(catalog_spec, lam=0.1)
    op01 = dataclasses.replace(catalog_op, spec=spec01)
    pair01 = build_pair(spec01, catalog_eig, catalog_e, 0.8)
    sub01 = verify_weak_inequality(pair01.phi, op01, "sub")
    low_fail_ok = (not sub01.passed) and sub01.worst_margin < 0
    found = lam_star is not None
    window_ok = found and lam_star <= 10.0
    detail = (
        f"empirical mu2 = {lam_star}; required <= 10; "
        f"lambda=0.1 sub margin {sub01.worst_margin:+.3e}"
    )
    conclude(6, "sub/super verification window", window_ok and low_fail_ok, detail)


def test_criterion_7_sandwich_solve(catalog_spec, catalog_op, catalog_pair):
    res = solve_between(
        catalog_pair, catalog_spec, catalog_op, tol=1e-10, max_iter=400, verified=False
    )
    x_o, u_o = newton_fd_bvp(50.0, np.sqrt, 0.5, n=8193)
    gap = float(np.abs(res.u - np.interp(catalog_spec.grid.x, x_o, u_o)).max())
    core_ok = res.converged and res.sandwich_ok and res.final_residual < 1e-8
    oracle_ok = gap <= 1e-3
    conclude(
        7,
        "sandwich solve vs classical oracle",
        core_ok and oracle_ok,
        f"converged={res.converged} residual={res.final_residual:.2e} "
        f"sandwich={res.sandwich_ok} oracle gap={gap:.3e} (required <= 1e-3)",
    )


def test_criterion_8_dichotomy_witness(catalog_spec, catalog_op, catalog_eig, catalog_e):
    maj = linear_majorant(catalog_spec.h, catalog_spec.nu, a=1.0, s_max=1e6)
    mu1 = nonexistence_threshold(catalog_eig.lambda1, catalog_spec.m.zeta_inf, maj.a)
    mu2 = empirical_mu2(catalog_spec, catalog_op, catalog_eig, catalog_e, 0.8)
    rows = []
    lam = 0.5
    while lam <= 100.0 + 1e-9:
        spec = dataclasses.replace(catalog_spec, lam=lam)
        op = dataclasses.replace(catalog_op, spec=spec)
        pair = build_pair(spec, catalog_eig, catalog_e, 0.8)
        res = solve_between(pair, spec, op, tol=1e-10, max_iter=200, verified=False)
        rows.append((lam, res.converged, res.positive))
        lam = round(lam + 0.5, 10)
    below = [r for r in rows if r[0] < mu1]
    above = [r for r in rows if mu2 is not None and r[0] > mu2]
    no_solution_below = all(not (c and p) for _, c, p in below)
    all_solve_above = bool(above) and all(c and p for _, c, p in above)
    ordered = mu2 is not None and mu1 < mu2
    conclude(
        8,
        "existence/nonexistence dichotomy",
        no_solution_below and all_solve_above and ordered,
        f"mu1={mu1:.4f} mu2={mu2} swept {len(rows)} lambdas; "
        f"below-mu1 clean={no_solution_below}, above-mu2 all solve={all_solve_above}",
    )


def test_criterion_9_determinism(tmp_path):
    blobs = []
    for tag in ("first", "second"):
        out = tmp_path / tag
        code = main(
            [
                "sweep",
                "--grid-n",
                "65",
                "--max-iter",
                "80",
                "--sweep-min",
                "40",
                "--sweep-max",
                "60",
                "--sweep-step",
                "5",
                "--output-dir",
                str(out),
            ]
        )
        assert code == 0
        code = main(["eigen", "--grid-n", "65", "--output-dir", str(out)])
        assert code == 0
        blobs.append(
            tuple((out / name).read_bytes() for name in ("sweep.csv", "eigen.csv"))
        )
    same = blobs[0] == blobs[1]
    conclude(9, "byte-identical reruns", same, "sweep.csv and eigen.csv compared")
