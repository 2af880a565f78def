"""Command-line harness: wires config files to the pipeline, writes reports.

Every subcommand writes `report.json` (schema 1) plus plot-ready CSV files
into --output-dir.  CSV floats use fixed 17-significant-digit formatting so
identical configs byte-reproduce their outputs.  Exit status: 0 success,
1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    TentBasis,
    build_pair,
    empirical_mu2,
    linear_majorant,
    nonexistence_threshold,
    verify_weak_inequality,
)
from .calculus import Side, frac_integral_matrix, hilfer_derivative_matrix, hilfer_power_oracle
from .config import CONFIG_DEFAULTS, load_config, spec_from_config
from .core import Grid, ProblemSpec, validate_spec
from .operators import assemble_composed, principal_eigenpair, solve_e
from .solver import solve_between

SUBCOMMANDS = ("eigen", "solve", "verify", "sweep", "convergence")

# slope of the linear majorant used for the nonexistence threshold; doubled
# until the infimum is positive (h=0 already works at 1)
MAJORANT_SLOPE = 1.0
MAJORANT_SMAX = 1e6


@dataclass(frozen=True)
class RunConfig:
    """Everything one run needs: problem data plus harness knobs."""

    spec: ProblemSpec
    subcommand: str
    tol: float
    max_iter: int
    output_dir: Path
    seed: int
    r: float
    from_super: bool
    sweep_min: float
    sweep_max: float
    sweep_step: float
    echo: dict

    def violations(self) -> list[str]:
        out = []
        if self.tol <= 0:
            out.append(f"tol must be positive (got {self.tol})")
        if self.max_iter < 1:
            out.append(f"max_iter must be at least 1 (got {self.max_iter})")
        if self.subcommand not in SUBCOMMANDS:
            out.append(f"unknown subcommand {self.subcommand!r}")
        return out


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _majorant_for(spec: ProblemSpec):
    a = MAJORANT_SLOPE
    for _ in range(60):
        try:
            return linear_majorant(spec.h, spec.nu, a, MAJORANT_SMAX)
        except ValueError:
            a *= 2.0
    raise RuntimeError("could not find a positive linear majorant even with a large slope")


def _common_pipeline(rc: RunConfig):
    op = assemble_composed(rc.spec)
    eig = principal_eigenpair(op, tol=min(rc.tol, 1e-8), max_iter=max(rc.max_iter, 5000))
    e = solve_e(op)
    maj = _majorant_for(rc.spec)
    # the threshold formula needs a positive bottom eigenvalue; fractional
    # corners can lose that discretely, which is reported, not hidden
    mu1 = (
        nonexistence_threshold(eig.lambda1, rc.spec.m.zeta_inf, maj.a)
        if eig.lambda1 > 0
        else None
    )
    return op, eig, e, maj, mu1


def _base_report(rc: RunConfig, eig, e, maj, mu1) -> dict:
    report = {
        "schema": 1,
        "version": __version__,
        "config": rc.echo,
        "lambda1": eig.lambda1,
        "e_sup": float(np.max(e)),
        "e_min_interior": float(np.min(e[1:-1])),
        "mu1": mu1,
        "majorant_a": maj.a,
        "majorant_b": maj.b,
    }
    if mu1 is None:
        report["mu1_note"] = "bottom eigenvalue is not positive at this resolution"
    return report


def _cmd_eigen(rc: RunConfig) -> tuple[int, dict]:
    op, eig, e, maj, mu1 = _common_pipeline(rc)
    report = _base_report(rc, eig, e, maj, mu1)
    report["eigen"] = {
        "lambda1": eig.lambda1,
        "iterations": eig.iterations,
        "residual": eig.residual,
        "psi1_min_interior": eig.psi1_min_interior,
        "positive_interior": eig.positive_interior,
    }
    x = rc.spec.grid.x
    write_csv(rc.output_dir / "eigen.csv", ["x", "psi1", "e"], zip(x, eig.psi1, e))
    return 0, report


def _verify_both(rc: RunConfig, op, eig, e):
    pair = build_pair(rc.spec, eig, e, rc.r)
    basis = TentBasis(rc.spec)
    sub = verify_weak_inequality(pair.phi, op, "sub", basis)
    sup = verify_weak_inequality(pair.xi, op, "super", basis)
    return pair, sub, sup


def _verify_json(rep) -> dict:
    return {
        "side": rep.side,
        "verdict": rep.verdict,
        "worst_margin": rep.worst_margin,
        "worst_node": rep.worst_node,
        "tol_margin": rep.tol_margin,
    }


def _cmd_verify(rc: RunConfig) -> tuple[int, dict]:
    op, eig, e, maj, mu1 = _common_pipeline(rc)
    pair, sub, sup = _verify_both(rc, op, eig, e)
    report = _base_report(rc, eig, e, maj, mu1)
    report["zeta"] = pair.zeta
    report["verify"] = [_verify_json(sub), _verify_json(sup)]
    x = rc.spec.grid.x[1:-1]
    write_csv(
        rc.output_dir / "verify_sub.csv",
        ["x", "u", "margin"],
        zip(x, pair.phi[1:-1], sub.margins),
    )
    write_csv(
        rc.output_dir / "verify_super.csv",
        ["x", "u", "margin"],
        zip(x, pair.xi[1:-1], sup.margins),
    )
    return 0, report


def _solve_json(res) -> dict:
    return {
        "converged": bool(res.converged),
        "iterations": res.iterations,
        "final_residual": res.final_residual,
        "residual_history": list(res.residual_history),
        "sandwich_ok": bool(res.sandwich_ok),
        "energy_final": res.energy_final,
        "kirchhoff_coeff_final": res.kirchhoff_coeff_final,
        "positive": bool(res.positive),
        "projection_last10": res.projection_last10,
        "damped_steps": res.damped_steps,
        "override": bool(res.override),
        "from_super": bool(res.from_super),
    }


def _cmd_solve(rc: RunConfig) -> tuple[int, dict]:
    op, eig, e, maj, mu1 = _common_pipeline(rc)
    pair, sub, sup = _verify_both(rc, op, eig, e)
    verified = sub.passed and sup.passed
    res = solve_between(
        pair,
        rc.spec,
        op,
        tol=rc.tol,
        max_iter=rc.max_iter,
        from_super=rc.from_super,
        verified=verified,
    )
    report = _base_report(rc, eig, e, maj, mu1)
    report["zeta"] = pair.zeta
    report["verify"] = [_verify_json(sub), _verify_json(sup)]
    report["solve"] = _solve_json(res)
    x = rc.spec.grid.x
    write_csv(
        rc.output_dir / "solve.csv",
        ["x", "u", "phi", "xi"],
        zip(x, res.u, pair.phi, pair.xi),
    )
    return (0 if res.converged else 2), report


def _cmd_sweep(rc: RunConfig) -> tuple[int, dict]:
    op, eig, e, maj, mu1 = _common_pipeline(rc)
    mu2 = empirical_mu2(rc.spec, op, eig, e, rc.r)
    rows = []
    lam = rc.sweep_min
    while lam <= rc.sweep_max + 1e-12:
        spec_l = dataclasses.replace(rc.spec, lam=lam)
        op_l = dataclasses.replace(op, spec=spec_l)
        pair = build_pair(spec_l, eig, e, rc.r)
        res = solve_between(pair, spec_l, op_l, tol=rc.tol, max_iter=rc.max_iter)
        rows.append((lam, res.converged, res.final_residual, res.energy_final, res.positive))
        lam = round(lam + rc.sweep_step, 12)
    report = _base_report(rc, eig, e, maj, mu1)
    report["empirical_mu2"] = mu2
    report["sweep"] = {
        "lambda_min": rc.sweep_min,
        "lambda_max": rc.sweep_max,
        "lambda_step": rc.sweep_step,
        "runs": len(rows),
    }
    write_csv(
        rc.output_dir / "sweep.csv",
        ["lambda", "converged", "residual", "energy", "positive"],
        rows,
    )
    return 0, report


CONVERGENCE_NS = (64, 128, 256, 512)
CONVERGENCE_DELTAS = (1.5, 2.5)


def _cmd_convergence(rc: RunConfig) -> tuple[int, dict]:
    spec = rc.spec
    rows = []
    cases: dict[tuple[str, str], list[float]] = {}
    for n in CONVERGENCE_NS:
        grid = Grid.make(spec.grid.T, n, spec.psi)
        collar = max(2, int(np.ceil(0.05 * n)))
        hil = hilfer_derivative_matrix(grid, spec.psi, spec.order, Side.LEFT)
        u = grid.u
        for delta in CONVERGENCE_DELTAS:
            f = (u - u[0]) ** (delta - 1.0)
            want = hilfer_power_oracle(spec.order, delta, spec.psi, grid)
            err = float(np.abs(hil.entries @ f - want)[collar:-1].max())
            cases.setdefault(("hilfer_left", f"power_{delta}"), []).append(err)
        intm = frac_integral_matrix(grid, spec.psi, spec.order.alpha, Side.LEFT)
        ones = np.ones(n)
        want = (u - u[0]) ** spec.order.alpha / math.gamma(spec.order.alpha + 1.0)
        err = float(np.abs(intm.entries @ ones - want)[1:].max())
        cases.setdefault(("int_left", "one"), []).append(err)
    for (operator, fname), errs in sorted(cases.items()):
        prev = None
        for n, err in zip(CONVERGENCE_NS, errs):
            rate = "" if prev is None else _fmt(np.log2(prev / err))
            rows.append((n, operator, fname, _fmt(err), rate))
            prev = err
    lines = [",".join(["n", "operator", "test_function", "sup_error", "rate"])]
    for n, operator, fname, err, rate in rows:
        lines.append(f"{n},{operator},{fname},{err},{rate}")
    (rc.output_dir / "convergence.csv").write_text("\n".join(lines) + "\n")
    _, eig, e, maj, mu1 = _common_pipeline(rc)
    report = _base_report(rc, eig, e, maj, mu1)
    report["convergence"] = {f"{op_}/{fn}": errs for (op_, fn), errs in sorted(cases.items())}
    return 0, report


_COMMANDS = {
    "eigen": _cmd_eigen,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "convergence": _cmd_convergence,
}


def run(rc: RunConfig) -> int:
    """Execute the requested pipeline, writing report.json and CSV files."""
    bad = rc.violations() + validate_spec(rc.spec)
    if rc.subcommand != "convergence" and not (1.0 / (1.0 + rc.spec.nu) < rc.r < 1.0):
        bad.append(
            f"r must lie in (1/(1+nu), 1) = ({1.0 / (1.0 + rc.spec.nu):.6g}, 1), got {rc.r}"
        )
    if bad:
        for msg in bad:
            print(f"error: {msg}", file=sys.stderr)
        return 1
    rc.output_dir.mkdir(parents=True, exist_ok=True)
    try:
        status, report = _COMMANDS[rc.subcommand](rc)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    with open(rc.output_dir / "report.json", "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="psifrac",
        description="Fractional Kirchhoff sub/supersolution toolbox",
    )
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name, help=f"run the {name} pipeline")
        sp.add_argument("--config", type=Path, default=None, help="key = value config file")
        sp.add_argument("--output-dir", type=Path, required=True)
        sp.add_argument("--seed", type=int, default=0)
        for key, (typ, _) in CONFIG_DEFAULTS.items():
            flag = "--" + key.replace("_", "-")
            sp.add_argument(flag, dest=f"cfg_{key}", type=typ, default=None)
        if name == "solve":
            sp.add_argument("--from-super", action="store_true")
        if name == "sweep":
            sp.add_argument("--sweep-min", type=float, default=0.5)
            sp.add_argument("--sweep-max", type=float, default=60.0)
            sp.add_argument("--sweep-step", type=float, default=0.5)
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = load_config(args.config)
    for key in CONFIG_DEFAULTS:
        override = getattr(args, f"cfg_{key}", None)
        if override is not None:
            values[key] = override
    spec = spec_from_config(values)
    echo = dict(sorted(values.items()))
    echo["seed"] = args.seed
    echo["subcommand"] = args.subcommand
    return RunConfig(
        spec=spec,
        subcommand=args.subcommand,
        tol=values["tol"],
        max_iter=values["max_iter"],
        output_dir=args.output_dir,
        seed=args.seed,
        r=values["r"],
        from_super=getattr(args, "from_super", False),
        sweep_min=getattr(args, "sweep_min", 0.5),
        sweep_max=getattr(args, "sweep_max", 60.0),
        sweep_step=getattr(args, "sweep_step", 0.5),
        echo=echo,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rc = config_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(rc)


if __name__ == "__main__":
    sys.exit(main())
