"""Command line surface: build operator files, run verification suites, diagnostics.

Exit codes: 0 on success, 1 when a verification check fails its tolerance,
2 on configuration or usage errors.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .basis import FuzzyConfig, basis_of
from .convergence import (
    SCHEDULE_NAMES,
    coordinate_coefficients,
    k_schedule,
    product_convergence_diagnostic,
    write_csv,
    x_convergence_diagnostic,
)
from .harmonics import verify_harmonics
from .operators import build_angular_momentum, build_casimir, build_position, build_projector, verify_algebra
from .realization import verify_isomorphism


def _add_config_flags(p):
    p.add_argument("--d", type=int, required=True, help="ambient dimension D (minimum 3)")
    p.add_argument("--lambda", dest="lam", type=int, required=True, help="cutoff level")
    p.add_argument("--k", type=float, default=None, help="well stiffness; overrides --schedule")
    p.add_argument(
        "--schedule",
        choices=SCHEDULE_NAMES,
        default="consistency",
        help="stiffness schedule used when --k is absent (default: consistency)",
    )
    p.add_argument("--alpha", type=float, default=2.0, help="exponent for the power schedule (>= 2)")


def _config(args):
    k = args.k if args.k is not None else k_schedule(args.schedule, args.d, args.lam, alpha=args.alpha)
    return FuzzyConfig(D=args.d, cutoff=args.lam, k=k)


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_build(args):
    t0 = time.time()
    cfg = _config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def emit(name, op):
        path = out / f"{name}.json"
        _write_json(path, op.to_json_obj())
        written.append(str(path))

    _write_json(out / "basis.json", basis_of(cfg).to_json_obj())
    written.append(str(out / "basis.json"))
    for h in range(1, cfg.D + 1):
        for j in range(h + 1, cfg.D + 1):
            emit(f"L_{h}_{j}", build_angular_momentum(cfg, h, j))
    for h in range(1, cfg.D + 1):
        emit(f"x_{h}", build_position(cfg, h))
    for p in range(2, cfg.D + 1):
        emit(f"C_{p}", build_casimir(cfg, p))
    emit("P_top", build_projector(cfg))
    for l in range(cfg.cutoff + 1):
        emit(f"P_level_{l}", build_projector(cfg, p=cfg.D, value=l))

    manifest = {
        "command": "build",
        "config": {"D": cfg.D, "cutoff": cfg.cutoff, "k": cfg.k, "dimension": len(basis_of(cfg))},
        "versions": {"fuzzyd": __version__, "python": platform.python_version(), "numpy": np.__version__},
        "timing_seconds": round(time.time() - t0, 6),
        "outputs": sorted(written),
    }
    _write_json(out / "manifest.json", manifest)
    missing = [p for p in written if not Path(p).exists()]
    if missing:
        print(f"error: missing outputs {missing}", file=sys.stderr)
        return 2
    print(f"wrote {len(written) + 1} files to {out} (dimension {manifest['config']['dimension']})")
    return 0


def cmd_verify(args):
    cfg = _config(args)
    reports = []
    if args.suite in ("algebra", "all"):
        reports.append(
            verify_algebra(
                cfg,
                tol_degree2=args.tol_degree2,
                tol_interior=args.tol_interior,
                tol_nilpotent=args.tol_nilpotent,
            )
        )
    if args.suite in ("harmonics", "all"):
        level_max = min(cfg.cutoff + 1, 4)
        reports.append(verify_harmonics(cfg.D, level_max, tol_elements=args.tol_elements))
    if args.suite in ("isomorphism", "all"):
        reports.append(verify_isomorphism(cfg, tol_iso=args.tol_iso))
    for rep in reports:
        print(rep.to_text())
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for i, rep in enumerate(reports):
            stem = ["algebra", "harmonics", "isomorphism"][i] if args.suite == "all" else args.suite
            rep.save(json_path=out / f"report_{stem}.json", csv_path=out / f"report_{stem}.csv")
    return 0 if all(rep.all_passed for rep in reports) else 1


def cmd_converge(args):
    if args.lam_max < 2:
        print("error: --lambda-max must be at least 2", file=sys.stderr)
        return 2
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cutoffs = range(1, args.lam_max + 1)
    if args.mode == "x":
        rows = x_convergence_diagnostic(args.d, cutoffs, args.schedule, alpha=args.alpha)
        path = out / "x_convergence.csv"
    else:
        coeffs = coordinate_coefficients(args.d, 3)
        rows = product_convergence_diagnostic(coeffs, coeffs, args.d, cutoffs, args.schedule, alpha=args.alpha)
        path = out / "product_convergence.csv"
    write_csv(path, args.d, rows)
    for row in rows:
        print(row)
    print(f"wrote {path}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="fuzzyd",
        description="Build and verify finite-dimensional fuzzy hypersphere operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write all operators of one configuration to JSON")
    _add_config_flags(b)
    b.add_argument("--out", required=True, help="output directory")

    v = sub.add_parser("verify", help="run a verification suite and report pass/fail")
    _add_config_flags(v)
    v.add_argument("--suite", choices=("algebra", "harmonics", "isomorphism", "all"), default="all")
    v.add_argument("--out", default=None, help="optional directory for JSON/CSV reports")
    v.add_argument("--tol-degree2", dest="tol_degree2", type=float, default=1e-12, help="tolerance for degree-2 operator identities (default 1e-12)")
    v.add_argument("--tol-interior", dest="tol_interior", type=float, default=1e-13, help="tolerance for the interior commutator identity (default 1e-13)")
    v.add_argument("--tol-nilpotent", dest="tol_nilpotent", type=float, default=1e-9, help="tolerance for high-power nilpotency (default 1e-9)")
    v.add_argument("--tol-elements", dest="tol_elements", type=float, default=1e-10, help="tolerance for recursion-vs-quadrature elements (default 1e-10)")
    v.add_argument("--tol-iso", dest="tol_iso", type=float, default=1e-10, help="tolerance for the realization match (default 1e-10)")

    c = sub.add_parser("converge", help="emit commutative-limit diagnostic tables")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--lambda-max", dest="lam_max", type=int, required=True)
    c.add_argument("--schedule", choices=SCHEDULE_NAMES, default="strong-x")
    c.add_argument("--alpha", type=float, default=2.0)
    c.add_argument("--mode", choices=("x", "product"), default="x")
    c.add_argument("--out", required=True)

    args = parser.parse_args(argv)
    try:
        if args.command == "build":
            return cmd_build(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_converge(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
