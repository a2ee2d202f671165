#!/usr/bin/env python3
"""Smoke test for the platelab_py extension module.

Builds the cdylib with cargo (unless PLATELAB_SKIP_BUILD=1 and a build
already exists), places it on the import path under the proper module name,
and exercises the main surfaces: spectrum margins, resolvent scan, midpoint
simulation with the energy ledger, and the multiplier identities.

Usage: python3 python/smoke.py
"""

import math
import os
import shutil
import subprocess
import sys
import tempfile

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

_failures = []


def check(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}" + (f" ({detail})" if detail else ""))
    if not ok:
        _failures.append(name)


def build_module():
    if os.environ.get("PLATELAB_SKIP_BUILD") != "1":
        subprocess.run(
            [
                "cargo",
                "build",
                "--release",
                "-p",
                "platelab-py",
                "--features",
                "extension-module",
            ],
            cwd=REPO_ROOT,
            check=True,
        )
    candidates = [
        os.path.join(REPO_ROOT, "target", "release", "libplatelab_py.so"),
        os.path.join(REPO_ROOT, "target", "release", "libplatelab_py.dylib"),
        os.path.join(REPO_ROOT, "target", "debug", "libplatelab_py.so"),
    ]
    built = next((c for c in candidates if os.path.exists(c)), None)
    if built is None:
        print("error: no built cdylib found; run cargo build -p platelab-py "
              "--features extension-module")
        sys.exit(1)
    stage = tempfile.mkdtemp(prefix="platelab_py_")
    shutil.copy(built, os.path.join(stage, "platelab_py.so"))
    sys.path.insert(0, stage)


def main():
    build_module()
    import platelab_py as pl

    lab = pl.Lab(rho=1.0)
    check("construct default lab", lab.n_dof == 46, f"n_dof = {lab.n_dof}")

    omega1 = lab.fundamental_frequency()
    check(
        "fundamental frequency near clamped-beam value",
        abs(omega1 - 4.730040744862704**2) < 1e-2 * omega1,
        f"omega1 = {omega1:.6f}",
    )

    spec = lab.spectrum()
    check(
        "damped spectrum in the open left half-plane",
        spec["spectral_abscissa"] < 0.0
        and spec["imag_axis_margin"] > 0.0
        and spec["zero_margin"] > 0.0,
        f"abscissa = {spec['spectral_abscissa']:.4f}",
    )
    check(
        "eigenvalue residual bound within contract",
        spec["residual_bound"] <= 1e-8,
        f"{spec['residual_bound']:.3e}",
    )

    scan = lab.scan(lambda_min=-60.0, lambda_max=60.0, points=41)
    check(
        "resolvent finite along the imaginary axis",
        len(scan["flagged"]) == 0 and math.isfinite(scan["sup_norm"]),
        f"sup = {scan['sup_norm']:.4e}",
    )

    run = lab.simulate(steps=2000, init="random")
    e0, eT = run["energy"][0], run["energy"][-1]
    check("energy decays under damping", eT < e0, f"E(T)/E(0) = {eT / e0:.3e}")
    check(
        "dissipation ledger closes to roundoff",
        run["max_dissipation_residual"] <= 1e-11 * e0,
        f"{run['max_dissipation_residual']:.3e}",
    )

    undamped = pl.Lab(rho=0.0)
    run0 = undamped.simulate(steps=2000, init="bump")
    drift = abs(run0["energy"][-1] - run0["energy"][0])
    check(
        "energy conserved without damping",
        drift <= 1e-10 * run0["energy"][0],
        f"drift = {drift:.3e}",
    )
    check("no decay fit for the conservative run", run0["kappa"] is None)

    residual, scale = pl.rellich_residual([0.3, -0.2, 0.9, 0.1, -0.4], 0.2, 1.4)
    check(
        "multiplier identity holds on polynomial data",
        residual <= 1e-11 * scale,
        f"residual = {residual:.3e}, scale = {scale:.3e}",
    )
    residual, scale = pl.rellich_shifted_residual([0.1, 0.7, -0.3, 0.2], 10.0, -1.0, 0.8)
    check("shifted identity holds", residual <= 1e-11 * scale)
    residual, _ = pl.boundary_identity_residual([0.25, -1.0, 1.0], 0.5, 1.0)
    check("clamped-endpoint identity holds", residual <= 1e-12)

    sector = pl.sector_check(n_elements=16, rho=1.0, points=41)
    check(
        "whole-domain damped operator is sectorial and stable",
        sector["spectral_abscissa"] < 0.0
        and sector["max_aperture"] > 0.0
        and math.isfinite(sector["lambda_resolvent_sup"]),
        f"abscissa = {sector['spectral_abscissa']:.4f}, "
        f"aperture = {sector['max_aperture']:.4f}",
    )

    try:
        pl.Lab(interface_a=0.9, interface_b=0.2)
        check("invalid geometry rejected", False)
    except ValueError:
        check("invalid geometry rejected", True)

    print()
    if _failures:
        print(f"smoke test FAILED: {len(_failures)} check(s): {', '.join(_failures)}")
        sys.exit(1)
    print("smoke test passed")


if __name__ == "__main__":
    main()
