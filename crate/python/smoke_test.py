#!/usr/bin/env python3
"""Smoke test for the nakarate_py extension module.

Builds the cdylib if needed, stages it as an importable module next to
this script, and exercises the main entry points against known values.

    python3 python/smoke_test.py
"""

import math
import pathlib
import shutil
import subprocess
import sys

HERE = pathlib.Path(__file__).resolve().parent
ROOT = HERE.parent


def stage_module() -> None:
    lib = ROOT / "target" / "release" / "libnakarate_py.so"
    if not lib.exists():
        print("building nakarate-py (release) ...")
        subprocess.run(
            ["cargo", "build", "-p", "nakarate-py", "--release"],
            cwd=ROOT,
            check=True,
        )
    staged = HERE / "nakarate_py.so"
    if not staged.exists() or lib.stat().st_mtime > staged.stat().st_mtime:
        shutil.copy2(lib, staged)
    sys.path.insert(0, str(HERE))


checks = 0


def check(name: str, got: float, want: float, tol: float) -> None:
    global checks
    if not math.isfinite(got) or abs(got - want) > tol:
        print(f"FAIL {name}: got {got!r}, want {want!r} within {tol}")
        sys.exit(1)
    checks += 1
    print(f"ok {name}: {got:.12g}")


def main() -> None:
    stage_module()
    import nakarate_py as nk

    # special functions
    check("erf(1/sqrt(2))", nk.erf(1 / math.sqrt(2)), 0.6826894921370859, 1e-12)
    check("log_gamma(10)", nk.log_gamma(10.0), math.log(362880.0), 1e-12)
    check("P(1, 1)", nk.lower_regularized_gamma(1.0, 1.0), 1 - math.exp(-1), 1e-13)

    # kernel anchors: product of two unit exponentials at 1
    value, err, backend = nk.meijer_pdf_kernel(1.0, [1.0, 1.0])
    check("pdf kernel [1,1] at 1", value, 0.2277877454990669, 1e-8)
    assert backend == "contour_quadrature", backend
    value, err, backend = nk.meijer_cdf_kernel(1.0, [1.0, 1.0])
    check("cdf kernel [1,1] at 1", value, 0.7202682363669551, 1e-8)

    # M = 1 identity: x^m e^-x through the residue path
    value, _, backend = nk.meijer_pdf_kernel(2.0, [1.5])
    check("pdf kernel [1.5] at 2", value, 2.0**1.5 * math.exp(-2.0), 1e-12)
    assert backend == "residue_series", backend

    # Laplace transform of 1 + Exp(1) at s = -1: e^-1 / 2
    check("laplace_y(-1)", nk.laplace_y(-1.0, [1.0], [1.0]), math.exp(-1) / 2, 1e-8)

    # closed-form Rayleigh outage: 1 - exp(-1/10)
    out = nk.single_hop_outage([(1.0, 1.0, 10.0)], 1.0, 1.0, 1.0)
    check("single-hop outage", out.probability, 1 - math.exp(-0.1), 1e-12)

    # the simulator agrees with the closed form
    sim = nk.simulate_single_hop(
        [(1.0, 1.0, 10.0)], 1.0, 1.0, 1.0, seed=7, n_frames=400_000
    )
    check(
        "simulated outage",
        sim.empirical_outage,
        out.probability,
        4 * sim.stderr_outage,
    )
    rerun = nk.simulate_single_hop(
        [(1.0, 1.0, 10.0)], 1.0, 1.0, 1.0, seed=7, n_frames=400_000
    )
    assert rerun.empirical_outage == sim.empirical_outage, "not deterministic"

    # two-hop bottleneck: closed form vs simulation
    hops = [[(1.0, 1.0, 7.0), (1.7, 0.9, 5.0)], [(2.5, 1.2, 6.0)]]
    route = nk.multi_hop_outage(hops, 1.0, 1.0, 1.5)
    combined = 1.0
    for p in route.per_hop:
        combined *= 1.0 - p
    check("multi-hop recombination", route.probability, 1.0 - combined, 1e-12)
    sim2 = nk.simulate_multi_hop(hops, 1.0, 1.0, 1.5, seed=11, n_frames=400_000)
    check(
        "multi-hop simulated",
        sim2.empirical_outage,
        route.probability,
        4 * sim2.stderr_outage + 1e-9,
    )

    # AMC pmf sums to one
    support, probs = nk.amc_pmf([(1.0, 1.0, 25.0), (2.0, 1.0, 35.0)], 1.0, 1.0)
    check("amc pmf total", sum(probs), 1.0, 1e-10)
    assert support[0] == 0.0

    wp = nk.rate_window_probability(
        [(1.0, 1.0, 25.0), (2.0, 1.0, 35.0)], 1.0, 1.0, 1.0, 5.0, 50
    )
    assert 0.0 <= wp <= 1.0

    # allocator: two users, four subcarriers
    users = [(6e3, 3.0, 0.6, 50), (6e3, 3.0, 0.6, 50)]
    gains = [
        [(1.0, 2.0), (1.0, 1.0), (2.0, 1.5), (1.0, 0.5)],
        [(1.0, 0.8), (2.5, 2.2), (1.0, 1.1), (1.5, 1.8)],
    ]
    plan = nk.sca_out_allocate(users, gains, 1e-6, 4e3, 1.0)
    assert all(a in (0, 1) for a in plan.assignment), plan.assignment
    assert abs(sum(plan.powers) - 1.0) < 1e-12
    assert plan.feasible, plan.slack
    checks_before = checks
    check("allocator objective positive", float(plan.objective > 0.0), 1.0, 0.0)
    assert checks == checks_before + 1

    print(f"\nall {checks} smoke checks passed")


if __name__ == "__main__":
    main()
