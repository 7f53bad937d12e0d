"""Tension sweeps at two free-stream speeds; prints tip height and tilt per step.

    python scripts/run_case_study.py --out results/case_study
"""

import argparse
import os
from dataclasses import replace

from octoarm import ArmScenario, FluidParams, tension_sweep
from octoarm.report import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/case_study")
    ap.add_argument("--speeds", type=float, nargs="+", default=[0.2, 0.4])
    ap.add_argument("--grid", type=int, default=201)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    base = ArmScenario()
    base = replace(base, solver=replace(base.solver, node_count=args.grid))
    rows = []
    for v in args.speeds:
        result = tension_sweep(replace(base, fluid=FluidParams(free_stream_mps=v)), (0.0, 20.0), 0.5)
        for t, sol in result:
            rows.append((v, t, *sol.tip_position_m, sol.tilt_deg_at_L, sol.theta_deg_at_L, sol.diagnostics.converged))
        last = result.solutions[-1]
        print(f"v={v:g} m/s: tip height at 20 N {last.tip_height_m:.4f} m, tilt(L) {last.tilt_deg_at_L:.4f} deg")
    path = os.path.join(args.out, "tip_vs_tension.csv")
    write_csv(path, ["v_mps", "T11_N", "tip_x_m", "tip_y_m", "tilt_deg_L", "theta_deg_L", "converged"], rows, "n/a")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
