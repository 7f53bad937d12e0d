"""Command line entry point: ``octoarm {simulate-tcam,solve,sweep,validate}``.

Exit codes: 0 when everything converged, 2 for flagged or partial results,
1 for invalid input.
"""

import argparse
import logging
import math
import os
import sys

import numpy as np

from .errors import IntegrationDiverged, ModelDomainError, SingularConstraintError
from .report import RunReport, write_csv, write_json
from .scenario import ScenarioError, ScenarioFile, parse_scenario
from .solver import solve_static, tension_sweep
from .tcam import contraction_response, integrate_temperature, tension

log = logging.getLogger("octoarm")

EXIT_OK, EXIT_INPUT, EXIT_FLAGGED = 0, 1, 2

ARM_HEADER = [
    "s_m", "x_m", "y_m", "theta_deg", "alpha_deg", "tilt_deg",
    "nu", "eta", "mu_per_m", "beta", "N_Pa", "H_Pa", "M_Pa_per_m", "detF",
]


def arm_rows(sol):
    c, st, tr = sol.configuration, sol.strain_field, sol.tractions
    cols = [
        c.s, c.position[:, 0], c.position[:, 1], np.degrees(c.theta), np.degrees(c.alpha),
        np.degrees(c.tilt), st.nu, st.eta, st.mu, st.beta, tr.normal, tr.shear, tr.bending, sol.det_f,
    ]
    return zip(*cols)


def arm_filename(t11):
    return f"arm_T{t11:g}.csv"


def _diag(sol):
    d = sol.diagnostics
    return {
        "iterations": d.iterations,
        "converged": d.converged,
        "final_residual": d.final_residual,
        "final_strain_change": d.final_strain_change,
        "beta_residual": d.beta_residual,
        "max_abs_detF_minus_1": float(np.abs(sol.det_f - 1.0).max()),
    }


def cmd_validate(scen, args, report):
    c_lin, source = scen.tcam.c_lin()
    arm = scen.arm()
    print(f"scenario ok, input hash {report.input_hash}")
    print(f"  grid: {arm.geometry.node_count} nodes over {arm.geometry.length_m:g} m")
    print(f"  muscles: {len(arm.layout.segments)} segment(s)")
    print(f"  c_lin: {c_lin:.6g} N/C ({source})")
    print(f"  sweep: {scen.sweep.t11_min:g}..{scen.sweep.t11_max:g} N step {scen.sweep.step:g}")
    return EXIT_OK


def cmd_simulate_tcam(scen, args, report):
    tc = scen.tcam
    wf = tc.waveform
    c_lin, source = tc.c_lin()
    hist = integrate_temperature(tc.params, wf.voltage, wf.duration_s, wf.dt_s)
    force = tension(tc.params, c_lin, hist.temp_excess_C)
    contraction = contraction_response(tc.params, c_lin, hist.temp_excess_C, hist.dt)
    rows = zip(hist.time_s, hist.voltage_V, hist.temp_excess_C,
               hist.temp_excess_C + tc.params.ambient_temp_C, force, contraction)
    path = os.path.join(args.out, "tcam_timeseries.csv")
    n = write_csv(path, ["time_s", "voltage_V", "temp_excess_C", "temp_C", "tension_N", "contraction_m"],
                  rows, report.input_hash)
    report.add_file(path, n)
    k = int(np.argmax(hist.temp_excess_C))
    summary = {
        "c_lin_N_per_C": c_lin,
        "c_lin_source": source,
        "peak_temp_excess_C": float(hist.temp_excess_C[k]),
        "peak_temp_C": float(hist.temp_excess_C[k] + tc.params.ambient_temp_C),
        "peak_time_s": float(hist.time_s[k]),
        "peak_tension_N": float(force.max()),
        "peak_contraction_m": float(contraction.max()),
        "window_s": float(hist.time_s[-1]),
    }
    path = os.path.join(args.out, "tcam_summary.json")
    write_json(path, summary)
    report.add_file(path)
    print(f"peak temperature {summary['peak_temp_C']:.4f} C, peak tension {summary['peak_tension_N']:.6g} N")
    return EXIT_OK


def _write_arm(sol, args, report):
    path = os.path.join(args.out, arm_filename(sol.tension_N))
    report.add_file(path, write_csv(path, ARM_HEADER, arm_rows(sol), report.input_hash))


def cmd_solve(scen, args, report):
    t11 = scen.sweep.t11_max if args.t11 is None else args.t11
    if not (math.isfinite(t11) and t11 >= 0):
        raise ScenarioError("--t11 must be a finite tension >= 0", key="--t11")
    sol = solve_static(scen.arm(), t11)
    _write_arm(sol, args, report)
    path = os.path.join(args.out, f"arm_T{t11:g}_summary.json")
    write_json(path, {"T11_N": t11, "T12_N": scen.sweep.t12, **sol.tip_summary, **_diag(sol)})
    report.add_file(path)
    x, y = sol.tip_position_m
    print(f"T11={t11:g} N: tip ({x:.6f}, {y:.6f}) m, {sol.diagnostics.iterations} iterations")
    if not sol.diagnostics.converged:
        report.status = "flagged"
        report.messages.append(f"T11={t11:g} N did not converge")
        return EXIT_FLAGGED
    return EXIT_OK


def _profile_columns(result, wanted):
    chosen = []
    for t in wanted:
        hit = [sol for tt, sol in result if abs(tt - t) < 1e-9]
        if hit:
            chosen.append(hit[0])
        else:
            log.warning("profile tension %g N is not on the sweep grid", t)
    return chosen


def cmd_sweep(scen, args, report):
    sw = scen.sweep
    result = tension_sweep(scen.arm(), (sw.t11_min, sw.t11_max), sw.step, strict=args.strict,
                           max_workers=args.workers)
    for _, sol in result:
        _write_arm(sol, args, report)

    def emit(name, header, rows):
        path = os.path.join(args.out, name)
        report.add_file(path, write_csv(path, header, rows, report.input_hash))

    emit("sweep_summary.csv",
         ["T11_N", "tip_x_m", "tip_y_m", "tilt_deg_L", "theta_deg_L", "iterations", "residual", "converged"],
         [(t, *sol.tip_position_m, sol.tilt_deg_at_L, sol.theta_deg_at_L, sol.diagnostics.iterations,
           sol.diagnostics.final_residual, sol.diagnostics.converged) for t, sol in result])
    emit("tilt_vs_tension.csv", ["T11_N", "tilt_deg_L"], [(t, sol.tilt_deg_at_L) for t, sol in result])
    emit("theta_vs_tension.csv", ["T11_N", "theta_deg_L"], [(t, sol.theta_deg_at_L) for t, sol in result])

    profiles = _profile_columns(result, sw.profile_tensions)
    if profiles:
        s = profiles[0].configuration.s
        labels = [f"T{p.tension_N:g}" for p in profiles]
        emit("tilt_profiles.csv", ["s_m"] + [f"tilt_deg_{lb}" for lb in labels],
             zip(s, *[np.degrees(p.configuration.tilt) for p in profiles]))
        emit("beta_profiles.csv", ["s_m"] + [f"beta_{lb}" for lb in labels],
             zip(s, *[p.strain_field.beta for p in profiles]))
        emit("traction_profiles.csv", ["T11_N", "s_m", "N_Pa", "H_Pa", "M_Pa_per_m"],
             [(p.tension_N, *row) for p in profiles
              for row in zip(s, p.tractions.normal, p.tractions.shear, p.tractions.bending)])

    bad = [t for t, sol in result if not sol.diagnostics.converged]
    print(f"{len(result)} tensions solved, {len(bad)} not converged")
    if result.partial or bad:
        report.status = "partial" if result.partial and args.strict else "flagged"
        report.messages.extend(f"T11={t:g} N did not converge" for t in bad)
        return EXIT_FLAGGED
    return EXIT_OK


COMMANDS = {
    "simulate-tcam": (cmd_simulate_tcam, "integrate the actuator under the scenario waveform"),
    "solve": (cmd_solve, "static equilibrium for one muscle tension"),
    "sweep": (cmd_sweep, "equilibria over the scenario tension range"),
    "validate": (cmd_validate, "check a scenario file and print the resolved setup"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("scenario", nargs="?", help="scenario JSON file (defaults apply if omitted)")
    common.add_argument("--out", default="out", metavar="DIR", help="output directory")
    common.add_argument("--strict", action="store_true", help="stop a sweep at the first failed step")
    common.add_argument("--grid", type=int, metavar="N", help="override the node count")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="octoarm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "solve":
            p.add_argument("--t11", type=float, help="muscle tension in N (default: sweep maximum)")
        if name == "sweep":
            p.add_argument("--workers", type=int, default=None, help="threads for cold-start sweeps")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    func = COMMANDS[args.command][0]
    try:
        scen = parse_scenario(args.scenario) if args.scenario else ScenarioFile()
        if args.grid is not None:
            if args.grid < 5:
                raise ScenarioError("--grid must be >= 5", key="--grid")
            scen = scen.with_grid(args.grid)
        report = RunReport(args.command, scen.resolved(), scen.content_hash())
        report.add_input(args.scenario)
        if args.command != "validate":
            os.makedirs(args.out, exist_ok=True)
        code = func(scen, args, report)
    except (ScenarioError, ModelDomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (IntegrationDiverged, SingularConstraintError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FLAGGED
    if args.command != "validate":
        report.write(args.out, f"run_report_{args.command.replace('-', '_')}.json")
    return code


if __name__ == "__main__":
    sys.exit(main())
