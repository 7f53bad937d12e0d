"""Actuator temperature, tension and contraction under a sinusoidal drive.

    python scripts/tcam_response.py --amplitude 9 --duration 6.283
"""

import argparse
import math

import numpy as np

from octoarm.tcam import TcamParams, contraction_response, integrate_temperature, linearization_coefficient, tension


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--amplitude", type=float, default=9.0, help="V")
    ap.add_argument("--omega", type=float, default=1.0, help="rad/s")
    ap.add_argument("--duration", type=float, default=2 * math.pi, help="s")
    ap.add_argument("--dt", type=float, default=1e-3)
    ap.add_argument("--c-lin", type=float, default=None, help="override N/C")
    args = ap.parse_args()

    p = TcamParams()
    c_lin = linearization_coefficient(p) if args.c_lin is None else args.c_lin
    hist = integrate_temperature(p, lambda t: args.amplitude * math.sin(args.omega * t), args.duration, args.dt)
    force = tension(p, c_lin, hist.temp_excess_C)
    d = contraction_response(p, c_lin, hist.temp_excess_C, hist.dt)
    k = int(np.argmax(hist.temp_excess_C))
    print(f"c_lin            {c_lin:.6g} N/C")
    print(f"peak temperature {hist.temp_excess_C[k] + p.ambient_temp_C:.3f} C at t={hist.time_s[k]:.3f} s")
    print(f"peak tension     {force.max():.6g} N")
    print(f"peak contraction {d.max() * 1e3:.4f} mm")
    for t in np.linspace(0, hist.time_s[-1], 9):
        i = int(round(t / hist.dt))
        print(f"  t={hist.time_s[i]:6.3f} s  V={hist.voltage_V[i]:7.3f}  T={hist.temp_excess_C[i] + p.ambient_temp_C:7.3f} C"
              f"  F={force[i]:.5f} N")


if __name__ == "__main__":
    main()
