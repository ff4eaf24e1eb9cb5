"""Two-level response to 2 pi envelope-area pulses as the drive strength grows.

For each gamma_RF0 = F0 d / (hbar omega0) the sin^2 pulse duration is set
so that the envelope area is 2 pi.  The table compares the full (non-RWA)
solution with the area prediction w = -cos(theta(t)): final inversion and
the largest deviation during the pulse.

Usage::

    python scripts/rabi_breakdown.py [--hw 1.5] [--d 1.0] [--csv out.csv]
"""

import argparse
import math

import numpy as np

from blochwave.core import HBAR, PulseSpec, sine_square_duration
from blochwave.io import write_csv
from blochwave.resonant import TwoLevelSystem, envelope_area, solve_two_level


def two_pi_pulse(gamma, hw, d, cep=0.0):
    F0 = gamma * hw / d
    total = 4 * math.pi * HBAR / (F0 * d)
    return PulseSpec(F0, hw, envelope="sine-square", fwhm=total / sine_square_duration(1.0), cep=cep)


def main(argv=None):
    ap = argparse.ArgumentParser(description="Rabi-regime breakdown scan")
    ap.add_argument("--hw", type=float, default=1.5, help="photon energy = transition energy, eV")
    ap.add_argument("--d", type=float, default=1.0, help="dipole length, Å")
    ap.add_argument("--csv", help="optional output table")
    args = ap.parse_args(argv)

    system = TwoLevelSystem(0.0, args.hw, args.d)
    rows = []
    print(f"{'gamma_RF0':>10} {'cycles':>8} {'w_final':>12} {'max|w+cos(theta)|':>18}")
    for gamma in np.geomspace(0.02, 1.0, 12):
        p = two_pi_pulse(gamma, args.hw, args.d)
        tr = solve_two_level(system, p, samples=4001)
        dev = float(np.max(np.abs(tr.w + np.cos(envelope_area(p, args.d, tr.t)))))
        rows.append([gamma, p.n_cycles, tr.w[-1], dev])
        print(f"{gamma:10.4f} {p.n_cycles:8.2f} {tr.w[-1]:12.6f} {dev:18.4f}")
    if args.csv:
        write_csv(args.csv, {"gamma_RF0": "", "cycles": "", "w_final": "", "max_deviation": ""}, rows,
                  config_sha="script:rabi_breakdown", comment=f"hw = {args.hw} eV, d = {args.d} Å")


if __name__ == "__main__":
    main()
