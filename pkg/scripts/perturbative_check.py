"""First-order and third-order amplitude series against the two-band TDSE.

Prints, for fields up to the first channel closing of the Kane model, the
k-averaged conduction population from the exact propagation and the
relative errors of the truncated series (populations and amplitudes).

Usage::

    python scripts/perturbative_check.py [--points 12] [--nk 32]
"""

import argparse

import numpy as np

from blochwave.core import KGrid, PulseSpec
from blochwave.interband import Tolerances, TwoBandModel, dyson_series, propagate_two_band
from blochwave.regimes import ponderomotive_ema


def main(argv=None):
    ap = argparse.ArgumentParser(description="perturbative series versus TDSE")
    ap.add_argument("--points", type=int, default=12)
    ap.add_argument("--nk", type=int, default=32)
    ap.add_argument("--hw", type=float, default=1.8)
    args = ap.parse_args(argv)

    model = TwoBandModel.kane(9.0, 0.5, 4.9)
    kg = KGrid((args.nk,), (1.6,), 4.9)
    tol = Tolerances(rtol=1e-12, atol=1e-16)
    print(f"{'F0':>8} {'gamma_NP':>9} {'f_c':>11} {'pop err 1':>10} {'pop err 3':>10} {'amp err 1':>10} {'amp err 3':>10}")
    for F0 in np.geomspace(0.03, 1.2, args.points):
        p = PulseSpec.cycles(float(F0), args.hw, 4, ramp_cycles=2)
        tr = propagate_two_band(model, kg, p, tol)
        exact = float(np.mean(tr.final_populations))
        t1, t3 = dyson_series(model, kg.points()[:, 0], p, order=2)
        bc = tr.amplitudes[-1, :, 1]
        e1 = abs(np.mean(np.abs(t1) ** 2) - exact) / exact
        e3 = abs(np.mean(np.abs(t1 + t3) ** 2) - exact) / exact
        a1 = np.linalg.norm(t1 - bc) / np.linalg.norm(bc)
        a3 = np.linalg.norm(t1 + t3 - bc) / np.linalg.norm(bc)
        g = ponderomotive_ema(F0, args.hw, 0.5) / args.hw
        print(f"{F0:8.4f} {g:9.4f} {exact:11.4e} {e1:10.2e} {e3:10.2e} {a1:10.2e} {a3:10.2e}")


if __name__ == "__main__":
    main()
