#!/usr/bin/env python3
"""Compare the truncated two-point function of the unit fixture against the
exact Bessel-K0 spectral representation, over a range of separations and
intermediate particle numbers."""
import argparse

import numpy as np
from scipy.special import k0

from shgff import (
    CorrelatorRequest, ModelParams, SpacetimePoint, compute_W_r, load_operator,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--b", type=float, default=0.25)
    ap.add_argument("--mass", type=float, default=1.0)
    ap.add_argument("--rho", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    ap.add_argument("--nodes", type=int, default=96)
    args = ap.parse_args()

    params = ModelParams(b=args.b, mass=args.mass)
    unit = load_operator({"name": "u", "provider": {"kind": "unit"}}, params)

    print(f"# b={args.b} mass={args.mass} nodes={args.nodes}")
    print(f"{'rho':>6} {'r':>4} {'W_r':>24} {'oracle':>24} {'|diff|':>10}")
    for rho in args.rho:
        pts = [SpacetimePoint(0.0, rho), SpacetimePoint(0.0, 0.0)]
        for r in (1, 2):
            req = CorrelatorRequest(params=params, operators=[unit, unit],
                                    points=pts, r=(r,), nodes=args.nodes,
                                    tol=1e-10)
            got = compute_W_r(req).value
            bess = k0(args.mass * rho)
            want = bess / np.pi if r == 1 else bess ** 2 / (2 * np.pi ** 2)
            print(f"{rho:6.2f} {r:4d} {got.real:24.16e} {want:24.16e} "
                  f"{abs(got - want):10.2e}")


if __name__ == "__main__":
    main()
