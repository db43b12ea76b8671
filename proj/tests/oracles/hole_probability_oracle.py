"""Independent Monte Carlo reference for the GEF hole probability at small radii.

Uses numpy's generator and batched companion-matrix eigenvalues, sharing no code
with the C++ sampler or root finder. The printed value is frozen into the
acceptance suite.

    python3 hole_probability_oracle.py --trials 1000000 --seed 20261016
"""
import argparse
import math

import numpy as np


def hole_fraction(radius, trials, seed, degree=30, chunk=100_000):
    rng = np.random.default_rng(seed)
    mags = np.array([1.0 / math.sqrt(math.factorial(n)) for n in range(degree + 1)])
    holes = 0
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        xi = (rng.standard_normal((m, degree + 1)) +
              1j * rng.standard_normal((m, degree + 1))) / math.sqrt(2.0)
        c = xi * mags
        # monic companion matrices for c_0 + c_1 z + ... + c_D z^D
        comp = np.zeros((m, degree, degree), dtype=complex)
        comp[:, 1:, :-1] = np.eye(degree - 1)
        comp[:, :, -1] = -c[:, :degree] / c[:, degree:degree + 1]
        roots = np.linalg.eigvals(comp)
        holes += int(np.sum(np.all(np.abs(roots) > radius, axis=1)))
        done += m
    return holes


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=20261016)
    ap.add_argument("--radius", type=float, default=0.5)
    args = ap.parse_args()
    h = hole_fraction(args.radius, args.trials, args.seed)
    p = h / args.trials
    se = math.sqrt(p * (1 - p) / args.trials)
    print(f"radius={args.radius} trials={args.trials} holes={h} p_hat={p:.6f} se={se:.6f}")


if __name__ == "__main__":
    main()
