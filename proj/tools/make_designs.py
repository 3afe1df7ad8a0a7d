#!/usr/bin/env python3
"""Generate equal-weight spherical t-designs on S^2 as plain-text data files.

Points start from a Fibonacci spiral and are moved by trust-region least squares on
the real spherical-harmonic moments of degrees 1..t until every moment
vanishes to round-off. Output: one unit vector "x y z" per line.

    python3 tools/make_designs.py --tmin 2 --tmax 21 --out data/designs
"""
import argparse
import pathlib

import numpy as np
from scipy.optimize import least_squares
from scipy.special import sph_harm_y


def fibonacci(n):
    j = np.arange(n)
    z = 1 - (2 * j + 1) / n
    az = 2 * np.pi * ((j * (np.sqrt(5) - 1) / 2) % 1.0)
    return np.arccos(z), az


def moments(params, t):
    n = params.size // 2
    theta, phi = params[:n], params[n:]
    out = []
    for deg in range(1, t + 1):
        for order in range(0, deg + 1):
            y = sph_harm_y(deg, order, theta, phi).mean()
            # sqrt(4 pi) makes the harmonics orthonormal for the unit-mass measure
            scale = np.sqrt(4 * np.pi) * (np.sqrt(2) if order else 1.0)
            out.append(scale * y.real)
            if order:
                out.append(scale * y.imag)
    return np.array(out)


def design(t, n, seed):
    rng = np.random.default_rng(seed)
    theta, phi = fibonacci(n)
    theta = np.clip(theta + 0.01 * rng.standard_normal(n), 1e-3, np.pi - 1e-3)
    phi = phi + 0.01 * rng.standard_normal(n)
    x0 = np.concatenate([theta, phi])
    sol = least_squares(moments, x0, args=(t,), method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15,
                        max_nfev=20000)
    theta, phi = sol.x[:n], sol.x[n:]
    pts = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], 1)
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    return pts


def gram_residual(pts, t):
    n = len(pts)
    g = np.clip(pts @ pts.T, -1, 1)
    worst = 0.0
    p0, p1 = np.ones_like(g), g
    for m in range(1, t + 1):
        if m > 1:
            p0, p1 = p1, ((2 * m - 1) * g * p1 - (m - 1) * p0) / m
        worst = max(worst, abs((2 * m + 1) * p1.sum() / n ** 2))
    return worst


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tmin", type=int, default=2)
    ap.add_argument("--tmax", type=int, default=21)
    ap.add_argument("--out", default="data/designs")
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for t in range(args.tmin, args.tmax + 1):
        n = (t + 1) ** 2 // 2 + 2
        for attempt in range(40):
            pts = design(t, n + attempt // 4, seed=attempt)
            res = gram_residual(pts, t)
            if res < 1e-13:
                break
        else:
            raise SystemExit(f"t={t}: no design found (residual {res:.3g})")
        path = out / f"sf{t:03d}.{len(pts):05d}.txt"
        with open(path, "w") as fh:
            for p in pts:
                fh.write(f"{p[0]:.17g} {p[1]:.17g} {p[2]:.17g}\n")
        print(f"t={t:2d} N={len(pts):4d} max S_m={res:.2e} -> {path}")


if __name__ == "__main__":
    main()
