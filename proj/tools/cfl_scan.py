#!/usr/bin/env python3
"""Von Neumann stability scan for the compact RK flux reconstruction scheme.

Linear advection u_t + u_x = 0 on a uniform periodic mesh with unit element
width.  For each degree, point set and dissipation model the one-step
amplification matrix G(theta, nu) is assembled for 512 wavenumbers and the
largest Courant number nu with max spectral radius <= 1 + 1e-12 is found by
bisection.  Degrees 0..3 only: higher degrees have no built-in RK tableau of matching
order. Writes data/cfl_table.csv.

Usage: python3 tools/cfl_scan.py [output.csv]
"""
import sys

import numpy as np
from numpy.polynomial import legendre

TABLEAUX = {
    1: ([[0.0]], [1.0]),
    2: ([[0, 0], [0.5, 0]], [0.0, 1.0]),
    3: ([[0, 0, 0], [1 / 3, 0, 0], [0, 2 / 3, 0]], [0.25, 0.0, 0.75]),
    4: ([[0, 0, 0, 0], [0.5, 0, 0, 0], [0, 0.5, 0, 0], [0, 0, 1, 0]],
        [1 / 6, 1 / 3, 1 / 3, 1 / 6]),
}


def nodes_weights(n, kind):
    if kind == "gl":
        x, w = legendre.leggauss(n + 1)
    else:
        if n == 0:
            raise ValueError("GLL needs n >= 1")
        c = np.zeros(n + 1)
        c[-1] = 1.0
        interior = legendre.legroots(legendre.legder(c)) if n > 1 else np.array([])
        x = np.concatenate(([-1.0], np.sort(interior), [1.0]))
        pn = legendre.legval(x, c)
        w = 2.0 / (n * (n + 1) * pn ** 2)
    return (x + 1) / 2, w / 2


def lagrange_tools(xi):
    n = len(xi)
    bary = np.array([1.0 / np.prod([xi[j] - xi[k] for k in range(n) if k != j])
                     for j in range(n)])
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                d[i, j] = bary[j] / bary[i] / (xi[i] - xi[j])
        d[i, i] = -d[i].sum()

    def at(s):
        return np.array([np.prod([(s - xi[k]) / (xi[j] - xi[k]) for k in range(n) if k != j])
                         for j in range(n)])

    return d, at(0.0), at(1.0)


def max_amplification(n, kind, model, nu, thetas):
    xi, w = nodes_weights(n, kind)
    d, l0, l1 = lagrange_tools(xi)
    a, b = TABLEAUX[min(n + 1, 4)]
    s = len(b)
    eye = np.eye(n + 1)
    stages = []
    for i in range(s):
        m = eye.copy()
        for j in range(i):
            m = m - nu * a[i][j] * d @ stages[j]
        stages.append(m)
    t = sum(b[i] * stages[i] for i in range(s))
    g_r = l1 / w
    g_l = -l0 / w
    worst = 0.0
    for th in thetas:
        ep, em = np.exp(1j * th), np.exp(-1j * th)
        # numerical flux rows acting on u_e, as functions of the neighbours
        if model == "d2":
            f_right = np.outer(np.ones(1), l1 @ t)[0] + 0j
            f_left = (l1 @ t) * em
        else:
            f_right = 0.5 * (l1 @ t + (l0 @ t) * ep) - 0.5 * (l0 * ep - l1)
            f_left = 0.5 * ((l1 @ t) * em + l0 @ t) - 0.5 * (l0 - l1 * em)
        g = (eye - nu * (d @ t + np.outer(g_r, f_right - l1 @ t)
                         + np.outer(g_l, f_left - l0 @ t)))
        worst = max(worst, np.max(np.abs(np.linalg.eigvals(g))))
    return worst


def scan(n, kind, model):
    thetas = np.linspace(0, 2 * np.pi, 512, endpoint=False)
    lo, hi = 0.0, 1.5
    if max_amplification(n, kind, model, 1e-6, thetas) > 1 + 1e-12:
        return float("nan")
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        if max_amplification(n, kind, model, mid, thetas) <= 1 + 1e-12:
            lo = mid
        else:
            hi = mid
    return lo


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "data/cfl_table.csv"
    rows = ["points,dissipation,degree,cfl"]
    for kind in ("gl", "gll"):
        for model in ("d1", "d2"):
            for n in range(0, 4):
                if kind == "gll" and n == 0:
                    continue
                c = scan(n, kind, model)
                rows.append(f"{kind},{model},{n},{c:.6f}")
                print(rows[-1], flush=True)
    with open(out, "w") as fh:
        fh.write("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
