"""
Slow, independent reference implementations used only by the tests.

None of these call the module they check: the transform is built as an
explicit matrix, PRD is computed in the coefficient domain, top-M selection
is a plain sort, and filters are checked against the orthonormality
conditions directly.
"""
import math

import numpy as np

MAX_MATRIX_N = 32


def level_matrix(n, h, g):
    """n x n analysis matrix of one periodic filter-and-decimate step."""
    w = np.zeros((n, n))
    for i in range(n // 2):
        for k in range(len(h)):
            w[i, (2 * i + k) % n] += h[k]
            w[n // 2 + i, (2 * i + k) % n] += g[k]
    return w


def transform_matrix(n, h, g, levels):
    """Matrix mapping a signal to the flat layout [a_J0, d_J0, ..., d_1]."""
    if n > MAX_MATRIX_N:
        raise ValueError(f"matrix oracle refuses N={n} > {MAX_MATRIX_N}")
    q = np.eye(n)
    m = n
    for _ in range(levels):
        step = np.eye(n)
        step[:m, :m] = level_matrix(m, h, g)
        q = step @ q
        m //= 2
    return q


def dwt_matrix_oracle(x, h, g, levels):
    x = np.asarray(x, dtype=float)
    return transform_matrix(len(x), h, g, levels) @ x


def prd_energy_oracle(flat_coeffs, kept_mask):
    c = np.asarray(flat_coeffs, dtype=float)
    total = float(np.sum(c ** 2))
    if total == 0:
        raise ValueError("zero total energy")
    dropped = float(np.sum(c[~np.asarray(kept_mask)] ** 2))
    return math.sqrt(dropped / total) * 100.0


def top_m_oracle(values, m):
    order = sorted(range(len(values)), key=lambda i: (-abs(values[i]), i))
    return set(order[:m])


def orthonormality_residuals(h):
    h = list(h)
    out = [sum(h) - math.sqrt(2), sum(v * v for v in h) - 1.0]
    for shift in range(2, len(h), 2):
        out.append(sum(h[k] * h[k + shift] for k in range(len(h) - shift)))
    return out


def nested_grid_search(fn, lo=-math.pi, hi=math.pi, points=41, rounds=6):
    """Minimize fn(a, b) by repeated local grids; returns (a, b, value)."""
    a_c = b_c = 0.0
    half = hi - lo
    best = None
    for r in range(rounds):
        if r == 0:
            a_pts = b_pts = np.linspace(lo, hi, points)
        else:
            a_pts = np.linspace(a_c - half, a_c + half, points)
            b_pts = np.linspace(b_c - half, b_c + half, points)
        for a in a_pts:
            for b in b_pts:
                v = fn(a, b)
                if best is None or v < best[2]:
                    best = (a, b, v)
        a_c, b_c = best[0], best[1]
        half = 2 * (a_pts[1] - a_pts[0])
    return best
