"""JIT-compiled numeric kernels for the miner's inner loops.

These operate on real-valued (sigma-unit) positions and carry no fixed-point
rounding contract; the consensus kernel lives in lj_energy and must stay in
plain Python. fastmath stays off so runs are reproducible on a given build.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, fastmath=False, error_model="numpy")
def energy(x: np.ndarray) -> float:
    n = x.shape[0] // 3
    e = 0.0
    for i in range(n - 1):
        xi = x[3 * i]
        yi = x[3 * i + 1]
        zi = x[3 * i + 2]
        for j in range(i + 1, n):
            dx = xi - x[3 * j]
            dy = yi - x[3 * j + 1]
            dz = zi - x[3 * j + 2]
            r2 = dx * dx + dy * dy + dz * dz
            inv2 = 1.0 / r2
            inv6 = inv2 * inv2 * inv2
            e += 4.0 * (inv6 * inv6 - inv6)
    return e


@njit(cache=True, fastmath=False, error_model="numpy")
def energy_gradient(x: np.ndarray) -> tuple[float, np.ndarray]:
    n = x.shape[0] // 3
    e = 0.0
    g = np.zeros(3 * n)
    for i in range(n - 1):
        xi = x[3 * i]
        yi = x[3 * i + 1]
        zi = x[3 * i + 2]
        for j in range(i + 1, n):
            dx = xi - x[3 * j]
            dy = yi - x[3 * j + 1]
            dz = zi - x[3 * j + 2]
            r2 = dx * dx + dy * dy + dz * dz
            inv2 = 1.0 / r2
            inv6 = inv2 * inv2 * inv2
            inv12 = inv6 * inv6
            e += 4.0 * (inv12 - inv6)
            c = 24.0 * (inv6 - 2.0 * inv12) * inv2
            g[3 * i] += c * dx
            g[3 * i + 1] += c * dy
            g[3 * i + 2] += c * dz
            g[3 * j] -= c * dx
            g[3 * j + 1] -= c * dy
            g[3 * j + 2] -= c * dz
    return e, g


@njit(cache=True, fastmath=False, error_model="numpy")
def descend(x0: np.ndarray, gmax_tol: float, max_iters: int
            ) -> tuple[np.ndarray, float, int, np.ndarray, int]:
    """Gradient descent with backtracking line search.

    Steps along -g; a trial step t is halved until the energy drops by at
    least the sufficient-decrease margin 1e-4 * t * |g|^2 (and strictly
    drops: a margin below one ulp must still change the value). The first
    trial each iteration is double the last accepted step, capped at 1.
    Stops when the gradient max-norm falls below gmax_tol, the iteration
    budget runs out, or no representable step decreases the energy.

    Returns (x, e, iterations, accepted-energy trace, status) with status
    0 = ok, 1 = non-finite starting energy (numerical blowup).
    """
    x = x0.copy()
    e, g = energy_gradient(x)
    trace = np.empty(max_iters + 1)
    trace[0] = e
    count = 1
    if not np.isfinite(e):
        return x, e, 0, trace[:count], 1
    t_prev = 1.0
    for it in range(max_iters):
        gmax = 0.0
        g2 = 0.0
        for k in range(g.shape[0]):
            a = abs(g[k])
            if a > gmax:
                gmax = a
            g2 += g[k] * g[k]
        if gmax < gmax_tol:
            return x, e, it, trace[:count], 0
        t = t_prev * 2.0
        if t > 1.0:
            t = 1.0
        accepted = False
        xn = x
        en = e
        while t > 1e-20:
            xn = x - t * g
            en = energy(xn)
            if np.isfinite(en) and en <= e - 1e-4 * t * g2 and en < e:
                accepted = True
                break
            t *= 0.5
        if not accepted:  # line search exhausted: float-stationary point
            return x, e, it, trace[:count], 0
        x = xn
        e, g = energy_gradient(x)
        trace[count] = e
        count += 1
        t_prev = t
    return x, e, max_iters, trace[:count], 0
