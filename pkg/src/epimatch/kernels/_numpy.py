"""Pure-numpy kernels. Reference path and fallback when numba is disabled."""

import numpy as np

_MAX_BISECT = 200


def delta_point(aH, aL, YH, YL, tH, tL, W):
    return aH * (tH - W) * (W - YH) + aL * max(0.0, tL - W) * (W - YL)


def w_point(aH, aL, YH, YL, tH, tL, W):
    # ψ cancels from the pooled prevalence, so only the FOC numerators matter
    if W >= tL:
        return YH
    wH = aH * (tH - W)
    wL = aL * (tL - W)
    return (wH * YH + wL * YL) / (wH + wL)


def delta_grid(aH, aL, YH, YL, tH, tL, grid):
    grid = np.asarray(grid, dtype=np.float64)
    return aH * (tH - grid) * (grid - YH) + aL * np.maximum(0.0, tL - grid) * (grid - YL)


def w_grid(aH, aL, YH, YL, tH, tL, grid):
    grid = np.asarray(grid, dtype=np.float64)
    out = np.full(grid.shape, YH, dtype=np.float64)
    act = grid < tL
    g = grid[act]
    wH = aH * (tH - g)
    wL = aL * (tL - g)
    out[act] = (wH * YH + wL * YL) / (wH + wL)
    return out


def _bisect(f, lo, hi, flo):
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisect_delta(aH, aL, YH, YL, tH, tL, lo, hi):
    """Root of delta on [lo, hi]; assumes a sign change, refines to machine precision."""
    def f(W):
        return delta_point(aH, aL, YH, YL, tH, tL, W)
    flo = f(lo)
    if flo == 0.0:
        return lo
    if f(hi) == 0.0:
        return hi
    return _bisect(f, lo, hi, flo)


def bisect_residual(aH, aL, YH, YL, tH, tL, lo, hi):
    """Root of W - w(W) on [lo, hi]."""
    def f(W):
        return W - w_point(aH, aL, YH, YL, tH, tL, W)
    flo = f(lo)
    if flo == 0.0:
        return lo
    if f(hi) == 0.0:
        return hi
    return _bisect(f, lo, hi, flo)


def delta_roots(aH, aL, YH, YL, tH, tL, grid):
    """All sign changes and exact zeros of delta on a sorted grid, bisected."""
    grid = np.asarray(grid, dtype=np.float64)
    d = delta_grid(aH, aL, YH, YL, tH, tL, grid)
    roots = [grid[i] for i in np.flatnonzero(d == 0.0)]
    for i in np.flatnonzero(d[:-1] * d[1:] < 0.0):
        roots.append(bisect_delta(aH, aL, YH, YL, tH, tL, grid[i], grid[i + 1]))
    return np.sort(np.asarray(roots, dtype=np.float64))


def residual_minima(aH, aL, YH, YL, tH, tL, grid):
    """Local minimizers of |W - w(W)| on a uniform grid, refined where the sign changes."""
    grid = np.asarray(grid, dtype=np.float64)
    r = grid - w_grid(aH, aL, YH, YL, tH, tL, grid)
    a = np.abs(r)
    n = a.size
    if n == 1:
        return grid.copy() if a[0] == 0.0 else np.empty(0)
    left = np.empty(n)
    right = np.empty(n)
    left[0] = np.inf
    left[1:] = a[:-1]
    right[-1] = np.inf
    right[:-1] = a[1:]
    dr = np.abs(np.diff(r))
    var = np.zeros(n)
    var[1:] += dr
    var[:-1] += dr
    cand = np.flatnonzero((a <= left) & (a <= right) & (a <= var))
    out = []
    for i in cand:
        if r[i] == 0.0:
            out.append(grid[i])
        elif i + 1 < n and r[i] * r[i + 1] < 0.0:
            out.append(bisect_residual(aH, aL, YH, YL, tH, tL, grid[i], grid[i + 1]))
        elif i > 0 and r[i - 1] * r[i] < 0.0:
            out.append(bisect_residual(aH, aL, YH, YL, tH, tL, grid[i - 1], grid[i]))
        else:
            out.append(grid[i])
    return np.asarray(out, dtype=np.float64)


def _response(aH, aL, YH, YL, tH, tL, beta, W_other):
    x = beta * W_other
    if x >= tL:
        return YH
    wH = aH * (tH - x)
    wL = aL * (tL - x)
    return (wH * YH + wL * YL) / (wH + wL)


def twopop_response_grid(pop, beta, W_other):
    aH, aL, YH, YL, tH, tL = pop
    x = beta * np.asarray(W_other, dtype=np.float64)
    out = np.full(x.shape, YH, dtype=np.float64)
    act = x < tL
    wH = aH * (tH - x[act])
    wL = aL * (tL - x[act])
    out[act] = (wH * YH + wL * YL) / (wH + wL)
    return out


def twopop_iterate(pop_f, pop_m, beta_f, beta_m, seeds, damping, tol, max_iter):
    """Damped simultaneous iteration of (W_f, W_m) from every seed, vectorized over seeds."""
    W = np.array(seeds, dtype=np.float64, copy=True)
    n = W.shape[0]
    done = np.zeros(n, dtype=np.bool_)
    iters = np.zeros(n, dtype=np.int64)
    for k in range(max_iter):
        live = ~done
        if not live.any():
            break
        Wl = W[live]
        nf = twopop_response_grid(pop_f, beta_f, Wl[:, 1])
        nm = twopop_response_grid(pop_m, beta_m, Wl[:, 0])
        new = np.empty_like(Wl)
        new[:, 0] = (1.0 - damping) * nf + damping * Wl[:, 0]
        new[:, 1] = (1.0 - damping) * nm + damping * Wl[:, 1]
        step = np.max(np.abs(new - Wl), axis=1)
        W[live] = new
        idx = np.flatnonzero(live)
        iters[idx] = k + 1
        done[idx[step < tol]] = True
    return W, done, iters


def twopop_composite_roots(pop_f, pop_m, beta_f, beta_m, grid):
    """Zeros of x - R_f(R_m(x)) on a grid over population f's prevalence range."""
    grid = np.asarray(grid, dtype=np.float64)

    def g(x):
        return x - _response(*pop_f, beta_f, _response(*pop_m, beta_m, x))

    vals = grid - twopop_response_grid(pop_f, beta_f, twopop_response_grid(pop_m, beta_m, grid))
    roots = [grid[i] for i in np.flatnonzero(vals == 0.0)]
    for i in np.flatnonzero(vals[:-1] * vals[1:] < 0.0):
        roots.append(_bisect(g, grid[i], grid[i + 1], vals[i]))
    return np.sort(np.asarray(roots, dtype=np.float64))


__all__ = [
    "delta_point", "w_point", "delta_grid", "w_grid", "bisect_delta", "bisect_residual",
    "delta_roots", "residual_minima", "twopop_response_grid", "twopop_iterate",
    "twopop_composite_roots",
]
