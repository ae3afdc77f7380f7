"""Numba-compiled kernels. Same signatures and results as the numpy path."""
import numpy as np
from numba import njit

_MAX_BISECT = 200


@njit(cache=True)
def delta_point(aH, aL, YH, YL, tH, tL, W):
    return aH * (tH - W) * (W - YH) + aL * max(0.0, tL - W) * (W - YL)


@njit(cache=True)
def w_point(aH, aL, YH, YL, tH, tL, W):
    if W >= tL:
        return YH
    wH = aH * (tH - W)
    wL = aL * (tL - W)
    return (wH * YH + wL * YL) / (wH + wL)


@njit(cache=True)
def delta_grid(aH, aL, YH, YL, tH, tL, grid):
    out = np.empty(grid.size)
    for i in range(grid.size):
        out[i] = delta_point(aH, aL, YH, YL, tH, tL, grid[i])
    return out


@njit(cache=True)
def w_grid(aH, aL, YH, YL, tH, tL, grid):
    out = np.empty(grid.size)
    for i in range(grid.size):
        out[i] = w_point(aH, aL, YH, YL, tH, tL, grid[i])
    return out


@njit(cache=True)
def bisect_delta(aH, aL, YH, YL, tH, tL, lo, hi):
    flo = delta_point(aH, aL, YH, YL, tH, tL, lo)
    if flo == 0.0:
        return lo
    if delta_point(aH, aL, YH, YL, tH, tL, hi) == 0.0:
        return hi
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = delta_point(aH, aL, YH, YL, tH, tL, mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo = mid
            flo = fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@njit(cache=True)
def bisect_residual(aH, aL, YH, YL, tH, tL, lo, hi):
    flo = lo - w_point(aH, aL, YH, YL, tH, tL, lo)
    if flo == 0.0:
        return lo
    if hi - w_point(aH, aL, YH, YL, tH, tL, hi) == 0.0:
        return hi
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = mid - w_point(aH, aL, YH, YL, tH, tL, mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo = mid
            flo = fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@njit(cache=True)
def delta_roots(aH, aL, YH, YL, tH, tL, grid):
    n = grid.size
    out = np.empty(n)
    k = 0
    prev = delta_point(aH, aL, YH, YL, tH, tL, grid[0])
    if prev == 0.0:
        out[k] = grid[0]
        k += 1
    for i in range(1, n):
        cur = delta_point(aH, aL, YH, YL, tH, tL, grid[i])
        if cur == 0.0:
            out[k] = grid[i]
            k += 1
        elif prev * cur < 0.0:
            out[k] = bisect_delta(aH, aL, YH, YL, tH, tL, grid[i - 1], grid[i])
            k += 1
        prev = cur
    return np.sort(out[:k])


@njit(cache=True)
def residual_minima(aH, aL, YH, YL, tH, tL, grid):
    n = grid.size
    r = np.empty(n)
    for i in range(n):
        r[i] = grid[i] - w_point(aH, aL, YH, YL, tH, tL, grid[i])
    out = np.empty(n)
    k = 0
    if n == 1:
        if r[0] == 0.0:
            out[0] = grid[0]
            k = 1
        return out[:k]
    for i in range(n):
        a = abs(r[i])
        left = abs(r[i - 1]) if i > 0 else np.inf
        right = abs(r[i + 1]) if i + 1 < n else np.inf
        if a > left or a > right:
            continue
        var = 0.0
        if i > 0:
            var += abs(r[i] - r[i - 1])
        if i + 1 < n:
            var += abs(r[i + 1] - r[i])
        if a > var:
            continue
        if r[i] == 0.0:
            out[k] = grid[i]
        elif i + 1 < n and r[i] * r[i + 1] < 0.0:
            out[k] = bisect_residual(aH, aL, YH, YL, tH, tL, grid[i], grid[i + 1])
        elif i > 0 and r[i - 1] * r[i] < 0.0:
            out[k] = bisect_residual(aH, aL, YH, YL, tH, tL, grid[i - 1], grid[i])
        else:
            out[k] = grid[i]
        k += 1
    return out[:k]


@njit(cache=True)
def _response(aH, aL, YH, YL, tH, tL, beta, W_other):
    x = beta * W_other
    if x >= tL:
        return YH
    wH = aH * (tH - x)
    wL = aL * (tL - x)
    return (wH * YH + wL * YL) / (wH + wL)


@njit(cache=True)
def _response_arr(pop, beta, W_other):
    return _response(pop[0], pop[1], pop[2], pop[3], pop[4], pop[5], beta, W_other)


@njit(cache=True)
def _response_grid(pop, beta, W_other):
    out = np.empty(W_other.size)
    for i in range(W_other.size):
        out[i] = _response_arr(pop, beta, W_other[i])
    return out


def twopop_response_grid(pop, beta, W_other):
    return _response_grid(np.asarray(pop, dtype=np.float64), float(beta),
                          np.ascontiguousarray(W_other, dtype=np.float64).ravel())


@njit(cache=True)
def _iterate(pf, pm, beta_f, beta_m, seeds, damping, tol, max_iter):
    n = seeds.shape[0]
    W = seeds.copy()
    done = np.zeros(n, dtype=np.bool_)
    iters = np.zeros(n, dtype=np.int64)
    for s in range(n):
        wf = W[s, 0]
        wm = W[s, 1]
        for k in range(max_iter):
            nf = (1.0 - damping) * _response_arr(pf, beta_f, wm) + damping * wf
            nm = (1.0 - damping) * _response_arr(pm, beta_m, wf) + damping * wm
            step = max(abs(nf - wf), abs(nm - wm))
            wf = nf
            wm = nm
            iters[s] = k + 1
            if step < tol:
                done[s] = True
                break
        W[s, 0] = wf
        W[s, 1] = wm
    return W, done, iters


def twopop_iterate(pop_f, pop_m, beta_f, beta_m, seeds, damping, tol, max_iter):
    return _iterate(np.asarray(pop_f, dtype=np.float64), np.asarray(pop_m, dtype=np.float64),
                    float(beta_f), float(beta_m), np.ascontiguousarray(seeds, dtype=np.float64),
                    float(damping), float(tol), int(max_iter))


@njit(cache=True)
def _composite_roots(pf, pm, beta_f, beta_m, grid):
    n = grid.size
    out = np.empty(n)
    k = 0
    prev = 0.0
    for i in range(n):
        x = grid[i]
        cur = x - _response_arr(pf, beta_f, _response_arr(pm, beta_m, x))
        if cur == 0.0:
            out[k] = x
            k += 1
        elif i > 0 and prev * cur < 0.0:
            lo = grid[i - 1]
            hi = x
            flo = prev
            for _ in range(_MAX_BISECT):
                mid = 0.5 * (lo + hi)
                if mid <= lo or mid >= hi:
                    break
                fm = mid - _response_arr(pf, beta_f, _response_arr(pm, beta_m, mid))
                if fm == 0.0:
                    lo = mid
                    hi = mid
                    break
                if (fm < 0.0) == (flo < 0.0):
                    lo = mid
                    flo = fm
                else:
                    hi = mid
            out[k] = 0.5 * (lo + hi)
            k += 1
        prev = cur
    return np.sort(out[:k])


def twopop_composite_roots(pop_f, pop_m, beta_f, beta_m, grid):
    return _composite_roots(np.asarray(pop_f, dtype=np.float64), np.asarray(pop_m, dtype=np.float64),
                            float(beta_f), float(beta_m),
                            np.ascontiguousarray(grid, dtype=np.float64))
