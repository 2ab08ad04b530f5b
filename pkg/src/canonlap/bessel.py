"""Integer-order Bessel functions J_n, I_n and the positive zeros of J_n and J_n'.

Small arguments use the ascending series. Larger ones use Miller's backward
recurrence, normalized by J_0 + 2*sum J_2k = 1 (or e^x = I_0 + 2*sum I_k).
Everything is vectorized over the argument.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class EvalPolicy:
    """Knobs for Bessel evaluation and zero refinement."""

    series_terms: int = 40
    # the series loses roughly log10(e^z / z) digits to cancellation, so keep it short-range
    series_cutoff: float = 4.0
    backward_recurrence_start_margin: int = 30
    newton_tol: float = 1e-13
    max_iter: int = 60

    def __post_init__(self):
        if self.series_terms < 20:
            raise DomainError("series_terms must be >= 20")
        if not self.series_cutoff > 0:
            raise DomainError("series_cutoff must be positive")
        if self.backward_recurrence_start_margin < 1:
            raise DomainError("backward_recurrence_start_margin must be positive")
        if self.newton_tol < 10 * np.finfo(float).eps:
            raise DomainError("newton_tol below 10 * machine epsilon")
        if self.max_iter < 1:
            raise DomainError("max_iter must be positive")


DEFAULT_POLICY = EvalPolicy()

_RESCALE = 1e250


def _as_array(z):
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("non-finite argument")
    return arr


def _series(n: int, x: np.ndarray, terms: int, modified: bool) -> np.ndarray:
    # sum_r (-1)^r (x/2)^(n+2r) / (r! (n+r)!), n >= 0, x >= 0
    half = 0.5 * x
    with np.errstate(divide="ignore", invalid="ignore"):
        logt0 = n * np.log(half) - math.lgamma(n + 1)
    t = np.where(half > 0, np.exp(logt0), 1.0 if n == 0 else 0.0)
    total = t.copy()
    q = half * half
    sign = 1.0 if modified else -1.0
    for r in range(1, terms):
        t = sign * t * q / (r * (n + r))
        total += t
    return total


def _start_orders(nmax: int, x: np.ndarray, margin: int) -> np.ndarray:
    top = np.maximum(float(nmax), x)
    start = np.ceil(top + margin + np.sqrt(40.0 * top)).astype(int)
    return start + (start % 2)


def _miller(nmax: int, x: np.ndarray, margin: int, modified: bool) -> np.ndarray:
    """Rows 0..nmax of J_k(x) (or e^-x I_k(x)) for a flat array x > 0."""
    start = _start_orders(nmax, x, margin)
    top = int(start.max())
    out = np.zeros((nmax + 1, x.size))
    cur = np.zeros(x.size)
    nxt = np.zeros(x.size)
    norm = np.zeros(x.size)
    sign = 1.0 if modified else -1.0
    for k in range(top, 0, -1):
        fresh = start == k
        if fresh.any():
            cur[fresh] = 1e-30
            nxt[fresh] = 0.0
        if k <= nmax:
            out[k] = cur
        if modified:
            norm += 2.0 * cur
        elif k % 2 == 0:
            norm += 2.0 * cur
        prev = (2.0 * k / x) * cur + sign * nxt
        nxt, cur = cur, prev
        huge = np.abs(cur) > _RESCALE
        if huge.any():
            cur[huge] /= _RESCALE
            nxt[huge] /= _RESCALE
            norm[huge] /= _RESCALE
            if k <= nmax:
                out[k:, huge] /= _RESCALE
    out[0] = cur
    norm += cur
    return out / norm


def _table(nmax: int, x: np.ndarray, policy: EvalPolicy, modified: bool) -> np.ndarray:
    """J_0..J_nmax (or I) at |x|, shape (nmax+1,) + x.shape."""
    flat = np.abs(x).ravel()
    out = np.empty((nmax + 1, flat.size))
    small = flat <= policy.series_cutoff
    if small.any():
        xs = flat[small]
        for n in range(nmax + 1):
            out[n, small] = _series(n, xs, policy.series_terms, modified)
    big = ~small
    if big.any():
        xb = flat[big]
        vals = _miller(nmax, xb, policy.backward_recurrence_start_margin, modified)
        if modified:
            vals = vals * np.exp(xb)
        out[:, big] = vals
    return out.reshape((nmax + 1,) + np.shape(x))


def bessel_j_orders(orders, z, policy: EvalPolicy = DEFAULT_POLICY) -> np.ndarray:
    """J_n(z) for each n in `orders`; result shape (len(orders),) + shape(z)."""
    orders = [int(n) for n in orders]
    x = _as_array(z)
    nmax = max(abs(n) for n in orders)
    tab = _table(nmax, x, policy, modified=False)
    neg_z = x < 0
    rows = []
    for n in orders:
        a = abs(n)
        v = tab[a]
        if n < 0 and a % 2:
            v = -v
        if a % 2:
            v = np.where(neg_z, -v, v)
        rows.append(v)
    return np.array(rows)


def _scalar_or_array(v, z):
    return float(v) if np.ndim(z) == 0 else v


def bessel_j(n: int, z, policy: EvalPolicy = DEFAULT_POLICY):
    """J_n(z) for any integer n and finite real z (scalar or array)."""
    return _scalar_or_array(bessel_j_orders([n], z, policy)[0], z)


def bessel_j_prime(n: int, z, policy: EvalPolicy = DEFAULT_POLICY):
    """J_n'(z) = (J_{n-1}(z) - J_{n+1}(z)) / 2."""
    lo, hi = bessel_j_orders([n - 1, n + 1], z, policy)
    return _scalar_or_array(0.5 * (lo - hi), z)


def bessel_i(n: int, z, policy: EvalPolicy = DEFAULT_POLICY):
    """Modified Bessel I_n(z); I_{-n} = I_n and I_n(-z) = (-1)^n I_n(z)."""
    x = _as_array(z)
    a = abs(int(n))
    v = _table(a, x, policy, modified=True)[a]
    if a % 2:
        v = np.where(x < 0, -v, v)
    return _scalar_or_array(v, z)


def refine_roots(fdf, lo, hi, policy: EvalPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Safeguarded Newton on sign-change brackets, vectorized over brackets.

    fdf(x) returns (f, f'). Brackets where Newton has not settled after
    max_iter steps are finished by plain bisection.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    if lo.size == 0:
        return lo
    flo, _ = fdf(lo)
    slo = np.sign(flo)
    x = 0.5 * (lo + hi)
    done = np.zeros(lo.size, dtype=bool)
    for _ in range(policy.max_iter):
        f, d = fdf(x)
        same = np.sign(f) == slo
        lo = np.where(same, x, lo)
        hi = np.where(same, hi, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = f / d
        newton = x - step
        inside = np.isfinite(newton) & (newton >= lo) & (newton <= hi)
        xn = np.where(inside, newton, 0.5 * (lo + hi))
        small = np.abs(xn - x) <= policy.newton_tol * np.maximum(1.0, np.abs(x))
        # converged entries are frozen so later sweeps cannot push them off
        x = np.where(done | (f == 0), x, xn)
        done = done | (inside & small) | (f == 0)
        if done.all():
            return x
    # bisection fallback for the stragglers
    todo = ~done
    for _ in range(200):
        if not todo.any():
            break
        mid = 0.5 * (lo + hi)
        f, _ = fdf(mid)
        same = np.sign(f) == slo
        lo = np.where(todo & same, mid, lo)
        hi = np.where(todo & ~same, mid, hi)
        x = np.where(todo, 0.5 * (lo + hi), x)
        todo = todo & (hi - lo > policy.newton_tol * np.maximum(1.0, np.abs(x)))
    return x


def sign_change_brackets(grid: np.ndarray, values: np.ndarray):
    """Adjacent grid pairs with a strict sign change, plus exact grid zeros."""
    s = np.sign(values)
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    exact = grid[1:-1][s[1:-1] == 0]
    return grid[idx], grid[idx + 1], exact


def _scan_grid(cutoff: float, step: float) -> np.ndarray:
    count = max(2, int(math.ceil(cutoff / step)) + 1)
    grid = np.linspace(0.0, cutoff, count)
    return grid[1:]


def _zeros_of(fdf, cutoff: float, order: int, policy: EvalPolicy) -> np.ndarray:
    if not cutoff > 0 or not math.isfinite(cutoff):
        raise DomainError("cutoff must be a positive finite number")
    grid = _scan_grid(cutoff, math.pi / 4)
    vals, _ = fdf(grid)
    lo, hi, exact = sign_change_brackets(grid, vals)
    # no zeros of J_n or J_n' below n; exact zeros there are underflow
    exact = exact[exact >= order]
    roots = np.concatenate([refine_roots(fdf, lo, hi, policy), exact])
    return np.sort(roots[(roots > 0) & (roots <= cutoff)])


def bessel_j_zeros(n: int, cutoff: float, policy: EvalPolicy = DEFAULT_POLICY) -> list:
    """Positive zeros of J_n in (0, cutoff], increasing (J_{-n} has the same zeros)."""
    a = abs(int(n))

    def fdf(x):
        jm, j, jp = bessel_j_orders([a - 1, a, a + 1], x, policy)
        return j, 0.5 * (jm - jp)

    return _zeros_of(fdf, cutoff, a, policy).tolist()


def bessel_jp_zeros(n: int, cutoff: float, policy: EvalPolicy = DEFAULT_POLICY) -> list:
    """Positive zeros of J_n' in (0, cutoff], increasing."""
    a = abs(int(n))

    def fdf(x):
        jm, j, jp = bessel_j_orders([a - 1, a, a + 1], x, policy)
        d = 0.5 * (jm - jp)
        # Bessel's equation gives J'' = -J'/x - (1 - n^2/x^2) J
        return d, -d / x - (1.0 - a * a / (x * x)) * j

    return _zeros_of(fdf, cutoff, a, policy).tolist()


def mcmahon_guess(n: int, k: int) -> float:
    """McMahon's large-k estimate of the k-th positive zero of J_n."""
    beta = (k + 0.5 * abs(n) - 0.25) * math.pi
    mu = 4.0 * n * n
    return beta - (mu - 1) / (8 * beta) - 4 * (mu - 1) * (7 * mu - 31) / (3 * (8 * beta) ** 3)
