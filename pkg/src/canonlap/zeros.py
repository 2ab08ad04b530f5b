"""Positive zeros of L_{m,nu}, the parameters of the whole spectrum."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bessel import (
    DEFAULT_POLICY,
    EvalPolicy,
    bessel_j_orders,
    bessel_j_zeros,
    bessel_jp_zeros,
    refine_roots,
    sign_change_brackets,
)
from .errors import DomainError, ZeroFindingError
from .lfun import LFun, l_and_prime

# tags for which factor of a degenerate L vanishes
DIRICHLET = "dirichlet"  # J_nu(lambda) = 0
NEUMANN = "neumann"  # J_nu'(lambda) = 0 (m = 0)
SHIFTED = "shifted"  # J_{nu+1}(lambda) = 0 (m = 2 nu)


@dataclass(frozen=True)
class ZeroSet:
    """Sorted positive zeros of L_{m,nu} up to cutoff, one bracket per zero.

    `tags` is filled only for degenerate index pairs (m = 0 or m = 2 nu),
    where L factors into two Bessel pieces and the factor that vanishes
    decides the eigenfunction's sign convention.
    """

    fun: LFun
    cutoff: float
    zeros: tuple
    brackets: tuple
    tags: tuple = field(default=())

    def __len__(self):
        return len(self.zeros)

    def tag(self, k: int):
        return self.tags[k] if self.tags else None

    def to_record(self) -> dict:
        return {"m": self.fun.m, "nu": self.fun.nu, "cutoff": self.cutoff, "zeros": list(self.zeros)}

    def to_json(self) -> str:
        return json.dumps(self.to_record())


def _bessel_panel_scan(fdf, cutoff, order, policy):
    # zeros of a single Bessel factor, with their sign-change brackets
    grid = np.linspace(0.0, cutoff, max(2, int(math.ceil(cutoff / (math.pi / 4))) + 1))[1:]
    vals, _ = fdf(grid)
    lo, hi, _ = sign_change_brackets(grid, vals)
    roots = refine_roots(fdf, lo, hi, policy)
    keep = (roots > 0) & (roots <= cutoff)
    return roots[keep], lo[keep], hi[keep]


def _degenerate_zeros(f: LFun, cutoff: float, policy: EvalPolicy) -> ZeroSet:
    a = abs(f.nu)
    second = a if f.m == 0 else a + 1

    def fdf_j(x):
        jm, j, jp = bessel_j_orders([a - 1, a, a + 1], x, policy)
        return j, 0.5 * (jm - jp)

    if f.m == 0:

        def fdf_other(x):
            jm, j, jp = bessel_j_orders([a - 1, a, a + 1], x, policy)
            d = 0.5 * (jm - jp)
            return d, -d / x - (1.0 - a * a / (x * x)) * j

        other_tag = NEUMANN
    else:

        def fdf_other(x):
            j, jp1, jp2 = bessel_j_orders([a, a + 1, a + 2], x, policy)
            return jp1, 0.5 * (j - jp2)

        other_tag = SHIFTED

    r1, lo1, hi1 = _bessel_panel_scan(fdf_j, cutoff, a, policy)
    r2, lo2, hi2 = _bessel_panel_scan(fdf_other, cutoff, second, policy)
    rows = [(r, lo, hi, DIRICHLET) for r, lo, hi in zip(r1, lo1, hi1)]
    rows += [(r, lo, hi, other_tag) for r, lo, hi in zip(r2, lo2, hi2)]
    rows.sort(key=lambda t: t[0])
    # both factors may change sign in one scan cell, so shrink each bracket to
    # a neighbourhood where only its own factor does
    rows = [(r, r - 1e-7 * max(1.0, r), r + 1e-7 * max(1.0, r), t) for r, _, _, t in rows]
    return _assemble(f, cutoff, rows, policy)


def _assemble(f, cutoff, rows, policy):
    zeros = np.array([r[0] for r in rows])
    if zeros.size > 1 and np.min(np.diff(zeros)) < 1e-9:
        k = int(np.argmin(np.diff(zeros)))
        raise ZeroFindingError(
            f"zeros {zeros[k]!r} and {zeros[k + 1]!r} of L_{{{f.m},{f.nu}}} coincide; "
            "a double zero would contradict simplicity"
        )
    brackets = tuple((float(lo), float(hi)) for _, lo, hi, _ in rows)
    tags = tuple(t for *_, t in rows) if rows and rows[0][3] is not None else ()
    return ZeroSet(f, float(cutoff), tuple(float(z) for z in zeros), brackets, tags)


def find_zeros(
    f: LFun, cutoff: float, policy: EvalPolicy = DEFAULT_POLICY, scan_step: float = 0.05
) -> ZeroSet:
    """All positive zeros of L_{m,nu} in (0, cutoff].

    m = 0, and m = 2 nu, factor L into two Bessel pieces; their zeros are
    found separately and tagged. Otherwise the merged zeros of J_nu and
    J_{nu-m} serve as panel boundaries, each panel is scanned with
    `scan_step`, and every sign change is refined by safeguarded Newton.
    """
    if not (cutoff > 0 and math.isfinite(cutoff)):
        raise DomainError(f"cutoff must be positive and finite, got {cutoff}")
    if not scan_step > 0:
        raise DomainError("scan_step must be positive")
    if f.degenerate:
        return _degenerate_zeros(f, cutoff, policy)

    panels = sorted(set(bessel_j_zeros(f.nu, cutoff, policy)) | set(bessel_j_zeros(f.nu - f.m, cutoff, policy)))
    n = max(2, int(math.ceil(cutoff / scan_step)) + 1)
    grid = np.union1d(np.linspace(0.0, cutoff, n)[1:], np.array(panels))

    def fdf(x):
        return l_and_prime(f, x, policy)

    vals, _ = fdf(grid)
    lo, hi, exact = sign_change_brackets(grid, vals)
    if exact.size:
        # a zero sitting on a grid node: bracket it by its neighbours
        idx = np.searchsorted(grid, exact)
        lo = np.concatenate([lo, grid[idx - 1]])
        hi = np.concatenate([hi, grid[idx + 1]])
    roots = refine_roots(fdf, lo, hi, policy)
    keep = (roots > 0) & (roots <= cutoff)
    rows = sorted(zip(roots[keep], lo[keep], hi[keep], [None] * int(keep.sum())), key=lambda t: t[0])
    return _assemble(f, cutoff, rows, policy)


def count_zeros(f: LFun, cutoff: float, policy: EvalPolicy = DEFAULT_POLICY) -> int:
    return len(find_zeros(f, cutoff, policy))


def first_zeros(f: LFun, count: int, policy: EvalPolicy = DEFAULT_POLICY) -> ZeroSet:
    """A ZeroSet holding exactly the first `count` zeros."""
    if count < 1:
        raise DomainError("count must be >= 1")
    # about two zeros of L per pi beyond the first Bessel zeros
    cutoff = math.pi * (0.5 * count + 0.5 * abs(f.nu) + 0.5 * f.m + 3)
    while True:
        zs = find_zeros(f, cutoff, policy)
        if len(zs) >= count:
            lam = zs.zeros[count - 1]
            tags = zs.tags[:count] if zs.tags else ()
            return ZeroSet(f, lam, zs.zeros[:count], zs.brackets[:count], tags)
        cutoff *= 1.5
