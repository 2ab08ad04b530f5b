"""The weighted space E_m, its quadrature, and the radial eigenfunctions phi_{n,lambda}.

An element of E_m is a pair of branches: x -> f(x) on [0, 1] and
u -> f(1/u) on (0, 1]. The norm is

    ||f||_m^2 = int_0^1 |f(x)|^2 x dx + int_0^1 |f(1/u)|^2 u^(1+2m) du,

the second term being int_1^oo |f|^2 dx / x^(3+2m) after x = 1/u.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .bessel import DEFAULT_POLICY, EvalPolicy, bessel_j_orders
from .errors import ConsistencyError, CSVFormatError, DomainError, NumericError
from .lfun import LFun, l_prime
from .zeros import DIRICHLET, ZeroSet, first_zeros


@dataclass(frozen=True)
class RadialFunction:
    """Two-branch element of E_m. `frequency` is an oscillation hint for quadrature."""

    inner: Callable
    outer: Callable
    label: str = ""
    frequency: float = 0.0

    def __call__(self, x):
        """Value at radius x >= 0 (outer branch evaluated at u = 1/x)."""
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            u = np.where(x > 1, 1.0 / np.maximum(x, 1.0), 1.0)
        val = np.where(x <= 1, self.inner(np.minimum(x, 1.0)), self.outer(u))
        return float(val) if val.ndim == 0 else val

    def scaled(self, c) -> "RadialFunction":
        return RadialFunction(lambda x: c * self.inner(x), lambda u: c * self.outer(u), self.label, self.frequency)

    def __add__(self, other: "RadialFunction") -> "RadialFunction":
        return RadialFunction(
            lambda x: self.inner(x) + other.inner(x),
            lambda u: self.outer(u) + other.outer(u),
            f"{self.label}+{other.label}",
            max(self.frequency, other.frequency),
        )


def monomial(nu: int) -> RadialFunction:
    """x^nu, whose outer branch is u^-nu."""
    return RadialFunction(lambda x: np.asarray(x, dtype=float) ** nu, lambda u: np.asarray(u, dtype=float) ** (-nu), f"x^{nu}")


def monomial_norm_sq(m: int, nu: int) -> float:
    """||x^nu||_m^2 = 1/(2nu+2) + 1/(2m-2nu+2), finite iff 0 <= nu <= m."""
    if not 0 <= nu <= m:
        raise DomainError(f"x^{nu} is not in E_{m}")
    return 1.0 / (2 * nu + 2) + 1.0 / (2 * m - 2 * nu + 2)


@lru_cache(maxsize=64)
def _legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


@dataclass(frozen=True)
class Quadrature:
    """Composite Gauss-Legendre rule on [0, 1].

    With oscillation scaling, an integrand oscillating like sin(f x) gets at
    least `panels_per_frequency * f` panels (the default is 8 per wavelength).
    """

    panels_per_unit: int = 8
    nodes_per_panel: int = 16
    oscillation_scaling: bool = True
    panels_per_frequency: float = 4.0 / math.pi

    def __post_init__(self):
        if self.panels_per_unit < 1 or self.nodes_per_panel < 1:
            raise DomainError("panels_per_unit and nodes_per_panel must be positive")
        if not self.panels_per_frequency > 0:
            raise DomainError("panels_per_frequency must be positive")

    def panels(self, frequency: float = 0.0) -> int:
        n = self.panels_per_unit
        if self.oscillation_scaling and frequency > 0:
            n = max(n, int(math.ceil(self.panels_per_frequency * frequency)))
        return n

    def rule(self, frequency: float = 0.0, a: float = 0.0, b: float = 1.0):
        """Nodes and weights on [a, b]; panel edges never coincide with interior nodes."""
        return _composite(self.panels(frequency), self.nodes_per_panel, float(a), float(b))

    def doubled(self) -> "Quadrature":
        return Quadrature(
            2 * self.panels_per_unit, self.nodes_per_panel, self.oscillation_scaling, 2 * self.panels_per_frequency
        )


@lru_cache(maxsize=256)
def _composite(panels: int, nodes: int, a: float, b: float):
    t, w = _legendre(nodes)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    x.setflags(write=False)
    wt.setflags(write=False)
    return x, wt


DEFAULT_QUADRATURE = Quadrature()


def _checked(values, nodes, what):
    v = np.asarray(values)
    bad = ~np.isfinite(v)
    if bad.any():
        k = int(np.argmax(bad))
        raise NumericError(f"non-finite {what} sample at node {nodes[k]!r}")
    return v


def inner_product_m(f: RadialFunction, g: RadialFunction, m: int, q: Quadrature = DEFAULT_QUADRATURE):
    """(f, g)_m, linear in f and conjugate-linear in g."""
    x, w = q.rule(max(f.frequency, g.frequency))
    fi = _checked(f.inner(x), x, "inner")
    gi = _checked(g.inner(x), x, "inner")
    fo = _checked(f.outer(x), x, "outer")
    go = _checked(g.outer(x), x, "outer")
    total = np.sum(w * fi * np.conj(gi) * x) + np.sum(w * fo * np.conj(go) * x ** (1 + 2 * m))
    return complex(total) if np.iscomplexobj(total) else float(total)


def norm_m(f: RadialFunction, m: int, q: Quadrature = DEFAULT_QUADRATURE) -> float:
    return math.sqrt(max(inner_product_m(f, f, m, q).real, 0.0))


@dataclass(frozen=True)
class Eigenfunction:
    """phi_{n,lambda}^{(m)}: J_n(lambda x) inside, c x^m J_{n-m}(lambda/x) outside.

    Generically c = J_n(lambda)/J_{n-m}(lambda). When J_{n-m} = s J_n
    identically (m = 0, or m = 2n) and lambda is a zero of J_n, that ratio
    is 0/0; the eigenfunction is then antisymmetric, written with inner
    branch -J_n(lambda x) and c = s (`dirichlet_flag`). For the other zeros of
    such modes c = s.
    """

    m: int
    n: int
    lam: float
    dirichlet_flag: bool | None = None
    policy: EvalPolicy = field(default=DEFAULT_POLICY, compare=False, repr=False)

    def __post_init__(self):
        if self.m < 0 or not self.lam > 0:
            raise DomainError("need m >= 0 and lambda > 0")
        if self.dirichlet_flag and not self.fun.degenerate:
            raise DomainError("dirichlet_flag only applies when m = 0 or m = 2n")
        if self.dirichlet_flag is None and self.fun.degenerate:
            j = bessel_j_orders([self.n], self.lam, self.policy)[0]
            object.__setattr__(self, "dirichlet_flag", bool(abs(j) < 1e-8))
        if self.dirichlet_flag is None:
            object.__setattr__(self, "dirichlet_flag", False)

    @property
    def fun(self) -> LFun:
        return LFun(self.m, self.n)

    @classmethod
    def from_zero_set(cls, zs: ZeroSet, k: int, policy: EvalPolicy = DEFAULT_POLICY) -> "Eigenfunction":
        flag = zs.tag(k) == DIRICHLET if zs.fun.degenerate else False
        return cls(zs.fun.m, zs.fun.nu, zs.zeros[k], flag, policy)

    @property
    def inner_sign(self) -> float:
        return -1.0 if self.dirichlet_flag else 1.0

    @property
    def outer_coeff(self) -> float:
        if self.fun.degenerate:
            return float(self.fun.degenerate_sign)
        jn, jnm = bessel_j_orders([self.n, self.n - self.m], self.lam, self.policy)
        if abs(jn * jnm) < 1e-12:
            raise ConsistencyError(
                f"J_n(lambda) J_(n-m)(lambda) = {jn * jnm:.3e} at lambda={self.lam!r}; "
                "L_{m,n} should not vanish together with J_n J_(n-m)"
            )
        return float(jn / jnm)

    @property
    def ratio(self) -> float:
        """Effective J_n(lambda)/J_{n-m}(lambda): inner sign times outer coefficient."""
        return self.inner_sign * self.outer_coeff

    def radial(self) -> RadialFunction:
        s, c, lam, n, m, pol = self.inner_sign, self.outer_coeff, self.lam, self.n, self.m, self.policy

        def inner(x):
            return s * bessel_j_orders([n], lam * np.asarray(x, dtype=float), pol)[0]

        def outer(u):
            # f(1/u) = c u^-m J_{n-m}(lambda u)
            u = np.asarray(u, dtype=float)
            return c * u ** (-m) * bessel_j_orders([n - m], lam * u, pol)[0]

        return RadialFunction(inner, outer, f"phi[m={m},n={n},lam={lam:.12g}]", lam)

    def profile_derivatives(self, r):
        """(g, g', g'') of the radial profile at r != 1, analytic through Bessel recurrences."""
        r = np.asarray(r, dtype=float)
        s, c, lam, n, m = self.inner_sign, self.outer_coeff, self.lam, self.n, self.m
        inside = r <= 1
        g = np.empty_like(r)
        d1 = np.empty_like(r)
        d2 = np.empty_like(r)
        if inside.any():
            x = lam * r[inside]
            jm, j, jp = bessel_j_orders([n - 1, n, n + 1], x, self.policy)
            jd = 0.5 * (jm - jp)
            with np.errstate(divide="ignore", invalid="ignore"):
                jdd = np.where(x > 0, -jd / x - (1 - n * n / (x * x)) * j, _jdd_at_zero(n))
            g[inside] = s * j
            d1[inside] = s * lam * jd
            d2[inside] = s * lam * lam * jdd
        out = ~inside
        if out.any():
            rr = r[out]
            k = n - m
            y = lam / rr
            jm, j, jp = bessel_j_orders([k - 1, k, k + 1], y, self.policy)
            jd = 0.5 * (jm - jp)
            jdd = -jd / y - (1 - k * k / (y * y)) * j
            # h(r) = J_k(lam/r): h' = -lam/r^2 J', h'' = 2 lam/r^3 J' + lam^2/r^4 J''
            h = j
            h1 = -lam / rr**2 * jd
            h2 = 2 * lam / rr**3 * jd + lam**2 / rr**4 * jdd
            p0 = rr**m
            p1 = m * rr ** (m - 1) if m else np.zeros_like(rr)
            p2 = m * (m - 1) * rr ** (m - 2) if m > 1 else np.zeros_like(rr)
            g[out] = c * p0 * h
            d1[out] = c * (p1 * h + p0 * h1)
            d2[out] = c * (p2 * h + 2 * p1 * h1 + p0 * h2)
        return g, d1, d2

    def check(self, tol: float = 1e-10) -> None:
        """Raise unless lambda is a zero of L_{m,n} to relative tolerance `tol`."""
        from .lfun import l_and_prime

        val, der = l_and_prime(self.fun, self.lam, self.policy)
        if abs(val) > tol * max(1.0, abs(der)) * max(1.0, self.lam):
            raise ConsistencyError(f"lambda={self.lam!r} is not a zero of L_{{{self.m},{self.n}}}")


def _jdd_at_zero(n: int) -> float:
    # J_n''(0): 1/2 for n = 2, -1/2 for n = 0, else 0
    return {0: -0.5, 2: 0.5, -2: 0.5}.get(n, 0.0)


def eigenfunction_eval(e: Eigenfunction, x):
    """Radial profile of phi at x >= 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("x must be nonnegative")
    return e.radial()(x)


def eigenfunction_norm_closed(e: Eigenfunction) -> float:
    """||phi||_m^2 from the Lommel integral applied to both branches.

        1/2 (J_n'^2 + (1 - n^2/l^2) J_n^2) + c^2/2 (J_{n-m}'^2 + (1 - (n-m)^2/l^2) J_{n-m}^2)

    With c = J_n/J_{n-m} this is the printed closed form; writing it through c
    keeps it finite in the degenerate cases, including m = 0.
    """
    n, k, lam = e.n, e.n - e.m, e.lam
    c = e.outer_coeff
    nm1, n0, np1, km1, k0, kp1 = bessel_j_orders([n - 1, n, n + 1, k - 1, k, k + 1], lam, e.policy)
    dn = 0.5 * (nm1 - np1)
    dk = 0.5 * (km1 - kp1)
    inner = 0.5 * (dn * dn + (1 - n * n / lam**2) * n0 * n0)
    outer = 0.5 * (dk * dk + (1 - k * k / lam**2) * k0 * k0)
    val = float(inner + c * c * outer)
    if not val > 0:
        raise ConsistencyError(f"closed norm {val!r} is not positive")
    return val


def derivative_norm_identity(e: Eigenfunction) -> tuple:
    """(L'(lambda), 2 ||phi||^2 / ratio): equal when lambda is a zero of L_{m,n}."""
    return float(l_prime(e.fun, e.lam, e.policy)), 2.0 * eigenfunction_norm_closed(e) / e.ratio


def first_eigenfunctions(m: int, n: int, count: int, policy: EvalPolicy = DEFAULT_POLICY) -> list:
    zs = first_zeros(LFun(m, n), count, policy)
    return [Eigenfunction.from_zero_set(zs, k, policy) for k in range(count)]


def orthogonality_matrix(
    m: int, modes, k_max: int, q: Quadrature = DEFAULT_QUADRATURE, policy: EvalPolicy = DEFAULT_POLICY
) -> np.ndarray:
    """Gram matrix of the first k_max eigenfunctions of each mode, modes major.

    Entries between different modes are exactly 0: the angular factors
    e^{i n theta} are orthogonal and never discretized.
    """
    modes = list(modes)
    if not modes or k_max < 1:
        raise DomainError("need at least one mode and k_max >= 1")
    funcs = []
    for n in modes:
        funcs += [(n, e.radial()) for e in first_eigenfunctions(m, n, k_max, policy)]
    size = len(funcs)
    gram = np.zeros((size, size))
    for i in range(size):
        for j in range(i, size):
            if funcs[i][0] != funcs[j][0]:
                continue
            gram[i, j] = gram[j, i] = inner_product_m(funcs[i][1], funcs[j][1], m, q)
    return gram


def radial_from_samples(inner_xy, outer_xy, label: str = "samples") -> RadialFunction:
    """Piecewise-linear RadialFunction from (x, value) samples per branch."""
    xi, vi = (np.asarray(a, dtype=float) for a in inner_xy)
    xo, vo = (np.asarray(a, dtype=float) for a in outer_xy)
    for name, xs, vs in (("inner", xi, vi), ("outer", xo, vo)):
        if xs.size < 2:
            raise DomainError(f"{name} branch needs at least two samples")
        if np.any(np.diff(xs) <= 0):
            raise DomainError(f"{name} abscissae must be strictly increasing")
        if not np.all(np.isfinite(vs)):
            raise NumericError(f"non-finite {name} sample")
    return RadialFunction(lambda x: np.interp(x, xi, vi), lambda u: np.interp(u, xo, vo), label)


def read_radial_csv(path) -> RadialFunction:
    """Read a CSV with header `branch,x,value`; branch is inner (x in [0,1]) or outer (x is u = 1/r)."""
    rows = {"inner": [], "outer": []}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["branch", "x", "value"]:
            raise CSVFormatError("expected header 'branch,x,value'", 1)
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise CSVFormatError(f"expected 3 fields, got {len(row)}", lineno)
            branch = row[0].strip()
            if branch not in rows:
                raise CSVFormatError(f"unknown branch {branch!r}", lineno)
            try:
                x, v = float(row[1]), float(row[2])
            except ValueError:
                raise CSVFormatError("non-numeric field", lineno) from None
            if not (math.isfinite(x) and math.isfinite(v)):
                raise CSVFormatError("non-finite value", lineno)
            if not 0 <= x <= 1:
                raise CSVFormatError("abscissa outside [0, 1]", lineno)
            rows[branch].append((x, v))
    for branch, pts in rows.items():
        if len(pts) < 2:
            raise CSVFormatError(f"branch {branch!r} needs at least two samples")
        pts.sort()
        xs = [p[0] for p in pts]
        if len(set(xs)) != len(xs):
            raise CSVFormatError(f"duplicate abscissa in branch {branch!r}")
    return radial_from_samples(
        list(zip(*rows["inner"])), list(zip(*rows["outer"])), f"csv:{path}"
    )
