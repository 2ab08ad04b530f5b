"""The canonical Laplacian on mode sections g(r) e^{i p theta} (x) z^k of O(m).

Inside the unit disk: Delta(f z^k) = -z^-k d^2/dz dzbar (z^k f).
Outside: Delta(f z^k) = -|z|^4 z^(m-k) d^2/dz dzbar (f z^(k-m)).
With d^2/dz dzbar = (1/4)(d_r^2 + d_r / r + d_theta^2 / r^2), eigenvalues come out as lambda^2/4.

Inner products use omega = (i/2pi) dz^dzbar / max(1,|z|)^4 = (1/pi) r dr dtheta / max(1,r)^4
and h(z^k, z^l) = z^k zbar^l / max(1,|z|)^(2m). After the angular integral,

    (s1, s2) = 2 int_0^oo g1 conj(g2) r^(k1+k2+1) W(r) dr,
    D(s1, s2) = 1/2 int_0^oo (g1' - p1 g1/r) conj(g2' - p2 g2/r) r^(k1+k2+1) V(r) dr,

with W = 1 inside and r^(-2m-4) outside, V = 1 inside and r^(-2m) outside,
both zero unless p1 + k1 = p2 + k2. The |z|^4 in the outer Laplacian cancels
the volume factor of omega, which is why V lacks the r^-4 of W.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .hilbert import DEFAULT_QUADRATURE, Eigenfunction, Quadrature, RadialFunction

FD_STEP = 1e-4


@dataclass(frozen=True)
class CanonicalMetricWeight:
    """Weights of the max-type metric on O(m) and of omega."""

    m: int

    def hermitian(self, k: int, l: int, r):
        r = np.asarray(r, dtype=float)
        return r ** (k + l) / np.maximum(1.0, r) ** (2 * self.m)

    def volume(self, r):
        return 1.0 / np.maximum(1.0, np.asarray(r, dtype=float)) ** 4


@dataclass(frozen=True)
class ModeSection:
    """g(r) e^{i p theta} (x) z^k.

    `derivatives`, when given, maps r to (g, g', g'') exactly; otherwise
    derivatives come from 4th-order central differences of the branch
    containing r. `support`, when given, is an interval (a, b) outside of
    which g vanishes.
    """

    m: int
    k: int
    p: int
    radial: RadialFunction
    derivatives: Callable | None = None
    support: tuple | None = None

    def __post_init__(self):
        if self.m < 0 or not 0 <= self.k <= self.m:
            raise DomainError(f"need 0 <= k <= m, got k={self.k}, m={self.m}")

    def _branches(self):
        # branch formulas in r; each may be evaluated slightly across the circle
        return self.radial.inner, lambda x: self.radial.outer(1.0 / x)

    def jet(self, r):
        """(g, g', g'') at radii r, none equal to 1."""
        r = np.asarray(r, dtype=float)
        if self.derivatives is not None:
            return tuple(np.asarray(v) for v in self.derivatives(r))
        inner, outer = self._branches()
        g = np.empty_like(r, dtype=complex if _is_complex(self.radial) else float)
        d1 = np.empty_like(g)
        d2 = np.empty_like(g)
        for mask, fn in ((r < 1, inner), (r > 1, outer)):
            if not mask.any():
                continue
            x = r[mask]
            h = FD_STEP * np.maximum(1.0, x)
            fm2, fm1, f0, fp1, fp2 = (fn(x + j * h) for j in (-2, -1, 0, 1, 2))
            g[mask] = f0
            d1[mask] = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
            d2[mask] = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
        return g, d1, d2

    def with_scale(self, c) -> "ModeSection":
        der = None
        if self.derivatives is not None:
            base = self.derivatives

            def der(r):
                return tuple(c * v for v in base(r))

        return ModeSection(self.m, self.k, self.p, self.radial.scaled(c), der, self.support)


def _is_complex(f: RadialFunction) -> bool:
    return np.iscomplexobj(f.inner(np.array([0.5])))


def _bessel_like(a: int, q: int, r, g, d1, d2):
    # B_q[r^a g] with B_q h = h'' + h'/r - q^2 h / r^2
    h = r**a * g
    h1 = a * r ** (a - 1) * g + r**a * d1
    h2 = a * (a - 1) * r ** (a - 2) * g + 2 * a * r ** (a - 1) * d1 + r**a * d2
    return h2 + h1 / r - q * q * h / (r * r)


def apply_laplacian_mode(s: ModeSection, x):
    """Radial profile of Delta(s) at radii x != 1 (same p and k as s)."""
    x = np.asarray(x, dtype=float)
    if np.any(x == 1) or np.any(x <= 0):
        raise DomainError("the Laplacian is evaluated off the unit circle and off the origin")
    g, d1, d2 = s.jet(x)
    m, k, p = s.m, s.k, s.p
    inside = x < 1
    out = np.empty_like(g)
    if inside.any():
        r = x[inside]
        out[inside] = -0.25 * r ** (-k) * _bessel_like(k, p + k, r, g[inside], d1[inside], d2[inside])
    if (~inside).any():
        r = x[~inside]
        a = k - m
        out[~inside] = -0.25 * r ** (4 + m - k) * _bessel_like(a, p + a, r, g[~inside], d1[~inside], d2[~inside])
    return float(out) if out.ndim == 0 else out


def _radial_nodes(q: Quadrature, frequency: float):
    # inner on [0,1] in r, outer on (0,1] in u = 1/r; r = 1 is a panel edge on both sides
    x, w = q.rule(frequency)
    return x, w


def _pair(s1: ModeSection, s2: ModeSection):
    if s1.m != s2.m:
        raise DomainError("sections live on different bundles")
    return s1.p + s1.k == s2.p + s2.k


def _freq(*sections):
    return max(s.radial.frequency for s in sections)


def l2_product(s1: ModeSection, s2: ModeSection, q: Quadrature = DEFAULT_QUADRATURE, g2_override=None):
    """(s1, s2)_{L^2,oo} after the exact angular integral.

    g2_override(r) replaces the profile of s2 (used to pair with Delta(s2)).
    """
    if not _pair(s1, s2):
        return 0.0
    m, kk = s1.m, s1.k + s2.k
    x, w = _radial_nodes(q, _freq(s1, s2))
    u = x
    r_out = 1.0 / u
    g1_in = s1.radial(x)
    g1_out = s1.radial.outer(u)
    if g2_override is None:
        g2_in, g2_out = s2.radial(x), s2.radial.outer(u)
    else:
        g2_in, g2_out = g2_override(x), g2_override(r_out)
    inner = np.sum(w * g1_in * np.conj(g2_in) * x ** (kk + 1))
    # r^(kk+1) r^(-2m-4) dr = u^(2m+1-kk) du
    outer = np.sum(w * g1_out * np.conj(g2_out) * u ** (2 * m + 1 - kk))
    return _scalar(2.0 * (inner + outer))


def dirichlet_form(s1: ModeSection, s2: ModeSection, q: Quadrature = DEFAULT_QUADRATURE):
    """D(s1, s2) = (s1, Delta s2) as a first-derivative integral."""
    if not _pair(s1, s2):
        return 0.0
    m, kk = s1.m, s1.k + s2.k
    x, w = _radial_nodes(q, _freq(s1, s2))
    total = 0.0
    # outside: r^(kk+1-2m) dr = u^(2m-kk-3) du
    for r, weight in ((x, w * x ** (kk + 1)), (1.0 / x, w * x ** (2 * m - kk - 3))):
        a1 = _dbar(s1, r)
        a2 = _dbar(s2, r)
        total = total + np.sum(weight * a1 * np.conj(a2))
    return _scalar(0.5 * total)


def _dbar(s: ModeSection, r):
    # g' - p g / r; constant profiles with p = 0 give exact zeros
    g, d1, _ = s.jet(r)
    return d1 - s.p * g / r


def _scalar(v):
    v = complex(v)
    return v.real if v.imag == 0 else v


def section_norm(s: ModeSection, q: Quadrature = DEFAULT_QUADRATURE) -> float:
    return math.sqrt(max(np.real(l2_product(s, s, q)), 0.0))


def strong_weak_consistency(s_test: ModeSection, s_probe: ModeSection, q: Quadrature = DEFAULT_QUADRATURE) -> float:
    """|D(probe, test) - (probe, Delta test)| for a test section supported off the circle."""
    if s_test.support is None:
        raise DomainError("s_test must declare a support interval")
    a, b = s_test.support
    if a <= 1 <= b:
        raise DomainError("s_test support touches the unit circle")
    weak = dirichlet_form(s_probe, s_test, q)
    strong = strong_pairing(s_probe, s_test, q)
    return abs(weak - strong)


def strong_pairing(s_probe: ModeSection, s_test: ModeSection, q: Quadrature = DEFAULT_QUADRATURE):
    """(probe, Delta test) with Delta applied pointwise off the circle."""

    def lap(r):
        r = np.asarray(r, dtype=float)
        return apply_laplacian_mode(s_test, r)

    return l2_product(s_probe, s_test, q, g2_override=lap)


# built-in test profiles


def bump_section(m: int, k: int, p: int, a: float, b: float, scale: float = 1.0) -> ModeSection:
    """scale * exp(-1/(1-t^2)) with t mapping (a, b) onto (-1, 1); C-infinity, support (a, b)."""
    if not 0 < a < b:
        raise DomainError("need 0 < a < b")
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    # the outer branch is integrated in u = 1/r, where the support narrows
    widths = [1.0, b - a] + ([1.0 / max(a, 1.0) - 1.0 / b] if b > 1 else [])

    def jet(r):
        r = np.asarray(r, dtype=float)
        t = (r - mid) / half
        live = np.abs(t) < 1
        s = np.where(live, 1 - t * t, 1.0)
        phi1 = -2 * t / s**2
        phi2 = -(2 + 6 * t * t) / s**3
        val = np.where(live, np.exp(-1.0 / s), 0.0)
        g = scale * val
        d1 = scale * val * phi1 / half
        d2 = scale * val * (phi2 + phi1 * phi1) / half**2
        return g, d1, d2

    radial = RadialFunction(
        lambda x: jet(x)[0],
        lambda u: jet(1.0 / np.asarray(u, dtype=float))[0],
        f"bump({a},{b})",
        frequency=120.0 / min(widths),
    )
    return ModeSection(m, k, p, radial, jet, (a, b))


def monomial_section(m: int, k: int) -> ModeSection:
    """1 (x) z^k, a holomorphic section."""

    def jet(r):
        r = np.asarray(r, dtype=float)
        return np.ones_like(r), np.zeros_like(r), np.zeros_like(r)

    radial = RadialFunction(lambda x: np.ones_like(np.asarray(x, dtype=float)), lambda u: np.ones_like(np.asarray(u, dtype=float)), "1")
    return ModeSection(m, k, 0, radial, jet)


def eigen_section(e: Eigenfunction) -> ModeSection:
    """phi_{n,lambda} (x) 1 with analytic derivatives attached."""
    return ModeSection(e.m, 0, e.n, e.radial(), e.profile_derivatives)


def circle_jump_term(s_probe: ModeSection, s_test: ModeSection):
    """(probe, Delta test) - D(probe, test), nonzero only when the probe jumps across r = 1.

    Integrating D by parts on each side leaves
    -1/2 (g_in(1) - g_out(1)) conj(g_test'(1) - p g_test(1)) for a test profile
    that is C^1 across the circle.
    """
    if not _pair(s_probe, s_test):
        return 0.0
    one = np.array([1.0])
    jump = s_probe.radial.inner(one) - s_probe.radial.outer(one)
    g, d1, _ = s_test.derivatives(one) if s_test.derivatives is not None else s_test.jet(np.array([1.0 - 1e-12]))
    return _scalar(-0.5 * (jump * np.conj(d1 - s_test.p * g))[0])


def weak_pairing(s_probe: ModeSection, s_test: ModeSection, q: Quadrature = DEFAULT_QUADRATURE):
    """(probe, Delta test) through the Dirichlet form plus the circle jump term."""
    return _scalar(dirichlet_form(s_probe, s_test, q) + circle_jump_term(s_probe, s_test))
