"""Generalized Fourier-Bessel series in E_m and the closed monomial expansions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bessel import DEFAULT_POLICY, EvalPolicy, bessel_j_orders
from .errors import DomainError, NumericError
from .hilbert import (
    DEFAULT_QUADRATURE,
    Eigenfunction,
    Quadrature,
    RadialFunction,
    eigenfunction_norm_closed,
    first_eigenfunctions,
    inner_product_m,
    monomial,
    monomial_norm_sq,
)

PARSEVAL_TOL = 1e-8

# about two panels per wavelength: plenty for polynomial times Bessel integrands
IDENTITY_QUADRATURE = Quadrature(panels_per_unit=4, nodes_per_panel=16, panels_per_frequency=1.0 / math.pi)

LPRIME_VARIANTS = ("spec", "exponent_nu")


@dataclass(frozen=True)
class ModeCoefficient:
    k: int  # 1-based position in the zero sequence
    lam: float
    a: complex
    norm_sq: float
    dirichlet: bool = False


@dataclass
class ExpansionCoefficients:
    """Projection coefficients of f on mode nu; poly_coeff is None unless 0 <= nu <= m."""

    m: int
    nu: int
    poly_coeff: complex | None = None
    mode_coeffs: list = field(default_factory=list)

    def eigenfunctions(self, policy: EvalPolicy = DEFAULT_POLICY):
        return [Eigenfunction(self.m, self.nu, c.lam, c.dirichlet, policy) for c in self.mode_coeffs]

    def to_record(self) -> dict:
        def num(v):
            v = complex(v)
            return v.real if v.imag == 0 else [v.real, v.imag]

        return {
            "m": self.m,
            "nu": self.nu,
            "poly_coeff": None if self.poly_coeff is None else num(self.poly_coeff),
            "mode_coeffs": [
                {"k": c.k, "lambda": c.lam, "a": num(c.a), "norm_sq": c.norm_sq} for c in self.mode_coeffs
            ],
        }


def _has_poly(m: int, nu: int) -> bool:
    return 0 <= nu <= m


def expand(
    f: RadialFunction,
    m: int,
    nu: int,
    k_terms: int,
    q: Quadrature = DEFAULT_QUADRATURE,
    policy: EvalPolicy = DEFAULT_POLICY,
) -> ExpansionCoefficients:
    """Raw projections of f on the first k_terms eigenfunctions of mode nu (and on x^nu)."""
    if k_terms < 1:
        raise DomainError("k_terms must be >= 1")
    out = ExpansionCoefficients(m, nu)
    if _has_poly(m, nu):
        out.poly_coeff = inner_product_m(f, monomial(nu), m, q) / monomial_norm_sq(m, nu)
    for k, e in enumerate(first_eigenfunctions(m, nu, k_terms, policy), start=1):
        n2 = eigenfunction_norm_closed(e)
        a = inner_product_m(f, e.radial(), m, q) / n2
        out.mode_coeffs.append(ModeCoefficient(k, e.lam, a, n2, e.dirichlet_flag))
    return out


def partial_sum(c: ExpansionCoefficients, x, policy: EvalPolicy = DEFAULT_POLICY):
    """poly_coeff x^nu + sum_k a_k phi_k(x) at radii x >= 0."""
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x, dtype=complex)
    if c.poly_coeff is not None:
        total = total + c.poly_coeff * monomial(c.nu)(x)
    for coef, e in zip(c.mode_coeffs, c.eigenfunctions(policy)):
        total = total + coef.a * e.radial()(x)
    if not np.iscomplexobj(np.asarray([m.a for m in c.mode_coeffs] + [c.poly_coeff or 0.0])):
        total = total.real
    return total[()] if total.ndim == 0 else total


def as_radial(c: ExpansionCoefficients, policy: EvalPolicy = DEFAULT_POLICY) -> RadialFunction:
    """The partial sum as a two-branch RadialFunction."""
    funcs = [(coef.a, e.radial()) for coef, e in zip(c.mode_coeffs, c.eigenfunctions(policy))]
    nu, poly = c.nu, c.poly_coeff

    def branch(which):
        def ev(t):
            t = np.asarray(t, dtype=float)
            acc = np.zeros_like(t)
            if poly is not None:
                acc = acc + poly * getattr(monomial(nu), which)(t)
            for a, r in funcs:
                acc = acc + a * getattr(r, which)(t)
            return acc

        return ev

    freq = max((coef.lam for coef in c.mode_coeffs), default=0.0)
    return RadialFunction(branch("inner"), branch("outer"), "partial_sum", freq)


def parseval_defect(f: RadialFunction, c: ExpansionCoefficients, q: Quadrature = DEFAULT_QUADRATURE) -> float:
    """||f||^2 - sum |a_k|^2 ||phi_k||^2 - |poly|^2 ||x^nu||^2, nonnegative by Bessel's inequality."""
    freq = max([f.frequency] + [coef.lam for coef in c.mode_coeffs])
    g = RadialFunction(f.inner, f.outer, f.label, freq)
    total = float(np.real(inner_product_m(g, g, c.m, q)))
    captured = sum(abs(coef.a) ** 2 * coef.norm_sq for coef in c.mode_coeffs)
    if c.poly_coeff is not None:
        captured += abs(c.poly_coeff) ** 2 * monomial_norm_sq(c.m, c.nu)
    defect = total - captured
    if defect < -PARSEVAL_TOL * max(1.0, total):
        raise NumericError(
            f"Parseval defect {defect:.3e} is negative: quadrature too coarse for the coefficients "
            f"(||f||^2 = {total:.6g}, captured {captured:.6g})"
        )
    return max(defect, 0.0)


def parseval_curve(f: RadialFunction, c: ExpansionCoefficients, q: Quadrature = DEFAULT_QUADRATURE) -> np.ndarray:
    """Parseval defect after 1, 2, ..., K mode terms (poly part always included)."""
    full = parseval_defect(f, c, q)
    captured = np.array([abs(coef.a) ** 2 * coef.norm_sq for coef in c.mode_coeffs])
    # defect(k) = full + sum of the terms after k
    tail = np.concatenate([np.cumsum(captured[::-1])[::-1][1:], [0.0]])
    return full + tail


def delta_nu(m: int, nu: int, p: int, q: int) -> float:
    """2 (nu+1)(m-nu+1)(q-p) / ((m+2)(p+nu+1)(q+nu+1)) for 0 <= nu <= m, else 0."""
    if not _has_poly(m, nu):
        return 0.0
    return 2.0 * (nu + 1) * (m - nu + 1) * (q - p) / ((m + 2) * (p + nu + 1) * (q + nu + 1))


def monomial_bessel_integral(n: int, p: int, q: int, w: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """int_0^1 (t^(2p+n+1) - t^(2q+n+1)) J_n(t w) dt without quadrature.

    Integrating by parts against d(t^(k+1) J_(k+1)(tw))/w = t^(k+1) J_k(tw) dt
    repeatedly gives

        int_0^1 t^(2p+n+1) J_n(tw) dt = sum_{i=0}^{p} (-1)^i 2^i p!/(p-i)! J_(n+i+1)(w) / w^(i+1).
    """
    if w == 0:
        raise DomainError("w must be nonzero")
    if p < 2 or q < 2:
        raise DomainError("need p, q >= 2")
    if n + min(p, q) + 1 <= 0:
        raise DomainError("boundary terms at 0 survive for n + min(p, q) + 1 <= 0")
    if p == q:
        return 0.0
    top = max(p, q)
    js = bessel_j_orders(list(range(n + 1, n + top + 2)), w, policy)

    def one(pp):
        s, coef = 0.0, 1.0
        for i in range(pp + 1):
            s += coef * js[i] / w ** (i + 1)
            coef *= -2.0 * (pp - i)
        return s

    return float(one(p) - one(q))


@dataclass
class IdentityTables:
    """Everything the four series identities need for one (m, nu), independent of p and q."""

    m: int
    nu: int
    lam: np.ndarray
    norm_sq: np.ndarray
    ratio: np.ndarray
    xs: np.ndarray
    j_nu_x: np.ndarray  # J_nu(x lam_k), shape (len(xs), K)
    j_shift_x: np.ndarray  # J_{nu-m}(x lam_k)
    nodes: list  # per k: (t, w, J_nu(t lam), J_{m-nu}(t lam))


def identity_tables(
    m: int,
    nu: int,
    k_terms: int,
    xs,
    q: Quadrature = IDENTITY_QUADRATURE,
    policy: EvalPolicy = DEFAULT_POLICY,
) -> IdentityTables:
    eig = first_eigenfunctions(m, nu, k_terms, policy)
    lam = np.array([e.lam for e in eig])
    norm_sq = np.array([eigenfunction_norm_closed(e) for e in eig])
    ratio = np.array([e.ratio for e in eig])
    xs = np.asarray(xs, dtype=float)
    arg = xs[:, None] * lam[None, :]
    j_nu_x, j_shift_x = bessel_j_orders([nu, nu - m], arg, policy)
    nodes = []
    for lk in lam:
        t, w = q.rule(lk)
        a, b = bessel_j_orders([nu, m - nu], t * lk, policy)
        nodes.append((t, w, a, b))
    return IdentityTables(m, nu, lam, norm_sq, ratio, xs, j_nu_x, j_shift_x, nodes)


def _moment(tab: IdentityTables, p: int, q: int, order_index: int, shift: int) -> np.ndarray:
    # int_0^1 (t^(2p+shift+1) - t^(2q+shift+1)) J(t lam_k) dt for every k
    out = np.empty(tab.lam.size)
    for k, (t, w, a, b) in enumerate(tab.nodes):
        j = a if order_index == 0 else b
        out[k] = np.sum(w * (t ** (2 * p + shift + 1) - t ** (2 * q + shift + 1)) * j)
    return out


def identity_coefficients(tab: IdentityTables, p: int, q: int, lprime_variant: str = "spec"):
    """(l_k, l'_k) by quadrature."""
    if lprime_variant not in LPRIME_VARIANTS:
        raise DomainError(f"lprime_variant must be one of {LPRIME_VARIANTS}")
    m, nu = tab.m, tab.nu
    mu = m - nu
    l = _moment(tab, p, q, 0, nu)
    if lprime_variant == "spec":
        lp = tab.ratio * _moment(tab, p, q, 1, mu)
    else:
        # J_nu/J_{m-nu} = (-1)^mu J_nu/J_{nu-m}, exponents taken from nu
        lp = (-1) ** (mu % 2) * tab.ratio * _moment(tab, p, q, 1, nu)
    return l, lp


def fb_identity_errors(
    tab: IdentityTables,
    p: int,
    q: int,
    delta_scale: float = 1.0,
    lprime_variant: str = "spec",
) -> dict:
    """Sup over tab.xs of x^(1/2) |partial sum - right-hand side| for the four identities.

    With N_k = ||phi_k||_m^2, r_k = J_nu(lam_k)/J_{nu-m}(lam_k), mu = m - nu, s = (-1)^mu:

        1a  sum l_k J_nu(x lam_k) / N_k          = x^(2p+nu) - x^(2q+nu) - (delta_nu/2) x^nu
        1b  sum l'_k J_nu(x lam_k) / N_k         = -s (delta_mu/2) x^nu
        2a  sum l'_k r_k J_{nu-m}(x lam_k) / N_k = s (x^(2p+mu) - x^(2q+mu) - (delta_mu/2) x^mu)
        2b  sum l_k r_k J_{nu-m}(x lam_k) / N_k  = -(delta_nu/2) x^mu

    The delta terms vanish unless 0 <= nu <= m.
    """
    if p == q:
        return {"1a": 0.0, "1b": 0.0, "2a": 0.0, "2b": 0.0}
    m, nu, x = tab.m, tab.nu, tab.xs
    mu = m - nu
    s = (-1) ** (mu % 2)
    l, lp = identity_coefficients(tab, p, q, lprime_variant)
    d_nu = delta_scale * delta_nu(m, nu, p, q) / 2.0
    d_mu = delta_scale * delta_nu(m, mu, p, q) / 2.0
    inv = 1.0 / tab.norm_sq
    sums = {
        "1a": tab.j_nu_x @ (l * inv),
        "1b": tab.j_nu_x @ (lp * inv),
        "2a": tab.j_shift_x @ (lp * tab.ratio * inv),
        "2b": tab.j_shift_x @ (l * tab.ratio * inv),
    }
    rhs = {
        "1a": x ** (2 * p + nu) - x ** (2 * q + nu) - d_nu * x**nu,
        "1b": -s * d_mu * x**nu,
        "2a": s * (x ** (2 * p + mu) - x ** (2 * q + mu) - d_mu * x**mu),
        "2b": -d_nu * x**mu,
    }
    root = np.sqrt(x)
    return {key: float(np.max(root * np.abs(sums[key] - rhs[key]))) for key in sums}


def monomial_identity_error(
    m: int,
    nu: int,
    p: int,
    q: int,
    k_terms: int,
    sample_xs,
    delta_scale: float = 1.0,
    lprime_variant: str = "spec",
    quad: Quadrature = IDENTITY_QUADRATURE,
) -> float:
    """Largest of the four identity deviations at sample_xs using k_terms zeros."""
    if min(p, q) < abs(nu):
        raise DomainError("need p, q >= |nu|")
    if k_terms < 1:
        raise DomainError("k_terms must be >= 1")
    tab = identity_tables(m, nu, k_terms, sample_xs, quad)
    return max(fb_identity_errors(tab, p, q, delta_scale, lprime_variant).values())
