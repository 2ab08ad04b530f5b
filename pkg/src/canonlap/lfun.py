"""The Bessel product L_{m,nu} = J_{nu+1} J_{nu-m} - J_nu J_{nu-m-1} and its companions."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bessel import DEFAULT_POLICY, EvalPolicy, bessel_i, bessel_j_orders
from .errors import DomainError, RangeError


@dataclass(frozen=True)
class LFun:
    """Index pair (m, nu) of L_{m,nu}; m is the twist degree, nu the Fourier mode."""

    m: int
    nu: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise DomainError(f"m must be a nonnegative integer, got {self.m}")
        if int(self.nu) != self.nu:
            raise DomainError(f"nu must be an integer, got {self.nu}")

    @property
    def mirror(self) -> "LFun":
        """The index nu' with Z_{m,nu'} = Z_{m,nu} (nu' = m - nu)."""
        return LFun(self.m, self.m - self.nu)

    @property
    def degenerate(self) -> bool:
        """True when J_{nu-m} = +-J_nu identically (m = 0 or m = 2 nu)."""
        return self.m == 0 or self.m == 2 * self.nu

    @property
    def degenerate_sign(self) -> int:
        """s with J_{nu-m} = s J_nu, for degenerate indices."""
        if not self.degenerate:
            raise DomainError("index pair is not degenerate")
        return 1 if self.m == 0 else (-1) ** (abs(self.nu) % 2)


def _out(v, z):
    return float(v) if np.ndim(z) == 0 else v


def l_eval(f: LFun, z, policy: EvalPolicy = DEFAULT_POLICY):
    """L_{m,nu}(z)."""
    nu, m = f.nu, f.m
    a, b, c, d = bessel_j_orders([nu + 1, nu - m, nu, nu - m - 1], z, policy)
    return _out(a * b - c * d, z)


def l_and_prime(f: LFun, z, policy: EvalPolicy = DEFAULT_POLICY):
    """(L, L') from one table of J_{nu-m-2} .. J_{nu+2}."""
    nu, m = f.nu, f.m
    orders = sorted(set(range(nu - m - 2, nu + 3)) | set(range(nu - 2, nu + 3)))
    tab = dict(zip(orders, bessel_j_orders(orders, z, policy)))

    def jp(k):
        return 0.5 * (tab[k - 1] - tab[k + 1])

    j1, jm, j0, jm1 = tab[nu + 1], tab[nu - m], tab[nu], tab[nu - m - 1]
    val = j1 * jm - j0 * jm1
    der = jp(nu + 1) * jm + j1 * jp(nu - m) - jp(nu) * jm1 - j0 * jp(nu - m - 1)
    return _out(val, z), _out(der, z)


def l_prime(f: LFun, z, policy: EvalPolicy = DEFAULT_POLICY):
    """dL_{m,nu}/dz by differentiating the product form term by term."""
    return l_and_prime(f, z, policy)[1]


def k_and_prime(f: LFun, z, policy: EvalPolicy = DEFAULT_POLICY):
    """K = d/dz(z^-m J_nu J_{nu-m}) and its derivative from the closed second-order form."""
    x = np.asarray(z, dtype=float)
    if np.any(x == 0):
        raise DomainError("the K' route needs z != 0")
    nu, m = f.nu, f.m
    jm1, j0, jp1, km1, k0, kp1 = bessel_j_orders(
        [nu - 1, nu, nu + 1, nu - m - 1, nu - m, nu - m + 1], x, policy
    )
    d0 = 0.5 * (jm1 - jp1)
    dk = 0.5 * (km1 - kp1)
    p = j0 * k0
    dp = d0 * k0 + j0 * dk
    k = x ** (-m) * (dp - m * p / x)
    mix = (m * m + m + nu * nu + (nu - m) ** 2 - 2 * x * x) * p
    kk = x ** (-m - 2) * (mix - (2 * m + 1) * x * dp + 2 * x * x * d0 * dk)
    return _out(k, z), _out(kk, z)


def l_prime_via_k(f: LFun, z, policy: EvalPolicy = DEFAULT_POLICY):
    """L' = -m z^(m-1) K - z^m K', an independent route to l_prime."""
    k, kk = k_and_prime(f, z, policy)
    x = np.asarray(z, dtype=float)
    m = f.m
    return _out(-m * x ** (m - 1) * k - x**m * kk, z)


def l_leading_term(f: LFun):
    """(order, coefficient) of the lowest-order term of L_{m,nu} at 0.

    For 0 <= nu <= m the coefficient is (-1)^(m+nu) (m+2) / (2^(m+1) (m-nu+1)! (nu+1)!);
    the ascending series of the four Bessel factors each contribute a power of 1/2.
    """
    return _leading(f, printed=False)


def l_leading_term_printed(f: LFun):
    """The same pair with the 0 <= nu <= m coefficient missing the 2^(m+1) factor."""
    return _leading(f, printed=True)


def _leading(f: LFun, printed: bool):
    m, nu = f.m, f.nu
    sign = 1
    if nu < 0:
        # L_{m,nu} = (-1)^m L_{m,m-nu}
        sign = (-1) ** m
        nu = m - nu
    if nu >= m + 1:
        order = 2 * nu - m - 1
        if nu - m - 1 > 150 or nu > 170:
            raise RangeError("leading coefficient overflows double precision")
        coeff = -1.0 / (2.0**order * math.factorial(nu) * math.factorial(nu - m - 1))
    else:
        order = m + 1
        coeff = (-1) ** (m + nu) * (m + 2) / (math.factorial(m - nu + 1) * math.factorial(nu + 1))
        if not printed:
            coeff /= 2.0 ** (m + 1)
    return order, sign * coeff


def g_eval(f: LFun, z, policy: EvalPolicy = DEFAULT_POLICY):
    """G_nu(z) = I_{nu+1} I_{nu-m} + I_nu I_{nu-m-1}."""
    nu, m = f.nu, f.m
    val = bessel_i(nu + 1, z, policy) * bessel_i(nu - m, z, policy) + bessel_i(
        nu, z, policy
    ) * bessel_i(nu - m - 1, z, policy)
    return _out(val, z)


def g_imaginary_axis_factor(f: LFun) -> complex:
    """c with L_{m,nu}(iz) = c G_nu(z) for real z.

    The modified-Bessel relation J_n(iz) = i^n I_n(z) gives c = -i^(2nu-m-1);
    the sign is fixed by comparing leading terms at the origin.
    """
    return -(1j ** ((2 * f.nu - f.m - 1) % 4))


def g_leading_term(f: LFun):
    """(order, coefficient) of G_nu at 0, read off from L through the imaginary axis."""
    order, coeff = l_leading_term(f)
    # L(iz) ~ coeff i^order z^order = c G(z)
    val = coeff * (1j ** (order % 4)) / g_imaginary_axis_factor(f)
    return order, float(val.real)


def g_asymptotic_shifted(m: int, nu: int, z: float) -> float:
    """Two-term large-z form for G_{nu+m}, nu >= 1, with leading constant 1 as printed."""
    return math.exp(2 * z) / (2 * math.pi * z) * (1 - (4 * nu * nu + 2 * m * m + 4 * nu * m + 2 * m + 1) / (2 * z))


def g_asymptotic_central(m: int, nu: int, z: float) -> float:
    """Two-term large-z form for G_nu, 0 <= nu <= m, as printed."""
    return math.exp(2 * z) / (2 * math.pi * z) * (2 - (2 * nu * nu + m * m - 2 * nu * m + m) / z)


def g_two_term(f: LFun, z: float) -> float:
    """Two-term large-z form of G_nu from I_n(z) ~ e^z/sqrt(2 pi z) (1 - (4n^2-1)/(8z)).

    Valid for any index; for nu = n + m it reads 2 - (4n^2+4nm+2m^2+2m+1)/(2z).
    """
    a, m = f.nu, f.m
    return math.exp(2 * z) / (2 * math.pi * z) * (2 - (2 * a * a - 2 * a * m + m * m + m + 0.5) / z)
