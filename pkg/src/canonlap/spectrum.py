"""Spectrum of the canonical Laplacian on O(m), with multiplicities and certificates."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bessel import DEFAULT_POLICY, EvalPolicy
from .errors import ConsistencyError, DomainError
from .hilbert import DEFAULT_QUADRATURE, Eigenfunction, Quadrature
from .laplacian import (
    ModeSection,
    bump_section,
    eigen_section,
    l2_product,
    monomial_section,
    section_norm,
    weak_pairing,
)
from .lfun import LFun
from .zeros import find_zeros

MERGE_RTOL = 1e-9
RANK_RTOL = 1e-6
EMPTY_CLASSES_TO_STOP = 3

# supports of the built-in bump test profiles: straddling, inside and outside the circle
BUILTIN_SUPPORTS = ((0.4, 2.2), (0.2, 0.8), (1.3, 3.0))


@dataclass(frozen=True)
class Witness:
    """One constructed eigenvector: mode n at parameter lam (lam = 0 marks 1 (x) z^n)."""

    n: int
    lam: float
    dirichlet_flag: bool = False

    def section(self, m: int, policy: EvalPolicy = DEFAULT_POLICY) -> ModeSection:
        if self.lam == 0:
            return monomial_section(m, self.n)
        return eigen_section(Eigenfunction(m, self.n, self.lam, self.dirichlet_flag, policy))


@dataclass
class SpectralLine:
    eigenvalue: float
    multiplicity: int
    witnesses: list = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            "eigenvalue": self.eigenvalue,
            "multiplicity": self.multiplicity,
            "witnesses": [{"n": w.n, "lambda": w.lam} for w in self.witnesses],
        }


def table_class_multiplicity(m: int, n: int) -> int:
    """Eigenvectors contributed per lambda by the class {n, m - n}: 1 for n = m/2, else 2."""
    return 1 if 2 * n == m else 2


def _class_lines(m: int, n: int, cutoff: float, policy: EvalPolicy) -> list:
    zs = find_zeros(LFun(m, n), cutoff, policy)
    lines = []
    for k, lam in enumerate(zs.zeros):
        flag = zs.fun.degenerate and zs.tag(k) == "dirichlet"
        wit = [Witness(n, lam, flag), Witness(m - n, lam, flag)]
        lines.append(SpectralLine(lam * lam / 4.0, table_class_multiplicity(m, n), wit))
    return lines


def mode_classes(m: int, cutoff: float, max_nu: int | None = None, policy: EvalPolicy = DEFAULT_POLICY):
    """Representatives n >= ceil(m/2) whose zero set below cutoff is nonempty.

    Smallest zeros grow with n, so the scan stops after a few consecutive
    empty classes once n - m exceeds the cutoff, or at max_nu.
    """
    n = (m + 1) // 2
    empty = 0
    while True:
        if max_nu is not None and n > max_nu:
            return
        if find_zeros(LFun(m, n), cutoff, policy).zeros:
            empty = 0
            yield n
        else:
            empty += 1
            if empty >= EMPTY_CLASSES_TO_STOP and n - m > cutoff:
                return
        n += 1


def compute_spectrum(
    m: int,
    lambda_cutoff: float,
    max_nu: int | None = None,
    policy: EvalPolicy = DEFAULT_POLICY,
    threads: int = 1,
) -> list:
    """Sorted spectral lines: 0 with multiplicity m + 1, then lambda^2/4 for lambda <= lambda_cutoff."""
    if int(m) != m or m < 0:
        raise DomainError(f"m must be a nonnegative integer, got {m}")
    if not (lambda_cutoff > 0 and math.isfinite(lambda_cutoff)):
        raise DomainError(f"lambda_cutoff must be positive and finite, got {lambda_cutoff}")
    classes = list(mode_classes(m, lambda_cutoff, max_nu, policy))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            per_class = list(pool.map(lambda n: _class_lines(m, n, lambda_cutoff, policy), classes))
    else:
        per_class = [_class_lines(m, n, lambda_cutoff, policy) for n in classes]
    raw = sorted((line for lines in per_class for line in lines), key=lambda s: s.eigenvalue)
    merged = []
    for line in raw:
        last = merged[-1] if merged else None
        if last is not None and abs(line.eigenvalue - last.eigenvalue) <= MERGE_RTOL * line.eigenvalue:
            last.multiplicity += line.multiplicity
            last.witnesses.extend(line.witnesses)
        else:
            merged.append(SpectralLine(line.eigenvalue, line.multiplicity, list(line.witnesses)))
    kernel = SpectralLine(0.0, m + 1, [Witness(k, 0.0) for k in range(m + 1)])
    return [kernel] + merged


def gram_rank(m: int, witnesses, q: Quadrature = DEFAULT_QUADRATURE, policy: EvalPolicy = DEFAULT_POLICY) -> int:
    """Numerical rank of the L^2 Gram matrix of the witness sections (relative tolerance 1e-6)."""
    secs = [w.section(m, policy) for w in witnesses]
    size = len(secs)
    if size == 0:
        return 0
    gram = np.zeros((size, size), dtype=complex)
    for i in range(size):
        for j in range(i, size):
            gram[i, j] = l2_product(secs[i], secs[j], q)
            gram[j, i] = np.conj(gram[i, j])
    ev = np.linalg.eigvalsh(gram)
    return int(np.sum(ev > RANK_RTOL * ev.max()))


def check_line(m: int, line: SpectralLine, q: Quadrature = DEFAULT_QUADRATURE) -> None:
    """Raise ConsistencyError unless witnesses match the eigenvalue and the Gram rank the multiplicity."""
    for w in line.witnesses:
        if abs(w.lam * w.lam / 4.0 - line.eigenvalue) > 1e-10 * max(1.0, line.eigenvalue):
            raise ConsistencyError(f"witness {w} does not carry eigenvalue {line.eigenvalue!r}")
    rank = gram_rank(m, line.witnesses, q)
    if rank != line.multiplicity:
        raise ConsistencyError(f"line {line.eigenvalue!r}: Gram rank {rank} != multiplicity {line.multiplicity}")


def weak_eigen_certificate(
    m: int,
    n: int,
    lam: float,
    test_profile: ModeSection | None = None,
    k: int = 0,
    dirichlet_flag: bool | None = None,
    q: Quadrature = DEFAULT_QUADRATURE,
    policy: EvalPolicy = DEFAULT_POLICY,
) -> float:
    """|(phi, Delta xi) - (lam^2/4)(phi, xi)| / (||phi|| ||xi||) with (phi, Delta xi) taken weakly.

    The default xi is a bump on (0.4, 2.2) times e^{i(n-k) theta} (x) z^k,
    so its support straddles the unit circle where the matching conditions live.
    """
    phi = eigen_section(Eigenfunction(m, n, lam, dirichlet_flag, policy))
    xi = test_profile if test_profile is not None else bump_section(m, k, n - k, *BUILTIN_SUPPORTS[0])
    if xi.p + xi.k != n:
        raise DomainError("test profile lives in a different angular mode than phi")
    lhs = weak_pairing(phi, xi, q)
    rhs = lam * lam / 4.0 * l2_product(phi, xi, q)
    return float(abs(lhs - rhs) / (section_norm(phi, q) * section_norm(xi, q)))


def domain_seminorm(coefficients, terms: int | None = None) -> float:
    """Partial sum of (lam^4/16) |a|^2 ||phi||^2 over the first `terms` mode coefficients."""
    mc = coefficients.mode_coeffs if terms is None else coefficients.mode_coeffs[:terms]
    return float(sum(c.lam**4 / 16.0 * abs(c.a) ** 2 * c.norm_sq for c in mc))
