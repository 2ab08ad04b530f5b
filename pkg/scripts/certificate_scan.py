"""Weak eigen-certificate as lambda moves away from a zero of L_{m,n}.

The residual is at rounding level on the zero and grows linearly with the shift.
"""
import numpy as np

from canonlap.hilbert import first_eigenfunctions
from canonlap.spectrum import weak_eigen_certificate

for m, n in ((0, 0), (1, 2), (2, 1), (3, 0)):
    e = first_eigenfunctions(m, n, 2)[1]
    print(f"m={m} n={n} lambda={e.lam:.12f}")
    for shift in (0.0, 1e-6, 1e-4, 1e-2, 5e-2):
        r = weak_eigen_certificate(m, n, e.lam * (1 + shift), dirichlet_flag=e.dirichlet_flag)
        print(f"  shift {shift:7.0e}  residual {r:.3e}")
