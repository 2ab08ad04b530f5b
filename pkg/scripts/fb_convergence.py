"""Convergence of the four generalized Fourier-Bessel identities in the number of terms.

Also shows how far the closed delta constant beats a 10% perturbation.
"""
import numpy as np

from canonlap.expansion import fb_identity_errors, identity_tables

xs = np.linspace(0.1, 0.9, 81)
for m, nu in ((1, 0), (1, 1), (2, 1), (2, 3)):
    p, q = abs(nu) + 2, abs(nu) + 3
    print(f"m={m} nu={nu} p={p} q={q}")
    for k in (25, 50, 100, 200, 400):
        tab = identity_tables(m, nu, k, xs)
        errs = fb_identity_errors(tab, p, q)
        row = "  ".join(f"{key}={val:.2e}" for key, val in errs.items())
        extra = ""
        if 0 <= nu <= m:
            worse = max(fb_identity_errors(tab, p, q, delta_scale=1.1).values())
            extra = f"  delta*1.1 -> {worse:.2e}"
        print(f"  K={k:4d}  {row}{extra}")
