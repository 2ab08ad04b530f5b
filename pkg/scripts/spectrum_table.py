"""Print the low spectrum for several m with multiplicities and the mode classes behind each line.

usage: python scripts/spectrum_table.py [cutoff] [m ...]
"""
import sys

from canonlap import compute_spectrum

cutoff = float(sys.argv[1]) if len(sys.argv) > 1 else 10.0
ms = [int(a) for a in sys.argv[2:]] or [0, 1, 2, 3]

for m in ms:
    print(f"m = {m}, lambda <= {cutoff:g}")
    print(f"  {'eigenvalue':>14} {'mult':>4}  modes")
    for line in compute_spectrum(m, cutoff):
        modes = sorted({w.n for w in line.witnesses})
        print(f"  {line.eigenvalue:14.9f} {line.multiplicity:4d}  {modes}")
    print()
