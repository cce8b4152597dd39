"""
Splitting a self-adjoint map against the trace map
==================================================

For a self-adjoint phi with c = lambda_max(C_phi) > 0, the map
phi_cp = Tr - phi / c is completely positive.
"""

import numpy as np

from posmaps import NegativeOfCpMap, cp_split, gallery, verify_split

for name, kw in [("trace", {"n": 3}), ("identity", {"n": 2}), ("choi3", {}), ("reduction", {"lam": 0.5, "n": 3})]:
    s = cp_split(gallery(name, **kw))
    lam_min = np.linalg.eigvalsh(s.phi_cp.choi)[0]
    print(f"{name:<10} c = {s.c:.6g}  residual = {verify_split(s):.1e}  min eig C_cp = {lam_min:.2e}")

# -phi completely positive: no split exists
try:
    cp_split(-1.0 * gallery("trace", n=2))
except NegativeOfCpMap as exc:
    print("negative trace map:", exc)
