"""
PPT states, decomposability and cone norms
==========================================

A decomposable map satisfies Tr(rho C_cp) <= 1 on every PPT state, so a PPT
state beating 1 refutes decomposability.
"""

import numpy as np

from posmaps import (
    COMPLETELY_POSITIVE,
    DECOMPOSABLE,
    POSITIVE,
    cone_norm,
    cp_split,
    gallery,
    is_decomposable,
    pairing,
    ppt_sup,
    random_superpositive,
)
from posmaps.linalg import swap_operator

rep = ppt_sup(np.eye(4) - swap_operator(2), 2, 2)
print(f"1 - F over PPT states: {rep.value:.10f}")

A = cp_split(gallery("choi3")).phi_cp.choi
rep = ppt_sup(A, 3, 3)
print(f"choi3 C_cp over PPT states: {rep.value:.10f} (1/2 + 1/sqrt 3 = {0.5 + 1 / np.sqrt(3):.10f})")

for name in ("transpose", "choi3"):
    v = is_decomposable(gallery(name, **({"n": 3} if name == "transpose" else {})))
    print(f"{name:<10} decomposable: {v.kind.value}")

# positive maps pair nonnegatively with rank-one Ad(V)
worst = min(pairing(gallery("choi3"), random_superpositive(3, 3, seed=s)) for s in range(50))
print(f"min pairing of choi3 with 50 random Ad(V): {worst:.4f}")

iota = gallery("identity", n=3)
for cone in (POSITIVE, DECOMPOSABLE, COMPLETELY_POSITIVE):
    print(f"norm of id on B(C^3) for {cone}: {cone_norm(iota, cone):.6g}")
