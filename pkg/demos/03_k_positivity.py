"""
k-positivity through Schmidt-rank constrained maximization
==========================================================

phi is k-positive iff <y, C_cp y> <= 1 for every unit y of Schmidt rank <= k.
The see-saw optimizer searches for a violation; a violation is a proof.
"""

from posmaps import OptConfig, gallery, is_k_positive, kpos_bruteforce_oracle

cfg = OptConfig(seed=1)

# transpose: positive, not 2-positive; the witness is the antisymmetric vector
t = gallery("transpose", n=2)
for k in (1, 2):
    v = is_k_positive(t, k, cfg)
    print(f"transpose k={k}: {v.kind.value:<13} value {v.value:.10g}")

# Tr - t id on B(C^3) is k-positive exactly when t <= 1/k
for t_ in (0.3, 0.45, 0.55, 1.05):
    phi = gallery("reduction", lam=t_, n=3)
    kinds = [is_k_positive(phi, k, cfg).kind.value for k in (1, 2, 3)]
    print(f"reduction t={t_:<5} k=1,2,3: {kinds}")

# brute force on phi (x) id_k agrees
phi = gallery("reduction", lam=0.4, n=3)
for k in (2, 3):
    res = kpos_bruteforce_oracle(phi, k, samples=1000, seed=0)
    print(f"oracle k={k}: {res.violations} violations, lowest eigenvalue {res.min_eigenvalue:.4f}")
