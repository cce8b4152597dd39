"""
Linear maps as Choi matrices
============================

A map phi: B(C^m) -> B(C^n) is stored as C = sum_ij e_ij (x) phi(e_ij).
"""

import numpy as np

from posmaps import apply, gallery, pairing
from posmaps.linalg import maximally_entangled, swap_operator

# the identity map on 3x3 matrices has Choi matrix 3 P_Omega
iota = gallery("identity", n=3)
omega = maximally_entangled(3)
print("C_id == 3 P_Omega:", np.allclose(iota.choi, 3 * np.outer(omega, omega.conj())))

# the transpose map has the swap operator as Choi matrix
t = gallery("transpose", n=3)
print("C_t == F:", np.allclose(t.choi, swap_operator(3)))
print("spectrum of F:", np.round(np.linalg.eigvalsh(t.choi), 12))

# evaluating a map goes through its Choi matrix
a = np.arange(9.0).reshape(3, 3)
print("t(a) == a^T:", np.allclose(apply(t, a), a.T))

# the Choi map on B(C^3)
phi = gallery("choi3")
print("phi(1) =\n", apply(phi, np.eye(3)).real)

# Tr(C_phi C_psi) is the pairing used for dual cones
print("<Tr, id> =", pairing(gallery("trace", n=3), iota))
