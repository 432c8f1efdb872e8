#!/usr/bin/env python3
"""Tour of the quantum state manifold: GNS vs BKM metrics, the three
logarithmic derivatives, quantum variance bounds, and where each bound is
tight.

Run:  python3 demos/quantum_bounds_tour.py
"""

import numpy as np
from scipy.linalg import expm

from infogeo.quantum import (
    BKM,
    GNS_SLD,
    RIGHT,
    DensityMatrix,
    QuantumExponentialFamily,
    bkm_metric,
    gns_metric,
    log_derivatives,
    mean_parametrized_path,
    mean_path_derivative,
    quantum_cramer_rao,
    quantum_fisher_info,
    state_from_score,
)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)

print("=== GNS vs BKM on a skewed qubit ===")
rho = DensityMatrix(np.diag([0.9, 0.1]))
x = PAULI_X  # already centered: Tr[rho sigma_x] = 0
print(f"  GNS length^2 of sigma_x: {gns_metric(rho, x, x):.6f}")
print(f"  BKM length^2 of sigma_x: {bkm_metric(rho, x, x):.6f}")
print("  (the logarithmic mean never exceeds the arithmetic mean)")

print()
print("=== The rotating-qubit family rho_t = U_t diag(0.9, 0.1) U_t+ ===")
rho0 = np.diag([0.9, 0.1]).astype(complex)

def path(t):
    u = expm(-0.5j * t * PAULI_Y)
    return DensityMatrix(u @ rho0 @ u.conj().T)

drho = -0.5j * (PAULI_Y @ rho0 - rho0 @ PAULI_Y)
ld = log_derivatives(path, 0.0, drho=drho)
print(f"  d rho/dt = 0.4 sigma_x;  L_s = 0.8 sigma_x "
      f"(computed: {ld.symmetric[0,1].real:.3f} off-diagonal)")
print(f"  L_r Hermitian? {ld.right_is_hermitian}")
infos = {k: quantum_fisher_info(path, 0.0, k, drho=drho)
         for k in (GNS_SLD, BKM, RIGHT)}
for k, v in infos.items():
    print(f"  info[{k:7s}] = {v:9.5f}   bound = {1/v:.5f}")

f_sld = infos[GNS_SLD]
x_opt = ld.symmetric / f_sld
rep = quantum_cramer_rao(path, 0.0, x_opt, drho=drho)
print(f"  optimal SLD observable: variance {rep.variance:.6f} vs SLD bound "
      f"{rep.bound[GNS_SLD]:.6f}  (slack {rep.slack[GNS_SLD]:.1e})")

print()
print("=== BKM saturation along a quantum exponential family ===")
h0 = np.array([[0.4, 0.1], [0.1, -0.4]], dtype=complex)
fam = QuantumExponentialFamily(h0, [PAULI_X])
eta0 = float(state_from_score(fam, [0.3]).expectation(PAULI_X))
mpath = mean_parametrized_path(fam)
rep = quantum_cramer_rao(mpath, eta0, PAULI_X, drho=mean_path_derivative(fam, eta0))
print(f"  estimating the feature mean at eta = {eta0:+.4f}:")
print(f"  ordinary variance:        {rep.variance:.6f}")
print(f"  BKM variance (pairing):   {rep.bkm_variance:.6f}")
print(f"  BKM bound:                {rep.bound[BKM]:.6f}")
print(f"  pairing slack:            {rep.bkm_pairing_slack:.1e}   "
      f"(exactly saturated)")
print(f"  ordinary-variance slack:  {rep.slack[BKM]:.2e}   "
      f"(strictly positive unless the feature commutes with the state)")
