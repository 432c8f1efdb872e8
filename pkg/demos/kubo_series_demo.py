#!/usr/bin/env python3
"""The perturbation series of log Z: per-order terms, convergence against
the exact value, the t^4 law for order-3 truncation, and the mean/metric
derivative identities.

Run:  python3 demos/kubo_series_demo.py
"""

import numpy as np

from infogeo.kubomori import (
    PerturbationProblem,
    expand_log_z,
    gibbs_state,
    kubo_n_point,
    massieu_derivative_check,
)
from infogeo.quantum import bkm_metric
from infogeo.spectral import hermitian_part

rng = np.random.default_rng(11)
dim = 4
a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
h0 = hermitian_part(a)
b = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
v = hermitian_part(b) * 0.3

print("=== Series for log Z_V at a moderate perturbation ===")
rep = expand_log_z(PerturbationProblem(h0, v, max_order=6))
print(f"  exact log Z = {rep.exact_log_z:+.12f}")
print(f"  {'order':>5s} {'term':>16s} {'partial sum':>16s} {'|error|':>12s}")
for k in range(len(rep.terms)):
    print(f"  {k:5d} {rep.terms[k]:+16.10f} {rep.partial_sums[k]:+16.10f} "
          f"{rep.truncation_errors[k]:12.2e}")
print(f"  diverged flag: {rep.diverged}")

print()
print("=== Order-3 truncation error follows t^4 ===")
ts = [0.08, 0.04, 0.02, 0.01]
errs = []
for t in ts:
    errs.append(
        expand_log_z(PerturbationProblem(h0, t * v, max_order=3)).truncation_errors[-1]
    )
    print(f"  t = {t:.2f}: |error after order 3| = {errs[-1]:.3e}")
slope = np.polyfit(np.log(ts), np.log(errs), 1)[0]
print(f"  log-log slope: {slope:.3f}")

print()
print("=== The first two derivatives of log Z are mean and metric ===")
chk = massieu_derivative_check(PerturbationProblem(h0, v))
rho0, _ = gibbs_state(h0)
v0 = v - np.trace(rho0.matrix @ v).real * np.eye(dim)
print(f"  |d/dt log Z + <V>|            = {chk.first:.2e}")
print(f"  |d2/dt2 log Z - BKM norm^2|   = {chk.second:.2e}")
print(f"  BKM norm^2 of centered V      = {bkm_metric(rho0, v0, v0):.8f}")
print(f"  2-point simplex average       = {kubo_n_point(rho0, [v0, v0]):.8f}")
print("  (the two-point function at centered arguments IS the BKM metric)")
