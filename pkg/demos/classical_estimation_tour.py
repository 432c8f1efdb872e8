#!/usr/bin/env python3
"""Tour of classical estimation: Fisher information, the Cramer-Rao bound,
max-entropy fitting, and recovery from sampled data.

Run:  python3 demos/classical_estimation_tour.py
"""

import numpy as np

from infogeo.classical import (
    ExponentialFamily,
    FiniteDistribution,
    ParametricFamily,
    covariance,
    cramer_rao_report,
    entropy,
    estimate_from_data,
    fisher_information_matrix,
    maxent_fit,
    mixture_coords,
    sample,
)

print("=== Bernoulli: the textbook case ===")
bern = ParametricFamily.from_map(
    lambda th: FiniteDistribution([1 - th[0], th[0]]), 1, 2
)
for eta in (0.2, 0.5, 0.8):
    g = fisher_information_matrix(bern, [eta])[0, 0]
    print(f"  eta={eta:.1f}:  G = {g:8.4f}   (closed form 1/(eta(1-eta)) = "
          f"{1/(eta*(1-eta)):.4f})")

rep = cramer_rao_report(bern, [0.3], [[0.0, 1.0]])
print(f"  identity estimator at eta=0.3: variance {rep.covariance[0,0]:.4f}, "
      f"bound {1/rep.information[0,0]:.4f}, efficiency {rep.efficiency:.6f}")

print()
print("=== Max-entropy fitting on three points, f(w) = w ===")
fam = ExponentialFamily(np.array([[0.0, 1.0, 2.0]]))
for target in (1.0, 0.8, 1.6):
    pt = maxent_fit(fam, [target])
    print(f"  mean {target:.2f}: xi = {pt.xi[0]:+8.4f}, "
          f"p = {np.round(pt.probs(), 4)}, entropy = "
          f"{entropy(pt.distribution()):.5f}")
print("  (mean 1.0 is the symmetric point: xi = 0 and the uniform state)")

print()
print("=== The moment polytope edge ===")
pt = maxent_fit(fam, [1.999])
print(f"  mean 1.999 is feasible but extreme: xi = {pt.xi[0]:+.3f}, "
      f"means matched to {abs(mixture_coords(pt)[0] - 1.999):.1e}")
try:
    maxent_fit(fam, [2.5])
except Exception as exc:
    print(f"  mean 2.5 is outside the polytope: {type(exc).__name__}: {exc}")

print()
print("=== Estimation from sampled data ===")
rng_truth = ExponentialFamily(np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 1.0]]))
truth = rng_truth.point([0.4, -0.6])
m = 100_000
hist = sample(truth.distribution(), m, seed=42)
fitted = estimate_from_data(rng_truth, hist)
se = np.sqrt(np.diag(np.linalg.inv(covariance(truth))) / m)
print(f"  true xi      = {np.round(truth.xi, 4)}")
print(f"  fitted xi    = {np.round(fitted.xi, 4)}")
print(f"  standard err = {np.round(se, 4)}   "
      f"(deviations: {np.round((fitted.xi - truth.xi)/se, 2)} sigma)")
