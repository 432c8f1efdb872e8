"""GNS and BKM metrics, logarithmic derivatives, and quantum variance bounds.

For a differentiable path of states with derivative D = d rho/d t (traceless
Hermitian), three logarithmic derivatives are computed in the eigenbasis of
the state:

* right:      L_r = rho^{-1} D, generally non-Hermitian;
* symmetric:  L_s solving D = (rho L_s + L_s rho)/2, kernel 2/(p+q);
* BKM:        L_B with kernel (log p - log q)/(p - q), the closed form of
              the resolvent integral and also the derivative of log rho.

Each gives a Fisher-type information number and a variance bound for
locally unbiased estimators of the path parameter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import BiasedEstimatorError
from ..spectral import (
    hermitian_part,
    kernel_apply,
    log_difference_kernel,
    logarithmic_mean_kernel,
    symmetric_inverse_kernel,
)
from .states import DensityMatrix, gauge_fix_score, project_traceless

GNS_SLD = "GNS_SLD"
BKM = "BKM"
RIGHT = "RIGHT"

_DRHO_TRACE_TOL = 1e-8
_UNBIASED_TOL = 1e-6
_FD_STEP = 1e-5


def _as_score(rho: DensityMatrix, x) -> np.ndarray:
    m = x.matrix if hasattr(x, "matrix") else x
    if hasattr(x, "rep") and x.rep != "score":
        raise ValueError("metric arguments must be scores; convert first")
    m = hermitian_part(m)
    if m.shape[0] != rho.dim:
        raise ValueError(f"operand dim {m.shape[0]} != state dim {rho.dim}")
    return gauge_fix_score(rho, m)


def gns_metric(rho: DensityMatrix, x, y) -> float:
    """Re Tr[rho X Y] on scores; positive definite since rho is faithful."""
    xs = _as_score(rho, x)
    ys = _as_score(rho, y)
    return float(np.trace(rho.matrix @ xs @ ys).real)


def bkm_metric(rho: DensityMatrix, x, y) -> float:
    """integral_0^1 Tr[rho^a X rho^(1-a) Y] da on scores.

    Evaluated in closed form through the logarithmic-mean kernel; never by
    quadrature (a quadrature evaluation exists in the tests as an oracle).
    """
    xs = _as_score(rho, x)
    ys = _as_score(rho, y)
    return float(
        np.trace(kernel_apply(rho.spectral, xs, logarithmic_mean_kernel) @ ys).real
    )


def bkm_gram(rho: DensityMatrix, xs) -> np.ndarray:
    """Gram matrix of BKM products of a list of scores."""
    mats = [_as_score(rho, x) for x in xs]
    out = np.zeros((len(mats), len(mats)))
    mapped = [kernel_apply(rho.spectral, m, logarithmic_mean_kernel) for m in mats]
    for i in range(len(mats)):
        for j in range(i, len(mats)):
            out[i, j] = out[j, i] = float(np.trace(mapped[i] @ mats[j]).real)
    return out


def path_derivative(
    path: Callable[[float], DensityMatrix], t0: float, h: float = _FD_STEP
) -> np.ndarray:
    """Central finite-difference derivative of a state path, symmetrized and
    projected back onto the traceless subspace."""
    hi = path(t0 + h).matrix
    lo = path(t0 - h).matrix
    d = (hi - lo) / (2.0 * h)
    tr = abs(np.trace(d).real)
    if tr > _DRHO_TRACE_TOL:
        raise ValueError(
            f"path derivative has trace {tr:.3e}; the family leaves the "
            f"trace-one surface"
        )
    return project_traceless(d)


def _resolve_drho(path, t0, drho) -> tuple[DensityMatrix, np.ndarray]:
    rho = path(t0)
    if drho is None:
        d = path_derivative(path, t0)
    else:
        d = drho(t0) if callable(drho) else np.asarray(drho)
        d = hermitian_part(d)
        if abs(np.trace(d).real) > _DRHO_TRACE_TOL:
            raise ValueError("supplied derivative is not traceless")
        d = project_traceless(d)
    return rho, d


@dataclass(frozen=True)
class LogDerivatives:
    """The three logarithmic derivatives of a path at one parameter value."""

    right: np.ndarray
    right_is_hermitian: bool
    symmetric: np.ndarray
    bkm: np.ndarray
    drho: np.ndarray


def log_derivatives(
    path: Callable[[float], DensityMatrix], t0: float, drho=None
) -> LogDerivatives:
    """Compute L_r, L_s and L_B of the path at t0.

    ``drho`` may supply the derivative analytically (a matrix or a callable
    of t); otherwise a central difference with step 1e-5 is used.  L_r is
    returned as a general matrix with an explicit hermiticity flag since it
    is non-Hermitian whenever the state and its derivative do not commute.
    """
    rho, d = _resolve_drho(path, t0, drho)
    r_inv = np.linalg.inv(rho.matrix)
    l_right = r_inv @ d
    herm = bool(np.linalg.norm(l_right - l_right.conj().T) < 1e-8)
    l_sym = kernel_apply(rho.spectral, d, symmetric_inverse_kernel)
    l_bkm = kernel_apply(rho.spectral, d, log_difference_kernel)
    return LogDerivatives(l_right, herm, l_sym, l_bkm, d)


def quantum_fisher_info(
    path: Callable[[float], DensityMatrix], t0: float, which: str, drho=None
) -> float:
    """Information number of the path for the chosen pairing.

    GNS_SLD: Re Tr[rho L_s^2]; BKM: Tr[D L_B]; RIGHT: Tr[rho L_r* L_r].
    All three coincide with the classical Fisher information when the path
    commutes with its derivative.
    """
    rho, d = _resolve_drho(path, t0, drho)
    if which == GNS_SLD:
        l = kernel_apply(rho.spectral, d, symmetric_inverse_kernel)
        return float(np.trace(rho.matrix @ l @ l).real)
    if which == BKM:
        l = kernel_apply(rho.spectral, d, log_difference_kernel)
        return float(np.trace(d @ l).real)
    if which == RIGHT:
        l = np.linalg.inv(rho.matrix) @ d
        return float(np.trace(rho.matrix @ l.conj().T @ l).real)
    raise ValueError(f"unknown information kind {which!r}")


@dataclass(frozen=True)
class QuantumCramerRaoReport:
    """Variance of an unbiased estimator against the three information bounds.

    ``variance`` is the ordinary variance Tr[rho X^2] - (Tr[rho X])^2;
    ``bkm_variance`` is the squared BKM length of the centered estimator,
    which is never larger (logarithmic mean below arithmetic mean).  The
    slack entries are variance - bound; ``bkm_pairing_slack`` is
    bkm_variance - 1/info_BKM, the quantity that vanishes identically along
    exponential families in mixture parametrization.
    """

    variance: float
    bkm_variance: float
    info: dict
    bound: dict
    slack: dict
    bkm_pairing_slack: float
    bias_derivative: float


def quantum_cramer_rao(
    path: Callable[[float], DensityMatrix],
    t0: float,
    observable: np.ndarray,
    drho=None,
    h: float = _FD_STEP,
) -> QuantumCramerRaoReport:
    """Cramer-Rao report for an observable estimating the path parameter.

    Precondition (checked): the observable is locally unbiased, i.e.
    Tr[rho_t X] = t and its derivative equals 1 to 1e-6.
    """
    rho, d = _resolve_drho(path, t0, drho)
    x = hermitian_part(observable)
    mean = rho.expectation(x)
    dmean = float(np.trace(d @ x).real)
    if abs(mean - t0) > _UNBIASED_TOL or abs(dmean - 1.0) > _UNBIASED_TOL:
        raise BiasedEstimatorError(
            f"observable is biased: mean {mean!r} at t0 {t0!r}, "
            f"mean derivative {dmean!r}",
            residual=(mean - t0, dmean - 1.0),
        )
    x0 = x - mean * np.eye(rho.dim)
    variance = float(np.trace(rho.matrix @ x0 @ x0).real)
    bkm_var = bkm_metric(rho, x0, x0)
    info = {
        GNS_SLD: quantum_fisher_info(path, t0, GNS_SLD, drho=d),
        BKM: quantum_fisher_info(path, t0, BKM, drho=d),
        RIGHT: quantum_fisher_info(path, t0, RIGHT, drho=d),
    }
    bound = {k: 1.0 / v for k, v in info.items()}
    slack = {k: variance - b for k, b in bound.items()}
    return QuantumCramerRaoReport(
        variance=variance,
        bkm_variance=bkm_var,
        info=info,
        bound=bound,
        slack=slack,
        bkm_pairing_slack=bkm_var - bound[BKM],
        bias_derivative=dmean - 1.0,
    )
