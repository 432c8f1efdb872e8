"""The alpha-family of affine connections on an exponential family.

In canonical coordinates the +1 connection is flat (zero Christoffel
symbols) and the whole interpolating family is carried by the third central
moment of the features

    T_ijk = E[(f_i - eta_i)(f_j - eta_j)(f_k - eta_k)],

which is minus the xi-gradient of the covariance under the exp(-xi . f)
sign convention used here.  The lowered Christoffel symbols are

    Gamma^(alpha)_{ij,k} = -(1 - alpha)/2 * T_ijk,

so that alpha = -1 geodesics are straight lines in mixture coordinates and
alpha = 0 reproduces the Levi-Civita geodesics of the Fisher metric (great
circles in square-root coordinates on the full simplex).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .families import CanonicalPoint, ExponentialFamily, covariance, mixture_coords


def skewness_tensor(pt: CanonicalPoint) -> np.ndarray:
    """Third central moment of the features, fully symmetric, shape (n,n,n)."""
    p = pt.probs()
    f = pt.family.features
    centered = f - (f @ p)[:, None]
    return np.einsum("iw,jw,kw,w->ijk", centered, centered, centered, p)


def christoffel(pt: CanonicalPoint, alpha: float) -> np.ndarray:
    """Raised Christoffel symbols Gamma^k_{ij} in canonical coordinates.

    The skewness tensor is contracted with the inverse covariance; at
    alpha = +1 the result vanishes identically.
    """
    n = pt.family.n_features
    if alpha == 1.0:
        return np.zeros((n, n, n))
    t = skewness_tensor(pt)
    v = covariance(pt)
    try:
        lowered = -0.5 * (1.0 - alpha) * t
        return np.einsum("kl,ijl->kij", np.linalg.inv(v), lowered)
    except np.linalg.LinAlgError as exc:
        raise ValueError(
            "singular covariance matrix; features degenerate at this point"
        ) from exc


@dataclass(frozen=True)
class GeodesicPath:
    """Samples of a geodesic: times, canonical coordinates, velocities.

    ``truncated`` is set when the trajectory left the coordinate box before
    reaching t_max; the recorded samples stop at the last point inside.
    """

    family: ExponentialFamily
    times: np.ndarray
    xis: np.ndarray
    velocities: np.ndarray
    truncated: bool

    def points(self) -> list[CanonicalPoint]:
        return [CanonicalPoint(self.family, xi) for xi in self.xis]


def geodesic(
    pt0: CanonicalPoint,
    v0,
    alpha: float,
    t_max: float,
    dt: float = 1e-3,
    xi_box: float = 50.0,
) -> GeodesicPath:
    """Integrate the alpha-geodesic from pt0 with initial velocity v0.

    Fixed-step classical RK4 on the first-order system (xi, v); samples are
    returned at multiples of dt.  For alpha = +1 the Christoffel symbols
    vanish and RK4 reproduces the straight line xi_0 + t v_0 exactly.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    family = pt0.family
    v0 = np.asarray(v0, dtype=float)
    if v0.shape != (family.n_features,):
        raise ValueError(
            f"velocity has shape {v0.shape}, expected ({family.n_features},)"
        )

    def acceleration(xi, v):
        gamma = christoffel(CanonicalPoint(family, xi), alpha)
        return -np.einsum("kij,i,j->k", gamma, v, v)

    n_steps = int(round(t_max / dt))
    times = [0.0]
    xis = [pt0.xi.copy()]
    vels = [v0.copy()]
    xi, v = pt0.xi.copy(), v0.copy()
    truncated = False
    for k in range(n_steps):
        k1x, k1v = v, acceleration(xi, v)
        k2x = v + 0.5 * dt * k1v
        k2v = acceleration(xi + 0.5 * dt * k1x, k2x)
        k3x = v + 0.5 * dt * k2v
        k3v = acceleration(xi + 0.5 * dt * k2x, k3x)
        k4x = v + dt * k3v
        k4v = acceleration(xi + dt * k3x, k4x)
        xi = xi + (dt / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
        v = v + (dt / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
        if np.abs(xi).max() > xi_box:
            truncated = True
            break
        times.append((k + 1) * dt)
        xis.append(xi.copy())
        vels.append(v.copy())
    return GeodesicPath(
        family,
        np.asarray(times),
        np.asarray(xis),
        np.asarray(vels),
        truncated,
    )


def geodesic_mixture_coords(path: GeodesicPath) -> np.ndarray:
    """Mixture coordinates eta(t) along a geodesic path, one row per sample."""
    return np.asarray(
        [mixture_coords(CanonicalPoint(path.family, xi)) for xi in path.xis]
    )
