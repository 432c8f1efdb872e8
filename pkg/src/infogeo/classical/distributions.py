"""Strictly positive distributions on a finite sample space and their tangents.

A tangent direction at a distribution rho comes in two interchangeable
pictures: the mixture picture (a zero-sum signed measure v, the difference of
nearby states) and the exponential picture (a score x with zero rho-mean, the
derivative of the log density).  The pictures are linked pointwise by
v = rho * x, and the Fisher metric is the rho-weighted covariance of scores.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import BoundaryError

#: Distributions with a cell below this are rejected unless an operation
#: documents a boundary override; scores and log densities blow up there.
FAITHFULNESS_FLOOR = 1e-14

_NORMALIZATION_TOL = 1e-12
_ZERO_SUM_TOL = 1e-12

MIXTURE = "mixture"
EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class FiniteDistribution:
    """Probability vector over a finite sample space, faithful by default.

    Parameters
    ----------
    probs : array_like
        Nonnegative weights summing to 1 (to 1e-12).
    allow_boundary : bool
        Permit cells at (or below) the faithfulness floor.  Only operations
        that extend continuously to the boundary (entropy, sampling) accept
        such states.
    """

    probs: np.ndarray
    allow_boundary: bool = False

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise ValueError(f"probability vector must be 1-d, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("probabilities must be finite")
        if np.any(p < 0):
            raise ValueError(f"negative probability {p.min()!r}")
        total = p.sum()
        if abs(total - 1.0) > _NORMALIZATION_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        if not self.allow_boundary and p.min() <= FAITHFULNESS_FLOOR:
            raise BoundaryError(
                f"distribution is not faithful: min probability {p.min()!r} "
                f"<= {FAITHFULNESS_FLOOR}; pass allow_boundary=True where the "
                f"operation supports it"
            )
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def size(self) -> int:
        return self.probs.shape[0]

    def is_faithful(self) -> bool:
        return bool(self.probs.min() > FAITHFULNESS_FLOOR)


def uniform(n: int) -> FiniteDistribution:
    """Uniform distribution on n points."""
    return FiniteDistribution(np.full(n, 1.0 / n))


@dataclass(frozen=True)
class ClassicalTangent:
    """Tangent vector in the mixture or exponential representation.

    Mixture vectors are validated to be zero-sum here; the score condition
    (zero mean) involves a base state and is enforced by the operations that
    receive one.
    """

    rep: str
    vec: np.ndarray

    def __post_init__(self):
        if self.rep not in (MIXTURE, EXPONENTIAL):
            raise ValueError(f"unknown representation {self.rep!r}")
        v = np.asarray(self.vec, dtype=float)
        if v.ndim != 1:
            raise ValueError(f"tangent vector must be 1-d, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("tangent vector must be finite")
        if self.rep == MIXTURE and abs(v.sum()) > _ZERO_SUM_TOL * max(
            1.0, np.abs(v).max()
        ):
            raise ValueError(f"mixture tangent must be zero-sum, sum={v.sum()!r}")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vec", v)

    @property
    def size(self) -> int:
        return self.vec.shape[0]


def mixture_tangent(vec) -> ClassicalTangent:
    return ClassicalTangent(MIXTURE, vec)


def score_tangent(vec) -> ClassicalTangent:
    return ClassicalTangent(EXPONENTIAL, vec)


def _check_size(rho: FiniteDistribution, t: ClassicalTangent):
    if t.size != rho.size:
        raise ValueError(
            f"tangent on {t.size} points does not match sample space of "
            f"size {rho.size}"
        )


def tangent_convert(
    rho: FiniteDistribution, t: ClassicalTangent, target_rep: str
) -> ClassicalTangent:
    """Convert a tangent between representations at the base state rho.

    mixture -> score divides by rho and recenters to zero rho-mean; score ->
    mixture multiplies by rho and removes any residual total mass.  The two
    maps are mutually inverse, and the pairing sum(v * x) is representation
    independent.
    """
    _check_size(rho, t)
    if target_rep not in (MIXTURE, EXPONENTIAL):
        raise ValueError(f"unknown representation {target_rep!r}")
    if t.rep == target_rep:
        return t
    p = rho.probs
    if t.rep == MIXTURE:
        x = t.vec / p
        x = x - p @ x
        return ClassicalTangent(EXPONENTIAL, x)
    v = p * t.vec
    v = v - v.sum() / len(v)
    return ClassicalTangent(MIXTURE, v)


def as_score(rho: FiniteDistribution, t: ClassicalTangent) -> np.ndarray:
    """Score vector of a tangent at rho, recentered to exact zero mean."""
    x = tangent_convert(rho, t, EXPONENTIAL).vec
    return x - rho.probs @ x


def fisher_metric(
    rho: FiniteDistribution, x: ClassicalTangent, y: ClassicalTangent
) -> float:
    """Fisher-Rao inner product at rho: the rho-expectation of the two scores.

    Symmetric, bilinear, and positive definite on nonzero scores of a
    faithful state.
    """
    xs = as_score(rho, x)
    ys = as_score(rho, y)
    return float(np.sum(rho.probs * xs * ys))


def entropy(rho) -> float:
    """Shannon entropy -sum p log p, with 0 log 0 = 0 at the boundary."""
    p = rho.probs if isinstance(rho, FiniteDistribution) else np.asarray(rho, float)
    mask = p > 0
    return float(-(p[mask] * np.log(p[mask])).sum())


def alpha_embed(rho: FiniteDistribution, alpha: float) -> np.ndarray:
    """Coordinates w -> rho(w)^p with p = (1 - alpha)/2.

    At alpha = 0 this is the square-root embedding onto the unit sphere.
    alpha = 1 is rejected: the exponent degenerates to 0 and the chart
    collapses; use score coordinates there instead.
    """
    if alpha == 1.0:
        raise ValueError(
            "alpha=1 embedding degenerates (exponent 0); use scores instead"
        )
    p = 0.5 * (1.0 - alpha)
    return rho.probs**p


def hellinger_distance(rho: FiniteDistribution, sigma: FiniteDistribution) -> float:
    """Euclidean distance between the square-root density vectors."""
    if rho.size != sigma.size:
        raise ValueError("distributions live on different sample spaces")
    return float(np.linalg.norm(np.sqrt(rho.probs) - np.sqrt(sigma.probs)))


def bhattacharyya_angle(rho: FiniteDistribution, sigma: FiniteDistribution) -> float:
    """Great-circle distance between the square-root vectors on the sphere.

    The chordal counterpart is :func:`hellinger_distance`; both are exposed
    and neither is privileged.
    """
    if rho.size != sigma.size:
        raise ValueError("distributions live on different sample spaces")
    c = float(np.sqrt(rho.probs * sigma.probs).sum())
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def parallel_transport(
    rho: FiniteDistribution,
    sigma: FiniteDistribution,
    t: ClassicalTangent,
    which: str,
) -> ClassicalTangent:
    """Flat transport of a tangent from rho to sigma.

    ``which='minus'`` transports in the mixture picture: the zero-sum vector
    is unchanged.  ``which='plus'`` transports in the score picture: the
    function is unchanged up to recentering to zero sigma-mean.  Both are
    path independent, and they are dual with respect to the Fisher pairing:
    the sigma-pairing of a plus-transported score with a minus-transported
    mixture vector equals the rho-pairing of the originals.
    """
    if rho.size != sigma.size:
        raise ValueError("transport endpoints live on different sample spaces")
    _check_size(rho, t)
    if which == "minus":
        v = tangent_convert(rho, t, MIXTURE).vec
        return ClassicalTangent(MIXTURE, v)
    if which == "plus":
        x = as_score(rho, t)
        return ClassicalTangent(EXPONENTIAL, x - sigma.probs @ x)
    raise ValueError(f"unknown transport {which!r}; expected 'plus' or 'minus'")
