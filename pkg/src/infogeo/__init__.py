"""infogeo: numerical information geometry at desk scale.

Classical Fisher-Rao geometry on finite sample spaces, exponential families
with their Legendre structure and alpha-connections, estimation with
Cramer-Rao reports, the finite-dimensional quantum state manifold with GNS
and BKM metrics and quantum variance bounds, stochastic-map monotonicity
audits, Kubo-Mori perturbation series, and rolling max-entropy projection
of linear dynamics.
"""

from . import (
    classical,
    errors,
    kubomori,
    maps,
    projection,
    quantum,
    serialize,
    spectral,
)

__all__ = [
    "classical",
    "errors",
    "kubomori",
    "maps",
    "projection",
    "quantum",
    "serialize",
    "spectral",
]

__version__ = "0.1.0"
