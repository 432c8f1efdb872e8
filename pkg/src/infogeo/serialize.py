"""JSON and CSV wire formats.

All numeric output is emitted with 17 significant digits through a
locale-independent formatter, so reports are byte-reproducible and numbers
round-trip exactly through text.  Matrices travel as

    {"dim": n, "re": [[...]], "im": [[...]]}

with the imaginary block optional (defaults to zero); families, points and
distributions as plain JSON objects documented on their readers below.
"""

from __future__ import annotations

import numpy as np

from .classical.connections import GeodesicPath, geodesic_mixture_coords
from .classical.distributions import ClassicalTangent, FiniteDistribution, entropy
from .classical.families import CanonicalPoint, ExponentialFamily
from .kubomori import SERIES_CONVENTION, SeriesReport
from .maps import ContractionReport, QuantumCPUnitalMap
from .projection import ProjectionRun
from .quantum.families import QuantumExponentialFamily
from .quantum.states import DensityMatrix


def format_float(x: float) -> str:
    """17-significant-digit, locale-independent decimal form."""
    if isinstance(x, bool):
        raise TypeError("bool is not a float")
    if not np.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return format(float(x), ".17g")


def dump_json(obj) -> str:
    """Serialize nested dicts/lists/scalars with fixed float formatting."""
    out = []
    _emit(obj, out)
    return "".join(out) + "\n"


def _emit(obj, out):
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, str):
        out.append('"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            _emit(str(k), out)
            out.append(": ")
            _emit(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        out.append("[")
        for i, v in enumerate(seq):
            if i:
                out.append(", ")
            _emit(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


# ---------------------------------------------------------------------------
# matrices and states


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    doc = {"dim": m.shape[0], "re": m.real.tolist()}
    if np.abs(m.imag).max() > 0:
        doc["im"] = m.imag.tolist()
    return doc


def matrix_from_json(doc: dict) -> np.ndarray:
    if "re" not in doc:
        raise ValueError("matrix document needs an 're' block")
    re = np.asarray(doc["re"], dtype=float)
    im = np.asarray(doc.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != im.shape or re.ndim != 2 or re.shape[0] != re.shape[1]:
        raise ValueError(f"matrix blocks must be square and matching: {re.shape}")
    dim = doc.get("dim", re.shape[0])
    if dim != re.shape[0]:
        raise ValueError(f"declared dim {dim} != block size {re.shape[0]}")
    return re + 1j * im


def density_from_json(doc: dict, allow_boundary: bool = False) -> DensityMatrix:
    """Read a density matrix; an optional 'trace_tol' permits renormalizing
    a trace that drifted by at most that much in transit."""
    m = matrix_from_json(doc)
    tol = float(doc.get("trace_tol", 0.0))
    tr = float(np.trace(m).real)
    if tol > 0.0 and abs(tr - 1.0) <= tol and tr > 0:
        m = m / tr
    return DensityMatrix(m, allow_boundary=allow_boundary)


# ---------------------------------------------------------------------------
# classical objects


def distribution_to_json(rho: FiniteDistribution) -> dict:
    return {"omega": rho.size, "probs": rho.probs.tolist()}


def distribution_from_json(doc: dict, allow_boundary: bool = False) -> FiniteDistribution:
    if "probs" not in doc:
        raise ValueError("distribution document needs a 'probs' vector")
    p = np.asarray(doc["probs"], dtype=float)
    if "omega" in doc and int(doc["omega"]) != p.size:
        raise ValueError(f"declared omega {doc['omega']} != vector size {p.size}")
    return FiniteDistribution(p, allow_boundary=allow_boundary)


def family_to_json(family: ExponentialFamily, xi=None) -> dict:
    doc = {
        "omega": family.omega_size,
        "features": family.features.tolist(),
        "base_log_density": family.base_log_density.tolist(),
    }
    if xi is not None:
        doc["xi"] = np.asarray(xi, dtype=float).tolist()
    return doc


def family_from_json(doc: dict) -> ExponentialFamily:
    if "features" not in doc:
        raise ValueError("family document needs a 'features' block")
    features = np.asarray(doc["features"], dtype=float)
    base = doc.get("base_log_density")
    if "omega" in doc and int(doc["omega"]) != features.shape[1]:
        raise ValueError(
            f"declared omega {doc['omega']} != feature length {features.shape[1]}"
        )
    return ExponentialFamily(features, None if base is None else np.asarray(base))


def point_from_json(doc: dict) -> CanonicalPoint:
    family = family_from_json(doc)
    if "xi" not in doc:
        raise ValueError("point document needs 'xi'")
    return CanonicalPoint(family, np.asarray(doc["xi"], dtype=float))


def tangent_to_json(t: ClassicalTangent) -> dict:
    rep = "exponential" if t.rep == "exponential" else "mixture"
    return {"rep": rep, "vec": t.vec.tolist()}


def tangent_from_json(doc: dict) -> ClassicalTangent:
    if "rep" not in doc or "vec" not in doc:
        raise ValueError("tangent document needs 'rep' and 'vec'")
    return ClassicalTangent(doc["rep"], np.asarray(doc["vec"], dtype=float))


# ---------------------------------------------------------------------------
# quantum objects


def qfamily_to_json(fam: QuantumExponentialFamily) -> dict:
    return {
        "dim": fam.dim,
        "H0": matrix_to_json(fam.h0),
        "features": [matrix_to_json(f) for f in fam.features],
    }


def qfamily_from_json(doc: dict) -> QuantumExponentialFamily:
    if "features" not in doc:
        raise ValueError("quantum family document needs a 'features' list")
    feats = [matrix_from_json(d) for d in doc["features"]]
    dim = int(doc.get("dim", feats[0].shape[0]))
    h0 = matrix_from_json(doc["H0"]) if "H0" in doc else np.zeros((dim, dim))
    if h0.shape[0] != dim:
        raise ValueError(f"declared dim {dim} != H0 size {h0.shape[0]}")
    return QuantumExponentialFamily(h0, feats)


def kraus_from_json(docs: list) -> QuantumCPUnitalMap:
    return QuantumCPUnitalMap([matrix_from_json(d) for d in docs])


# ---------------------------------------------------------------------------
# reports


def cramer_rao_report_to_json(rep) -> dict:
    return {
        "V": rep.covariance.tolist(),
        "G": rep.information.tolist(),
        "gap": rep.gap.tolist(),
        "gap_min_eig": rep.min_gap_eigenvalue,
        "efficiency": rep.efficiency,
    }


def contraction_report_to_json(rep: ContractionReport, bins: int = 20) -> dict:
    counts, edges = rep.histogram(bins=bins)
    return {
        "metric": rep.metric,
        "trials": rep.trials,
        "skipped": rep.skipped,
        "worst_violation": rep.worst_violation,
        "ratios_histogram": counts.tolist(),
        "histogram_edges": edges.tolist(),
    }


def series_report_to_json(rep: SeriesReport) -> dict:
    return {
        "exact": rep.exact_log_z,
        "terms": rep.terms.tolist(),
        "partials": rep.partial_sums.tolist(),
        "errors": rep.truncation_errors.tolist(),
        "diverged": rep.diverged,
        "convention": SERIES_CONVENTION,
    }


def series_report_to_csv(rep: SeriesReport) -> str:
    lines = ["order,term,partial_sum,truncation_error"]
    for k in range(len(rep.terms)):
        lines.append(
            ",".join(
                [str(k)]
                + [
                    format_float(v)
                    for v in (
                        rep.terms[k],
                        rep.partial_sums[k],
                        rep.truncation_errors[k],
                    )
                ]
            )
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# trajectories


def geodesic_to_csv(path: GeodesicPath) -> str:
    n = path.family.n_features
    header = (
        ["t"]
        + [f"xi_{j + 1}" for j in range(n)]
        + [f"eta_{j + 1}" for j in range(n)]
        + ["psi", "entropy"]
    )
    etas = geodesic_mixture_coords(path)
    lines = [",".join(header)]
    for i, t in enumerate(path.times):
        pt = CanonicalPoint(path.family, path.xis[i])
        row = (
            [t]
            + list(path.xis[i])
            + list(etas[i])
            + [pt.psi, entropy(pt.distribution())]
        )
        lines.append(",".join(format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def run_to_csv(run: ProjectionRun) -> str:
    n = run.xis.shape[1] if len(run.xis) else 0
    header = (
        ["t"]
        + [f"xi_{j + 1}" for j in range(n)]
        + [f"eta_{j + 1}" for j in range(n)]
        + ["entropy", "projection_defect"]
    )
    lines = [",".join(header)]
    for i in range(len(run.times)):
        row = (
            [run.times[i]]
            + list(run.xis[i])
            + list(run.etas[i])
            + [run.entropies[i], run.defects[i]]
        )
        lines.append(",".join(format_float(v) for v in row))
    return "\n".join(lines) + "\n"
