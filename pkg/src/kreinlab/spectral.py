"""Eigenvalue clustering, Riesz projections, and region classification.

Riesz projections are computed by trapezoid quadrature of the resolvent over
a circle separating the cluster from the rest of the spectrum.  The trapezoid
rule is spectrally accurate on circles and needs only linear solves, so it
works for non-normal matrices where eigenvector conditioning is poor.  The
number of quadrature points doubles until idempotency converges.

Region classification (on the real axis / unit circle versus off it) is
tolerance-banded: eigenvalues inside the band are "on", eigenvalues in the
ambiguity zone just outside raise :class:`AmbiguousClassification` rather
than being silently assigned, because the Krein invariants are discontinuous
exactly at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import config, numerics
from .errors import (AmbiguousClassification, CorrectionFailed, MembershipError,
                     NoSeparatingContour, QuadratureDivergence, UnmatchedReflection)
from .krein import KreinStructure, is_j_hermitian

REGIONS_HERMITIAN = ("real-axis", "upper-half", "lower-half")
REGIONS_UNITARY = ("unit-circle", "inside-disc", "outside-disc")
ON_REGIONS = ("real-axis", "unit-circle")


def cluster_eigenvalues(eigs, delta: float) -> list[list[int]]:
    """Partition eigenvalue indices by the transitive closure of
    ``|lam_i - lam_j| <= delta``.

    Clusters are returned sorted by (real, imag) of their centroid; indices
    within a cluster are sorted.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    eigs = np.asarray(eigs, dtype=complex)
    n = eigs.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(eigs[i] - eigs[j]) <= delta:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    clusters = [sorted(g) for g in groups.values()]
    clusters.sort(key=lambda g: (np.mean(eigs[g]).real, np.mean(eigs[g]).imag))
    return clusters


def default_delta(eigs, tol: config.ToleranceConfig | None = None) -> float:
    """Default clustering radius: scale * (1 + spectral radius)."""
    t = config.get(tol)
    rho = float(np.max(np.abs(eigs))) if len(eigs) else 0.0
    return t.cluster_delta_scale * (1.0 + rho)


@dataclass
class SpectralCluster:
    """A separated group of eigenvalues with its Riesz projection."""

    center: complex
    eigenvalues: np.ndarray
    indices: list[int]
    multiplicity: int
    projection: np.ndarray
    frame: np.ndarray
    region: str | None = None

    def validate(self, t_mat, tol: config.ToleranceConfig | None = None):
        t = config.get(tol)
        p = self.projection
        idem = numerics.norm(p @ p - p)
        comm = numerics.norm(p @ t_mat - t_mat @ p)
        if idem > t.riesz:
            raise QuadratureDivergence(f"||P^2 - P|| = {idem:.3e}")
        if comm > t.riesz * max(numerics.norm(t_mat), 1.0):
            raise QuadratureDivergence(f"||[P, T]|| = {comm:.3e}")
        tr = np.trace(p)
        if abs(tr - round(tr.real)) > t.riesz_trace:
            raise QuadratureDivergence(f"trace(P) = {tr:.6f} not near an integer")


@dataclass
class ClusterPartition:
    """All clusters of a matrix, with the inter-cluster gap actually achieved."""

    clusters: list[SpectralCluster]
    gap: float
    delta: float
    dim: int

    def on_region(self) -> list[SpectralCluster]:
        return [c for c in self.clusters if c.region in ON_REGIONS]

    def total_multiplicity(self, region: str | None = None) -> int:
        cs = self.clusters if region is None else \
            [c for c in self.clusters if c.region == region]
        return sum(c.multiplicity for c in cs)


def _separating_circle(cluster_eigs, other_eigs, delta,
                       tol: config.ToleranceConfig):
    """Center and radius of a circle separating the cluster from the rest."""
    center = complex(np.mean(cluster_eigs))
    d_in = max((abs(l - center) for l in cluster_eigs), default=0.0)
    if len(other_eigs):
        d_out = min(abs(l - center) for l in other_eigs)
    else:
        d_out = None
    if d_out is None:
        radius = d_in + max(1.0, delta)
    else:
        radius = max((d_in + d_out) / 2.0, delta / 2.0)
        clearance = tol.contour_clearance * (1.0 + abs(center) + radius)
        if radius - d_in < clearance or d_out - radius < clearance:
            raise NoSeparatingContour(
                f"circle at {center:.6g} radius {radius:.3e} comes within "
                f"{min(radius - d_in, d_out - radius):.3e} of the spectrum")
    return center, radius


def _quadrature(t_mat, center, radius, points) -> np.ndarray:
    n = t_mat.shape[0]
    eye = np.eye(n, dtype=complex)
    acc = np.zeros((n, n), dtype=complex)
    theta = 2.0 * np.pi * np.arange(points) / points
    for w in np.exp(1j * theta):
        z = center + radius * w
        acc += radius * w * sla.lu_solve(
            sla.lu_factor(z * eye - t_mat, check_finite=False), eye,
            check_finite=False)
    return acc / points


def riesz_projection(t_mat, cluster, quad_points: int | None = None,
                     all_eigs=None, delta: float | None = None,
                     tol: config.ToleranceConfig | None = None) -> np.ndarray:
    """Riesz spectral projection onto a cluster of eigenvalues.

    ``cluster`` is the collection of eigenvalues (with multiplicity) to
    enclose.  The contour is a circle around the cluster centroid; quadrature
    points double until ``||P^2 - P||`` converges or the cap is reached.
    """
    t = config.get(tol)
    t_mat = numerics.as_matrix(t_mat, square=True, name="T")
    cluster = np.asarray(list(cluster), dtype=complex)
    if all_eigs is None:
        all_eigs = numerics.eigvals(t_mat)
    if delta is None:
        delta = default_delta(all_eigs, t)
    # remove one spectrum copy of each cluster member to find the exterior
    rest = list(all_eigs)
    for lam in cluster:
        dists = [abs(lam - mu) for mu in rest]
        j = int(np.argmin(dists))
        if dists[j] > max(delta, t.spectrum_match * (1 + abs(lam))):
            raise NoSeparatingContour(
                f"requested eigenvalue {lam:.6g} not found in the spectrum")
        rest.pop(j)
    center, radius = _separating_circle(cluster, rest, delta, t)
    points = t.quad_start if quad_points is None else quad_points
    while True:
        p = _quadrature(t_mat, center, radius, points)
        if numerics.norm(p @ p - p) <= t.riesz:
            return p
        if points >= t.quad_cap:
            raise QuadratureDivergence(
                f"||P^2 - P|| = {numerics.norm(p @ p - p):.3e} at {points} points")
        points *= 2


def spectral_partition(t_mat, delta: float | None = None,
                       quad_points: int | None = None,
                       tol: config.ToleranceConfig | None = None,
                       eigs=None) -> ClusterPartition:
    """Cluster the spectrum and compute all Riesz projections and frames."""
    t = config.get(tol)
    t_mat = numerics.as_matrix(t_mat, square=True, name="T")
    if eigs is None:
        eigs = numerics.eigvals(t_mat)
    if delta is None:
        delta = default_delta(eigs, t)
    groups = cluster_eigenvalues(eigs, delta)
    clusters = []
    for idx in groups:
        members = eigs[idx]
        p = riesz_projection(t_mat, members, quad_points=quad_points,
                             all_eigs=eigs, delta=delta, tol=t)
        mult = int(round(np.trace(p).real))
        u, s, _ = sla.svd(p, check_finite=False)
        frame = u[:, :mult]
        c = SpectralCluster(center=complex(np.mean(members)),
                            eigenvalues=members, indices=list(idx),
                            multiplicity=mult, projection=p, frame=frame)
        c.validate(t_mat, t)
        if mult != len(idx):
            raise QuadratureDivergence(
                f"projection rank {mult} != cluster size {len(idx)}")
        clusters.append(c)
    total = sum(c.multiplicity for c in clusters)
    if total != t_mat.shape[0]:
        raise QuadratureDivergence("cluster multiplicities do not sum to dim")
    s = sum(c.projection for c in clusters)
    if numerics.norm(s - np.eye(t_mat.shape[0])) > t.partition_sum:
        raise QuadratureDivergence("projections do not sum to the identity")
    gap = np.inf
    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            for a in clusters[i].eigenvalues:
                for b in clusters[j].eigenvalues:
                    gap = min(gap, abs(a - b))
    return ClusterPartition(clusters=clusters, gap=float(gap), delta=delta,
                            dim=t_mat.shape[0])


def _boundary_distance(lam: complex, kind: str) -> float:
    if kind == "hermitian":
        return abs(lam.imag)
    return abs(abs(lam) - 1.0)


def _region_of(lam: complex, kind: str, eps: float, factor: float) -> str:
    d = _boundary_distance(lam, kind)
    if d <= eps:
        return "real-axis" if kind == "hermitian" else "unit-circle"
    if d <= factor * eps:
        raise AmbiguousClassification(
            f"eigenvalue {lam:.8g} sits {d:.2e} from the boundary, inside the "
            f"ambiguity zone ({eps:.1e}, {factor * eps:.1e}]", eigenvalue=lam)
    if kind == "hermitian":
        return "upper-half" if lam.imag > 0 else "lower-half"
    return "inside-disc" if abs(lam) < 1.0 else "outside-disc"


def classify_partition(part: ClusterPartition, kind: str,
                       eps_region: float | None = None,
                       tol: config.ToleranceConfig | None = None) -> ClusterPartition:
    """Tag every cluster with its region; clusters may not straddle bands."""
    t = config.get(tol)
    eps = t.eps_region if eps_region is None else eps_region
    if kind not in ("unitary", "hermitian"):
        raise ValueError(f"kind must be 'unitary' or 'hermitian', got {kind!r}")
    for c in part.clusters:
        tags = {_region_of(l, kind, eps, t.ambiguous_factor)
                for l in c.eigenvalues}
        if len(tags) != 1:
            raise AmbiguousClassification(
                f"cluster at {c.center:.8g} straddles regions {sorted(tags)}",
                eigenvalue=c.center)
        c.region = tags.pop()
    return part


def spectral_subspaces(t_mat, K: KreinStructure, region: str,
                       eps_region: float | None = None,
                       delta: float | None = None,
                       tol: config.ToleranceConfig | None = None) -> ClusterPartition:
    """Partition restricted to the clusters lying in the named region."""
    if region in REGIONS_HERMITIAN:
        kind = "hermitian"
    elif region in REGIONS_UNITARY:
        kind = "unitary"
    else:
        raise ValueError(f"unknown region {region!r}")
    part = spectral_partition(t_mat, delta=delta, tol=tol)
    classify_partition(part, kind, eps_region=eps_region, tol=tol)
    kept = [c for c in part.clusters if c.region == region]
    return ClusterPartition(clusters=kept, gap=part.gap, delta=part.delta,
                            dim=part.dim)


@dataclass
class SymmetryReport:
    """Residuals of the projection reflection identities, cluster by cluster."""

    pairs: list[tuple[int, int]]
    residuals: list[float]

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)


def check_projection_symmetry(a, K: KreinStructure, part: ClusterPartition,
                              kind: str,
                              tol: config.ToleranceConfig | None = None) -> SymmetryReport:
    """Check P_cluster^* = J P_reflected J with the kind-appropriate reflection.

    For unitaries the reflection is lam -> 1/conj(lam); for hermitians it is
    lam -> conj(lam).  Raises :class:`UnmatchedReflection` when a reflected
    cluster is missing.
    """
    t = config.get(tol)
    pairs, residuals = [], []
    centers = [c.center for c in part.clusters]
    for i, c in enumerate(part.clusters):
        if kind == "unitary":
            if abs(c.center) < 1e-12:
                raise UnmatchedReflection(
                    f"cluster at {c.center:.3g} has no inverse-conjugate image")
            target = 1.0 / np.conj(c.center)
        else:
            target = np.conj(c.center)
        dists = [abs(mu - target) for mu in centers]
        j = int(np.argmin(dists))
        if dists[j] > max(part.delta, t.spectrum_match * (1 + abs(target))):
            raise UnmatchedReflection(
                f"no cluster at the reflection {target:.6g} of {c.center:.6g}")
        res = numerics.norm(c.projection.conj().T
                            - K.J @ part.clusters[j].projection @ K.J)
        pairs.append((i, j))
        residuals.append(float(res))
    return SymmetryReport(pairs=pairs, residuals=residuals)


def fredholm_corrector(h_mat, K: KreinStructure, lam: float,
                       tol: config.ToleranceConfig | None = None) -> np.ndarray:
    """Finite-rank corrector F = J Psi Psi^* making H - lam + F invertible.

    Psi is an orthonormal frame of ker(H - lam); F is J-hermitian and the
    corrected operator is checked to be invertible (smallest singular value
    above 1e-8, scaled).
    """
    t = config.get(tol)
    h_mat = numerics.as_matrix(h_mat, square=True, name="H")
    K.check_dim(h_mat)
    member = is_j_hermitian(h_mat, K, tol=t)
    if not member:
        raise MembershipError("H is not J-hermitian", residual=member.residual)
    n = K.dim
    psi = numerics.kernel_frame(h_mat - lam * np.eye(n), tol=t)
    f_mat = K.apply(psi @ psi.conj().T) if psi.shape[1] else np.zeros((n, n), complex)
    corrected = h_mat - lam * np.eye(n) + f_mat
    smin = sla.svdvals(corrected)[-1]
    if smin <= 1e-8 * max(1.0, numerics.norm(h_mat)):
        raise CorrectionFailed(
            f"corrected operator still singular, smin = {smin:.3e}")
    return f_mat
