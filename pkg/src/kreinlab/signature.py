"""Krein inertia, per-eigenvalue signatures, and the global invariants.

The inertia of an on-circle (on-axis) cluster is the inertia of the hermitian
form Psi* J Psi, with Psi an orthonormal frame of the cluster's spectral
subspace.  Off-circle clusters carry inertia (0, 0) by definition and are
annotated with their reflection partner, which makes the pairing argument
behind the finite-dimension signature law auditable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config, numerics, spectral
from .errors import DegenerateForm, MembershipError, OddDimension
from .krein import KreinStructure, is_j_hermitian, is_j_unitary
from .spectral import ClusterPartition, SpectralCluster


@dataclass(frozen=True)
class InertiaPair:
    nu_plus: int
    nu_minus: int

    @property
    def sig(self) -> int:
        return self.nu_plus - self.nu_minus

    @property
    def total(self) -> int:
        return self.nu_plus + self.nu_minus

    @property
    def indefinite(self) -> bool:
        return self.nu_plus > 0 and self.nu_minus > 0

    def as_tuple(self) -> tuple[int, int]:
        return (self.nu_plus, self.nu_minus)


def form_inertia(frame, K: KreinStructure, zero_tol: float | None = None,
                 tol: config.ToleranceConfig | None = None) -> InertiaPair:
    """Inertia of the hermitian form Psi* J Psi on a frame."""
    t = config.get(tol)
    if zero_tol is None:
        zero_tol = t.zero_form
    form = frame.conj().T @ K.apply(frame)
    if form.shape[0] == 0:
        return InertiaPair(0, 0)
    w, _ = numerics.herm_eig(form, tol)
    if np.any(np.abs(w) <= zero_tol):
        raise DegenerateForm(
            f"restricted form has eigenvalue {w[np.argmin(np.abs(w))]:.3e} "
            f"within zero tolerance {zero_tol:.1e}")
    return InertiaPair(int(np.sum(w > zero_tol)), int(np.sum(w < -zero_tol)))


def inertia(cluster: SpectralCluster, K: KreinStructure,
            zero_tol: float | None = None,
            tol: config.ToleranceConfig | None = None) -> InertiaPair:
    """Krein inertia of a cluster.

    On-circle/on-axis clusters get the inertia of J restricted to their
    spectral subspace; clusters tagged with an off region return (0, 0) by
    definition.  Untagged clusters are computed unconditionally.
    """
    if cluster.region is not None and cluster.region not in spectral.ON_REGIONS:
        return InertiaPair(0, 0)
    pair = form_inertia(cluster.frame, K, zero_tol=zero_tol, tol=tol)
    if pair.total != cluster.multiplicity:
        raise DegenerateForm(
            f"inertia total {pair.total} != multiplicity {cluster.multiplicity}")
    return pair


@dataclass
class ClusterRow:
    """One line of an invariant report."""

    center: complex
    multiplicity: int
    nu: InertiaPair
    sig: int
    region: str
    paired_with: int | None = None


@dataclass
class InvariantReport:
    """Per-cluster inertia table plus the global invariants."""

    kind: str
    n_plus: int
    n_minus: int
    rows: list[ClusterRow]
    global_sig: int
    membership_residual: float
    sig2: int | None = None
    sec: int | None = None
    group: str | None = None

    @property
    def matches_finite_dimension_law(self) -> bool:
        return self.global_sig == self.n_plus - self.n_minus

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
            "global_sig": self.global_sig,
            "sig2": self.sig2,
            "sec": self.sec,
            "group": self.group,
            "identity_n_plus_minus_n_minus": self.n_plus - self.n_minus,
            "membership_residual": self.membership_residual,
            "clusters": [
                {
                    "center": [row.center.real, row.center.imag],
                    "multiplicity": row.multiplicity,
                    "nu": [row.nu.nu_plus, row.nu.nu_minus],
                    "sig": row.sig,
                    "region": row.region,
                    "paired_with": row.paired_with,
                }
                for row in self.rows
            ],
        }


def _reflection_partner(part: ClusterPartition, i: int, kind: str,
                        tol: config.ToleranceConfig) -> int | None:
    c = part.clusters[i]
    if kind == "unitary":
        if abs(c.center) < 1e-12:
            return None
        target = 1.0 / np.conj(c.center)
    else:
        target = np.conj(c.center)
    best, bestd = None, np.inf
    for j, other in enumerate(part.clusters):
        d = abs(other.center - target)
        if d < bestd:
            best, bestd = j, d
    if best is not None and bestd <= max(part.delta, tol.spectrum_match * (1 + abs(target))):
        return best
    return None


def classified_partition(a, K: KreinStructure, kind: str,
                         eps_region: float | None = None,
                         tol: config.ToleranceConfig | None = None) -> ClusterPartition:
    """Membership-checked, region-tagged spectral partition."""
    t = config.get(tol)
    member = is_j_unitary(a, K, tol=t) if kind == "unitary" \
        else is_j_hermitian(a, K, tol=t)
    if not member:
        raise MembershipError(
            f"operator is not J-{kind} (residual {member.residual:.3e})",
            residual=member.residual)
    part = spectral.spectral_partition(a, tol=t)
    spectral.classify_partition(part, kind, eps_region=eps_region, tol=t)
    return part


def global_signature(a, K: KreinStructure, kind: str,
                     eps_region: float | None = None,
                     zero_tol: float | None = None,
                     tol: config.ToleranceConfig | None = None) -> InvariantReport:
    """Full invariant report: per-cluster inertia and the global signature.

    The global signature is the sum of nu_+ - nu_- over on-circle clusters
    (unitary case) or on-axis clusters (hermitian case).
    """
    t = config.get(tol)
    member = is_j_unitary(a, K, tol=t) if kind == "unitary" \
        else is_j_hermitian(a, K, tol=t)
    if not member:
        raise MembershipError(
            f"operator is not J-{kind} (residual {member.residual:.3e})",
            residual=member.residual)
    part = spectral.spectral_partition(a, tol=t)
    spectral.classify_partition(part, kind, eps_region=eps_region, tol=t)
    rows = []
    total = 0
    for i, c in enumerate(part.clusters):
        nu = inertia(c, K, zero_tol=zero_tol, tol=t)
        partner = None
        if c.region not in spectral.ON_REGIONS:
            partner = _reflection_partner(part, i, kind, t)
        rows.append(ClusterRow(center=c.center, multiplicity=c.multiplicity,
                               nu=nu, sig=nu.sig, region=c.region,
                               paired_with=partner))
        total += nu.sig
    return InvariantReport(kind=kind, n_plus=K.n_plus, n_minus=K.n_minus,
                           rows=rows, global_sig=total,
                           membership_residual=member.residual)


def _check_structure_kind(structure, expected: tuple[int, int], what: str):
    if structure is None:
        return
    kind = structure.kind.as_tuple()
    if kind != expected:
        raise ValueError(f"{what} is defined for kind {expected}, got {kind}")


def sig2(a, K: KreinStructure, kind: str, structure=None,
         eps_region: float | None = None,
         tol: config.ToleranceConfig | None = None) -> int:
    """Z_2 invariant for kind (-1,-1): half the on-circle (on-axis) algebraic
    multiplicity, mod 2.

    An optional real ``structure`` is validated to be of kind (-1,-1).
    Raises :class:`OddDimension` when the multiplicity is odd, which signals
    a symmetry violation upstream (Kramers degeneracy forces evenness).
    """
    _check_structure_kind(structure, (-1, -1), "Sig_2")
    part = classified_partition(a, K, kind, eps_region=eps_region, tol=tol)
    on = "unit-circle" if kind == "unitary" else "real-axis"
    m = part.total_multiplicity(on)
    if m % 2 != 0:
        raise OddDimension(f"on-{on} multiplicity {m} is odd")
    return (m // 2) % 2


def sec(a, K: KreinStructure, structure=None,
        eps_region: float | None = None,
        zero_tol: float | None = None,
        tol: config.ToleranceConfig | None = None) -> int:
    """Secondary invariant for kind (1,1) unitaries: Sig(1, T) mod 2.

    Sig(1, T) = 0 when 1 is not in the spectrum.  An optional real
    ``structure`` is validated to be of kind (1,1).
    """
    t = config.get(tol)
    _check_structure_kind(structure, (1, 1), "Sec")
    part = classified_partition(a, K, "unitary", eps_region=eps_region, tol=t)
    sig_at_one = 0
    for c in part.clusters:
        if c.region == "unit-circle" and \
                abs(c.center - 1.0) <= max(part.delta, t.spectrum_match):
            sig_at_one = inertia(c, K, zero_tol=zero_tol, tol=t).sig
            break
    return sig_at_one % 2


def build_index_example(a_block) -> tuple[np.ndarray, KreinStructure]:
    """Skew-adjoint J-hermitian H = i [[0, A*], [A, 0]] whose global signature
    equals the index dim ker A - dim ker A*.

    A maps the +1 eigenspace of J (dimension cols) to the -1 eigenspace
    (dimension rows), so K = (cols, rows).
    """
    a_block = numerics.as_matrix(a_block, name="A")
    m, n = a_block.shape
    h = np.zeros((n + m, n + m), dtype=complex)
    h[:n, n:] = 1j * a_block.conj().T
    h[n:, :n] = 1j * a_block
    return h, KreinStructure(n_plus=n, n_minus=m)
