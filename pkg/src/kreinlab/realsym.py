"""Real Krein structures of kind (eta, tau) and the four classical groups.

A real structure is entrywise complex conjugation (written ``conj``) plus a
real orthogonal S with S^2 = eta and J S = tau S J.  Structures are
instantiated in normal form:

* kind (1, 1):    S = 1
* kind (-1, 1):   S = diag(s2, s2, ...) with s2 = [[0,-1],[1,0]] (N+- even)
* kind (1, -1):   S = [[0, 1], [1, 0]]   (N+ = N-)
* kind (-1, -1):  S = [[0, -1], [1, 0]]  (N+ = N-)

Arbitrary valid (J, S) pairs are accepted through
:func:`normalize_krein_pair`, which produces the basis change to normal form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import config, numerics, signature, spectral
from .errors import (IncompatibleDimensions, InvariantConstraintViolated,
                     MembershipError, NormalizationFailed, SymmetryViolated)
from .krein import KreinStructure, is_j_hermitian, is_j_unitary, make_standard, \
    random_j_hermitian
from .signature import InvariantReport, global_signature


def conj(a) -> np.ndarray:
    """Entrywise complex conjugation in the canonical basis."""
    return np.conj(np.asarray(a))


def standard_skew(n: int) -> np.ndarray:
    """Real orthogonal s with s^2 = -1 in half-block form [[0,-1],[1,0]]."""
    if n % 2 != 0:
        raise IncompatibleDimensions(f"skew structure needs even dimension, got {n}")
    k = n // 2
    s = np.zeros((n, n))
    s[:k, k:] = -np.eye(k)
    s[k:, :k] = np.eye(k)
    return s


def interleaved_skew(n: int) -> np.ndarray:
    """Real orthogonal s with s^2 = -1 as a diagonal of 2x2 blocks."""
    if n % 2 != 0:
        raise IncompatibleDimensions(f"skew structure needs even dimension, got {n}")
    block = np.array([[0.0, -1.0], [1.0, 0.0]])
    return sla.block_diag(*([block] * (n // 2)))


@dataclass(frozen=True)
class RealKind:
    eta: int
    tau: int

    def __post_init__(self):
        if self.eta not in (-1, 1) or self.tau not in (-1, 1):
            raise ValueError(f"kind must be in {{-1,1}}^2, got ({self.eta},{self.tau})")

    def as_tuple(self):
        return (self.eta, self.tau)


@dataclass(frozen=True)
class RealStructure:
    kind: RealKind
    K: KreinStructure
    S: np.ndarray

    def validate(self, tol: config.ToleranceConfig | None = None):
        t = config.get(tol)
        n = self.K.dim
        if self.S.shape != (n, n):
            raise IncompatibleDimensions("S shape does not match Krein dimension")
        if numerics.norm(np.imag(self.S)) > t.membership_exact:
            raise SymmetryViolated("S must be real")
        if numerics.norm(self.S @ self.S - self.kind.eta * np.eye(n)) > t.membership_exact:
            raise SymmetryViolated("S^2 != eta 1")
        comm = self.K.J @ self.S - self.kind.tau * self.S @ self.K.J
        if numerics.norm(comm) > t.membership_exact:
            raise SymmetryViolated("J S != tau S J")


def make_real_structure(kind: RealKind | tuple, n_plus: int, n_minus: int) -> RealStructure:
    """Normal-form real structure for the given kind and inertia."""
    if not isinstance(kind, RealKind):
        kind = RealKind(*kind)
    K = make_standard(n_plus, n_minus)
    n = K.dim
    eta, tau = kind.eta, kind.tau
    if tau == -1:
        if n_plus != n_minus:
            raise IncompatibleDimensions(
                f"kind (eta,-1) needs N+ = N-, got ({n_plus},{n_minus})")
        s_mat = np.zeros((n, n))
        s_mat[:n_plus, n_plus:] = eta * np.eye(n_plus)
        s_mat[n_plus:, :n_plus] = np.eye(n_plus)
    elif eta == 1:
        s_mat = np.eye(n)
    else:
        if n_plus % 2 or n_minus % 2:
            raise IncompatibleDimensions(
                f"kind (-1,1) needs even N+ and N-, got ({n_plus},{n_minus})")
        s_mat = sla.block_diag(interleaved_skew(n_plus) if n_plus else np.zeros((0, 0)),
                               interleaved_skew(n_minus) if n_minus else np.zeros((0, 0)))
    R = RealStructure(kind=kind, K=K, S=s_mat.astype(float))
    R.validate()
    return R


def is_member(a, R: RealStructure, kind: str, tol_value: float | None = None,
              tol: config.ToleranceConfig | None = None):
    """Membership in U(K,J,S) (kind='unitary') or H(K,J,S) (kind='hermitian').

    Base J-membership is checked first; the returned residual is the maximum
    of the base and real-symmetry residuals.
    """
    from .krein import MembershipResult

    t = config.get(tol)
    bound = t.membership if tol_value is None else tol_value
    a = numerics.as_matrix(a, square=True)
    R.K.check_dim(a)
    if kind == "unitary":
        base = is_j_unitary(a, R.K, bound, tol=t)
        sym = numerics.norm(R.S.T @ conj(a) @ R.S - a)
    elif kind == "hermitian":
        base = is_j_hermitian(a, R.K, bound, tol=t)
        sym = numerics.norm(R.S.T @ conj(a) @ R.S + a)
    else:
        raise ValueError(f"kind must be 'unitary' or 'hermitian', got {kind!r}")
    res = max(base.residual, float(sym))
    return MembershipResult(res <= bound, res)


@dataclass(frozen=True)
class GroupInfo:
    name: str
    invariants: tuple[str, ...]


def classify_group(structure) -> GroupInfo:
    """Classical group and invariant set for a (real) Krein structure.

    Passing a plain :class:`KreinStructure` gives the complex group U(p,q).
    """
    if isinstance(structure, KreinStructure):
        return GroupInfo(f"U({structure.n_plus},{structure.n_minus})", ("Sig",))
    R = structure
    p, q = R.K.n_plus, R.K.n_minus
    eta, tau = R.kind.as_tuple()
    if (eta, tau) == (1, 1):
        return GroupInfo(f"O({p},{q})", ("Sig", "Sec"))
    if (eta, tau) == (-1, -1):
        return GroupInfo(f"SO*({p + q})", ("Sig2",))
    if (eta, tau) == (-1, 1):
        return GroupInfo(f"SP({p},{q})", ("Sig in 2Z",))
    return GroupInfo(f"SP({p + q},R)", ())


# ------------------------------------------------------------------ checks

@dataclass
class RealSymmetryReport:
    closure_ok: bool
    worst_closure_distance: float
    projection_pairs: list[tuple[int, int]]
    projection_residuals: list[float]

    @property
    def max_projection_residual(self) -> float:
        return max(self.projection_residuals, default=0.0)


def _reflection_orbit(lam: complex, kind: str) -> list[complex]:
    if kind == "unitary":
        if abs(lam) < 1e-12:
            return [lam]
        return [lam, np.conj(lam), 1.0 / lam, 1.0 / np.conj(lam)]
    return [lam, np.conj(lam), -lam, -np.conj(lam)]


def check_spectral_symmetries(a, R: RealStructure, kind: str,
                              tol: config.ToleranceConfig | None = None) -> RealSymmetryReport:
    """Check the spectral symmetries forced by the real structure.

    (a) the eigenvalue multiset is closed under the full reflection group
    ({lam, conj, 1/lam, 1/conj} for unitaries; {lam, conj, -lam, -conj} for
    hermitians), raising :class:`SymmetryViolated` otherwise; (b) the cluster
    projections satisfy S* conj(P_D) S = P_{D'} with D' the conjugate
    (unitary) or negated-conjugate (hermitian) cluster.
    """
    t = config.get(tol)
    member = is_member(a, R, kind, tol=t)
    if not member:
        raise MembershipError("operator is not a member of the symmetry class",
                              residual=member.residual)
    eigs = numerics.eigvals(a)
    worst = 0.0
    for lam in eigs:
        for target in _reflection_orbit(lam, kind):
            d = float(np.min(np.abs(eigs - target)))
            worst = max(worst, d)
            if d > t.spectrum_match * (1.0 + abs(target)):
                raise SymmetryViolated(
                    f"reflection {target:.6g} of eigenvalue {lam:.6g} missing "
                    f"(closest at distance {d:.3e})", eigenvalue=lam)
    part = spectral.spectral_partition(a, tol=t)
    pairs, residuals = [], []
    for i, c in enumerate(part.clusters):
        target = np.conj(c.center) if kind == "unitary" else -np.conj(c.center)
        dists = [abs(o.center - target) for o in part.clusters]
        j = int(np.argmin(dists))
        if dists[j] > max(part.delta, t.spectrum_match * (1 + abs(target))):
            raise SymmetryViolated(
                f"no cluster at the conjugation image {target:.6g}",
                eigenvalue=c.center)
        res = numerics.norm(R.S.T @ conj(c.projection) @ R.S
                            - part.clusters[j].projection)
        pairs.append((i, j))
        residuals.append(float(res))
    return RealSymmetryReport(closure_ok=True, worst_closure_distance=worst,
                              projection_pairs=pairs,
                              projection_residuals=residuals)


@dataclass
class KramersReport:
    ok: bool
    entries: list[dict]


def kramers_check(a, R: RealStructure, kind: str,
                  tol: config.ToleranceConfig | None = None) -> KramersReport:
    """Even algebraic and geometric multiplicity at symmetric-point spectrum.

    For eta = -1 only.  Unitary members are checked at real eigenvalues,
    hermitian members at purely imaginary eigenvalues.  Returns diagnostics
    instead of raising.
    """
    t = config.get(tol)
    if R.kind.eta != -1:
        raise ValueError("Kramers degeneracy requires eta = -1")
    part = spectral.spectral_partition(a, tol=t)
    n = R.K.dim
    entries = []
    ok = True
    for c in part.clusters:
        on_point = abs(c.center.imag) <= t.spectrum_match if kind == "unitary" \
            else abs(c.center.real) <= t.spectrum_match
        if not on_point:
            continue
        geo = numerics.kernel_frame(a - c.center * np.eye(n), tol=t).shape[1]
        entry = {"eigenvalue": c.center, "algebraic": c.multiplicity,
                 "geometric": geo}
        entries.append(entry)
        if c.multiplicity % 2 or geo % 2:
            ok = False
    return KramersReport(ok=ok, entries=entries)


def symmetrize_hermitian(h_mat, R: RealStructure) -> np.ndarray:
    """Project a J-hermitian onto the real-symmetric class:
    H -> (H - S* conj(H) S) / 2.  Idempotent on its image."""
    return (h_mat - R.S.T @ conj(h_mat) @ R.S) / 2.0


def random_member(R: RealStructure, kind: str, seed,
                  scale: float = 1.0) -> np.ndarray:
    """Random member of H(K,J,S) or U(K,J,S).

    A random J-hermitian is symmetrized onto the real-linear member space;
    unitary members are its exponential exp(i H).
    """
    h0 = random_j_hermitian(R.K, seed)
    h = symmetrize_hermitian(h0, R)
    if kind == "hermitian":
        return h * scale
    h = h / max(numerics.norm(h), 1.0) * scale * R.K.dim ** 0.5
    return numerics.matrix_exp(1j * h)


def full_invariant_report(a, R: RealStructure | None, kind: str,
                          K: KreinStructure | None = None,
                          tol: config.ToleranceConfig | None = None) -> InvariantReport:
    """Invariant report dispatched on the symmetry kind.

    (1,1): Sig, plus Sec for unitaries.  (-1,-1): Sig2, and Sig must vanish.
    (-1,1): Sig must be even.  (1,-1): Sig must vanish.  Violated structural
    constraints raise :class:`InvariantConstraintViolated` since they signal
    a membership or numerical breakdown.
    """
    t = config.get(tol)
    if R is None:
        if K is None:
            raise ValueError("need either a RealStructure or a KreinStructure")
        rep = global_signature(a, K, kind, tol=t)
        rep.group = classify_group(K).name
        return rep
    member = is_member(a, R, kind, tol=t)
    if not member:
        raise MembershipError("operator is not a member of the symmetry class",
                              residual=member.residual)
    rep = global_signature(a, R.K, kind, tol=t)
    rep.group = classify_group(R).name
    eta, tau = R.kind.as_tuple()
    if (eta, tau) == (1, 1):
        if kind == "unitary":
            rep.sec = signature.sec(a, R.K, structure=R, tol=t)
    elif (eta, tau) == (-1, -1):
        if rep.global_sig != 0:
            raise InvariantConstraintViolated(
                f"kind (-1,-1) forces Sig = 0, got {rep.global_sig}")
        rep.sig2 = signature.sig2(a, R.K, kind, structure=R, tol=t)
    elif (eta, tau) == (-1, 1):
        if rep.global_sig % 2 != 0:
            raise InvariantConstraintViolated(
                f"kind (-1,1) forces Sig in 2Z, got {rep.global_sig}")
    else:  # (1, -1)
        if rep.global_sig != 0:
            raise InvariantConstraintViolated(
                f"kind (1,-1) forces Sig = 0, got {rep.global_sig}")
    return rep


# ------------------------------------------------- normal-form basis change

def symmetric_unitary_sqrt(u, tol: config.ToleranceConfig) -> np.ndarray:
    """Symmetric b with b @ b = b @ b.T = u, for symmetric unitary u."""
    lam = numerics.eigvals(u)
    # branch ray through the largest spectral gap keeps logm well posed
    angles = np.sort(np.angle(lam))
    gaps = np.diff(np.concatenate([angles, [angles[0] + 2 * np.pi]]))
    alpha = angles[int(np.argmax(gaps))] + gaps.max() / 2.0
    h = numerics.unitary_log(u, branch_point=np.exp(1j * alpha), tol=tol)
    h = (h + h.T) / 2.0
    return numerics.matrix_exp(0.5j * h)


def antisymmetric_unitary_factor(u, s, tol: config.ToleranceConfig) -> np.ndarray:
    """v with u = v.T @ s @ v for an antisymmetric unitary u.

    s*u is odd symmetric, so s*u = exp(i h) with s* h^T s = h and
    v = s exp(i h / 2) does the job.
    """
    q = s.T @ u
    lam = numerics.eigvals(q)
    angles = np.sort(np.angle(lam))
    gaps = np.diff(np.concatenate([angles, [angles[0] + 2 * np.pi]]))
    alpha = angles[int(np.argmax(gaps))] + gaps.max() / 2.0
    h = numerics.unitary_log(q, branch_point=np.exp(1j * alpha), tol=tol)
    h = (h + s.T @ h.T @ s) / 2.0
    return s @ numerics.matrix_exp(0.5j * h)


def _antiunitary_block(frame, s_full) -> np.ndarray:
    """Matrix of the antiunitary x -> frame^* S conj(frame x) on coordinates."""
    return frame.conj().T @ s_full @ conj(frame)


@dataclass
class NormalizedPair:
    """Basis change R with R* j R = J_std and S_F conj(R) = R S_std."""

    R: np.ndarray
    R_unitary_part: np.ndarray
    eigenvalues: np.ndarray      # of j, in the assembled column order
    K: KreinStructure
    structure: RealStructure


def normalize_krein_pair(j_form, s_anti, eta: int, tau: int,
                         tol: config.ToleranceConfig | None = None) -> NormalizedPair:
    """Bring a hermitian invertible form and a compatible antiunitary to
    normal form.

    Inputs are the matrices of the form (j = j*, invertible) and of the
    antiunitary x -> s_anti conj(x) on the same coordinates, satisfying
    s_anti conj(s_anti) = eta and s_anti* j s_anti = tau conj(j).  The
    returned basis change R has columns ordered positives-first and
    satisfies R* j R = J_std exactly up to tolerance, with the antiunitary
    becoming S_std conj(.) for the normal-form S_std of kind (eta, tau).
    ``R_unitary_part`` omits the |eigenvalue|^{-1/2} column scaling, keeping
    columns orthonormal (used where the form scale must be preserved).
    """
    t = config.get(tol)
    j_form = numerics.as_matrix(j_form, square=True, name="j")
    s_anti = numerics.as_matrix(s_anti, square=True, name="S")
    n = j_form.shape[0]
    if numerics.norm(s_anti.conj().T @ s_anti - np.eye(n)) > 1e-8:
        raise NormalizationFailed("antiunitary matrix must be unitary")
    if numerics.norm(s_anti @ conj(s_anti) - eta * np.eye(n)) > 1e-8:
        raise NormalizationFailed("antiunitary does not square to eta")
    if numerics.norm(s_anti.conj().T @ j_form @ s_anti - tau * conj(j_form)) > 1e-8:
        raise NormalizationFailed("form and antiunitary are not tau-compatible")
    w, v = numerics.herm_eig(j_form, t)
    scale = max(np.abs(w).max(), 1e-300)
    if np.abs(w).min() <= 1e-10 * scale:
        raise NormalizationFailed("form is numerically singular")
    groups = spectral.cluster_eigenvalues(w.astype(complex), 1e-8 * scale)
    groups.sort(key=lambda g: -np.mean(w[g]))  # descending: positives first

    if tau == 1:
        # the antiunitary preserves every eigenspace of j
        cols, vals, s_blocks = [], [], []
        for g in groups:
            basis = v[:, g]
            a_blk = _antiunitary_block(basis, s_anti)
            if eta == 1:
                b = symmetric_unitary_sqrt(a_blk, t)
                s_blocks.append(np.eye(len(g)))
            else:
                if len(g) % 2:
                    raise NormalizationFailed(
                        f"eta=-1 eigenvalue multiplicity {len(g)} is odd")
                s_tgt = interleaved_skew(len(g))
                v_fac = antisymmetric_unitary_factor(a_blk, s_tgt, t)
                b = v_fac.T
                s_blocks.append(s_tgt)
            cols.append(basis @ b)
            vals.append(w[g])
        u_mat = np.hstack(cols)
        d = np.concatenate(vals)
        s_std = sla.block_diag(*s_blocks)
    else:
        # the antiunitary maps the d-eigenspace onto the (-d)-eigenspace
        pos = [g for g in groups if np.mean(w[g]) > 0]
        pos_basis = np.hstack([v[:, g] for g in pos]) if pos else v[:, :0]
        d_pos = np.concatenate([w[g] for g in pos]) if pos else np.zeros(0)
        if 2 * pos_basis.shape[1] != n:
            raise NormalizationFailed("tau=-1 needs +/- symmetric spectrum")
        partner = s_anti @ conj(pos_basis)
        u_mat = np.hstack([pos_basis, partner])
        d = np.concatenate([d_pos, -d_pos])
        k = pos_basis.shape[1]
        s_std = np.zeros((n, n))
        s_std[:k, k:] = eta * np.eye(k)
        s_std[k:, :k] = np.eye(k)

    r_mat = u_mat * (np.abs(d) ** -0.5)[None, :]
    n_plus = int(np.sum(d > 0))
    n_minus = n - n_plus
    K = make_standard(n_plus, n_minus)
    structure = RealStructure(kind=RealKind(eta, tau), K=K, S=s_std)
    res_form = numerics.norm(r_mat.conj().T @ j_form @ r_mat - K.J)
    res_anti = numerics.norm(s_anti @ conj(r_mat) - r_mat @ s_std)
    res_anti_u = numerics.norm(s_anti @ conj(u_mat) - u_mat @ s_std)
    if max(res_form, res_anti, res_anti_u) > 1e-7:
        raise NormalizationFailed(
            f"normal form residuals too large: form {res_form:.3e}, "
            f"antiunitary {res_anti:.3e}/{res_anti_u:.3e}")
    return NormalizedPair(R=r_mat, R_unitary_part=u_mat, eigenvalues=d,
                          K=K, structure=structure)
