"""Executable deformation retractions down to the model operator.

The pipeline chains three explicit homotopies inside the J-hermitian
(optionally real-symmetric) operators:

1. flatten  -- H_t = (1-t) H + i t (P_+ - P_-), ending with spectrum in
   {-i, 0, i};
2. lift     -- a finite-rank perturbation built from a class-adapted frame
   of the kernel removes as much kernel degeneracy as the symmetry allows
   (all of it, except a forced two-dimensional kernel of inertia (1,1) for
   kind (-1,-1) with odd half-multiplicity);
3. straighten -- the ranges of the Riesz projections P_+- are Lagrangian and
   parametrized by unitaries u_+-; a branch-cut-at-1 logarithm path deforms
   the pair to (u, -u), making both projections orthogonal.

The terminal operator is i (P_{+,1} - P_{-,1}) = i [[0, u], [u*, 0]]; its
lower-left block in the J-grading is the terminal Fredholm block A = u*,
whose symmetry class is forced by the kind: real for (1,1), anti-symmetric
for (-1,-1), quaternionic for (-1,1), symmetric for (1,-1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import config, numerics, signature, spectral
from .errors import (DegenerateSubspace, FramePreparationFailed,
                     IncompatibleDimensions, MembershipError, NotFredholmPair,
                     NotGapped, NotInClass, NotInvariant, NotLagrangian,
                     PathBlocked, StageError)
from .homotopy import OperatorPath
from .krein import KreinStructure, is_j_hermitian
from .realsym import (RealStructure, antisymmetric_unitary_factor, conj,
                      interleaved_skew, is_member, normalize_krein_pair,
                      standard_skew, symmetric_unitary_sqrt)

STAGES = ("flatten", "lift", "straighten", "final")


@dataclass
class PathSegment:
    stage: str
    path: OperatorPath
    start: np.ndarray
    end: np.ndarray


@dataclass
class RetractionTrace:
    segments: list[PathSegment]
    initial: np.ndarray
    terminal: np.ndarray
    p_plus: np.ndarray
    p_minus: np.ndarray
    u_plus: np.ndarray
    terminal_block: np.ndarray
    terminal_class: str
    terminal_symmetry_residual: float | None
    terminal_spectrum_residual: float
    kernel_dim_after_lift: int
    kernel_inertia: tuple[int, int]
    sig_initial: int
    sig_terminal: int
    membership_max_residual: float
    chain_max_gap: float

    def to_dict(self) -> dict:
        def mat(a):
            return [[float(x.real), float(x.imag)] for x in np.asarray(a).ravel()]

        K = self.segments[0].path.structure
        R = self.segments[0].path.real_structure
        return {
            "stages": [s.stage for s in self.segments],
            "n_plus": K.n_plus,
            "n_minus": K.n_minus,
            "kind": list(R.kind.as_tuple()) if R is not None else None,
            "sig_initial": self.sig_initial,
            "sig_terminal": self.sig_terminal,
            "kernel_dim_after_lift": self.kernel_dim_after_lift,
            "kernel_inertia": list(self.kernel_inertia),
            "terminal_class": self.terminal_class,
            "terminal_symmetry_residual": self.terminal_symmetry_residual,
            "terminal_spectrum_residual": self.terminal_spectrum_residual,
            "membership_max_residual": self.membership_max_residual,
            "chain_max_gap": self.chain_max_gap,
            "terminal_block_shape": list(self.terminal_block.shape),
            "terminal_block": mat(self.terminal_block),
            "u_plus": mat(self.u_plus),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


def _require_membership(h_mat, K, R, t):
    if R is not None:
        member = is_member(h_mat, R, "hermitian", tol=t)
    else:
        member = is_j_hermitian(h_mat, K, tol=t)
    if not member:
        raise MembershipError("operator is not in the required class",
                              residual=member.residual)


def _segment(stage, sampler, K, R, start, end, name) -> PathSegment:
    path = OperatorPath(sampler=sampler, structure=K, kind="hermitian",
                        real_structure=R, name=name)
    return PathSegment(stage=stage, path=path, start=start, end=end)


# ------------------------------------------------------------------ flatten

def _halfplane_projections(h_mat, K, t):
    part = spectral.spectral_partition(h_mat, tol=t)
    spectral.classify_partition(part, "hermitian", tol=t)
    n = K.dim
    p_up = np.zeros((n, n), complex)
    p_dn = np.zeros((n, n), complex)
    p_re = np.zeros((n, n), complex)
    for c in part.clusters:
        if c.region == "upper-half":
            p_up += c.projection
        elif c.region == "lower-half":
            p_dn += c.projection
        else:
            p_re += c.projection
    return p_up, p_dn, p_re


def flat_spectrum_residual(h_mat) -> float:
    """Max distance of the spectrum to the set {-i, 0, i}."""
    lam = numerics.eigvals(h_mat)
    targets = np.array([-1j, 0.0, 1j])
    return float(max(np.min(np.abs(targets - l)) for l in lam))


def spectral_flatten(h_mat, K: KreinStructure, R: RealStructure | None = None,
                     tol: config.ToleranceConfig | None = None) -> PathSegment:
    """Deform H to spectrum inside {-i, 0, i} along
    H_t = (1-t) H + i t (P_+ - P_-)."""
    t = config.get(tol)
    h_mat = numerics.as_matrix(h_mat, square=True, name="H")
    K.check_dim(h_mat)
    _require_membership(h_mat, K, R, t)
    p_up, p_dn, _ = _halfplane_projections(h_mat, K, t)
    d_op = 1j * (p_up - p_dn)

    def sampler(s):
        return (1.0 - s) * h_mat + s * d_op

    end = sampler(1.0)
    res = flat_spectrum_residual(end)
    if res > t.terminal_spectrum:
        raise FramePreparationFailed(
            f"flatten endpoint spectrum off {{-i,0,i}} by {res:.3e}")
    return _segment("flatten", sampler, K, R, h_mat.copy(), end, "flatten")


# --------------------------------------------------------------------- lift

def _corner_v(n_plus: int, n_minus: int) -> np.ndarray:
    """J_Psi-hermitian, purely imaginary V pairing min(n+,n-) opposite-sign
    directions; spectrum {+-i} with a definite kernel of the surplus."""
    n = n_plus + n_minus
    m = min(n_plus, n_minus)
    v = np.zeros((n, n), complex)
    for i in range(m):
        v[i, n_plus + i] = 1j
        v[n_plus + i, i] = 1j
    return v


def _lift_v(kind, n_plus: int, n_minus: int) -> np.ndarray:
    """The degeneracy-lifting perturbation in the normal-form frame gauge."""
    if kind is None or kind in ((1, 1), (-1, 1)):
        return _corner_v(n_plus, n_minus)
    if kind == (1, -1):
        m = n_plus
        v = np.zeros((2 * m, 2 * m), complex)
        v[:m, m:] = np.eye(m)
        v[m:, :m] = -np.eye(m)
        return v
    if kind == (-1, -1):
        m = n_plus
        if m % 2 == 0:
            b = standard_skew(m) if m else np.zeros((0, 0))
        else:
            k = m // 2
            b = np.zeros((m, m))
            if k:
                b[:k, k + 1:] = -np.eye(k)
                b[k + 1:, :k] = np.eye(k)
        v = np.zeros((2 * m, 2 * m), complex)
        v[:m, m:] = b
        v[m:, :m] = b  # -B* = B for real antisymmetric B
        return v
    raise ValueError(f"unknown kind {kind}")


@dataclass
class LiftResult:
    segment: PathSegment
    kernel_dim: int
    kernel_inertia: tuple[int, int]
    frame: np.ndarray
    perturbation: np.ndarray


def lift_kernel(h_flat, K: KreinStructure, R: RealStructure | None = None,
                tol: config.ToleranceConfig | None = None) -> LiftResult:
    """Lift the kernel degeneracy of a flat operator by a finite-rank,
    class-compatible perturbation H_t = H + t Psi n V n^{-1} Psi* P_0.

    The kernel frame Psi is prepared so that the restricted form Psi* J Psi
    is diagonal and the real symmetry acts in normal form on the frame
    coordinates; V then pairs opposite-inertia kernel directions and pushes
    them to +- i t.
    """
    t = config.get(tol)
    h_flat = numerics.as_matrix(h_flat, square=True, name="H")
    K.check_dim(h_flat)
    _require_membership(h_flat, K, R, t)
    res_flat = flat_spectrum_residual(h_flat)
    if res_flat > t.terminal_spectrum:
        raise FramePreparationFailed(
            f"lift requires spectrum in {{-i,0,i}}, off by {res_flat:.3e}")
    n = K.dim
    p_up, p_dn, p_re = _halfplane_projections(h_flat, K, t)
    mult = int(round(np.trace(p_re).real))
    if mult == 0:
        def sampler(s):
            return h_flat

        seg = _segment("lift", sampler, K, R, h_flat.copy(), h_flat.copy(), "lift")
        return LiftResult(segment=seg, kernel_dim=0, kernel_inertia=(0, 0),
                          frame=np.zeros((n, 0)), perturbation=np.zeros((n, n)))

    psi0 = sla.svd(p_re, check_finite=False)[0][:, :mult]
    j_psi = psi0.conj().T @ K.apply(psi0)
    w_j = sla.eigvalsh(j_psi)
    if np.min(np.abs(w_j)) <= t.zero_form:
        raise DegenerateSubspace("kernel form is numerically degenerate")

    if R is None:
        w, v = numerics.herm_eig(j_psi, t)
        order = np.argsort(-w)
        psi = psi0 @ v[:, order]
        d = w[order]
        kind = None
    else:
        s_anti = psi0.conj().T @ R.S @ conj(psi0)
        leak = numerics.norm(R.S @ conj(psi0) - psi0 @ s_anti)
        if leak > 1e-8:
            raise FramePreparationFailed(
                f"kernel is not conjugation invariant (leak {leak:.3e})")
        kind = R.kind.as_tuple()
        try:
            norm_pair = normalize_krein_pair(j_psi, s_anti, *kind, tol=t)
        except Exception as exc:
            raise FramePreparationFailed(str(exc)) from exc
        psi = psi0 @ norm_pair.R_unitary_part
        d = norm_pair.eigenvalues

    n_plus = int(np.sum(d > 0))
    n_minus = mult - n_plus
    v_mat = _lift_v(kind, n_plus, n_minus)
    n_psi = np.abs(d) ** -0.5
    # P_0 = Psi j^{-1} Psi* J is the Riesz projection on the kernel of a
    # flat operator (range E_0, kernel J E_0^perp)
    j_new = psi.conj().T @ K.apply(psi)
    p0 = psi @ np.linalg.solve(j_new, psi.conj().T @ K.J)
    pert = (psi * n_psi[None, :]) @ v_mat @ (np.diag(1.0 / n_psi) @ psi.conj().T @ p0)

    # membership of the perturbation direction (affine path: endpoint checks
    # certify every t)
    herm_res = numerics.norm(pert.conj().T @ K.J - K.apply(pert))
    if herm_res > 1e-8 * max(1.0, numerics.norm(pert)):
        raise FramePreparationFailed(
            f"perturbation is not J-hermitian (residual {herm_res:.3e})")
    if R is not None:
        sym_res = numerics.norm(R.S.T @ conj(pert) @ R.S + pert)
        if sym_res > 1e-8 * max(1.0, numerics.norm(pert)):
            raise FramePreparationFailed(
                f"perturbation breaks the real symmetry (residual {sym_res:.3e})")

    def sampler(s):
        return h_flat + s * pert

    end = sampler(1.0)
    kernel = numerics.kernel_frame(end, tol=t)
    k_dim = kernel.shape[1]
    if k_dim:
        nu = signature.form_inertia(kernel, K, tol=t)
        k_inertia = nu.as_tuple()
    else:
        k_inertia = (0, 0)
    _check_lift_postcondition(kind, n_plus, n_minus, k_dim, k_inertia)
    seg = _segment("lift", sampler, K, R, h_flat.copy(), end, "lift")
    return LiftResult(segment=seg, kernel_dim=k_dim, kernel_inertia=k_inertia,
                      frame=psi, perturbation=pert)


def _check_lift_postcondition(kind, n_plus, n_minus, k_dim, k_inertia):
    if kind == (1, -1):
        expected = 0
    elif kind == (-1, -1):
        expected = 0 if n_plus % 2 == 0 else 2
    else:
        expected = abs(n_plus - n_minus)
    if k_dim != expected:
        raise FramePreparationFailed(
            f"lift left kernel of dimension {k_dim}, expected {expected}")
    if kind == (-1, -1) and k_dim == 2 and k_inertia != (1, 1):
        raise FramePreparationFailed(
            f"residual kernel inertia {k_inertia}, expected (1, 1)")
    if kind in (None, (1, 1), (-1, 1)) and k_dim:
        if 0 not in k_inertia:
            raise FramePreparationFailed(
                f"residual kernel not definite: inertia {k_inertia}")


# --------------------------------------------------------- block reduction

@dataclass
class BlockDecomposition:
    M: np.ndarray
    M_inv: np.ndarray
    H_psi: np.ndarray
    J_psi: np.ndarray
    H_phi: np.ndarray
    J_phi: np.ndarray
    psi: np.ndarray
    phi: np.ndarray


def block_decompose(h_mat, K: KreinStructure, e_frame,
                    tol: config.ToleranceConfig | None = None) -> BlockDecomposition:
    """Split H along an invariant J-non-degenerate subspace E and its
    J-orthogonal complement F = J E^perp.

    Returns M = (Psi n_Psi, Phi n_Phi) with M^{-1} H M = diag(H_Psi, H_Phi)
    and M* J M = diag(J_Psi, J_Phi), all verified to tolerance.
    """
    t = config.get(tol)
    h_mat = numerics.as_matrix(h_mat, square=True, name="H")
    K.check_dim(h_mat)
    psi = numerics.orthonormal_frame(numerics.as_matrix(e_frame, name="E"), tol=t)
    inv_res = numerics.norm(h_mat @ psi - psi @ (psi.conj().T @ h_mat @ psi))
    if inv_res > 1e-8 * max(1.0, numerics.norm(h_mat)):
        raise NotInvariant(f"E is not H-invariant (residual {inv_res:.3e})")
    j_psi_form = psi.conj().T @ K.apply(psi)
    if np.min(np.abs(sla.eigvalsh(j_psi_form))) <= 1e-8:
        raise DegenerateSubspace("E is J-degenerate")
    # F = J E^perp
    eperp = numerics.kernel_frame(psi.conj().T, tol=t)
    if eperp.shape[1]:
        phi = numerics.orthonormal_frame(K.apply(eperp), tol=t)
    else:
        phi = np.zeros((K.dim, 0), dtype=complex)
    j_phi_form = phi.conj().T @ K.apply(phi)
    if phi.shape[1] and np.min(np.abs(sla.eigvalsh(j_phi_form))) <= 1e-8:
        raise DegenerateSubspace("F is J-degenerate")

    def normalizers(j_form):
        if j_form.shape[0] == 0:
            z = np.zeros((0, 0), dtype=complex)
            return z, z, z
        w, v = numerics.herm_eig(j_form, t)
        n_half = (v * np.abs(w) ** -0.5) @ v.conj().T      # |j|^{-1/2}
        n_half_inv = (v * np.abs(w) ** 0.5) @ v.conj().T   # |j|^{1/2}
        j_sign = (v * np.sign(w)) @ v.conj().T
        return n_half, n_half_inv, j_sign

    n_psi, n_psi_inv, j_psi_sign = normalizers(j_psi_form)
    n_phi, n_phi_inv, j_phi_sign = normalizers(j_phi_form)
    m_mat = np.hstack([psi @ n_psi, phi @ n_phi])
    m_inv = np.vstack([
        n_psi_inv @ np.linalg.solve(j_psi_form, psi.conj().T @ K.J),
        n_phi_inv @ np.linalg.solve(j_phi_form, phi.conj().T @ K.J),
    ])
    if numerics.norm(m_inv @ m_mat - np.eye(K.dim)) > 1e-8:
        raise DegenerateSubspace("block basis failed to invert")
    blocks = m_inv @ h_mat @ m_mat
    k = psi.shape[1]
    h_psi, h_phi = blocks[:k, :k], blocks[k:, k:]
    off = max(numerics.norm(blocks[:k, k:]), numerics.norm(blocks[k:, :k]))
    if off > 1e-8 * max(1.0, numerics.norm(h_mat)):
        raise NotInvariant(f"off-diagonal block residual {off:.3e}")
    gram = m_mat.conj().T @ K.J @ m_mat
    j_psi = gram[:k, :k]
    j_phi = gram[k:, k:]
    off_j = max(numerics.norm(gram[:k, k:]), numerics.norm(gram[k:, :k]))
    if off_j > 1e-8:
        raise DegenerateSubspace(f"J does not block-diagonalize ({off_j:.3e})")
    for j_blk in (j_psi, j_phi):
        if numerics.norm(j_blk @ j_blk - np.eye(j_blk.shape[0])) > 1e-8:
            raise DegenerateSubspace("block symmetry does not square to 1")
    return BlockDecomposition(M=m_mat, M_inv=m_inv, H_psi=h_psi, J_psi=j_psi,
                              H_phi=h_phi, J_phi=j_phi, psi=psi, phi=phi)


# --------------------------------------------------------------- Lagrangian

def oblique_projection(phi_range, phi_kernel, K: KreinStructure) -> np.ndarray:
    """P = Phi_r (Phi_k* J Phi_r)^{-1} Phi_k* J, the projection with range
    span(Phi_r) and kernel the J-orthogonal complement of span(Phi_k)."""
    cross = phi_kernel.conj().T @ K.apply(phi_range)
    return phi_range @ np.linalg.solve(cross, phi_kernel.conj().T @ K.J)


@dataclass
class LagrangianFrames:
    u_plus: np.ndarray
    u_minus: np.ndarray
    p_plus: np.ndarray
    p_minus: np.ndarray
    certificate: float


def lagrangian_frames(h_flat, K: KreinStructure,
                      tol: config.ToleranceConfig | None = None) -> LagrangianFrames:
    """Extract the unitaries parametrizing the Lagrangian ranges of P_+-.

    Requires N+ = N- and a trivial kernel.  A Lagrangian frame can be
    column-reduced to (u; 1)/sqrt(2); u is recovered from an arbitrary
    orthonormal frame (a; b) as (sqrt2 a) (polar of sqrt2 b)^* and validated
    by re-embedding through the projection representation.
    """
    t = config.get(tol)
    if K.n_plus != K.n_minus:
        raise IncompatibleDimensions(
            f"Lagrangian parametrization needs N+ = N-, got "
            f"({K.n_plus},{K.n_minus})")
    h_flat = numerics.as_matrix(h_flat, square=True, name="H")
    K.check_dim(h_flat)
    p_up, p_dn, p_re = _halfplane_projections(h_flat, K, t)
    if int(round(np.trace(p_re).real)) != 0:
        raise NotLagrangian("operator still has a kernel; lift it first")
    nn = K.n_plus
    out = {}
    for label, proj in (("plus", p_up), ("minus", p_dn)):
        frame = sla.svd(proj, check_finite=False)[0][:, :nn]
        iso = numerics.norm(frame.conj().T @ K.apply(frame))
        if iso > 1e-7:
            raise NotLagrangian(f"range of P_{label} not isotropic ({iso:.3e})")
        a, b = frame[:nn, :], frame[nn:, :]
        u = (np.sqrt(2.0) * a) @ numerics.polar_unitary(np.sqrt(2.0) * b).conj().T
        u = numerics.polar_unitary(u)
        out[label] = (u, proj)
    u_p, p_p = out["plus"]
    u_m, p_m = out["minus"]
    phi_p = np.vstack([u_p, np.eye(nn)]) / np.sqrt(2.0)
    phi_m = np.vstack([u_m, np.eye(nn)]) / np.sqrt(2.0)
    cert = float(sla.svdvals(u_m.conj().T @ u_p - np.eye(nn))[-1])
    if cert <= t.fredholm_cert:
        raise NotFredholmPair(
            f"u_-^* u_+ - 1 has smallest singular value {cert:.3e}")
    rec_p = oblique_projection(phi_p, phi_m, K)
    rec_m = oblique_projection(phi_m, phi_p, K)
    err = max(numerics.norm(rec_p - p_p), numerics.norm(rec_m - p_m))
    if err > t.lagrangian:
        raise NotLagrangian(f"re-embedding residual {err:.3e}")
    return LagrangianFrames(u_plus=u_p, u_minus=u_m, p_plus=p_p, p_minus=p_m,
                            certificate=cert)


# ------------------------------------------------------------ factorization

def factorize_unitary(v, cls: str, s=None, branch_point=None,
                      tol: config.ToleranceConfig | None = None) -> np.ndarray:
    """Factor a unitary of the declared class.

    symmetric:      v = w^t w        with w = exp(i h / 2), h = -i log v
    odd-symmetric:  v = s* w^t s w   with w = s exp(i h / 2)

    With ``branch_point=None`` the logarithm cut is placed in the largest
    spectral gap; an explicit branch point with spectrum on it raises
    :class:`NotGapped` (continuity of v -> w needs a gapped v).
    """
    t = config.get(tol)
    v = numerics.as_matrix(v, square=True, name="v")
    uni = numerics.norm(v.conj().T @ v - np.eye(v.shape[0]))
    if uni > 1e-9:
        raise NotInClass(f"input is not unitary (residual {uni:.3e})")
    if branch_point is None:
        angles = np.sort(np.angle(numerics.eigvals(v)))
        gaps = np.diff(np.concatenate([angles, [angles[0] + 2 * np.pi]]))
        branch_point = np.exp(1j * (angles[int(np.argmax(gaps))] + gaps.max() / 2.0))
    if cls == "symmetric":
        dev = numerics.norm(v.T - v)
        if dev > 1e-9:
            raise NotInClass(f"not symmetric (residual {dev:.3e})")
        h = numerics.unitary_log(v, branch_point=branch_point, tol=t)
        h = (h + h.T) / 2.0
        return numerics.matrix_exp(0.5j * h)
    if cls == "odd-symmetric":
        if s is None:
            s = standard_skew(v.shape[0])
        dev = numerics.norm(s.T @ v.T @ s - v)
        if dev > 1e-9:
            raise NotInClass(f"not odd-symmetric (residual {dev:.3e})")
        h = numerics.unitary_log(v, branch_point=branch_point, tol=t)
        h = (h + s.T @ h.T @ s) / 2.0
        return s @ numerics.matrix_exp(0.5j * h)
    raise ValueError(f"unknown class {cls!r}")


# -------------------------------------------------------------- straighten

SYMMETRY_OPTIONS = ("none", "symmetric", "odd-symmetric", "real-avoiding-1",
                    "quaternionic-avoiding-1")


@dataclass
class StraightenResult:
    u_plus: np.ndarray
    log_generator: np.ndarray          # h with v_t = exp(i((1-t) h + t pi))
    symmetry: str
    certificates: list[float]
    u_minus_of: object                 # callable t -> u_-(t)

    def u_pair(self, t: float):
        return self.u_plus, self.u_minus_of(t)

    def projections(self, t: float, K: KreinStructure):
        up, um = self.u_pair(t)
        nn = up.shape[0]
        phi_p = np.vstack([up, np.eye(nn)]) / np.sqrt(2.0)
        phi_m = np.vstack([um, np.eye(nn)]) / np.sqrt(2.0)
        return (oblique_projection(phi_p, phi_m, K),
                oblique_projection(phi_m, phi_p, K))

    def hermitian_path(self, K: KreinStructure,
                       R: RealStructure | None = None) -> OperatorPath:
        def sampler(t):
            p_p, p_m = self.projections(t, K)
            return 1j * (p_p - p_m)

        return OperatorPath(sampler=sampler, structure=K, kind="hermitian",
                            real_structure=R, name="straighten")


def _class_residual(u, symmetry, s):
    if symmetry == "real-avoiding-1":
        return numerics.norm(conj(u) - u)
    if symmetry == "quaternionic-avoiding-1":
        return numerics.norm(s.T @ conj(u) @ s - u)
    if symmetry == "symmetric":
        return numerics.norm(u.T - u)
    if symmetry == "odd-symmetric":
        return numerics.norm(u.T + u)
    return 0.0


def straighten(u_plus, u_minus, symmetry: str = "none", s=None,
               n_cert_samples: int = 33,
               tol: config.ToleranceConfig | None = None) -> StraightenResult:
    """Deform the Lagrangian pair (u_+, u_-) to (u_+, -u_+) keeping
    u_-(t)^* u_+(t) - 1 invertible throughout.

    The transition unitary runs along exp(i((1-t) h + t pi)) with h the
    branch-cut-at-1 logarithm, which keeps 1 out of its spectrum for all t
    and stays inside the declared symmetry class:

    * none / real-avoiding-1 / quaternionic-avoiding-1:
        u_-(t) = u_+ v_t^*,              v_0 = u_-^* u_+
    * symmetric:
        u_-(t) = v_+ v_t^* v_+,          v_0 = v_+ u_-^* v_+, u_+ = v_+^2
    * odd-symmetric:
        u_-(t) = v_+^t v_t^* s v_+,      v_0 = s v_+ u_-^* v_+^t, u_+ = v_+^t s v_+
    """
    t = config.get(tol)
    if symmetry not in SYMMETRY_OPTIONS:
        raise ValueError(f"symmetry must be one of {SYMMETRY_OPTIONS}")
    u_plus = numerics.as_matrix(u_plus, square=True, name="u_plus")
    u_minus = numerics.as_matrix(u_minus, square=True, name="u_minus")
    nn = u_plus.shape[0]
    if symmetry in ("odd-symmetric", "quaternionic-avoiding-1") and s is None:
        s = standard_skew(nn) if symmetry == "odd-symmetric" else interleaved_skew(nn)
    for u in (u_plus, u_minus):
        res = _class_residual(u, symmetry, s)
        if res > 1e-7:
            raise NotInClass(
                f"u does not satisfy the {symmetry} class (residual {res:.3e})")

    if symmetry == "symmetric":
        v_plus = symmetric_unitary_sqrt(u_plus, t)
        v0 = v_plus @ u_minus.conj().T @ v_plus
    elif symmetry == "odd-symmetric":
        v_plus = antisymmetric_unitary_factor(u_plus, s, t)
        v0 = s @ v_plus @ u_minus.conj().T @ v_plus.T
    else:
        v_plus = None
        v0 = u_minus.conj().T @ u_plus
    try:
        h = numerics.unitary_log(v0, branch_point=1.0 + 0.0j, tol=t)
    except NotGapped as exc:
        raise NotFredholmPair(f"transition unitary not gapped at 1: {exc}") from exc

    def v_of(tv):
        return numerics.matrix_exp(1j * ((1.0 - tv) * h + tv * np.pi * np.eye(nn)))

    if symmetry == "symmetric":
        def u_minus_of(tv):
            return v_plus @ v_of(tv).conj().T @ v_plus
    elif symmetry == "odd-symmetric":
        def u_minus_of(tv):
            return v_plus.T @ v_of(tv).conj().T @ s @ v_plus
    else:
        def u_minus_of(tv):
            return u_plus @ v_of(tv).conj().T

    def certify(samples):
        certs = []
        for tv in np.linspace(0.0, 1.0, samples):
            um = u_minus_of(tv)
            certs.append(float(sla.svdvals(
                um.conj().T @ u_plus - np.eye(nn))[-1]))
            res = _class_residual(um, symmetry, s)
            if res > 1e-7:
                raise PathBlocked(
                    f"class residual {res:.3e} at t={tv:.3f}")
        return certs

    certs = certify(n_cert_samples)
    if min(certs) <= t.fredholm_cert:
        certs = certify(2 * n_cert_samples)
        if min(certs) <= t.fredholm_cert:
            raise PathBlocked(
                f"certificate fell to {min(certs):.3e} along the path")
    res_end = numerics.norm(u_minus_of(1.0) + u_plus)
    if res_end > 1e-8:
        raise PathBlocked(f"endpoint is not (u, -u): residual {res_end:.3e}")
    return StraightenResult(u_plus=u_plus, log_generator=h, symmetry=symmetry,
                            certificates=certs, u_minus_of=u_minus_of)


# ----------------------------------------------------------------- pipeline

_TERMINAL_CLASS = {
    None: "none",
    (1, 1): "real",
    (1, -1): "symmetric",
    (-1, -1): "anti-symmetric",
    (-1, 1): "quaternionic",
}


def terminal_symmetry_residual(a_block, kind, s_plus=None, s_minus=None):
    """Residual of the symmetry class of the terminal Fredholm block."""
    if kind is None:
        return None
    if kind == (1, 1):
        return float(numerics.norm(conj(a_block) - a_block))
    if kind == (1, -1):
        return float(numerics.norm(a_block.T - a_block))
    if kind == (-1, -1):
        return float(numerics.norm(a_block.T + a_block))
    return float(numerics.norm(s_minus.T @ conj(a_block) @ s_plus - a_block))


def _symmetry_option(kind):
    return {None: "none", (1, 1): "real-avoiding-1",
            (-1, 1): "quaternionic-avoiding-1", (1, -1): "symmetric",
            (-1, -1): "odd-symmetric"}[kind]


def retract_to_model(h_mat, K: KreinStructure, R: RealStructure | None = None,
                     segment_samples: int = 9,
                     tol: config.ToleranceConfig | None = None) -> RetractionTrace:
    """Full retraction pipeline flatten -> lift -> straighten.

    Requires N+ = N-.  For kind (-1,-1) with a forced residual kernel the
    straightening happens on the complementary block carried by a basis
    that normalizes the block Krein structure; the kernel rides along as an
    exact zero block and witnesses Sig_2 = 1.
    """
    t = config.get(tol)
    if K.n_plus != K.n_minus:
        raise IncompatibleDimensions(
            f"retraction hypothesis N+ = N- violated: ({K.n_plus},{K.n_minus})")
    h_mat = numerics.as_matrix(h_mat, square=True, name="H")
    K.check_dim(h_mat)
    kind = R.kind.as_tuple() if R is not None else None
    sig_initial = signature.global_signature(h_mat, K, "hermitian", tol=t).global_sig

    try:
        seg_flat = spectral_flatten(h_mat, K, R, tol=t)
    except Exception as exc:
        raise StageError("flatten", exc) from exc
    try:
        lift = lift_kernel(seg_flat.end, K, R, tol=t)
    except Exception as exc:
        raise StageError("lift", exc) from exc

    try:
        if lift.kernel_dim == 0:
            frames = lagrangian_frames(lift.segment.end, K, tol=t)
            s_arg = None
            if kind == (-1, 1):
                s_arg = interleaved_skew(K.n_plus)
            res = straighten(frames.u_plus, frames.u_minus,
                             symmetry=_symmetry_option(kind), s=s_arg, tol=t)
            straight_path = res.hermitian_path(K, R)
            p_p1, p_m1 = res.projections(1.0, K)
            terminal = 1j * (p_p1 - p_m1)
            u_plus = res.u_plus
            a_block = u_plus.conj().T
            if kind == (-1, 1):
                s_half = interleaved_skew(K.n_plus)
                sym_res = terminal_symmetry_residual(a_block, kind, s_half, s_half)
            else:
                sym_res = terminal_symmetry_residual(a_block, kind)
        elif lift.kernel_dim == 2 and kind == (-1, -1):
            (straight_path, terminal, u_plus, a_block, sym_res, p_p1, p_m1) = \
                _straighten_with_kernel(lift, K, R, t)
        else:
            raise NotLagrangian(
                f"unexpected residual kernel of dimension {lift.kernel_dim}")
    except StageError:
        raise
    except Exception as exc:
        raise StageError("straighten", exc) from exc

    seg_straight = PathSegment(stage="straighten", path=straight_path,
                               start=straight_path(0.0), end=terminal)
    segments = [seg_flat, lift.segment, seg_straight]

    chain_gap = max(
        numerics.norm(seg_flat.end - lift.segment.start),
        numerics.norm(lift.segment.end - seg_straight.start),
    )
    if chain_gap > t.chain_gap:
        raise StageError("final", NotInvariant(
            f"segments do not chain: gap {chain_gap:.3e}"))
    worst_membership = 0.0
    for seg in segments:
        worst_membership = max(worst_membership, seg.path.verify_membership(
            n_samples=segment_samples, tol_value=t.path_membership, tol=t))
    spec_res = flat_spectrum_residual(terminal)
    if spec_res > t.terminal_spectrum:
        raise StageError("final", NotInvariant(
            f"terminal spectrum off {{-i,0,i}} by {spec_res:.3e}"))
    sig_terminal = signature.global_signature(terminal, K, "hermitian",
                                              tol=t).global_sig
    if sig_terminal != sig_initial:
        raise StageError("final", NotInvariant(
            f"Sig changed along the retraction: {sig_initial} -> {sig_terminal}"))
    if sym_res is not None and sym_res > t.terminal_symmetry:
        raise StageError("final", NotInClass(
            f"terminal block class residual {sym_res:.3e}"))
    return RetractionTrace(
        segments=segments, initial=h_mat.copy(), terminal=terminal,
        p_plus=p_p1, p_minus=p_m1, u_plus=u_plus, terminal_block=a_block,
        terminal_class=_TERMINAL_CLASS[kind],
        terminal_symmetry_residual=sym_res,
        terminal_spectrum_residual=spec_res,
        kernel_dim_after_lift=lift.kernel_dim,
        kernel_inertia=lift.kernel_inertia,
        sig_initial=sig_initial, sig_terminal=sig_terminal,
        membership_max_residual=worst_membership, chain_max_gap=chain_gap)


def _straighten_with_kernel(lift: LiftResult, K: KreinStructure,
                            R: RealStructure, t: config.ToleranceConfig):
    """Kind (-1,-1) with a forced (1,1)-kernel: straighten the block on
    F = J E_0^perp carried by a structure-normalizing basis Theta.

    Theta satisfies Theta* J Theta = J_std and S conj(Theta) = Theta S_std,
    so B = Theta^+ H Theta is a standard smaller member; the global path is
    Theta B(t) Theta^+ with Theta^+ = J_std Theta* J, which vanishes on the
    kernel and restricts to B(t) on F.
    """
    h_lifted = lift.segment.end
    n = K.dim
    psi0 = numerics.kernel_frame(h_lifted, tol=t)
    eperp = numerics.kernel_frame(psi0.conj().T, tol=t)
    phi0 = numerics.orthonormal_frame(K.apply(eperp), tol=t)
    j_f = phi0.conj().T @ K.apply(phi0)
    s_f = phi0.conj().T @ R.S @ conj(phi0)
    leak = numerics.norm(R.S @ conj(phi0) - phi0 @ s_f)
    if leak > 1e-8:
        raise FramePreparationFailed(
            f"complement is not conjugation invariant (leak {leak:.3e})")
    norm_pair = normalize_krein_pair(j_f, s_f, -1, -1, tol=t)
    theta = phi0 @ norm_pair.R
    K_blk = norm_pair.K
    R_blk = norm_pair.structure
    theta_pinv = K_blk.J @ theta.conj().T @ K.J
    b0 = theta_pinv @ h_lifted @ theta
    member = is_member(b0, R_blk, "hermitian", tol=t)
    if not member:
        raise FramePreparationFailed(
            f"block operator left the class (residual {member.residual:.3e})")
    frames = lagrangian_frames(b0, K_blk, tol=t)
    res = straighten(frames.u_plus, frames.u_minus, symmetry="odd-symmetric",
                     s=standard_skew(K_blk.n_plus), tol=t)

    def sampler(tv):
        p_p, p_m = res.projections(tv, K_blk)
        return theta @ (1j * (p_p - p_m)) @ theta_pinv

    straight_path = OperatorPath(sampler=sampler, structure=K, kind="hermitian",
                                 real_structure=R, name="straighten-block")
    p_p1, p_m1 = res.projections(1.0, K_blk)
    terminal = theta @ (1j * (p_p1 - p_m1)) @ theta_pinv
    u_plus = res.u_plus
    a_block = u_plus.conj().T
    sym_res = terminal_symmetry_residual(a_block, (-1, -1))
    return (straight_path, terminal, u_plus, a_block, sym_res,
            theta @ p_p1 @ theta_pinv, theta @ p_m1 @ theta_pinv)
