"""kreinlab: a finite-dimensional laboratory for Krein-space operator theory.

Computes Krein inertia and global signatures of J-unitary and J-hermitian
matrices (with and without Real symmetry), tracks eigenvalue bifurcations
along operator paths, transports invariants through Cayley transforms, and
executes explicit homotopy retractions down to model operators.
"""

from .config import DEFAULT, ToleranceConfig
from .krein import (GeneralFormReduction, KreinStructure, MembershipResult,
                    is_j_hermitian, is_j_unitary, make_standard,
                    random_j_hermitian, random_j_unitary, reduce_general_form)
from .signature import (InertiaPair, InvariantReport, build_index_example,
                        global_signature, inertia, sec, sig2)
from .cayley import (CayleyParams, cayley_inv_op, cayley_inv_scalar, cayley_op,
                     cayley_scalar, pick_zeta, transport_report)
from .realsym import (RealKind, RealStructure, classify_group,
                      check_spectral_symmetries, full_invariant_report,
                      is_member, kramers_check, make_real_structure,
                      normalize_krein_pair, random_member)
from .spectral import (ClusterPartition, SpectralCluster, cluster_eigenvalues,
                       fredholm_corrector, riesz_projection, spectral_partition,
                       spectral_subspaces)
from .homotopy import (BifurcationEvent, OperatorPath, Trajectory,
                       detect_events, scenario_library, track,
                       trajectories_to_csv, verify_krein_stability)
from .retraction import (RetractionTrace, block_decompose, factorize_unitary,
                         lagrangian_frames, lift_kernel, retract_to_model,
                         spectral_flatten, straighten)

__version__ = "0.1.0"
