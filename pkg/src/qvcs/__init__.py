"""Quaternionic vector coherent states for spin-orbit Landau levels.

Operator algebra on the truncated spinor Fock space C^2 (x) H_N:
Zeeman and spin-orbit Hamiltonians with exact spectra, four coherent-state
families built from quaternion labels, quadrature verification of their
moment problems and identity resolutions, and expectation/uncertainty
tables, all cross-checked against brute-force oracles.
"""

from .quaternion import (
    Quaternion,
    QuaternionQ,
    sigma_n,
    su2_conjugated,
    su2_phase,
    su2_polar_rotation,
)
from .fock import (
    FockTruncation,
    SpinorState,
    apply_blockwise,
    basis_index,
    basis_state,
    interior_mask,
    ladder,
    lift_spin,
    lift_to_spinor,
    quaternion_apply,
    restrict,
)
from .hamiltonians import (
    ModelParams,
    SpectrumRow,
    SusyReport,
    WeakCoupling,
    build_dresselhaus_simple,
    build_h0,
    build_hamiltonian,
    build_rashba_simple,
    build_so_generalized,
    closed_form_eigenstates,
    closed_form_eigensystem,
    closed_form_spectrum,
    diagonalize,
    pair_by_overlap,
    passage_operator,
    susy_check,
    weak_coupling_model,
)
from .states import (
    CSFamily,
    TailError,
    canonical_qvcs,
    displacement_qvcs,
    energy_qvcs,
    evolve,
    linear_combination,
    q_qvcs,
    series_tail,
    suggest_n_max,
    vcs_diagonal,
)
from .quadrature import (
    AngularGrid,
    DensitySpec,
    QuadratureCapacityError,
    RadialQuadrature,
    angular_orthogonality,
    assemble_identity,
    assemble_identity_energy,
    assemble_identity_vcs,
    identity_distance,
    moment_residual,
    qqvcs_identity_diagonal,
    qqvcs_moment_residual,
)
from .observables import (
    ExpectationRow,
    UncertaintyRecord,
    expect,
    f_weights,
    generalized_ladder_spinor,
    qqvcs_expectations,
    quadrature_pair,
    qvcs_expectations,
    spin_ladder,
    uncertainty_product,
)

__version__ = "0.1.0"
