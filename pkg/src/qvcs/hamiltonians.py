"""Zeeman and spin-orbit Hamiltonians on the truncated spinor space.

Dimensionless conventions (hbar = 1) throughout: the oscillator part is
``omega_c * (N + 1/2)`` and the Zeeman shift places ``chi^+ (x) Phi_n`` at
``omega_c*(n + 1/2) - omega_c*xi_eff`` and ``chi^-`` at ``+ omega_c*xi_eff``,
with ``xi_eff = xi`` in the plus_z gauge and ``-xi`` in the minus_z gauge.
This branch pairing is the one under which the closed-form spin-orbit
spectra below hold with delta = omega_c*(1 + 2*xi_eff) (Rashba) and
delta = omega_c*(-1 + 2*xi_eff) (Dresselhaus).

The dimensionful ladder b = sqrt(2*M*hbar*omega_c) * b' and its second-gauge
partner d are documentation-level symbols only; both gauges share the same
dimensionless boson algebra and differ here through the sign of xi_eff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, NamedTuple, Sequence

import numpy as np

from .fock import (
    FockTruncation,
    SpinorState,
    basis_index,
    interior_mask,
    ladder,
    lift_spin,
    lift_to_spinor,
    restrict,
    spin_fock_product,
)
from .quaternion import SIGMA_3, SIGMA_MINUS, SIGMA_PLUS

Branch = Literal["rashba", "dresselhaus"]
Gauge = Literal["plus_z", "minus_z"]

_PROJ_UP = np.diag([1.0, 0.0]).astype(complex)
_PROJ_DOWN = np.diag([0.0, 1.0]).astype(complex)


def _default_lambda(n: int) -> complex:
    return -1j


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless model parameters (hbar = 1).

    ``lambda_spec`` maps the number index n to the nonvanishing complex
    value lambda(n) entering the generalized spin-orbit couplings; the
    default constant -1j together with k = 1, epsilon = -1 (Rashba) or
    +1 (Dresselhaus) reproduces the simple interaction forms.
    """

    omega_c: float
    xi: float = 0.0
    gauge: Gauge = "plus_z"
    gamma: float = 0.0
    beta: float = 0.0
    k: int = 1
    epsilon: int = -1
    lambda_spec: Callable[[int], complex] = field(default=_default_lambda, repr=False)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.omega_c) and self.omega_c > 0.0):
            raise ValueError(f"omega_c must be > 0, got {self.omega_c!r}")
        if self.gauge not in ("plus_z", "minus_z"):
            raise ValueError(f"gauge must be 'plus_z' or 'minus_z', got {self.gauge!r}")
        if self.k < 1:
            raise ValueError(f"spin-orbit order k must be >= 1, got {self.k}")
        if self.epsilon not in (+1, -1):
            raise ValueError(f"epsilon must be +1 or -1, got {self.epsilon!r}")

    @property
    def xi_eff(self) -> float:
        """Zeeman parameter in the active gauge (xi' = -xi for minus_z)."""
        return self.xi if self.gauge == "plus_z" else -self.xi

    def coupling(self, branch: Branch) -> float:
        return self.gamma if branch == "rashba" else self.beta

    def delta(self, branch: Branch) -> float:
        """Level-splitting parameter of the closed-form spectra."""
        s = 1.0 if branch == "rashba" else -1.0
        return self.omega_c * (s + 2.0 * self.xi_eff)


class SOInteraction(NamedTuple):
    matrix: np.ndarray
    hermiticity_residual: float


def _require_standard(trunc: FockTruncation) -> None:
    if not trunc.is_standard():
        raise ValueError("this construction requires the standard weights x_n = n")


def build_h0(params: ModelParams, trunc: FockTruncation) -> np.ndarray:
    """Zeeman-coupled oscillator, diagonal in the product basis.

    Eigenvalue on chi^pm (x) Phi_n is omega_c*(n + 1/2) -/+ omega_c*xi_eff.
    """
    _require_standard(trunc)
    _, _, n_op = ladder(trunc)
    osc = lift_to_spinor(n_op + 0.5 * np.eye(trunc.dim))
    return params.omega_c * osc - params.omega_c * params.xi_eff * lift_spin(SIGMA_3, trunc.dim)


def build_rashba_simple(params: ModelParams, trunc: FockTruncation) -> np.ndarray:
    """omega_c * gamma * (b'^dag sigma_- + b' sigma_+); Hermitian by construction."""
    _require_standard(trunc)
    a, a_dag, _ = ladder(trunc)
    g = params.omega_c * params.gamma
    return g * spin_fock_product(SIGMA_MINUS, a_dag) + g * spin_fock_product(SIGMA_PLUS, a)


def build_dresselhaus_simple(params: ModelParams, trunc: FockTruncation) -> np.ndarray:
    """omega_c * beta * (i b'^dag sigma_+ - i b' sigma_-); Hermitian by construction."""
    _require_standard(trunc)
    a, a_dag, _ = ladder(trunc)
    g = params.omega_c * params.beta
    return 1j * g * spin_fock_product(SIGMA_PLUS, a_dag) - 1j * g * spin_fock_product(SIGMA_MINUS, a)


def build_hamiltonian(params: ModelParams, trunc: FockTruncation) -> np.ndarray:
    """Zeeman oscillator plus the simple Rashba and Dresselhaus terms.

    Mixed gamma*beta != 0 operators are buildable and diagonalizable; no
    closed-form spectrum is claimed for that case.
    """
    h = build_h0(params, trunc)
    if params.gamma != 0.0:
        h = h + build_rashba_simple(params, trunc)
    if params.beta != 0.0:
        h = h + build_dresselhaus_simple(params, trunc)
    return h


def build_so_generalized(params: ModelParams, trunc: FockTruncation, kind: Branch) -> SOInteraction:
    """Generalized spin-orbit interaction of order k with weight lambda(N).

    Builds B^+ = (b'^dag)^k lambda(N) for epsilon = -1 or b'^k lambda(N) for
    epsilon = +1, B^- = epsilon * conj(lambda)(N) * (adjoint power), forms
    V = B^+ sigma_- + B^- sigma_+, and returns i*omega_c*gamma*V (rashba)
    or omega_c*beta*V (dresselhaus) together with its Hermiticity residual.
    The result is Hermitian exactly when the epsilon choice matches the
    kind (-1 for rashba, +1 for dresselhaus), for any nonvanishing lambda.
    """
    _require_standard(trunc)
    d = trunc.dim
    lam = np.array([complex(params.lambda_spec(n)) for n in range(d)])
    if np.any(lam == 0.0):
        bad = int(np.flatnonzero(lam == 0.0)[0])
        raise ValueError(f"lambda(N) vanishes at n = {bad}; a nonvanishing weight is required")
    a, a_dag, _ = ladder(trunc)
    a_k = np.linalg.matrix_power(a, params.k)
    ad_k = np.linalg.matrix_power(a_dag, params.k)
    lam_d = np.diag(lam)
    lam_cd = np.diag(lam.conj())
    if params.epsilon == +1:
        b_plus = a_k @ lam_d
        b_minus = lam_cd @ ad_k
    else:
        b_plus = ad_k @ lam_d
        b_minus = -(lam_cd @ a_k)
    v = spin_fock_product(SIGMA_MINUS, b_plus) + spin_fock_product(SIGMA_PLUS, b_minus)
    if kind == "rashba":
        h = 1j * params.omega_c * params.gamma * v
    elif kind == "dresselhaus":
        h = params.omega_c * params.beta * v
    else:
        raise ValueError(f"unknown interaction kind {kind!r}")
    residual = float(np.abs(h - h.conj().T).max())
    return SOInteraction(h, residual)


@dataclass(frozen=True)
class SpectrumRow:
    """Closed-form level data for one coupled pair of basis states."""

    n: int
    e_plus: float
    e_minus: float
    theta_n: float
    delta_gap: float


def _level_energies(params: ModelParams, n: int, branch: Branch) -> tuple[float, float]:
    wc = params.omega_c
    c = params.coupling(branch)
    delta = params.delta(branch)
    if delta == 0.0:
        shift = math.sqrt(n) * abs(c) * wc
    else:
        shift = 0.5 * delta * math.sqrt(1.0 + 4.0 * c * c * n * wc * wc / (delta * delta))
    return wc * n - shift, wc * n + shift


def closed_form_spectrum(params: ModelParams, n: int, branch: Branch) -> SpectrumRow:
    """Exact pair energies, mixing angle, and splitting gap at level n >= 1.

    E^pm_n = omega_c*n -/+ (delta/2)*sqrt(1 + 4 c^2 n omega_c^2 / delta^2)
    with c = gamma (rashba) or beta (dresselhaus), and
    tan(2 theta_n) = 2 sqrt(n) c omega_c / delta.  The degenerate parameter
    delta = 0 is handled as the continuous limit theta_n = pi/4,
    E^pm_n = omega_c*n -/+ sqrt(n)*|c|*omega_c.
    """
    if n < 1:
        raise ValueError(f"level index must be >= 1, got {n}")
    wc = params.omega_c
    c = params.coupling(branch)
    delta = params.delta(branch)
    if delta == 0.0:
        theta = math.pi / 4.0
    else:
        theta = 0.5 * math.atan(2.0 * math.sqrt(n) * c * wc / delta)
    e_plus, e_minus = _level_energies(params, n, branch)
    e_plus_next, _ = _level_energies(params, n + 1, branch)
    return SpectrumRow(n, e_plus, e_minus, theta, e_minus - e_plus_next)


def _pair_indices(n: int, branch: Branch) -> tuple[int, int]:
    # (chi+ slot, chi- slot) of the 2d invariant subspace at level n
    if branch == "rashba":
        return basis_index(n - 1, +1), basis_index(n, -1)
    return basis_index(n, +1), basis_index(n - 1, -1)


def _pair_mixing(params: ModelParams, n: int, branch: Branch) -> tuple[float, complex]:
    """Mixing angle t and relative phase of the exact pair eigenvectors.

    The dressed states are psi^+ = cos(t) u_+ + phase*sin(t) u_- and
    psi^- = -conj(phase)*sin(t) u_+ + cos(t) u_-, where u_+/u_- are the
    coupled product states and phase carries the off-diagonal matrix
    element's argument (1 for rashba, -1j for dresselhaus with positive
    coupling).  |t| equals |theta_n| of the printed mixing-angle formula;
    the sign and phase are fixed by the eigenvalue equation itself.
    """
    wc = params.omega_c
    c = params.coupling(branch)
    half_delta = 0.5 * params.delta(branch)
    w = c * wc * math.sqrt(n)
    if branch == "dresselhaus":
        w = 1j * w
    mag = abs(w)
    phase = complex(np.conj(w) / mag) if mag != 0.0 else 1.0 + 0j
    if half_delta == 0.0:
        t = -math.pi / 4.0 if mag != 0.0 else 0.0
    else:
        t = 0.5 * math.atan(-mag / half_delta)
    return t, phase


def closed_form_eigenstates(
    params: ModelParams, n: int, branch: Branch, trunc: FockTruncation
) -> tuple[SpinorState, SpinorState]:
    """Orthonormal dressed pair (psi^+_n, psi^-_n), exact eigenvectors.

    Rashba couples chi^+ (x) Phi_{n-1} with chi^- (x) Phi_n; Dresselhaus
    couples chi^+ (x) Phi_n with chi^- (x) Phi_{n-1}.
    """
    if n < 1:
        raise ValueError(f"level index must be >= 1, got {n}")
    if n > trunc.n_max:
        raise ValueError(f"level {n} exceeds the truncation n_max = {trunc.n_max}")
    iu, il = _pair_indices(n, branch)
    t, phase = _pair_mixing(params, n, branch)
    dim = trunc.spinor_dim
    plus = np.zeros(dim, dtype=complex)
    minus = np.zeros(dim, dtype=complex)
    plus[iu], plus[il] = math.cos(t), phase * math.sin(t)
    minus[iu], minus[il] = -np.conj(phase) * math.sin(t), math.cos(t)
    return SpinorState(plus), SpinorState(minus)


def diagonalize(h: np.ndarray, herm_tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition, eigenvalues ascending.

    Rejects inputs whose Hermiticity defect exceeds herm_tol relative to
    the matrix scale.  This is the brute-force oracle the closed forms are
    checked against; residuals ||H v - lambda v|| close the loop on it.
    """
    h = np.asarray(h)
    scale = max(1.0, float(np.abs(h).max()))
    defect = float(np.abs(h - h.conj().T).max())
    if defect > herm_tol * scale:
        raise ValueError(f"matrix is not Hermitian within tolerance: defect {defect:.3e}")
    return np.linalg.eigh(h)


def pair_by_overlap(
    eigenvalues: np.ndarray, eigenvectors: np.ndarray, target: np.ndarray, tie_tol: float = 1e-12
) -> int:
    """Index of the eigenpair with maximal |overlap| against a target vector.

    Near-degenerate ties are broken by lower energy, then lower index, so
    the pairing stays deterministic when branches cross.
    """
    overlaps = np.abs(eigenvectors.conj().T @ np.asarray(target))
    best = float(overlaps.max())
    candidates = np.flatnonzero(overlaps >= best - tie_tol)
    order = np.lexsort((candidates, eigenvalues[candidates]))
    return int(candidates[order[0]])


def passage_operator(columns: Sequence[np.ndarray | SpinorState]) -> np.ndarray:
    """Unitary mapping the product basis onto an ordered eigenset.

    ``columns[j]`` becomes column j, so basis state j is sent to the j-th
    dressed state.  Raises if the set does not span the truncation.
    """
    vecs = [c.coeffs if isinstance(c, SpinorState) else np.asarray(c, dtype=complex) for c in columns]
    if not vecs:
        raise ValueError("empty eigenset")
    dim = vecs[0].size
    if len(vecs) != dim:
        raise ValueError(f"eigenset has {len(vecs)} states but the truncation needs {dim}")
    u = np.column_stack(vecs)
    if np.linalg.matrix_rank(u) < dim:
        raise ValueError("eigenset does not span the truncated space")
    return u


def closed_form_eigensystem(
    params: ModelParams, trunc: FockTruncation, branch: Branch
) -> tuple[np.ndarray, np.ndarray]:
    """Passage operator and its diagonal energies for one pure branch.

    Returns (U, energies) with U's column at the chi^pm (x) Phi_n slot
    holding the dressed state that reduces to it at zero coupling, and
    ``energies`` the matching diagonal of U^dag H U.  The unpaired corner
    states (chi^- Phi_0 for rashba, chi^+ Phi_0 for dresselhaus, plus the
    cutoff edge state) are exact eigenstates of the truncated operator.
    """
    wc, xi = params.omega_c, params.xi_eff
    n_max = trunc.n_max
    dim = trunc.spinor_dim
    u = np.zeros((dim, dim), dtype=complex)
    energies = np.zeros(dim)

    def zeeman(n: int, spin: int) -> float:
        return wc * (n + 0.5) - spin * wc * xi

    for n in range(1, n_max + 1):
        psi_p, psi_m = closed_form_eigenstates(params, n, branch, trunc)
        e_p, e_m = _level_energies(params, n, branch)
        iu, il = _pair_indices(n, branch)
        u[:, iu] = psi_p.coeffs
        u[:, il] = psi_m.coeffs
        energies[iu] = e_p
        energies[il] = e_m
    if branch == "rashba":
        corners = [(0, -1), (n_max, +1)]
    else:
        corners = [(0, +1), (n_max, -1)]
    for n, spin in corners:
        j = basis_index(n, spin)
        u[j, j] = 1.0
        energies[j] = zeeman(n, spin)
    return u, energies


@dataclass(frozen=True)
class WeakCoupling:
    """Weak-Rashba branch frequencies omega_pm and moment weights rho_pm.

    omega_pm = omega_c * (1 -/+ 2*gamma^2 / (2 - gc)) with gc = -4*xi_eff
    (the Zeeman definition with Bohr magneton e*hbar/2M fixes gc this way).
    The closed-form branch energies linearized per level drop the constant
    offset -/+ delta/2, leaving E^pm_n ~= omega_pm * n.
    """

    omega_c: float
    gc: float
    omega_plus: float
    omega_minus: float

    def rho_plus(self, n: int) -> float:
        return math.factorial(n) * self.omega_plus**n

    def rho_minus(self, n: int) -> float:
        return math.factorial(n) * self.omega_minus**n

    def rho(self, n: int) -> tuple[float, float]:
        return self.rho_plus(n), self.rho_minus(n)

    def level_energies(self, n_max: int) -> np.ndarray:
        """Array E[n, 0/1] = omega_pm * n for the two spin branches."""
        n = np.arange(n_max + 1, dtype=float)
        return np.column_stack((self.omega_plus * n, self.omega_minus * n))


def weak_coupling_model(params: ModelParams) -> WeakCoupling:
    gc = -4.0 * params.xi_eff
    if gc == 2.0:
        raise ValueError("singular parameter gc = 2 (xi_eff = -1/2): branch frequencies diverge")
    shift = 2.0 * params.gamma**2 / (2.0 - gc)
    return WeakCoupling(
        omega_c=params.omega_c,
        gc=gc,
        omega_plus=params.omega_c * (1.0 - shift),
        omega_minus=params.omega_c * (1.0 + shift),
    )


@dataclass(frozen=True)
class SusyReport:
    anticommutator_residual: float
    commutator_residual_interior: float
    q_squared_norm: float


def susy_check(params: ModelParams, trunc: FockTruncation) -> SusyReport:
    """Residuals of the supersymmetric oscillator identities.

    H_SUSY = omega_c * diag(b'^dag b', b' b'^dag) should equal the
    anticommutator of the supercharge Q = sqrt(omega_c) * b' sigma_- with
    its adjoint, and the spinor annihilator diag(b', b') should satisfy
    [H_SUSY, A'] = -omega_c A' away from the truncation edge.  Scalar
    prefactors are factored out of the matrix products so both identities
    are exact in floating point wherever they hold.
    """
    _require_standard(trunc)
    a, a_dag, _ = ladder(trunc)
    k = spin_fock_product(SIGMA_MINUS, a)  # Q / sqrt(omega_c)
    k_dag = k.conj().T
    h_core = np.kron(a_dag @ a, _PROJ_UP) + np.kron(a @ a_dag, _PROJ_DOWN)
    anti = (k @ k_dag + k_dag @ k) - h_core
    a0 = lift_to_spinor(a)
    comm = (h_core @ a0 - a0 @ h_core) + a0
    mask = interior_mask(trunc.n_max)
    q2 = params.omega_c * float(np.abs(k @ k).max())
    return SusyReport(
        anticommutator_residual=params.omega_c * float(np.abs(anti).max()),
        commutator_residual_interior=params.omega_c * float(np.abs(restrict(comm, mask)).max()),
        q_squared_norm=q2,
    )
