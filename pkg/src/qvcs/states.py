"""The four coherent-state families on the truncated spinor space.

Amplitudes are assembled in the log domain (n*log r - 0.5*log rho(n)), so
series with n_max up to a few hundred never overflow even though the raw
weights n! * omega^n do.  Every constructor computes the exact exponential
tail mass excluded by the truncation and refuses to return a state whose
tail exceeds the requested tolerance, reporting the n_max that would.

Normalization follows the summed convention: the two spin-labeled states
of a family carry squared norm 1/2 each (1 for the diagonal-label family
split unevenly), so expectation values inherit that factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.linalg import expm
from scipy.special import gammainc, gammaln

from .fock import FockTruncation, SpinorState, ladder, spin_fock_product, spin_offset
from .quaternion import Quaternion, QuaternionQ

_LOG2 = math.log(2.0)


class TailError(ValueError):
    """Truncation keeps too little of the coherent-state series."""

    def __init__(self, tail: float, tol: float, suggested_n_max: int):
        self.tail = tail
        self.tol = tol
        self.suggested_n_max = suggested_n_max
        super().__init__(
            f"truncation tail {tail:.3e} exceeds tolerance {tol:.3e}; "
            f"use n_max >= {suggested_n_max}"
        )


def series_tail(n_max: int, x: float) -> float:
    """Relative mass of exp(-x) * sum_{n > n_max} x^n / n! (exact)."""
    if x == 0.0:
        return 0.0
    return float(gammainc(n_max + 1, x))


def suggest_n_max(x: float, tol: float, hard_cap: int = 100_000) -> int:
    n = 1
    while series_tail(n, x) >= tol:
        n += 1 + n // 4
        if n > hard_cap:
            raise ValueError(f"no truncation below {hard_cap} reaches tail tolerance {tol}")
    # back off to the smallest sufficient n
    while n > 1 and series_tail(n - 1, x) < tol:
        n -= 1
    return n


def _check_tail(x_values, n_max: int, tol: float) -> float:
    tail = max(series_tail(n_max, x) for x in x_values)
    if tail > tol:
        worst = max(x_values)
        raise TailError(tail, tol, suggest_n_max(worst, tol))
    return tail


def _log_rho(n: np.ndarray, omega: float) -> np.ndarray:
    """log(n! * omega^n) elementwise."""
    return gammaln(n + 1.0) + n * math.log(omega)


def _series_amplitudes(r: float, log_rho: np.ndarray, log_norm: float) -> np.ndarray:
    """exp(n*log r - 0.5*log_rho - 0.5*log_norm) with the r = 0 limit."""
    n = np.arange(log_rho.size)
    if r == 0.0:
        amps = np.zeros(log_rho.size)
        amps[0] = math.exp(-0.5 * log_rho[0] - 0.5 * log_norm)
        return amps
    return np.exp(n * math.log(r) - 0.5 * log_rho - 0.5 * log_norm)


def _unit_power_table(q: Union[Quaternion, QuaternionQ], n_max: int, column: int) -> np.ndarray:
    """Spin blocks of the rotation parts q^n / r^n applied to chi^{column}."""
    angle = q.eta if isinstance(q, Quaternion) else q.theta
    axis_col = q.axis[:, column]
    n = np.arange(n_max + 1)
    cos_part = np.cos(n * angle)[:, None] * np.eye(2)[column][None, :]
    sin_part = 1j * np.sin(n * angle)[:, None] * axis_col[None, :]
    return cos_part + sin_part  # shape (n_max + 1, 2)


def _assemble(amp_rows: np.ndarray) -> np.ndarray:
    return amp_rows.reshape(-1)


def canonical_qvcs(q: Quaternion, spin: int, n_max: int, tail_tol: float = 1e-12) -> SpinorState:
    """Canonical family: (exp(-r^2/2)/sqrt(2)) * sum q^n / sqrt(n!) chi^pm (x) Phi_n.

    Eigenstate of the spinor annihilator diag(b', b') with quaternion
    eigenvalue q (blockwise matrix multiplication).
    """
    col = spin_offset(spin)
    tail = _check_tail([q.r * q.r], n_max, tail_tol)
    n = np.arange(n_max + 1, dtype=float)
    amps = _series_amplitudes(q.r, gammaln(n + 1.0), _LOG2) * math.exp(-0.5 * q.r * q.r)
    blocks = amps[:, None] * _unit_power_table(q, n_max, col)
    return SpinorState(_assemble(blocks), tail_bound=tail)


def energy_qvcs(q: Quaternion, spin: int, omega: float, n_max: int, tail_tol: float = 1e-12) -> SpinorState:
    """Energy family with branch weight omega: N^{-1/2} sum q^n / sqrt(n! omega^n) ...

    The normalization constant is N = 2*exp(r^2/omega), so the state's
    squared norm is 1/2 up to the truncation tail.
    """
    if omega <= 0.0:
        raise ValueError(f"branch weight omega must be > 0, got {omega}")
    col = spin_offset(spin)
    x = q.r * q.r / omega
    tail = _check_tail([x], n_max, tail_tol)
    n = np.arange(n_max + 1, dtype=float)
    log_norm = _LOG2 + x
    amps = _series_amplitudes(q.r, _log_rho(n, omega), log_norm)
    blocks = amps[:, None] * _unit_power_table(q, n_max, col)
    return SpinorState(_assemble(blocks), tail_bound=tail)


def vcs_diagonal(
    z1: complex,
    z2: complex,
    spin: int,
    omega_pair: tuple[float, float],
    n_max: int,
    tail_tol: float = 1e-12,
) -> SpinorState:
    """Diagonal-label family: N(Z)^{-1/2} sum R(n)^{-1/2} Z^n chi^pm (x) Phi_n.

    Z = diag(z1, z2) keeps the spin-+ state on the z1 / rho_+ series and
    the spin-- state on the z2 / rho_- series; the shared normalization is
    N(Z) = exp(|z1|^2/omega_+) + exp(|z2|^2/omega_-).
    """
    omega_p, omega_m = omega_pair
    if omega_p <= 0.0 or omega_m <= 0.0:
        raise ValueError(f"branch weights must be > 0, got {omega_pair}")
    col = spin_offset(spin)
    z = complex(z1) if col == 0 else complex(z2)
    omega = omega_p if col == 0 else omega_m
    x1 = abs(z1) ** 2 / omega_p
    x2 = abs(z2) ** 2 / omega_m
    tail = _check_tail([x1 if col == 0 else x2], n_max, tail_tol)
    log_norm = float(np.logaddexp(x1, x2))
    n = np.arange(n_max + 1, dtype=float)
    amps = _series_amplitudes(abs(z), _log_rho(n, omega), log_norm)
    phases = np.exp(1j * np.arange(n_max + 1) * np.angle(z)) if z != 0 else np.ones(n_max + 1)
    blocks = np.zeros((n_max + 1, 2), dtype=complex)
    blocks[:, col] = amps * phases
    return SpinorState(_assemble(blocks), tail_bound=tail)


def q_qvcs(
    big_q: QuaternionQ,
    spin: int,
    omega_pair: tuple[float, float],
    n_max: int,
    tail_tol: float = 1e-12,
) -> SpinorState:
    """Quaternion-label family: N(r)^{-1/2} sum R(n)^{-1/2} Q^n chi^pm (x) Phi_n.

    R(n)^{-1/2} = diag(rho_+(n)^{-1/2}, rho_-(n)^{-1/2}) acts on the spin
    block after the quaternion power; the summed squared norm over the two
    spin labels is exactly 1 up to the truncation tail.
    """
    omega_p, omega_m = omega_pair
    if omega_p <= 0.0 or omega_m <= 0.0:
        raise ValueError(f"branch weights must be > 0, got {omega_pair}")
    col = spin_offset(spin)
    r = big_q.r_tilde
    xs = [r * r / omega_p, r * r / omega_m]
    tail = _check_tail(xs, n_max, tail_tol)
    log_norm = float(np.logaddexp(xs[0], xs[1]))
    n = np.arange(n_max + 1, dtype=float)
    units = _unit_power_table(big_q, n_max, col)
    blocks = np.empty((n_max + 1, 2), dtype=complex)
    blocks[:, 0] = _series_amplitudes(r, _log_rho(n, omega_p), log_norm) * units[:, 0]
    blocks[:, 1] = _series_amplitudes(r, _log_rho(n, omega_m), log_norm) * units[:, 1]
    return SpinorState(_assemble(blocks), tail_bound=tail)


def displacement_qvcs(
    q: Quaternion,
    spin: int,
    omega: float,
    n_max: int,
    unitarity_tol: float = 1e-10,
) -> SpinorState:
    """Energy-family state via the displacement exponential.

    Applies exp((1/omega) * (q (x) a^dag - q^dag (x) a)) to chi^pm (x) Phi_0
    over sqrt(2), with a the generalized ladder of weights x_n = n*omega.
    That ladder choice is what reproduces the series prefactor
    exp(-r^2 / (2*omega)); with the bare boson the commutator would scale
    as 1/omega^2 instead.  The generator is anti-Hermitian, so the result
    must preserve norm; a drift beyond ``unitarity_tol`` raises.
    """
    if omega <= 0.0:
        raise ValueError(f"branch weight omega must be > 0, got {omega}")
    trunc = FockTruncation.harmonic(n_max, omega)
    a, a_dag, _ = ladder(trunc)
    qm = q.matrix()
    gen = (spin_fock_product(qm, a_dag) - spin_fock_product(qm.conj().T, a)) / omega
    base = np.zeros(trunc.spinor_dim, dtype=complex)
    base[spin_offset(spin)] = 1.0 / math.sqrt(2.0)
    out = expm(gen) @ base
    drift = abs(float(np.linalg.norm(out)) - float(np.linalg.norm(base)))
    if drift > unitarity_tol:
        raise ArithmeticError(
            f"displacement exponential lost unitarity: norm drift {drift:.3e} "
            f"(generator anti-Hermiticity defect {np.abs(gen + gen.conj().T).max():.3e})"
        )
    return SpinorState(out, tail_bound=series_tail(n_max, q.r * q.r / omega))


def linear_combination(
    c_plus: complex, c_minus: complex, state_plus: SpinorState, state_minus: SpinorState
) -> SpinorState:
    """c_+ |q;+> + c_- |q;-> for unit coefficient vectors.

    With the family convention <pm|pm> = 1/2 and orthogonal branches the
    combination carries squared norm (|c_+|^2 + |c_-|^2)/2 = 1/2, matching
    the expectation normalization of the single-label states.
    """
    defect = abs(abs(c_plus) ** 2 + abs(c_minus) ** 2 - 1.0)
    if defect > 1e-12:
        raise ValueError(f"|c_+|^2 + |c_-|^2 must be 1, off by {defect:.3e}")
    if state_plus.coeffs.size != state_minus.coeffs.size:
        raise ValueError("component states live on different truncations")
    coeffs = c_plus * state_plus.coeffs + c_minus * state_minus.coeffs
    return SpinorState(coeffs, tail_bound=max(state_plus.tail_bound, state_minus.tail_bound))


def evolve(state: SpinorState, tau: float, energies: np.ndarray) -> SpinorState:
    """Phase evolution: the (pm, n) component picks up exp(-i*tau*E[n, pm]).

    ``energies`` has shape (n_max + 1, 2) with column 0 for the chi^+
    branch.  Norm is preserved exactly and evolve composes additively in
    tau (one-parameter group).
    """
    energies = np.asarray(energies, dtype=float)
    if energies.shape != (state.n_max + 1, 2):
        raise ValueError(
            f"energy table shape {energies.shape} does not cover the truncation "
            f"(expected {(state.n_max + 1, 2)})"
        )
    phases = np.exp(-1j * tau * energies)
    blocks = state.coeffs.reshape(-1, 2) * phases
    return SpinorState(blocks.reshape(-1), tail_bound=state.tail_bound)


@dataclass(frozen=True)
class CSFamily:
    """Declarative coherent-state request used by the verification suites."""

    kind: str  # canonical | energy_qvcs | vcs_diagonal | q_qvcs
    spin: int
    argument: Union[Quaternion, QuaternionQ, tuple]
    weights: Union[float, tuple[float, float], None] = None
    tau: float = 0.0

    def build(self, n_max: int, tail_tol: float = 1e-12) -> SpinorState:
        if self.kind == "canonical":
            return canonical_qvcs(self.argument, self.spin, n_max, tail_tol)
        if self.kind == "energy_qvcs":
            return energy_qvcs(self.argument, self.spin, float(self.weights), n_max, tail_tol)
        if self.kind == "vcs_diagonal":
            z1, z2 = self.argument
            return vcs_diagonal(z1, z2, self.spin, tuple(self.weights), n_max, tail_tol)
        if self.kind == "q_qvcs":
            return q_qvcs(self.argument, self.spin, tuple(self.weights), n_max, tail_tol)
        raise ValueError(f"unknown coherent-state family {self.kind!r}")
