"""Ladder and quadrature observables with closed-form expectation tables.

Expectations use <X> = <state|X|state> with the family normalization
(each spin-labeled state carries squared norm 1/2); the closed forms below
embed that factor.  Where a closed form and the numeric truncated value
disagree beyond tolerance, callers report both rather than reconciling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import csv

import numpy as np

from .fock import FockTruncation, SpinorState, basis_index, ladder, lift_to_spinor
from .quaternion import Quaternion, QuaternionQ
from .states import energy_qvcs, q_qvcs


def expect(op: np.ndarray, state: SpinorState) -> complex:
    """<state|op|state> without renormalization."""
    op = np.asarray(op)
    if op.shape != (state.coeffs.size, state.coeffs.size):
        raise ValueError(f"operator shape {op.shape} does not match state dimension {state.coeffs.size}")
    return complex(np.vdot(state.coeffs, op @ state.coeffs))


def generalized_ladder_spinor(omega: float, n_max: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """A = I2 (x) a, its adjoint, and N = I2 (x) N' for weights x_n = n*omega."""
    a, a_dag, n_op = ladder(FockTruncation.harmonic(n_max, omega))
    return lift_to_spinor(a), lift_to_spinor(a_dag), lift_to_spinor(n_op)


def quadrature_pair(a_op: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Q = (A + A^dag)/sqrt(2), P = (A - A^dag)/(i sqrt(2)); [Q, P] = i[A, A^dag]."""
    a_dag = a_op.conj().T
    q = (a_op + a_dag) / math.sqrt(2.0)
    p = (a_op - a_dag) / (1j * math.sqrt(2.0))
    return q, p


def spin_ladder(omega_pair: tuple[float, float], n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Branch-weighted annihilator: chi^pm (x) Phi_n -> sqrt(n omega_pm) ... Phi_{n-1}."""
    omega_p, omega_m = omega_pair
    if omega_p <= 0.0 or omega_m <= 0.0:
        raise ValueError(f"branch weights must be > 0, got {omega_pair}")
    dim = 2 * (n_max + 1)
    cal_a = np.zeros((dim, dim), dtype=complex)
    for n in range(1, n_max + 1):
        cal_a[basis_index(n - 1, +1), basis_index(n, +1)] = math.sqrt(n * omega_p)
        cal_a[basis_index(n - 1, -1), basis_index(n, -1)] = math.sqrt(n * omega_m)
    return cal_a, cal_a.conj().T


def f_weights(r_tilde: float, omega_pair: tuple[float, float]) -> tuple[float, float]:
    """Branch weights F_pm(r) = exp(r^2/omega_pm) / (exp(r^2/omega_+) + exp(r^2/omega_-)).

    F_+ + F_- = 1 identically.
    """
    omega_p, omega_m = omega_pair
    ep = math.exp(r_tilde**2 / omega_p)
    em = math.exp(r_tilde**2 / omega_m)
    return ep / (ep + em), em / (ep + em)


@dataclass(frozen=True)
class ExpectationRow:
    observable: str
    closed_form: complex
    numeric: complex

    @property
    def abs_diff(self) -> float:
        return abs(self.closed_form - self.numeric)


def qvcs_expectations(q: Quaternion, spin: int, omega: float, n_max: int) -> list[ExpectationRow]:
    """Closed-form vs numeric expectations of A, A^dag, Q, P, N in the energy family.

    Closed forms: <A> = (r/2)(cos eta +/- i sin eta cos phi), <A^dag> its
    conjugate, <Q> = (r/sqrt 2) cos eta, <P> = +/- (r/sqrt 2) sin eta cos phi,
    <N> = r^2/2.  The numeric side evaluates the same operators on the
    constructed truncated state.
    """
    state = energy_qvcs(q, spin, omega, n_max)
    a_op, a_dag, n_op = generalized_ladder_spinor(omega, n_max)
    q_op, p_op = quadrature_pair(a_op)
    s = 1.0 if spin == +1 else -1.0
    r, eta, phi = q.r, q.eta, q.phi
    closed_a = 0.5 * r * (math.cos(eta) + 1j * s * math.sin(eta) * math.cos(phi))
    rows = [
        ExpectationRow("A", closed_a, expect(a_op, state)),
        ExpectationRow("A_dag", closed_a.conjugate(), expect(a_dag, state)),
        ExpectationRow("Q", r / math.sqrt(2.0) * math.cos(eta), expect(q_op, state)),
        ExpectationRow("P", s * r / math.sqrt(2.0) * math.sin(eta) * math.cos(phi), expect(p_op, state)),
        ExpectationRow("N", 0.5 * r * r, expect(n_op, state)),
    ]
    return rows


@dataclass(frozen=True)
class UncertaintyRecord:
    dispersion_q: float
    dispersion_p: float
    bound: float
    slack: float

    @property
    def product(self) -> float:
        return self.dispersion_q * self.dispersion_p

    @property
    def satisfied(self) -> bool:
        return self.slack >= -1e-12


def uncertainty_product(q: Quaternion, spin: int, omega: float, n_max: int) -> UncertaintyRecord:
    """Dispersion product (dQ)^2 (dP)^2 against its series lower bound.

    The bound is (1/4) (N^{-1} sum_n (x_{n+1} - x_n)/x_n! * r^{2n})^2 with
    x_n = n*omega, which telescopes to (omega/2)^2 / 4 = omega^2/16; the
    series is still summed (compensated) as written.  Dispersions come
    from numeric expectations on the truncated state.
    """
    state = energy_qvcs(q, spin, omega, n_max)
    a_op, _, _ = generalized_ladder_spinor(omega, n_max)
    q_op, p_op = quadrature_pair(a_op)
    var_q = (expect(q_op @ q_op, state) - expect(q_op, state) ** 2).real
    var_p = (expect(p_op @ p_op, state) - expect(p_op, state) ** 2).real
    log_norm = math.log(2.0) + q.r**2 / omega
    terms = []
    for n in range(n_max + 1):
        log_term = (
            2 * n * math.log(q.r) if q.r > 0.0 else (0.0 if n == 0 else -math.inf)
        )
        log_rho = math.lgamma(n + 1) + n * math.log(omega)
        terms.append(omega * math.exp(log_term - log_rho - log_norm))
    series = math.fsum(terms)
    bound = 0.25 * series * series
    return UncertaintyRecord(
        dispersion_q=var_q,
        dispersion_p=var_p,
        bound=bound,
        slack=var_q * var_p - bound,
    )


def qqvcs_expectations(
    big_q: QuaternionQ, spin: int, omega_pair: tuple[float, float], n_max: int
) -> list[ExpectationRow]:
    """Closed-form table for the quaternion-label family vs numeric values.

    The closed forms hold exactly when the quaternion commutes with the
    branch-weight matrix (polar angle 0 or pi, or omega_+ = omega_-);
    outside that set the rows expose the deviation rather than hide it.
    """
    omega_p, omega_m = omega_pair
    state = q_qvcs(big_q, spin, omega_pair, n_max)
    cal_a, cal_a_dag = spin_ladder(omega_pair, n_max)
    q_op, p_op = quadrature_pair(cal_a)
    n_op = cal_a_dag @ cal_a
    fp, fm = f_weights(big_q.r_tilde, omega_pair)
    f_own = fp if spin == +1 else fm
    omega_own = omega_p if spin == +1 else omega_m
    s = 1.0 if spin == +1 else -1.0
    r, th, phi = big_q.r_tilde, big_q.theta, big_q.varphi
    closed_a = r * f_own * (math.cos(th) + 1j * s * math.sin(th) * math.cos(phi))
    closed_q = r * math.sqrt(2.0) * f_own * math.cos(th)
    closed_p = s * r * math.sqrt(2.0) * f_own * math.sin(th) * math.cos(phi)
    closed_q2 = 0.5 * (4.0 * r * r * math.cos(th) ** 2 + omega_own) * f_own
    closed_p2 = 0.5 * (4.0 * r * r * math.sin(th) ** 2 + omega_own) * f_own
    num_q = expect(q_op, state)
    num_p = expect(p_op, state)
    num_q2 = expect(q_op @ q_op, state)
    num_p2 = expect(p_op @ p_op, state)
    closed_var_q = 2.0 * r * r * fp * fm * math.cos(th) ** 2 + 0.5 * omega_own * f_own
    closed_var_p = (
        2.0 * r * r * f_own * math.sin(th) ** 2 * (1.0 - f_own * math.cos(phi) ** 2)
        + 0.5 * omega_own * f_own
    )
    rows = [
        ExpectationRow("calA", closed_a, expect(cal_a, state)),
        ExpectationRow("calA_dag", closed_a.conjugate(), expect(cal_a_dag, state)),
        ExpectationRow("calQ", closed_q, num_q),
        ExpectationRow("calP", closed_p, num_p),
        ExpectationRow("calA_calA_dag", (r * r + omega_own) * f_own, expect(cal_a @ cal_a_dag, state)),
        ExpectationRow("calN", r * r * f_own, expect(n_op, state)),
        ExpectationRow("calQ_sq", closed_q2, num_q2),
        ExpectationRow("calP_sq", closed_p2, num_p2),
        ExpectationRow("var_calQ", closed_var_q, (num_q2 - num_q**2).real),
        ExpectationRow("var_calP", closed_var_p, (num_p2 - num_p**2).real),
        ExpectationRow("f_weight_sum", 1.0, fp + fm),
    ]
    return rows


def write_expectations_csv(path, rows: Iterable[dict]) -> None:
    """Expectation table rows: family, params, observable, closed_form, numeric, abs_diff."""
    fieldnames = ["family", "params", "observable", "closed_form", "numeric", "abs_diff"]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row[k] for k in fieldnames})
