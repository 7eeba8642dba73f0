"""Quaternions in the 2x2 complex-matrix representation, polar form.

A quaternion with modulus r and angles (eta, phi, psi) is realized as
``r * (cos(eta) * I2 + 1j * sin(eta) * sigma_n(phi, psi))`` where
``sigma_n`` is the Hermitian unit-axis matrix squaring to the identity.
Powers are evaluated in closed form (``r**n`` times a rotation by
``n*eta``), so high-order terms of coherent-state series carry no
accumulated matrix-product error.

All values are immutable; every operation is a pure function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)   # maps chi- to chi+
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)  # maps chi+ to chi-


def _check_angle(name: str, value: float, low: float, high: float, closed: bool) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if closed:
        ok = low <= value <= high
    else:
        ok = low <= value < high
    if not ok:
        bracket = "]" if closed else ")"
        raise ValueError(f"{name}={value} outside [{low}, {high}{bracket}")
    return value


def sigma_n(phi: float, psi: float) -> np.ndarray:
    """Hermitian unit-axis matrix for polar angle phi and azimuth psi.

    Returns ``[[cos(phi), e^{i psi} sin(phi)], [e^{-i psi} sin(phi), -cos(phi)]]``,
    which squares to the identity.  Raises ValueError for angles outside
    phi in [0, pi], psi in [0, 2*pi).
    """
    phi = _check_angle("phi", phi, 0.0, math.pi, closed=True)
    psi = _check_angle("psi", psi, 0.0, TWO_PI, closed=False)
    s, c = math.sin(phi), math.cos(phi)
    e = complex(math.cos(psi), math.sin(psi))
    return np.array([[c, e * s], [e.conjugate() * s, -c]], dtype=complex)


@dataclass(frozen=True)
class Quaternion:
    """Polar-form quaternion: modulus r, phase eta, axis angles (phi, psi).

    The matrix form is ``r * exp(1j * eta * sigma_n(phi, psi))``.  Angles
    must already lie in their canonical ranges (eta, psi in [0, 2*pi),
    phi in [0, pi]); out-of-range input is rejected rather than wrapped.
    """

    r: float
    eta: float
    phi: float
    psi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.r) and self.r >= 0.0):
            raise ValueError(f"modulus r must be >= 0, got {self.r!r}")
        _check_angle("eta", self.eta, 0.0, TWO_PI, closed=False)
        _check_angle("phi", self.phi, 0.0, math.pi, closed=True)
        _check_angle("psi", self.psi, 0.0, TWO_PI, closed=False)

    @property
    def axis(self) -> np.ndarray:
        return sigma_n(self.phi, self.psi)

    def unit_power(self, n: int) -> np.ndarray:
        """Rotation part of the n-th power: cos(n*eta)*I + i*sin(n*eta)*sigma_n.

        Excludes the ``r**n`` scale so callers can fold the modulus into
        log-domain amplitudes of long series without overflow.
        """
        if n < 0:
            raise ValueError("power exponent must be >= 0")
        ang = n * self.eta
        return math.cos(ang) * SIGMA_0 + 1j * math.sin(ang) * self.axis

    def matrix(self) -> np.ndarray:
        """2x2 complex matrix r*(cos(eta)*I + i*sin(eta)*sigma_n)."""
        return self.r * self.unit_power(1)

    def power(self, n: int) -> np.ndarray:
        """Closed-form n-th matrix power, n >= 0 (n = 0 gives the identity)."""
        return self.r**n * self.unit_power(n)

    def dagger(self) -> np.ndarray:
        """Conjugate transpose of the matrix form, r*(cos(eta)*I - i*sin(eta)*sigma_n)."""
        return self.matrix().conj().T

    @classmethod
    def from_cartesian(cls, x0: float, x1: float, x2: float, x3: float) -> "Quaternion":
        """Build from components of x0*I + i*(x1, x2, x3).(sigma1, -sigma2, sigma3)."""
        r = math.sqrt(x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3)
        if r == 0.0:
            return cls(0.0, 0.0, 0.0, 0.0)
        eta = math.atan2(math.sqrt(x1 * x1 + x2 * x2 + x3 * x3), x0) % TWO_PI
        s = r * math.sin(eta)
        if s == 0.0:
            return cls(r, eta, 0.0, 0.0)
        phi = math.acos(min(1.0, max(-1.0, x3 / s)))
        psi = math.atan2(x2, x1) % TWO_PI
        return cls(r, eta, phi, psi)

    def cartesian(self) -> tuple[float, float, float, float]:
        """Components (x0, x1, x2, x3) of the polar parameterization."""
        se = math.sin(self.eta)
        sf = math.sin(self.phi)
        return (
            self.r * math.cos(self.eta),
            self.r * se * sf * math.cos(self.psi),
            self.r * se * sf * math.sin(self.psi),
            self.r * se * math.cos(self.phi),
        )


@dataclass(frozen=True)
class QuaternionQ:
    """Quaternion label used by the diagonal-VCS construction.

    Same algebra as :class:`Quaternion` with parameters (r_tilde, theta,
    varphi, varrho); equals ``su2_conjugated(...)`` of diag(z, conj(z)) for
    z = r_tilde*exp(1j*theta) when both SU(2) phase angles equal varrho.
    """

    r_tilde: float
    theta: float
    varphi: float
    varrho: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.r_tilde) and self.r_tilde >= 0.0):
            raise ValueError(f"modulus r_tilde must be >= 0, got {self.r_tilde!r}")
        _check_angle("theta", self.theta, 0.0, TWO_PI, closed=False)
        _check_angle("varphi", self.varphi, 0.0, math.pi, closed=True)
        _check_angle("varrho", self.varrho, 0.0, TWO_PI, closed=False)

    @property
    def axis(self) -> np.ndarray:
        return sigma_n(self.varphi, self.varrho)

    def unit_power(self, n: int) -> np.ndarray:
        if n < 0:
            raise ValueError("power exponent must be >= 0")
        ang = n * self.theta
        return math.cos(ang) * SIGMA_0 + 1j * math.sin(ang) * self.axis

    def matrix(self) -> np.ndarray:
        return self.r_tilde * self.unit_power(1)

    def power(self, n: int) -> np.ndarray:
        return self.r_tilde**n * self.unit_power(n)

    def dagger(self) -> np.ndarray:
        return self.matrix().conj().T


def su2_phase(angle: float) -> np.ndarray:
    """Diagonal SU(2) factor diag(e^{i angle/2}, e^{-i angle/2})."""
    h = 0.5 * angle
    return np.diag([complex(math.cos(h), math.sin(h)), complex(math.cos(h), -math.sin(h))])


def su2_polar_rotation(angle: float) -> np.ndarray:
    """Real SU(2) rotation [[cos(a/2), -sin(a/2)], [sin(a/2), cos(a/2)]].

    This is the middle factor for which the sandwich below reproduces the
    axis matrix with azimuth equal to the outer phase angle.
    """
    c, s = math.cos(0.5 * angle), math.sin(0.5 * angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


def su2_conjugated(z: complex, phi1: float, varphi: float, phi2: float) -> np.ndarray:
    """U diag(z, conj(z)) U^dag for U = su2_phase(phi1) @ su2_polar_rotation(varphi) @ su2_phase(phi2).

    For phi1 == phi2 == varrho this equals QuaternionQ(|z|, arg z, varphi,
    varrho).matrix().
    """
    u = su2_phase(phi1) @ su2_polar_rotation(varphi) @ su2_phase(phi2)
    return u @ np.diag([z, np.conjugate(z)]) @ u.conj().T
