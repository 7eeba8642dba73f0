"""Truncated number-state space, ladder operators, and the spinor tensor space.

The spinor space C^2 (x) H_N uses a fixed interleaved basis ordering with
spin fastest: index ``2*n + s`` holds the component on ``chi^+ (x) Phi_n``
for s = 0 and ``chi^- (x) Phi_n`` for s = 1.  Every module in the package
shares this layout; an operator acting only on the number index is the
Kronecker product ``kron(op, I2)``.

Truncation uses a hard cutoff: the raising operator annihilates the top
state ``Phi_{n_max}``, so finite-section artifacts sit in the last rows
and columns only.  Assertions elsewhere restrict to an interior block.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .quaternion import SIGMA_0

SPIN_UP = +1
SPIN_DOWN = -1


def spin_offset(spin: int) -> int:
    """0 for chi^+ (spin=+1), 1 for chi^- (spin=-1)."""
    if spin not in (SPIN_UP, SPIN_DOWN):
        raise ValueError(f"spin must be +1 or -1, got {spin!r}")
    return 0 if spin == SPIN_UP else 1


def basis_index(n: int, spin: int) -> int:
    """Flat index of chi^spin (x) Phi_n in the interleaved layout."""
    return 2 * n + spin_offset(spin)


@dataclass(frozen=True)
class FockTruncation:
    """Number-state truncation with generalized ladder weights.

    ``weights[n]`` is the sequence x_n entering a|Phi_n> = sqrt(x_n)|Phi_{n-1}>;
    it must start at x_0 = 0 and stay nonnegative.  ``weights`` covers
    n = 0 .. n_max + 1 so the raising amplitude at the cutoff is recorded
    even though the hard truncation zeroes that row.
    """

    n_max: int
    weights: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.n_max + 2,):
            raise ValueError(f"weights must have length n_max + 2 = {self.n_max + 2}, got {w.shape}")
        if w[0] != 0.0:
            raise ValueError("weight x_0 must be 0")
        if np.any(w < 0.0):
            raise ValueError("weights must be nonnegative")
        object.__setattr__(self, "weights", w)

    @classmethod
    def standard(cls, n_max: int) -> "FockTruncation":
        """x_n = n (ordinary boson algebra)."""
        return cls(n_max, np.arange(n_max + 2, dtype=float))

    @classmethod
    def harmonic(cls, n_max: int, omega: float) -> "FockTruncation":
        """x_n = n * omega."""
        if omega <= 0.0:
            raise ValueError(f"omega must be > 0, got {omega}")
        return cls(n_max, omega * np.arange(n_max + 2, dtype=float))

    @property
    def dim(self) -> int:
        """Dimension of the number-state factor H_N."""
        return self.n_max + 1

    @property
    def spinor_dim(self) -> int:
        return 2 * (self.n_max + 1)

    def is_standard(self, tol: float = 0.0) -> bool:
        ref = np.arange(self.n_max + 2, dtype=float)
        return bool(np.max(np.abs(self.weights - ref)) <= tol)


def ladder(trunc: FockTruncation) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Annihilation, creation, and number operators on H_N.

    a|Phi_n> = sqrt(x_n)|Phi_{n-1}>, a^dag|Phi_n> = sqrt(x_{n+1})|Phi_{n+1}>
    with a zero row at the truncation edge, and N' = diag(x_n).  The
    returned a^dag is the exact conjugate transpose of a.
    """
    d = trunc.dim
    a = np.zeros((d, d), dtype=complex)
    root = np.sqrt(trunc.weights)
    for n in range(1, d):
        a[n - 1, n] = root[n]
    a_dag = a.conj().T.copy()
    n_op = np.diag(trunc.weights[:d]).astype(complex)
    return a, a_dag, n_op


def lift_to_spinor(op: np.ndarray) -> np.ndarray:
    """Identity-on-spin lift of a number-space operator: kron(op, I2)."""
    op = np.asarray(op)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError(f"expected a square operator, got shape {op.shape}")
    return np.kron(op, SIGMA_0)


def lift_spin(m: np.ndarray, n_levels: int) -> np.ndarray:
    """Identity-on-number lift of a 2x2 spin matrix: kron(I_F, m)."""
    m = np.asarray(m)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 spin matrix, got shape {m.shape}")
    return np.kron(np.eye(n_levels, dtype=complex), m)


def spin_fock_product(m: np.ndarray, fock_op: np.ndarray) -> np.ndarray:
    """kron over the interleaved layout of (2x2 spin matrix) x (number operator)."""
    m = np.asarray(m)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 spin matrix, got shape {m.shape}")
    return np.kron(np.asarray(fock_op), m)


def interior_mask(n_max: int, fraction: float = 0.25) -> np.ndarray:
    """Boolean mask over the spinor basis keeping levels n <= (1-fraction)*n_max.

    Finite-section contamination is confined near the cutoff; comparisons
    against closed forms exclude the top ``fraction`` of level indices.
    """
    n_keep = int(np.floor((1.0 - fraction) * n_max))
    mask = np.zeros(2 * (n_max + 1), dtype=bool)
    mask[: 2 * (n_keep + 1)] = True
    return mask


def restrict(op: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Sub-operator on the masked basis indices."""
    return op[np.ix_(mask, mask)]


@dataclass(frozen=True)
class SpinorState:
    """Coefficient vector over the interleaved basis (chi^pm (x) Phi_n).

    ``tail_bound`` records the relative series mass excluded by the
    truncation when known (coherent-state constructors fill it in).
    """

    coeffs: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 != 0 or c.size < 4:
            raise ValueError(f"coefficients must be a flat vector of even length >= 4, got shape {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @property
    def n_max(self) -> int:
        return self.coeffs.size // 2 - 1

    def block(self, n: int) -> np.ndarray:
        """Length-2 spin block (c_plus, c_minus) at level n."""
        if not 0 <= n <= self.n_max:
            raise IndexError(f"level {n} outside truncation 0..{self.n_max}")
        return self.coeffs[2 * n : 2 * n + 2]

    def norm_sq(self) -> float:
        return float(np.vdot(self.coeffs, self.coeffs).real)

    def inner(self, other: "SpinorState") -> complex:
        if other.coeffs.size != self.coeffs.size:
            raise ValueError("states live on different truncations")
        return complex(np.vdot(self.coeffs, other.coeffs))

    def to_json_dict(self) -> dict:
        """JSON-ready mapping with [re, im] coefficient pairs and basis metadata."""
        return {
            "basis": "spin_interleaved",
            "n_max": self.n_max,
            "tail_bound": self.tail_bound,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SpinorState":
        if data.get("basis") != "spin_interleaved":
            raise ValueError(f"unsupported basis tag {data.get('basis')!r}")
        pairs = data["coeffs"]
        coeffs = np.array([complex(re, im) for re, im in pairs])
        if coeffs.size != 2 * (int(data["n_max"]) + 1):
            raise ValueError("coefficient count does not match n_max")
        return cls(coeffs, tail_bound=float(data.get("tail_bound", 0.0)))


def quaternion_apply(m: np.ndarray, state: SpinorState, n: int) -> SpinorState:
    """Multiply the spin block at level n by the 2x2 matrix m, leave the rest."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not 0 <= n <= state.n_max:
        raise IndexError(f"level {n} outside truncation 0..{state.n_max}")
    coeffs = state.coeffs.copy()
    coeffs[2 * n : 2 * n + 2] = m @ coeffs[2 * n : 2 * n + 2]
    return SpinorState(coeffs, tail_bound=state.tail_bound)


def apply_blockwise(m: np.ndarray, state: SpinorState) -> SpinorState:
    """Multiply every spin block by the same 2x2 matrix m."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    blocks = state.coeffs.reshape(-1, 2)
    return SpinorState((blocks @ m.T).reshape(-1), tail_bound=state.tail_bound)


def basis_state(n: int, spin: int, n_max: int) -> SpinorState:
    """Unit vector chi^spin (x) Phi_n on the truncation."""
    if not 0 <= n <= n_max:
        raise IndexError(f"level {n} outside truncation 0..{n_max}")
    coeffs = np.zeros(2 * (n_max + 1), dtype=complex)
    coeffs[basis_index(n, spin)] = 1.0
    return SpinorState(coeffs)
