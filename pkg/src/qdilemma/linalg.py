"""Two-qubit complex linear algebra: states, unitaries, densities, fidelities.

Basis ordering is fixed everywhere as (CC, CD, DC, DD) with Alice's qubit
the left (most significant) tensor factor.  C maps to |0> and D to |1>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    """Global numeric policy for exact-arithmetic identities.

    atol covers unitarity, normalization, Hermiticity and trace checks;
    eigenvalue_floor is the slack allowed below zero for density matrices.
    """

    atol: float = 1e-12
    eigenvalue_floor: float = 1e-10


TOL = Tolerances()

BASIS_LABELS = ("CC", "CD", "DC", "DD")

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

KET_CC = np.array([1, 0, 0, 0], dtype=complex)
KET_CD = np.array([0, 1, 0, 0], dtype=complex)
KET_DC = np.array([0, 0, 1, 0], dtype=complex)
KET_DD = np.array([0, 0, 0, 1], dtype=complex)

for _m in (I2, SIGMA_X, SIGMA_Y, SIGMA_Z, KET_CC, KET_CD, KET_DC, KET_DD):
    _m.setflags(write=False)


def _as_complex(a, shape, name: str) -> np.ndarray:
    arr = np.asarray(a, dtype=complex)
    if arr.shape != shape:
        raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def is_unitary(u: np.ndarray, atol: float = TOL.atol) -> bool:
    u = np.asarray(u, dtype=complex)
    return bool(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) <= atol)


def unitary2(entries) -> np.ndarray:
    """Validate and freeze a 2x2 unitary (U Udag = I within tolerance)."""
    u = _as_complex(entries, (2, 2), "unitary2")
    if not is_unitary(u):
        raise ValueError("matrix is not unitary within tolerance")
    u.setflags(write=False)
    return u


def unitary4(entries) -> np.ndarray:
    """Validate and freeze a 4x4 unitary."""
    u = _as_complex(entries, (4, 4), "unitary4")
    if not is_unitary(u):
        raise ValueError("matrix is not unitary within tolerance")
    u.setflags(write=False)
    return u


def state_vector(amplitudes) -> np.ndarray:
    """Validate and freeze a normalized two-qubit state in the CC,CD,DC,DD basis.

    Rejects (rather than renormalizes) unnormalized input: silent
    renormalization would mask compiler and simulator bugs upstream.
    """
    s = _as_complex(amplitudes, (4,), "state_vector")
    if abs(np.vdot(s, s).real - 1.0) > TOL.atol:
        raise ValueError("state vector is not normalized within tolerance")
    s.setflags(write=False)
    return s


def density_matrix(entries) -> np.ndarray:
    """Validate and freeze a 4x4 density matrix (Hermitian, trace 1, PSD)."""
    rho = _as_complex(entries, (4, 4), "density_matrix")
    if np.max(np.abs(rho - rho.conj().T)) > TOL.atol:
        raise ValueError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(rho).real - 1.0) > TOL.atol:
        raise ValueError("density matrix trace differs from 1")
    if np.linalg.eigvalsh(rho).min() < -TOL.eigenvalue_floor:
        raise ValueError("density matrix has a negative eigenvalue beyond tolerance")
    rho.setflags(write=False)
    return rho


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the first factor acting on Alice's qubit."""
    a = _as_complex(a, (2, 2), "tensor first factor")
    b = _as_complex(b, (2, 2), "tensor second factor")
    if not (is_unitary(a) and is_unitary(b)):
        raise ValueError("tensor factors must be unitary")
    return np.kron(a, b)


def apply(u: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Apply a 4x4 unitary to a two-qubit state vector."""
    u = _as_complex(u, (4, 4), "apply unitary")
    s = _as_complex(s, (4,), "apply state")
    return u @ s


def probabilities(s: np.ndarray) -> tuple[float, float, float, float]:
    """Outcome probabilities (P_CC, P_CD, P_DC, P_DD) of a normalized state."""
    s = _as_complex(s, (4,), "probabilities state")
    p = np.abs(s) ** 2
    return (float(p[0]), float(p[1]), float(p[2]), float(p[3]))


def density_from_state(s: np.ndarray) -> np.ndarray:
    """Outer product |s><s| of a pure state."""
    s = _as_complex(s, (4,), "density_from_state state")
    return np.outer(s, s.conj())


def fidelity_up_to_phase(a: np.ndarray, b: np.ndarray) -> float:
    """|tr(a^dag b)| / 4: equals 1 iff a and b agree up to a global phase."""
    a = _as_complex(a, (4, 4), "fidelity first unitary")
    b = _as_complex(b, (4, 4), "fidelity second unitary")
    return float(abs(np.trace(a.conj().T @ b)) / 4.0)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the trace norm of (a - b) for Hermitian matrices."""
    diff = np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))
