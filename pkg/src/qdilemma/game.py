"""The entanglement-parameterized quantum Prisoner's Dilemma.

Both players hold one qubit of the shared state J(gamma)|CC>, apply a local
move from the restricted two-parameter family U(theta, phi), and the referee
disentangles and measures.  gamma in [0, pi/2] tunes the game continuously
from the classical dilemma (gamma = 0) to the maximally entangled game
(gamma = pi/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import KET_CC, apply, density_from_state, probabilities

GAMMA_MAX = math.pi / 2


def validate_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.0 <= gamma <= GAMMA_MAX:
        raise ValueError(f"entanglement parameter must lie in [0, pi/2], got {gamma}")
    return gamma


@dataclass(frozen=True)
class Strategy:
    """A local move U(theta, phi) with theta in [0, pi], phi in [0, pi/2].

    The bounds are hard errors, not clamps: the equilibrium structure of the
    game is only valid on this restricted manifold.
    """

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi <= math.pi / 2:
            raise ValueError(f"phi must lie in [0, pi/2], got {self.phi}")


COOPERATE = Strategy(0.0, 0.0)
DEFECT = Strategy(math.pi, 0.0)
QUANTUM = Strategy(0.0, math.pi / 2)


@dataclass(frozen=True)
class PayoffTable:
    """Prisoner's Dilemma payoffs, ordered temptation > reward > punishment > sucker."""

    reward: float = 3.0
    sucker: float = 0.0
    temptation: float = 5.0
    punishment: float = 1.0

    def __post_init__(self):
        if not (self.temptation > self.reward > self.punishment > self.sucker):
            raise ValueError(
                "not a Prisoner's Dilemma: need temptation > reward > punishment > sucker, "
                f"got ({self.reward}, {self.sucker}, {self.temptation}, {self.punishment})"
            )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.reward, self.sucker, self.temptation, self.punishment)


DEFAULT_TABLE = PayoffTable()


@dataclass(frozen=True)
class GameOutcome:
    final_state: np.ndarray
    probabilities: tuple[float, float, float, float]
    payoff_a: float
    payoff_b: float


def strategy_unitary(s: Strategy) -> np.ndarray:
    """The 2x2 move matrix [[e^{i phi} cos(theta/2), sin(theta/2)],
    [-sin(theta/2), e^{-i phi} cos(theta/2)]]."""
    c, sn = math.cos(s.theta / 2), math.sin(s.theta / 2)
    e = complex(math.cos(s.phi), math.sin(s.phi))
    return np.array([[e * c, sn], [-sn, e.conjugate() * c]], dtype=complex)


# D x D for D = strategy_unitary(DEFECT) = i sigma_y.  Antidiagonal (1,-1,-1,1)
# reading rows top to bottom; squares to the identity, which makes the
# entangler's matrix exponential exact in closed form.
DEFECT_TENSOR = np.kron(strategy_unitary(DEFECT), strategy_unitary(DEFECT))
DEFECT_TENSOR.setflags(write=False)


def entangling_gate(gamma: float) -> np.ndarray:
    """exp(i gamma (D x D) / 2) = cos(gamma/2) I + i sin(gamma/2) (D x D).

    Applied to |CC> this yields cos(gamma/2)|CC> + i sin(gamma/2)|DD>.
    """
    gamma = validate_gamma(gamma)
    return math.cos(gamma / 2) * np.eye(4, dtype=complex) + 1j * math.sin(
        gamma / 2
    ) * DEFECT_TENSOR


def disentangling_gate(gamma: float) -> np.ndarray:
    """Conjugate transpose (= inverse) of the entangling gate."""
    return entangling_gate(gamma).conj().T


def final_state(gamma: float, sa: Strategy, sb: Strategy) -> np.ndarray:
    """Run the full unitary pipeline: disentangle((U_A x U_B) entangle |CC>)."""
    j = entangling_gate(gamma)
    moves = np.kron(strategy_unitary(sa), strategy_unitary(sb))
    return apply(j.conj().T, apply(moves, apply(j, KET_CC)))


def payoffs_from_probabilities(
    probs, table: PayoffTable = DEFAULT_TABLE
) -> tuple[float, float]:
    p_cc, p_cd, p_dc, p_dd = probs
    a = (
        table.reward * p_cc
        + table.sucker * p_cd
        + table.temptation * p_dc
        + table.punishment * p_dd
    )
    b = (
        table.reward * p_cc
        + table.temptation * p_cd
        + table.sucker * p_dc
        + table.punishment * p_dd
    )
    return (float(a), float(b))


def play(
    gamma: float,
    sa: Strategy,
    sb: Strategy,
    table: PayoffTable = DEFAULT_TABLE,
) -> GameOutcome:
    """Play one round and score both players.

    Alice's payoff weights the outcome probabilities as
    reward*P_CC + sucker*P_CD + temptation*P_DC + punishment*P_DD;
    Bob's swaps the CD/DC roles.
    """
    psi = final_state(gamma, sa, sb)
    probs = probabilities(psi)
    pa, pb = payoffs_from_probabilities(probs, table)
    return GameOutcome(final_state=psi, probabilities=probs, payoff_a=pa, payoff_b=pb)


def density_after_play(
    gamma: float, sa: Strategy, sb: Strategy
) -> np.ndarray:
    """Density matrix of the final state; the bridge to the tomography path."""
    return density_from_state(final_state(gamma, sa, sb))


def payoff_vs_defect(
    theta: float, phi: float, gamma: float, table: PayoffTable = DEFAULT_TABLE
) -> float:
    """Closed-form payoff of U(theta, phi) against an always-defecting opponent.

    With the default table this is sin^2(theta/2)
    + 5 cos^2(theta/2) sin^2(phi) sin^2(gamma); the general form keeps the
    sucker/temptation/punishment coefficients symbolic.
    """
    gamma = validate_gamma(gamma)
    s = Strategy(theta, phi)  # bounds check
    c2 = math.cos(s.theta / 2) ** 2
    s2 = math.sin(s.theta / 2) ** 2
    w = math.sin(s.phi) ** 2 * math.sin(gamma) ** 2
    return table.sucker * c2 * (1 - w) + table.temptation * c2 * w + table.punishment * s2


def payoff_vs_q(
    theta: float, phi: float, gamma: float, table: PayoffTable = DEFAULT_TABLE
) -> float:
    """Closed-form payoff of U(theta, phi) against the quantum move Q.

    With the default table this reduces to
    4 - cos(theta) + (-3 + 2 cos(theta) - cos^2(theta/2) cos(2 phi)) sin^2(gamma).
    """
    gamma = validate_gamma(gamma)
    s = Strategy(theta, phi)
    c2 = math.cos(s.theta / 2) ** 2
    s2 = math.sin(s.theta / 2) ** 2
    sg2 = math.sin(gamma) ** 2
    w = math.cos(s.phi) ** 2 * sg2
    return (
        table.reward * c2 * (1 - w)
        + table.sucker * s2 * sg2
        + table.temptation * s2 * (1 - sg2)
        + table.punishment * c2 * w
    )


def sweep_gammas(n_points: int = 19) -> list[float]:
    """The standard entanglement sweep gamma = n pi / 36 for n = 0 .. n_points-1."""
    if not 1 <= n_points <= 19:
        raise ValueError("sweep supports 1 to 19 points (gamma must stay in [0, pi/2])")
    return [n * math.pi / 36 for n in range(n_points)]
