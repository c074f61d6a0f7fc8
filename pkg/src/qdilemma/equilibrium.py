"""Nash equilibria, entanglement thresholds and payoff landscapes.

Equilibrium search is an exhaustive scan over a discretized strategy grid:
the equilibria of interest sit at corners of the strategy manifold, so grid
search doubles as an oracle for the closed-form threshold expressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .game import (
    DEFAULT_TABLE,
    COOPERATE,
    DEFECT,
    QUANTUM,
    PayoffTable,
    Strategy,
    validate_gamma,
)

REGIME_CLASSICAL = "classical"
REGIME_INTERMEDIATE = "intermediate"
REGIME_QUANTUM = "quantum"

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class StrategyGrid:
    """Uniform inclusive grid over theta in [0, pi] and phi in [0, pi/2].

    Endpoints are always included, so the named moves COOPERATE, DEFECT and
    QUANTUM are exact grid points.  The theta = pi row is degenerate (the
    move matrix there is independent of phi), so it is enumerated once.
    """

    theta_steps: int = 61
    phi_steps: int = 31

    def __post_init__(self):
        if self.theta_steps < 2 or self.phi_steps < 2:
            raise ValueError("grid needs at least 2 steps per axis")

    def angles(self) -> tuple[np.ndarray, np.ndarray]:
        """(theta, phi) coordinate arrays of the deduplicated grid, lex ordered."""
        thetas = np.linspace(0.0, math.pi, self.theta_steps)
        phis = np.linspace(0.0, math.pi / 2, self.phi_steps)
        tt, pp = np.meshgrid(thetas, phis, indexing="ij")
        tt, pp = tt.ravel(), pp.ravel()
        keep = (tt != math.pi) | (pp == 0.0)
        return tt[keep], pp[keep]

    def strategies(self) -> list[Strategy]:
        tt, pp = self.angles()
        return [Strategy(float(t), float(p)) for t, p in zip(tt, pp)]


DEFAULT_GRID = StrategyGrid()


def strategy_from_t(t: float) -> Strategy:
    """Map t in [-1, 1] onto the strategy manifold: t >= 0 walks theta from
    cooperation (t=0) to defection (t=1); t < 0 walks phi to the quantum
    move (t=-1)."""
    t = float(t)
    if not -1.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [-1, 1], got {t}")
    if t >= 0.0:
        return Strategy(t * math.pi, 0.0)
    return Strategy(0.0, -t * math.pi / 2)


@dataclass(frozen=True)
class ThresholdPair:
    gamma_th1: float
    gamma_th2: float


@dataclass(frozen=True)
class EquilibriumReport:
    gamma: float
    equilibria: tuple[tuple[Strategy, Strategy, float, float], ...]
    regime: str


def _move_kets(thetas: np.ndarray, phis: np.ndarray):
    """Column kets of each move: U|0> = (e^{i phi} cos, -sin),
    U|1> = (sin, e^{-i phi} cos)."""
    half = np.asarray(thetas, dtype=float) / 2
    cos_h, sin_h = np.cos(half), np.sin(half)
    phase = np.exp(1j * np.asarray(phis, dtype=float))
    return (phase * cos_h, -sin_h + 0j), (sin_h + 0j, phase.conj() * cos_h)


def pairwise_payoff_matrix(
    gamma: float,
    thetas: np.ndarray,
    phis: np.ndarray,
    table: PayoffTable = DEFAULT_TABLE,
    chunk: int = 256,
    opp_thetas: np.ndarray | None = None,
    opp_phis: np.ndarray | None = None,
) -> np.ndarray:
    """Alice's payoff for every ordered strategy pair, P[i, j] = payoff(i vs j).

    Vectorized form of the play() pipeline: the shared state is
    cos(g/2)|CC> + i sin(g/2)|DD>, each player's move contributes its two
    column kets, and the disentangler mixes amplitudes pairwise.  Rows index
    Alice's strategies, columns the opponent's (defaulting to the same set,
    in which case Bob's payoff for pair (i, j) is P[j, i] by symmetry).
    """
    gamma = validate_gamma(gamma)
    (a0, a1), (b0, b1) = _move_kets(thetas, phis)
    if opp_thetas is None:
        (o_a0, o_a1), (o_b0, o_b1) = (a0, a1), (b0, b1)
    else:
        (o_a0, o_a1), (o_b0, o_b1) = _move_kets(opp_thetas, opp_phis)

    c, s = math.cos(gamma / 2), math.sin(gamma / 2)
    r, su, te, pu = table.as_tuple()
    n = a0.size
    out = np.empty((n, o_a0.size), dtype=float)
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        p00 = c * np.outer(a0[lo:hi], o_a0) + 1j * s * np.outer(b0[lo:hi], o_b0)
        p01 = c * np.outer(a0[lo:hi], o_a1) + 1j * s * np.outer(b0[lo:hi], o_b1)
        p10 = c * np.outer(a1[lo:hi], o_a0) + 1j * s * np.outer(b1[lo:hi], o_b0)
        p11 = c * np.outer(a1[lo:hi], o_a1) + 1j * s * np.outer(b1[lo:hi], o_b1)
        f00 = c * p00 - 1j * s * p11
        f01 = c * p01 + 1j * s * p10
        f10 = c * p10 + 1j * s * p01
        f11 = c * p11 - 1j * s * p00
        out[lo:hi] = (
            r * np.abs(f00) ** 2
            + su * np.abs(f01) ** 2
            + te * np.abs(f10) ** 2
            + pu * np.abs(f11) ** 2
        )
    return out


def best_response(
    gamma: float,
    opponent: Strategy,
    grid: StrategyGrid = DEFAULT_GRID,
    table: PayoffTable = DEFAULT_TABLE,
) -> tuple[Strategy, float]:
    """Grid point maximizing Alice's payoff against a fixed opponent.

    Exact ties break toward the lexicographically smallest (theta, phi).
    """
    tt, pp = grid.angles()
    payoff = pairwise_payoff_matrix(
        gamma, tt, pp, table,
        opp_thetas=np.array([opponent.theta]), opp_phis=np.array([opponent.phi]),
    )[:, 0]
    idx = int(np.argmax(payoff))  # first occurrence = lex smallest on this grid
    return Strategy(float(tt[idx]), float(pp[idx])), float(payoff[idx])


def thresholds(table: PayoffTable = DEFAULT_TABLE) -> ThresholdPair:
    """Entanglement values where the equilibrium structure changes.

    Defection stops being a best reply to itself once
    sin^2(gamma) > (punishment - sucker) / (temptation - sucker), and the
    quantum move becomes a best reply to itself once
    sin^2(gamma) >= (temptation - reward) / (temptation - sucker).  For the
    default table these are arcsin(sqrt(1/5)) and arcsin(sqrt(2/5)); both
    expressions are pinned by a brute-force regime scan in the test suite.
    """
    r, s, t, p = table.as_tuple()
    if p >= t:
        raise ValueError("punishment must be smaller than temptation")
    if r >= t:
        raise ValueError("reward must be smaller than temptation")
    x1 = (p - s) / (t - s)
    x2 = (t - r) / (t - s)
    if x1 > x2:
        raise ValueError(
            "payoff table has no two-threshold structure: defection survives past "
            "the point where the quantum move becomes self-supporting "
            f"((punishment - sucker) = {p - s} > (temptation - reward) = {t - r})"
        )
    return ThresholdPair(math.asin(math.sqrt(x1)), math.asin(math.sqrt(x2)))


def classify_regime(gamma: float, table: PayoffTable = DEFAULT_TABLE) -> str:
    """Classical below the first threshold, quantum from the second up.

    Boundary values belong to the regime whose equilibrium set has already
    switched: gamma_th1 counts as intermediate, gamma_th2 as quantum.
    """
    gamma = validate_gamma(gamma)
    th = thresholds(table)
    if gamma >= th.gamma_th2:
        return REGIME_QUANTUM
    if gamma >= th.gamma_th1:
        return REGIME_INTERMEDIATE
    return REGIME_CLASSICAL


def find_nash_grid(
    gamma: float,
    grid: StrategyGrid = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
    table: PayoffTable = DEFAULT_TABLE,
) -> EquilibriumReport:
    """All grid pairs where neither player gains more than tol by deviating.

    An empty equilibria tuple is a valid result.  Degenerate coexistence at
    exact threshold boundaries is reported, not suppressed.  The report is
    assembled in lexicographic pair order regardless of evaluation order.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    tt, pp = grid.angles()
    payoff = pairwise_payoff_matrix(gamma, tt, pp, table)
    best = payoff.max(axis=0)
    alice_ok = payoff >= best[np.newaxis, :] - tol
    nash = alice_ok & alice_ok.T
    pairs = np.argwhere(nash)
    equilibria = tuple(
        (
            Strategy(float(tt[i]), float(pp[i])),
            Strategy(float(tt[j]), float(pp[j])),
            float(payoff[i, j]),
            float(payoff[j, i]),
        )
        for i, j in pairs
    )
    return EquilibriumReport(
        gamma=float(gamma), equilibria=equilibria, regime=classify_regime(gamma, table)
    )


def nash_payoff_curve(
    table: PayoffTable = DEFAULT_TABLE, gammas=None
) -> list[tuple[float, str, float]]:
    """Alice's equilibrium payoff per gamma: (gamma, equilibrium label, payoff).

    Classical regime emits the mutual-defection row; the intermediate regime
    emits both asymmetric branches (defector's and quantum player's payoff);
    the quantum regime emits the mutual-quantum row.
    """
    if gammas is None:
        gammas = [n * math.pi / 36 for n in range(19)]
    th = thresholds(table)
    r, s, t, p = table.as_tuple()
    rows: list[tuple[float, str, float]] = []
    for gamma in gammas:
        gamma = validate_gamma(gamma)
        sg2 = math.sin(gamma) ** 2
        if gamma >= th.gamma_th2:
            rows.append((gamma, "QQ", float(r)))
        elif gamma >= th.gamma_th1:
            rows.append((gamma, "DQ", t * (1 - sg2) + s * sg2))
            rows.append((gamma, "QD", s * (1 - sg2) + t * sg2))
        else:
            rows.append((gamma, "DD", float(p)))
    return rows


def landscape(
    gamma: float, steps: int, table: PayoffTable = DEFAULT_TABLE
) -> tuple[np.ndarray, np.ndarray]:
    """Alice's payoff over the t-parametrized strategy square.

    Returns (t values, payoff matrix) with payoff[i, j] for Alice playing
    strategy_from_t(t[i]) against strategy_from_t(t[j]).  Corners:
    (0,0) mutual cooperation, (1,1) mutual defection, (-1,-1) mutual quantum.
    """
    if steps < 2:
        raise ValueError("steps must be at least 2")
    ts = np.linspace(-1.0, 1.0, steps)
    moves = [strategy_from_t(t) for t in ts]
    thetas = np.array([m.theta for m in moves])
    phis = np.array([m.phi for m in moves])
    return ts, pairwise_payoff_matrix(gamma, thetas, phis, table)
