"""Pairwise Prisoner's Dilemma primitives and the other-regarding decision rule.

Everything here is a pure function of its arguments. Agents weight the
average payoff of their neighbors with a "friendliness" rho in [0, 1]:

    U = (1 - rho) * own_payoff + rho * neighbor_avg_payoff

Best response maximizes U given the neighbors' current actions. Because
neighbors' games with third parties are unaffected by my action, they
cancel in the utility difference, so the decision depends only on how many
of my n neighbors cooperate.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

DEFECT = 0
COOPERATE = 1


class Action(enum.IntEnum):
    """The two PD actions. Serializes as 'C' / 'D'."""

    D = DEFECT
    C = COOPERATE

    def to_char(self) -> str:
        return "C" if self is Action.C else "D"

    @classmethod
    def from_char(cls, c: str) -> "Action":
        if c == "C":
            return cls.C
        if c == "D":
            return cls.D
        raise ValueError(f"unknown action code {c!r}")


class AgentClass(enum.Enum):
    """Behavioral regime implied by a friendliness value."""

    SELF_REGARDING = "self_regarding"
    CONDITIONAL_COOPERATOR = "conditional_cooperator"
    IDEALIST = "idealist"


@dataclass(frozen=True)
class PayoffMatrix:
    """The four PD payoffs: temptation, reward, punishment, sucker.

    Requires the strict PD ordering T > R > P > S and 2R > T + S.
    """

    T: float = 1.1
    R: float = 1.0
    P: float = 0.0
    S: float = -1.0

    def __post_init__(self):
        if not (self.T > self.R > self.P > self.S):
            raise ValueError(
                f"payoffs must satisfy T > R > P > S, got "
                f"T={self.T}, R={self.R}, P={self.P}, S={self.S}"
            )
        if not (2 * self.R > self.T + self.S):
            raise ValueError("payoffs must satisfy 2R > T + S")

    @property
    def lower_threshold(self) -> float:
        """Friendliness below/at which an agent always defects: (T-R)/(T-S)."""
        return (self.T - self.R) / (self.T - self.S)

    @property
    def upper_threshold(self) -> float:
        """Friendliness at/above which an agent always cooperates: (P-S)/(T-S)."""
        return (self.P - self.S) / (self.T - self.S)


DEFAULT_MATRIX = PayoffMatrix()


def check_friendliness(rho: float) -> float:
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"friendliness must lie in [0, 1], got {rho}")
    return rho


def pair_payoff(self_action: Action, other_action: Action, m: PayoffMatrix = DEFAULT_MATRIX) -> float:
    """Payoff to `self_action` in a single 2-person game."""
    if self_action == COOPERATE:
        return m.R if other_action == COOPERATE else m.S
    return m.T if other_action == COOPERATE else m.P


def round_payoff(self_action: Action, neighbor_actions, m: PayoffMatrix = DEFAULT_MATRIX) -> float:
    """Sum of pairwise payoffs against every neighbor; 0 for an isolated agent."""
    return float(sum(pair_payoff(self_action, a, m) for a in neighbor_actions))


def utility(own_payoff: float, neighbor_avg_payoff: float, rho: float) -> float:
    """Other-regarding utility: (1 - rho) * own + rho * neighbor average."""
    check_friendliness(rho)
    return (1.0 - rho) * own_payoff + rho * neighbor_avg_payoff


def decision_margin(m, n, rho, mat: PayoffMatrix = DEFAULT_MATRIX):
    """Utility gain of cooperating over defecting, given m of n neighbors cooperate.

    Works elementwise on numpy arrays. Each pairwise game contributes
    (1 - rho) * own_payoff + rho * partner_payoff to the decision, so the
    margin is the sum over the n games:

        (1 - rho) * [m(R-T) + (n-m)(S-P)] + rho * [m(R-S) + (n-m)(T-P)]

    (each cooperating neighbor gains R - S if I cooperate, each defecting
    neighbor gains T - P). With this weighting the always-defect and
    always-cooperate thresholds (T-R)/(T-S) and (P-S)/(T-S) hold for every
    neighborhood size. Entries with n = 0 get margin 0.
    """
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    rho = np.asarray(rho, dtype=float)
    own = m * (mat.R - mat.T) + (n - m) * (mat.S - mat.P)
    others = m * (mat.R - mat.S) + (n - m) * (mat.T - mat.P)
    margin = (1.0 - rho) * own + rho * others
    return np.where(n > 0, margin, 0.0)


def best_response(m: int, n: int, rho: float, mat: PayoffMatrix = DEFAULT_MATRIX) -> Action:
    """Utility-maximizing action when m of n neighbors cooperate.

    Ties (zero margin) resolve to defection. Requires n >= 1: with no
    neighbors there is no game and no decision to make.
    """
    if n < 1:
        raise ValueError("best_response requires at least one neighbor")
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    check_friendliness(rho)
    margin = float(decision_margin(m, n, rho, mat))
    return Action.C if margin > 0 else Action.D


def classify(rho: float, mat: PayoffMatrix = DEFAULT_MATRIX) -> AgentClass:
    """Behavioral regime of a friendliness value.

    At or below (T-R)/(T-S) the agent always defects; at or above
    (P-S)/(T-S) it cooperates unconditionally; in between it copies a
    sufficiently cooperative neighborhood. Boundary values go to the outer
    classes, consistent with the defect tie-break.
    """
    check_friendliness(rho)
    if rho <= mat.lower_threshold:
        return AgentClass.SELF_REGARDING
    if rho >= mat.upper_threshold:
        return AgentClass.IDEALIST
    return AgentClass.CONDITIONAL_COOPERATOR
