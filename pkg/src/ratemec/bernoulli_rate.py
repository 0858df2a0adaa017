"""Closed-form solver for the rate-constrained Bernoulli coupling problem.

Setting: X ~ Bern(q_X) must be coupled to Y ~ Bern(q_Y) through a mixture
p_U over the four deterministic binary maps

    f1(x) = x        (identity)
    f2(x) = 1 - x    (flip)
    f3(x) = 0        (constant 0)
    f4(x) = 1        (constant 1)

subject to the rate budget H_b(q_X) * (p1 + p2) <= R and the marginal
match q_X p1 + (1 - q_X) p2 + p4 = q_Y.  The goal is to maximize I(X;Y).

The objective depends on the mixture only through d = p1 - p2:

    I(d) = H_b(q_Y) - (1 - q_X) H_b(q_Y - q_X d) - q_X H_b(q_Y + (1 - q_X) d)

which is convex in d with minimum 0 at d = 0, so the optimum sits at an
extreme value of d.  Two extremes compete:

- aligned family (p2 = 0):  d = +min(R / H_b(q_X), q_Y / q_X, (1 - q_Y) / (1 - q_X))
- mirrored family (p1 = 0): d = -min(R / H_b(q_X), q_Y / (1 - q_X), (1 - q_Y) / q_X)

``solve_mecbr`` evaluates both and keeps the larger value.  At small
rates with interior marginals the mirrored family can win (the third
derivative of the conditional entropy in d is positive there), so
evaluating only the aligned family would under-report the optimum; the
brute-force vertex oracle in :mod:`ratemec.generic_oracle` confirms the
two-candidate maximum is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .prob_core import PROB_TOL, BitsValue, JointPmf, binary_entropy

#: The four deterministic binary maps, one row per map, columns indexed by
#: the input x: identity, flip, constant 0, constant 1.
BINARY_MAPS = np.array([[0, 1], [1, 0], [0, 0], [1, 1]], dtype=np.int8)
BINARY_MAPS.flags.writeable = False

#: Case labels reported by the rate solver. "Degenerate" is reserved for a
#: zero-entropy source; domain validation rejects q_X in {0, 1} before that
#: branch can be reached, so current callers never see it.
CASE_RATE_BOUND = "RateBound"
CASE_MARGINAL_BOUND = "MarginalBound"
CASE_DEGENERATE = "Degenerate"


def _check_marginal(q: float, name: str, extend: bool) -> None:
    if not math.isfinite(q):
        raise DomainError(f"{name} must be finite, got {q!r}")
    if q <= 0.0 or q >= 1.0:
        raise DomainError(
            f"{name}={q!r} outside (0, 1); degenerate marginals carry no information"
        )
    if q > 0.5 and not extend:
        raise DomainError(
            f"{name}={q!r} is above 1/2; construct the problem with extend=True "
            "to solve the reflected instance via H_b(q) = H_b(1 - q)"
        )


@dataclass(frozen=True)
class RateProblem:
    """Rate-constrained coupling instance.

    Marginals live in (0, 1/2] by default.  With ``extend=True`` they may
    lie anywhere in (0, 1); the solver then relabels symbols (reflects the
    offending alphabet) and records the relabeling in the result.
    """

    q_x: float
    q_y: float
    rate: float
    extend: bool = False

    def __post_init__(self) -> None:
        _check_marginal(self.q_x, "q_x", self.extend)
        _check_marginal(self.q_y, "q_y", self.extend)
        if not math.isfinite(self.rate) or self.rate < 0.0:
            raise DomainError(f"rate must be finite and >= 0, got {self.rate!r}")


@dataclass(frozen=True)
class MapMixture:
    """Distribution over the four deterministic binary maps.

    Components within ``PROB_TOL`` below zero are clamped to 0 and the
    mixture renormalized (case-boundary arithmetic produces -1e-17 style
    values); anything worse is rejected.
    """

    p1: float
    p2: float
    p3: float
    p4: float

    def __post_init__(self) -> None:
        raw = []
        for i, v in enumerate((self.p1, self.p2, self.p3, self.p4)):
            v = float(v)
            if not math.isfinite(v):
                raise DomainError(f"mixture component p{i + 1} is not finite: {v!r}")
            if v < -PROB_TOL:
                raise DomainError(
                    f"mixture component p{i + 1}={v!r} negative beyond tolerance {PROB_TOL}"
                )
            raw.append(v)
        raw_total = sum(raw)
        if abs(raw_total - 1.0) > PROB_TOL:
            raise DomainError(
                f"mixture components sum to {raw_total!r}, off from 1 beyond {PROB_TOL}"
            )
        cleaned = [max(v, 0.0) for v in raw]
        total = sum(cleaned)
        for name, v in zip(("p1", "p2", "p3", "p4"), cleaned):
            object.__setattr__(self, name, v / total)

    def as_array(self) -> np.ndarray:
        return np.array([self.p1, self.p2, self.p3, self.p4], dtype=float)

    def induced_qy(self, q_x: float) -> float:
        """P(Y = 1) when X ~ Bern(q_x) passes through this mixture."""
        return q_x * self.p1 + (1.0 - q_x) * self.p2 + self.p4

    def induced_joint(self, q_x: float) -> JointPmf:
        """The 2x2 joint of (X, Y) induced by the mixture."""
        y1_given_x0 = self.p2 + self.p4
        y1_given_x1 = self.p1 + self.p4
        table = np.array(
            [
                [(1.0 - q_x) * (1.0 - y1_given_x0), (1.0 - q_x) * y1_given_x0],
                [q_x * (1.0 - y1_given_x1), q_x * y1_given_x1],
            ]
        )
        return JointPmf(table)

    def marginal_residual(self, q_x: float, q_y: float) -> float:
        return self.induced_qy(q_x) - q_y


@dataclass(frozen=True)
class SolverResult:
    """Optimal value (bits), optimizing mixture, and branch bookkeeping.

    ``alpha`` is the winning coupling step |p1 - p2|.  ``reflected``
    records which alphabets were relabeled for an extended-domain solve
    (None, "x", "y", or "xy").  ``weights`` is populated by the vertex
    oracle when the decision variable has more than four components.
    """

    value: BitsValue
    mixture: MapMixture | None
    case_label: str
    alpha: float | None = None
    reflected: str | None = None
    weights: np.ndarray | None = None


def _objective_value(q_x: float, q_y: float, d: float) -> float:
    """I(X;Y) in bits for a mixture with p1 - p2 = d and matched marginal."""
    if d == 0.0:
        return 0.0
    lo = q_y - q_x * d
    hi = q_y + (1.0 - q_x) * d
    return (
        binary_entropy(q_y)
        - (1.0 - q_x) * binary_entropy(lo)
        - q_x * binary_entropy(hi)
    )


def alpha(q_x: float, q_y: float, rate: float) -> float:
    """Step size of the aligned family: min of the rate cap and marginal cap.

    Equals min(R / H_b(q_X), q_Y / q_X) when q_Y <= q_X and
    min(R / H_b(q_X), (1 - q_Y) / (1 - q_X)) otherwise; the two marginal
    fractions coincide at q_Y = q_X.
    """
    p = RateProblem(q_x, q_y, rate)
    rate_cap = p.rate / binary_entropy(p.q_x)
    if p.q_y <= p.q_x:
        return min(rate_cap, p.q_y / p.q_x)
    return min(rate_cap, (1.0 - p.q_y) / (1.0 - p.q_x))


def saturation_rate(q_x: float, q_y: float) -> float:
    """Smallest rate beyond which the marginal cap, not R, limits coupling.

    For every R at or above this threshold ``solve_mecbr`` returns the
    same (unconstrained-coupling) value.
    """
    p = RateProblem(q_x, q_y, 0.0)
    cap = min(p.q_y / p.q_x, (1.0 - p.q_y) / (1.0 - p.q_x))
    return binary_entropy(p.q_x) * cap


def _solve_core(q_x: float, q_y: float, rate: float):
    """Two-candidate maximum on the canonical domain q_x, q_y in (0, 1/2]."""
    rate_cap = rate / binary_entropy(q_x)
    cap_plus = min(q_y / q_x, (1.0 - q_y) / (1.0 - q_x))
    cap_minus = min(q_y / (1.0 - q_x), (1.0 - q_y) / q_x)
    d_plus = min(rate_cap, cap_plus)
    d_minus = min(rate_cap, cap_minus)
    v_plus = _objective_value(q_x, q_y, d_plus)
    v_minus = _objective_value(q_x, q_y, -d_minus)
    if v_plus >= v_minus:
        step, cap, value = d_plus, cap_plus, v_plus
        weights = (step, 0.0, 1.0 - q_y - (1.0 - q_x) * step, q_y - q_x * step)
    else:
        step, cap, value = d_minus, cap_minus, v_minus
        weights = (0.0, step, 1.0 - q_y - q_x * step, q_y - (1.0 - q_x) * step)
    label = CASE_RATE_BOUND if rate_cap < cap else CASE_MARGINAL_BOUND
    return value, weights, label, step


def solve_mecbr(p: RateProblem) -> SolverResult:
    """Maximize I(X;Y) under the rate budget; exact closed form.

    Returns the optimal value in bits, the optimizing map mixture, a case
    label saying whether the rate cap or the marginal cap fixed the step,
    and the step size itself as ``alpha``.  The value is 0 exactly at
    R = 0 and nondecreasing in R.
    """
    q_x, q_y = p.q_x, p.q_y
    reflected = None
    if q_x > 0.5 and q_y > 0.5:
        reflected = "xy"
        q_x, q_y = 1.0 - q_x, 1.0 - q_y
    elif q_x > 0.5:
        reflected = "x"
        q_x = 1.0 - q_x
    elif q_y > 0.5:
        reflected = "y"
        q_y = 1.0 - q_y

    value, weights, label, step = _solve_core(q_x, q_y, p.rate)

    w1, w2, w3, w4 = weights
    if reflected == "x":
        # Relabeled X = 1 - X: identity and flip trade places.
        w1, w2 = w2, w1
    elif reflected == "y":
        # Relabeled Y = 1 - Y: flip both the bijective and the constant pair.
        w1, w2, w3, w4 = w2, w1, w4, w3
    elif reflected == "xy":
        w3, w4 = w4, w3

    return SolverResult(
        value=value,
        mixture=MapMixture(w1, w2, w3, w4),
        case_label=label,
        alpha=step,
        reflected=reflected,
    )
