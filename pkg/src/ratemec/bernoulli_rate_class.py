"""Solver for the rate- and classification-constrained Bernoulli problem.

On top of the rate-constrained setting of :mod:`ratemec.bernoulli_rate`
a binary label S = X xor S1 with S1 ~ Bern(q_S1) independent of X must
stay predictable from the reconstruction: the mixture has to satisfy

    (p1 + p2) H_b(q_S1) + (p3 + p4) H_b(m) <= C,      (label row)

where m = (1 - q_X)(1 - q_S1) + q_X q_S1 is the probability that a
constant-map output agrees with the label.  The bijective maps leave
label uncertainty H_b(q_S1) while constant maps leave H_b(m), and since
H_b(m) >= H_b(q_S1) always (see :func:`label_params`), the label row is
a FLOOR on the informative weight:

    p1 + p2 >= (H_b(m) - C) / (H_b(m) - H_b(q_S1))    whenever C < H_b(m).

Two consequences drive this module's semantics:

- The label budget gates feasibility but never caps the optimum.  A
  small C forces weight onto the bijective maps, which the rate budget
  may not allow; then the instance is infeasible and
  :func:`solve_mecbrc` raises :class:`~ratemec.errors.InfeasibleError`.
- Whenever the instance is feasible, the optimum is found among the
  vertices of the feasible polygon in the (p1, p2) plane.  The classic
  one-sided candidate families (all informative weight on the identity
  map, or all of it on the flip map) are vertices of that polygon, but
  so are mixed points with p1 > 0 and p2 > 0, which win whenever the
  label floor exceeds a one-sided marginal cap; :func:`solve_mecbrc`
  enumerates every vertex, which the brute-force oracle confirms is
  exact.

:func:`candidate_solutions` exposes the same vertex set as named
analytic formulas with honest per-constraint slacks, for callers that
want to inspect which branch a given instance selects and why the
others lose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .bernoulli_rate import MapMixture, SolverResult, _objective_value
from .errors import DomainError, InfeasibleError
from .prob_core import BitsValue, binary_entropy

#: Feasibility slack used when filtering candidate mixtures.
FEAS_TOL = 1e-9

#: Below this gap H_b(m) - H_b(q_S1) the label row is treated as constant
#: (it happens only at q_S1 = 1/2, where the row reads 1 <= C).
DEGENERATE_GAP = 1e-12

#: Tolerance for calling a constraint "active" when labeling a solution.
ACTIVE_TOL = 1e-9


def _check_interval(value: float, name: str, upper: float = 0.5) -> None:
    if not math.isfinite(value) or value <= 0.0 or value > upper:
        raise DomainError(f"{name}={value!r} outside the solver domain (0, {upper}]")


@dataclass(frozen=True)
class RateClassProblem:
    """Instance parameters: marginals, label noise, and the two budgets."""

    q_x: float
    q_y: float
    q_s1: float
    rate: float
    cclass: float

    def __post_init__(self) -> None:
        _check_interval(self.q_x, "q_x")
        _check_interval(self.q_y, "q_y")
        _check_interval(self.q_s1, "q_s1")
        if not math.isfinite(self.rate) or self.rate < 0.0:
            raise DomainError(f"rate must be finite and >= 0, got {self.rate!r}")
        if not math.isfinite(self.cclass) or self.cclass < 0.0:
            raise DomainError(f"cclass must be finite and >= 0, got {self.cclass!r}")


@dataclass(frozen=True)
class DerivedLabelParams:
    """Quantities the label row is built from.

    q_s is the label marginal P(S = 1); m is the agreement probability of
    a constant output with the label.  They satisfy q_s = 1 - m, so
    H_b(q_s) = H_b(m).
    """

    q_s: float
    m: float
    h_b_m: BitsValue
    h_b_qs1: BitsValue


def label_params(p: RateClassProblem) -> DerivedLabelParams:
    """Derive the label marginal and the constant-map entropy terms.

    Guarantees H_b(m) >= H_b(q_S1) - 1e-12: writing
    m - 1/2 = (q_X - 1/2)(2 q_S1 - 1) shows |m - 1/2| <= |q_S1 - 1/2|,
    and H_b decreases in the distance from 1/2.  Equality needs
    q_S1 = 1/2 (q_X in {0, 1} is outside the domain).
    """
    q_s = p.q_x + p.q_s1 - 2.0 * p.q_x * p.q_s1
    m = (1.0 - p.q_x) * (1.0 - p.q_s1) + p.q_x * p.q_s1
    h_b_m = binary_entropy(m)
    h_b_qs1 = binary_entropy(p.q_s1)
    if h_b_m < h_b_qs1 - 1e-12:
        raise DomainError(
            f"entropy ordering violated: H_b(m)={h_b_m!r} < H_b(q_S1)={h_b_qs1!r}"
        )
    return DerivedLabelParams(q_s=q_s, m=m, h_b_m=h_b_m, h_b_qs1=h_b_qs1)


def feasibility(p: RateClassProblem) -> bool:
    """True iff C >= H_b(q_S1) - 1e-12, the necessary label-budget floor.

    Even bijective maps leave H_b(q_S1) of label uncertainty, so no
    mixture can beat it.  This check is necessary, not sufficient: a
    feasible C may still be unreachable when the rate budget cannot fund
    the informative weight the label row demands (see
    :func:`solve_mecbrc`).
    """
    return p.cclass >= binary_entropy(p.q_s1) - 1e-12


@dataclass(frozen=True, eq=False)
class CandidateSolution:
    """One analytic candidate with honest feasibility bookkeeping.

    ``weights`` always holds the raw formula output (possibly outside the
    simplex); ``mixture`` is the validated projection and is None when
    the raw weights are not a distribution.  ``slacks`` maps constraint
    names to signed slack (>= 0 means satisfied); ``feasible`` is true
    when every slack clears -FEAS_TOL.  ``value`` is NaN for candidates
    whose weights leave the simplex by more than FEAS_TOL.
    """

    branch: str
    weights: np.ndarray
    value: BitsValue
    feasible: bool
    slacks: dict[str, float]
    mixture: MapMixture | None


def _slacks_for(
    weights: np.ndarray, p: RateClassProblem, lp: DerivedLabelParams
) -> dict[str, float]:
    p1, p2, p3, p4 = (float(v) for v in weights)
    hbx = binary_entropy(p.q_x)
    return {
        "nonneg": min(p1, p2, p3, p4),
        "simplex": -abs(p1 + p2 + p3 + p4 - 1.0),
        "marginal": -abs(p.q_x * p1 + (1.0 - p.q_x) * p2 + p4 - p.q_y),
        "rate": p.rate - hbx * (p1 + p2),
        "classification": p.cclass
        - ((p1 + p2) * lp.h_b_qs1 + (p3 + p4) * lp.h_b_m),
    }


def _candidate(
    branch: str, weights, p: RateClassProblem, lp: DerivedLabelParams
) -> CandidateSolution:
    w = np.asarray(weights, dtype=float)
    slacks = _slacks_for(w, p, lp)
    feasible = all(s >= -FEAS_TOL for s in slacks.values())
    if w.min() >= -FEAS_TOL and w.max() <= 1.0 + FEAS_TOL:
        value = _objective_value(p.q_x, p.q_y, float(w[0] - w[1]))
    else:
        value = float("nan")
    mixture = None
    if w.min() >= -FEAS_TOL:
        clipped = np.clip(w, 0.0, None)
        mixture = MapMixture(*(clipped / clipped.sum()))
    return CandidateSolution(
        branch=branch,
        weights=w,
        value=value,
        feasible=feasible,
        slacks=slacks,
        mixture=mixture,
    )


def _aligned_weights(q_x: float, q_y: float, s: float):
    return (s, 0.0, 1.0 - q_y - (1.0 - q_x) * s, q_y - q_x * s)


def _mirrored_weights(q_x: float, q_y: float, s: float):
    return (0.0, s, 1.0 - q_y - q_x * s, q_y - (1.0 - q_x) * s)


def _full_weights(q_x: float, q_y: float, p1: float, p2: float):
    p4 = q_y - q_x * p1 - (1.0 - q_x) * p2
    return (p1, p2, 1.0 - p1 - p2 - p4, p4)


def candidate_solutions(p: RateClassProblem) -> list[CandidateSolution]:
    """Every analytic candidate point, each with feasibility slacks.

    The feasible set is a polygon in the (p1, p2) plane and the objective
    depends on p1 - p2 alone, so the optimum is one of at most ten vertex
    candidates, all emitted here:

    - ``PartI-Case1`` / ``PartII-Case1``: all informative weight on one
      bijective map, stepped to the rate budget R / H_b(q_X).
    - ``PartI-Case2``/``Case3`` and ``PartII-Case2``/``Case3``: the same
      one-sided families stepped to the label floor
      (H_b(m) - C) / (H_b(m) - H_b(q_S1)).  Skipped when H_b(m) equals
      H_b(q_S1) within 1e-12 (q_S1 = 1/2), where the label row is the
      constant 1 and can never be active.
    - ``PartI-Case4`` / ``PartII-Case4``: one-sided weight at the
      marginal cap of its family, where a component weight hits zero
      (the unconstrained-coupling points).
    - ``PartI-FloorCap`` / ``PartII-FloorCap``: the label floor meeting
      the p3 = 0 or p4 = 0 marginal row with both p1 and p2 positive.
      These mixed points are the step extremes whenever the floor
      exceeds a one-sided marginal cap, and no one-sided candidate is
      feasible there.  Emitted only when the floor is positive and
      q_X is not 1/2 (at q_X = 1/2 the floor parallels the marginal
      rows and the one-sided candidates already cover the polygon).

    Candidates are reported with honest slacks, not pre-filtered: a
    label-active candidate whose step the rate budget cannot fund shows
    a negative rate slack, and steps beyond the marginal caps show
    negative component weights and a NaN value.  The best feasible
    candidate always matches :func:`solve_mecbrc`.
    """
    if not feasibility(p):
        raise InfeasibleError(
            f"classification budget C={p.cclass!r} is below "
            f"H_b(q_S1)={binary_entropy(p.q_s1)!r}; no coupling can satisfy it"
        )
    lp = label_params(p)
    rate_step = p.rate / binary_entropy(p.q_x)
    gap = lp.h_b_m - lp.h_b_qs1
    label_step = (lp.h_b_m - p.cclass) / gap if gap > DEGENERATE_GAP else None
    cap_plus = min(p.q_y / p.q_x, (1.0 - p.q_y) / (1.0 - p.q_x))
    cap_minus = min(p.q_y / (1.0 - p.q_x), (1.0 - p.q_y) / p.q_x)

    out = [
        _candidate("PartI-Case1", _aligned_weights(p.q_x, p.q_y, rate_step), p, lp),
        _candidate("PartII-Case1", _mirrored_weights(p.q_x, p.q_y, rate_step), p, lp),
    ]
    if label_step is not None:
        for branch, builder in (
            ("PartI-Case2", _aligned_weights),
            ("PartI-Case3", _aligned_weights),
            ("PartII-Case2", _mirrored_weights),
            ("PartII-Case3", _mirrored_weights),
        ):
            out.append(_candidate(branch, builder(p.q_x, p.q_y, label_step), p, lp))
    out.append(
        _candidate("PartI-Case4", _aligned_weights(p.q_x, p.q_y, cap_plus), p, lp)
    )
    out.append(
        _candidate("PartII-Case4", _mirrored_weights(p.q_x, p.q_y, cap_minus), p, lp)
    )
    if (
        label_step is not None
        and label_step > 0.0
        and abs(1.0 - 2.0 * p.q_x) > 1e-9
    ):
        denom = 1.0 - 2.0 * p.q_x
        p1 = (1.0 - p.q_y - p.q_x * label_step) / denom
        out.append(
            _candidate(
                "PartI-FloorCap",
                _full_weights(p.q_x, p.q_y, p1, label_step - p1),
                p,
                lp,
            )
        )
        p2 = (p.q_y - p.q_x * label_step) / denom
        out.append(
            _candidate(
                "PartII-FloorCap",
                _full_weights(p.q_x, p.q_y, label_step - p2, p2),
                p,
                lp,
            )
        )
    return out


def _vertex_points(p: RateClassProblem, lp: DerivedLabelParams):
    """All intersection points of the constraint lines in the (p1, p2) plane.

    With p4 forced by the marginal match and p3 by normalization, the
    feasible set is a polygon cut out by six lines: p1 = 0, p2 = 0,
    p4 = 0, p3 = 0, the rate cap p1 + p2 = R / H_b(q_X), and (when it
    exists) the label floor p1 + p2 = (H_b(m) - C) / (H_b(m) - H_b(q_S1)).
    The objective is convex on the polygon (it depends on p1 - p2 alone),
    so the maximum sits at a vertex, hence at one of these intersections.
    """
    hbx = binary_entropy(p.q_x)
    rate_step = p.rate / hbx
    lines = [
        (1.0, 0.0, 0.0),  # p1 = 0
        (0.0, 1.0, 0.0),  # p2 = 0
        (p.q_x, 1.0 - p.q_x, p.q_y),  # p4 = 0
        (1.0 - p.q_x, p.q_x, 1.0 - p.q_y),  # p3 = 0
        (1.0, 1.0, rate_step),  # rate cap
    ]
    gap = lp.h_b_m - lp.h_b_qs1
    if gap > DEGENERATE_GAP and p.cclass < lp.h_b_m - DEGENERATE_GAP:
        lines.append((1.0, 1.0, (lp.h_b_m - p.cclass) / gap))  # label floor

    points = []
    for (a1, b1, c1), (a2, b2, c2) in combinations(lines, 2):
        det = a1 * b2 - a2 * b1
        if abs(det) < 1e-11:
            continue
        p1 = (c1 * b2 - c2 * b1) / det
        p2 = (a1 * c2 - a2 * c1) / det
        p4 = p.q_y - p.q_x * p1 - (1.0 - p.q_x) * p2
        p3 = 1.0 - p1 - p2 - p4
        points.append(np.array([p1, p2, p3, p4]))
    return points


def solve_mecbrc(p: RateClassProblem) -> SolverResult:
    """Maximize I(X;Y) under both the rate budget and the label budget.

    Enumerates every vertex of the feasible polygon, filters by all five
    constraint rows at tolerance ``FEAS_TOL``, and returns the best.  The
    winning mixture is projected onto the simplex (tiny negatives clamped,
    then renormalized).

    Raises :class:`InfeasibleError` in two situations: the label budget
    is below the floor H_b(q_S1) that even bijective maps cannot beat, or
    the budgets are individually sensible but jointly unsatisfiable (the
    label row demands more informative weight than the rate budget funds).

    The case label reports the sign of the winning step (PartI for
    p1 >= p2, PartII otherwise) and which budget rows are tight at the
    winner: Case1 rate only, Case2 label only, Case3 both, Case4 neither.
    """
    hbs1 = binary_entropy(p.q_s1)
    if p.cclass < hbs1 - 1e-12:
        raise InfeasibleError(
            f"classification budget C={p.cclass!r} is below "
            f"H_b(q_S1)={hbs1!r}; no coupling can satisfy it"
        )
    lp = label_params(p)
    hbx = binary_entropy(p.q_x)

    best_value = -1.0
    best_weights = None
    for w in _vertex_points(p, lp):
        slacks = _slacks_for(w, p, lp)
        if any(s < -FEAS_TOL for s in slacks.values()):
            continue
        value = _objective_value(
            p.q_x, p.q_y, float(np.clip(w[0], 0.0, None) - np.clip(w[1], 0.0, None))
        )
        if value > best_value:
            best_value = value
            best_weights = w
    if best_weights is None:
        gap = lp.h_b_m - lp.h_b_qs1
        floor = (lp.h_b_m - p.cclass) / gap if gap > DEGENERATE_GAP else 0.0
        raise InfeasibleError(
            "budgets are jointly unsatisfiable: the label row requires "
            f"informative weight p1 + p2 >= {floor!r} but the rate budget "
            f"allows at most {p.rate / hbx!r}"
        )

    clipped = np.clip(best_weights, 0.0, None)
    mixture = MapMixture(*(clipped / clipped.sum()))
    p1, p2 = mixture.p1, mixture.p2
    step = p1 - p2

    rate_active = abs(hbx * (p1 + p2) - p.rate) <= ACTIVE_TOL
    label_row = (p1 + p2) * lp.h_b_qs1 + (mixture.p3 + mixture.p4) * lp.h_b_m
    label_active = abs(label_row - p.cclass) <= ACTIVE_TOL
    part = "PartI" if step >= 0.0 else "PartII"
    if rate_active and label_active:
        case = "Case3"
    elif rate_active:
        case = "Case1"
    elif label_active:
        case = "Case2"
    else:
        case = "Case4"

    return SolverResult(
        value=max(best_value, 0.0),
        mixture=mixture,
        case_label=f"{part}-{case}",
        alpha=abs(step),
    )
