"""Brute-force verification solvers for tiny alphabets.

Two independent oracles cross-check the closed-form solvers:

- :func:`solve_vertex` enumerates every deterministic map from an
  n-symbol source alphabet to a k-symbol reconstruction alphabet,
  assembles the linear constraint polytope over the mixture weights
  (marginal match, simplex, rate row, optional label row, nonnegativity),
  and maximizes I(X;Y) by checking every basic feasible point.  The
  objective is convex in the weights, so the maximum over the polytope
  is attained at a vertex, and every vertex appears among the basic
  solutions of full-rank active sets.
- :func:`coupling_oracle_theta` scans the single free cell of a 2x2
  coupling over its Frechet interval, verifying the unconstrained
  maximum-information coupling value without reference to map mixtures.

Dimensions stay tiny (the map count k**n is capped), so exhaustive
enumeration with explicit tolerances beats pulling in an LP library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .bernoulli_rate import MapMixture, SolverResult
from .errors import DimensionCapError, DomainError, InfeasibleError
from .prob_core import (
    BitsValue,
    JointPmf,
    Pmf,
    binary_entropy,
    entropy,
    mutual_information,
)

#: Default ceiling on the number of enumerated maps (k ** n).
DEFAULT_MAP_CAP = 4096

#: Weights below this threshold do not count toward a vertex's support size.
FEAS_SUPPORT_TOL = 1e-9

#: Equality rows must be met this tightly at an accepted vertex.
EQ_TOL = 1e-10

#: Inequality rows may be violated by at most this much at an accepted vertex.
INEQ_TOL = 1e-10

#: Singularity threshold for active-set linear systems.
RANK_TOL = 1e-11


@dataclass(frozen=True, eq=False)
class MapTable:
    """Every deterministic map X -> Y with per-map precomputed quantities.

    ``maps[u, x]`` is the output symbol of map u on input x.  ``out_pmfs``
    holds each map's output distribution under p_X, ``entropies`` the
    output entropy H(f_u(X)) in bits, and ``cls_terms`` the residual label
    entropy H(S | f_u(X)) when a label model q_S1 was supplied (else None).
    """

    n: int
    k: int
    p_x: Pmf
    maps: np.ndarray
    out_pmfs: np.ndarray
    entropies: np.ndarray
    cls_terms: np.ndarray | None


@dataclass(frozen=True, eq=False)
class LinearPolytope:
    """Constraint rows over the mixture weights: A_eq w = b_eq, A_ub w <= b_ub."""

    a_eq: np.ndarray
    b_eq: np.ndarray
    a_ub: np.ndarray
    b_ub: np.ndarray
    ub_names: tuple[str, ...]


@dataclass(frozen=True)
class FrechetInterval:
    """Feasible range of the joint cell P(X=1, Y=1) given Bernoulli marginals."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise DomainError("Frechet interval endpoints must be finite")
        if self.lower > self.upper + 1e-15:
            raise DomainError(
                f"empty Frechet interval [{self.lower!r}, {self.upper!r}]"
            )


def frechet_interval(q_x: float, q_y: float) -> FrechetInterval:
    for name, q in (("q_x", q_x), ("q_y", q_y)):
        if not math.isfinite(q) or q <= 0.0 or q >= 1.0:
            raise DomainError(f"{name}={q!r} outside (0, 1)")
    return FrechetInterval(max(0.0, q_x + q_y - 1.0), min(q_x, q_y))


def _label_term(fiber_masses: np.ndarray, q_s1: float) -> float:
    """H(S | X in fiber) weighted is assembled by the caller; this returns
    the conditional entropy of S = X xor S1 given that X lies in the fiber
    described by ``fiber_masses`` (index = x, value = P(X = x), x in {0, 1})."""
    mass = float(fiber_masses.sum())
    if mass <= 0.0:
        return 0.0
    # P(S = 1 | fiber): x = 0 contributes q_s1, x = 1 contributes 1 - q_s1.
    s1 = (fiber_masses[0] * q_s1 + fiber_masses[1] * (1.0 - q_s1)) / mass
    return binary_entropy(s1)


def enumerate_maps(
    n: int,
    k: int,
    p_x: Pmf,
    q_s1: float | None = None,
    cap: int = DEFAULT_MAP_CAP,
) -> MapTable:
    """Tabulate all k**n deterministic maps from n source to k output symbols.

    For the binary-to-binary case the maps come out in the canonical
    order identity, flip, constant 0, constant 1; otherwise they are in
    lexicographic order of their output tuples.  Supplying ``q_s1``
    additionally precomputes each map's residual label entropy
    H(S | f_u(X)) for the label S = X xor S1, which requires a binary
    source alphabet.
    """
    if n < 2 or k < 2:
        raise DomainError(f"alphabet sizes must be >= 2, got n={n}, k={k}")
    if p_x.size != n:
        raise DomainError(f"p_x has {p_x.size} masses but the source alphabet has {n}")
    count = k**n
    if count > cap:
        raise DimensionCapError(
            f"enumerating {count} maps exceeds the cap of {cap}; "
            "raise the cap only if you accept the combinatorial cost"
        )
    if q_s1 is not None:
        if n != 2:
            raise DomainError("the xor label model needs a binary source alphabet")
        if not math.isfinite(q_s1) or q_s1 <= 0.0 or q_s1 > 0.5:
            raise DomainError(f"q_s1={q_s1!r} outside the solver domain (0, 0.5]")

    if n == 2 and k == 2:
        maps = np.array([[0, 1], [1, 0], [0, 0], [1, 1]], dtype=np.int64)
    else:
        maps = np.array(list(product(range(k), repeat=n)), dtype=np.int64)

    out_pmfs = np.zeros((count, k))
    entropies = np.zeros(count)
    cls_terms = np.zeros(count) if q_s1 is not None else None
    for u in range(count):
        for x in range(n):
            out_pmfs[u, maps[u, x]] += p_x.masses[x]
        entropies[u] = entropy(Pmf(out_pmfs[u]))
        if cls_terms is not None:
            term = 0.0
            for y in range(k):
                fiber = np.where(maps[u] == y, p_x.masses, 0.0)
                term += float(fiber.sum()) * _label_term(fiber, q_s1)
            cls_terms[u] = term
    for arr in (maps, out_pmfs, entropies):
        arr.flags.writeable = False
    if cls_terms is not None:
        cls_terms.flags.writeable = False
    return MapTable(
        n=n, k=k, p_x=p_x, maps=maps, out_pmfs=out_pmfs,
        entropies=entropies, cls_terms=cls_terms,
    )


def build_polytope(
    maps: MapTable,
    p_y: Pmf,
    rate: float | None = None,
    cclass: float | None = None,
) -> LinearPolytope:
    """Assemble the constraint rows for a map-mixture weight vector.

    Equalities: one marginal-match row per output symbol plus the simplex
    row.  Inequalities: the rate row sum_u w_u H(f_u(X)) <= R when given,
    the label row sum_u w_u H(S | f_u(X)) <= C when given, and one
    nonnegativity row per map.
    """
    if p_y.size != maps.k:
        raise DomainError(
            f"p_y has {p_y.size} masses but the output alphabet has {maps.k}"
        )
    count = maps.maps.shape[0]
    a_eq = np.vstack([maps.out_pmfs.T, np.ones((1, count))])
    b_eq = np.concatenate([p_y.masses, [1.0]])
    ub_rows, ub_b, names = [], [], []
    if rate is not None:
        if not math.isfinite(rate) or rate < 0.0:
            raise DomainError(f"rate must be finite and >= 0, got {rate!r}")
        ub_rows.append(maps.entropies)
        ub_b.append(float(rate))
        names.append("rate")
    if cclass is not None:
        if maps.cls_terms is None:
            raise DomainError(
                "classification budget given but the map table has no label model; "
                "pass q_s1 to enumerate_maps"
            )
        if not math.isfinite(cclass) or cclass < 0.0:
            raise DomainError(f"cclass must be finite and >= 0, got {cclass!r}")
        ub_rows.append(maps.cls_terms)
        ub_b.append(float(cclass))
        names.append("classification")
    for u in range(count):
        row = np.zeros(count)
        row[u] = -1.0
        ub_rows.append(row)
        ub_b.append(0.0)
        names.append(f"nonneg[{u}]")
    return LinearPolytope(
        a_eq=a_eq,
        b_eq=np.asarray(b_eq, dtype=float),
        a_ub=np.vstack(ub_rows),
        b_ub=np.asarray(ub_b, dtype=float),
        ub_names=tuple(names),
    )


def _independent_eq_rows(a_eq: np.ndarray, b_eq: np.ndarray):
    """Greedily keep a maximal independent subset of the equality rows.

    The marginal rows always sum to the simplex row, so the stacked
    system is rank-deficient by construction.
    """
    kept_a, kept_b = [], []
    rank = 0
    for row, b in zip(a_eq, b_eq):
        trial = np.vstack(kept_a + [row]) if kept_a else row[None, :]
        new_rank = np.linalg.matrix_rank(trial, tol=RANK_TOL)
        if new_rank > rank:
            kept_a.append(row)
            kept_b.append(b)
            rank = new_rank
    return np.vstack(kept_a), np.asarray(kept_b), rank


def _joint_from_weights(maps: MapTable, p_x: Pmf, w: np.ndarray) -> JointPmf:
    cond = np.zeros((maps.n, maps.k))
    for u, weight in enumerate(w):
        if weight > 0.0:
            cond[np.arange(maps.n), maps.maps[u]] += weight
    return JointPmf(p_x.masses[:, None] * cond)


def solve_vertex(polytope: LinearPolytope, maps: MapTable, p_x: Pmf) -> SolverResult:
    """Maximize I(X;Y) over the polytope by basic-feasible-point enumeration.

    Every active set pairing the independent equality rows with enough
    inequality rows to reach full rank yields one candidate point; points
    violating any constraint row beyond tolerance are discarded, the rest
    are scored by mutual information after a clamp-and-renormalize
    projection.  Ties within 1e-12 prefer the smaller support, matching
    the cardinality bound that an optimal mixture never needs more than
    k + 1 maps.
    """
    count = polytope.a_eq.shape[1]
    eq_a, eq_b, eq_rank = _independent_eq_rows(polytope.a_eq, polytope.b_eq)
    need = count - eq_rank
    if need < 0:
        raise DomainError("equality system overdetermines the mixture weights")

    best_value = -1.0
    best_weights: np.ndarray | None = None
    best_support = count + 1
    for combo in combinations(range(polytope.a_ub.shape[0]), need):
        a = np.vstack([eq_a, polytope.a_ub[list(combo)]]) if need else eq_a
        b = np.concatenate([eq_b, polytope.b_ub[list(combo)]]) if need else eq_b
        if np.linalg.matrix_rank(a, tol=RANK_TOL) < count:
            continue
        try:
            w = np.linalg.solve(a, b)
        except np.linalg.LinAlgError:
            continue
        if np.max(np.abs(polytope.a_eq @ w - polytope.b_eq)) > EQ_TOL:
            continue
        if np.min(polytope.b_ub - polytope.a_ub @ w) < -INEQ_TOL:
            continue
        clipped = np.clip(w, 0.0, None)
        clipped /= clipped.sum()
        value = mutual_information(_joint_from_weights(maps, p_x, clipped))
        support = int(np.count_nonzero(clipped > FEAS_SUPPORT_TOL))
        if value > best_value + 1e-12 or (
            abs(value - best_value) <= 1e-12 and support < best_support
        ):
            best_value = value
            best_weights = clipped
            best_support = support

    if best_weights is None:
        raise InfeasibleError("no basic feasible point satisfies every constraint row")

    mixture = None
    if maps.n == 2 and maps.k == 2:
        mixture = MapMixture(*best_weights)
    return SolverResult(
        value=best_value,
        mixture=mixture,
        case_label="Vertex",
        alpha=None,
        weights=best_weights,
    )


def coupling_oracle_theta(q_x: float, q_y: float, grid: int) -> tuple[float, BitsValue]:
    """Grid-scan the free cell of a 2x2 coupling for maximum information.

    Evaluates I(X;Y) at ``grid`` equally spaced values of
    theta = P(X=1, Y=1) across the Frechet interval (both endpoints are
    always included) and returns the maximizing theta with its value in
    bits.  For marginals in (0, 1/2] the maximizer is the upper endpoint
    min(q_x, q_y).
    """
    if grid < 2:
        raise DomainError(f"grid must be >= 2, got {grid!r}")
    iv = frechet_interval(q_x, q_y)
    thetas = np.unique(
        np.concatenate([np.linspace(iv.lower, iv.upper, int(grid)), [iv.lower, iv.upper]])
    )

    def cell_term(c: np.ndarray, px: float, py: float) -> np.ndarray:
        safe = np.maximum(c, 1e-300)
        return np.where(c > 0.0, c * (np.log2(safe) - math.log2(px) - math.log2(py)), 0.0)

    p11 = thetas
    p10 = q_x - thetas
    p01 = q_y - thetas
    p00 = 1.0 - q_x - q_y + thetas
    info = (
        cell_term(p11, q_x, q_y)
        + cell_term(p10, q_x, 1.0 - q_y)
        + cell_term(p01, 1.0 - q_x, q_y)
        + cell_term(p00, 1.0 - q_x, 1.0 - q_y)
    )
    idx = int(np.argmax(info))
    return float(thetas[idx]), max(float(info[idx]), 0.0)
