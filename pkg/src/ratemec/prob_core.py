"""Exact finite-alphabet probability primitives, everything in bits.

This module owns the small set of information measures the solvers are
built from: pmf and joint-pmf containers with strict validation, Shannon
entropy, mutual information, conditional entropy, and the binary entropy
function with its derivative.

Conventions
-----------
- Logarithms are base 2 throughout; all entropies and rates are bits.
- ``0 * log 0 = 0`` is handled by an explicit branch, never by limits,
  so deterministic distributions produce exactly ``0.0``.
- Probability inputs may be off by at most ``PROB_TOL = 1e-12``: inputs
  within the tolerance are clamped/renormalized, anything worse raises
  :class:`~ratemec.errors.DomainError`.

All operations are pure functions on immutable values and are safe to
call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Entropy and information values are plain floats measured in bits.  A
# wrapper class would buy nothing here; the alias documents intent in
# signatures.
BitsValue = float

#: Validity tolerance for probability inputs (clamp inside, reject outside).
PROB_TOL = 1e-12

_LN2 = math.log(2.0)


def _as_prob_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise DomainError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite entries")
    if np.any(arr < -PROB_TOL):
        raise DomainError(
            f"{name} has a negative entry {arr.min()!r} beyond tolerance {PROB_TOL}"
        )
    arr = np.clip(arr, 0.0, None)
    total = float(arr.sum())
    if abs(total - 1.0) > PROB_TOL:
        raise DomainError(
            f"{name} sums to {total!r}, off from 1 by more than {PROB_TOL}"
        )
    if total != 1.0:
        arr = arr / total
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Pmf:
    """Probability mass function over a finite alphabet.

    Masses are validated on construction: non-negative within ``PROB_TOL``
    and summing to 1 within ``PROB_TOL`` (then renormalized exactly).
    The stored array is read-only.
    """

    masses: np.ndarray

    def __post_init__(self) -> None:
        arr = _as_prob_array(self.masses, "Pmf masses")
        if arr.ndim != 1:
            raise DomainError(f"Pmf masses must be 1-D, got shape {arr.shape}")
        object.__setattr__(self, "masses", arr)

    @property
    def size(self) -> int:
        return int(self.masses.size)


@dataclass(frozen=True, eq=False)
class JointPmf:
    """Joint probability table over two finite alphabets, indexed (x, y)."""

    table: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.table, dtype=float)
        if arr.ndim != 2:
            raise DomainError(f"JointPmf table must be 2-D, got shape {arr.shape}")
        flat = _as_prob_array(arr.ravel(), "JointPmf table")
        arr = flat.reshape(arr.shape).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "table", arr)

    @property
    def nx(self) -> int:
        return int(self.table.shape[0])

    @property
    def ny(self) -> int:
        return int(self.table.shape[1])

    def marginal_x(self) -> Pmf:
        return Pmf(self.table.sum(axis=1))

    def marginal_y(self) -> Pmf:
        return Pmf(self.table.sum(axis=0))


def binary_entropy(t: float) -> BitsValue:
    """H_b(t) = -t log2 t - (1-t) log2(1-t), in bits.

    Symmetric about 1/2.  Accepts t within ``PROB_TOL`` of [0, 1] and
    clamps it; rejects anything further out.  The (1-t) term uses
    ``log1p`` so values near t = 0 keep full precision.
    """
    t = float(t)
    if not math.isfinite(t):
        raise DomainError(f"binary_entropy needs a finite probability, got {t!r}")
    if t < -PROB_TOL or t > 1.0 + PROB_TOL:
        raise DomainError(f"binary_entropy argument {t!r} outside [0, 1]")
    if t <= 0.0 or t >= 1.0:
        return 0.0
    return -t * math.log2(t) - (1.0 - t) * (math.log1p(-t) / _LN2)


def binary_entropy_derivative(t: float) -> float:
    """d/dt H_b(t) = log2((1-t)/t); strictly decreasing on (0, 1)."""
    t = float(t)
    if not math.isfinite(t) or t <= 0.0 or t >= 1.0:
        raise DomainError(
            f"binary_entropy_derivative is defined only on the open interval (0, 1), got {t!r}"
        )
    return math.log2(1.0 - t) - math.log2(t)


def entropy(p: Pmf) -> BitsValue:
    """Shannon entropy of a pmf in bits, with the 0 log 0 = 0 convention."""
    m = p.masses
    pos = m[m > 0.0]
    # "+ 0.0" normalizes the IEEE -0.0 that a point mass would produce.
    return float(-(pos * np.log2(pos)).sum()) + 0.0


def mutual_information(j: JointPmf) -> BitsValue:
    """I(X;Y) = H(X) + H(Y) - H(X,Y) in bits, clamped to be non-negative.

    Rounding in the three entropy sums can leave a residual of order
    1e-16 below zero; that is clamped to exactly 0.0.
    """
    hx = entropy(j.marginal_x())
    hy = entropy(j.marginal_y())
    hxy = entropy(Pmf(j.table.ravel()))
    mi = hx + hy - hxy
    return mi if mi > 0.0 else 0.0


def conditional_entropy(j: JointPmf, given: str) -> BitsValue:
    """H(other | given) in bits; ``given`` is "x" (rows) or "y" (columns).

    Computed by the decomposition sum_g P(g) H(other | g) rather than by
    subtracting entropies, so a deterministic channel yields exactly 0.0.
    """
    if given == "x":
        groups = j.table
    elif given == "y":
        groups = j.table.T
    else:
        raise DomainError(f'conditional_entropy axis must be "x" or "y", got {given!r}')
    acc = 0.0
    for row in groups:
        mass = float(row.sum())
        if mass <= 0.0:
            continue
        cond = row[row > 0.0] / mass
        acc += mass * float(-(cond * np.log2(cond)).sum())
    return acc + 0.0
