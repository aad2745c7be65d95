from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from bayesloc.core.errors import NotIncomparable
from bayesloc.estimators.cost import WithinRadius
from bayesloc.evaluation.curves import ErrorCdfCurve

# Strict dominance needs separation on this many consecutive grid distances.
STRICT_RUN = 3
SE_FACTOR = 2.0
_MIN_TOL = 1e-12


class Dominance(Enum):
  STRICTLY_DOMINATES = "StrictlyDominates"
  DOMINATES = "Dominates"
  DOMINATED_BY = "DominatedBy"
  STRICTLY_DOMINATED_BY = "StrictlyDominatedBy"
  EQUAL = "Equal"
  INCOMPARABLE = "Incomparable"

  @property
  def a_dominates(self) -> bool:
    return self in (Dominance.STRICTLY_DOMINATES, Dominance.DOMINATES)

  @property
  def b_dominates(self) -> bool:
    return self in (Dominance.STRICTLY_DOMINATED_BY, Dominance.DOMINATED_BY)


@dataclass(frozen=True, eq=False)
class DominanceVerdict:
  """
  Outcome of comparing two error CDFs.

  Attributes:
      kind (Dominance): The ordering.
      a_above (NDArray): Distances where a exceeds b beyond tolerance.
      b_above (NDArray): Distances where b exceeds a beyond tolerance.
  """
  kind: Dominance
  a_above: NDArray[np.float64]
  b_above: NDArray[np.float64]

  def __str__(self) -> str:
    return self.kind.value


def pooled_tolerance(a: ErrorCdfCurve, b: ErrorCdfCurve, factor: float = SE_FACTOR) -> NDArray[np.float64]:
  """`factor` pooled binomial standard errors of the difference a - b, per distance."""
  pooled = (a.values * a.trials + b.values * b.trials) / (a.trials + b.trials)
  se = np.sqrt(pooled * (1.0 - pooled) * (1.0 / a.trials + 1.0 / b.trials))
  return np.maximum(factor * se, _MIN_TOL)


def _longest_run(mask: NDArray[np.bool_]) -> int:
  best = run = 0
  for flag in mask:
    run = run + 1 if flag else 0
    best = max(best, run)
  return best


def dominance(a: ErrorCdfCurve, b: ErrorCdfCurve, tol: float | NDArray[np.float64] | None = None) -> DominanceVerdict:
  """
  Stochastic-dominance verdict of a against b.

  a dominates b when F_a >= F_b everywhere, within tolerance, and is above
  somewhere. Strict dominance additionally needs a stretch of STRICT_RUN
  consecutive distances with a above b.

  Args:
      a, b (ErrorCdfCurve): Curves on the same distance grid.
      tol (float | NDArray | None): Absolute tolerance, scalar or per distance;
          defaults to two pooled binomial standard errors.

  Raises:
      GridMismatch: If the curves use different distance grids.
  """
  a.check_same_grid(b)
  band = pooled_tolerance(a, b) if tol is None else np.broadcast_to(np.asarray(tol, dtype=np.float64), a.values.shape)
  diff = a.values - b.values
  above_a = diff > band
  above_b = -diff > band
  evidence = (a.d_grid[above_a], a.d_grid[above_b])

  if above_a.any() and above_b.any():
    kind = Dominance.INCOMPARABLE
  elif above_a.any():
    kind = Dominance.STRICTLY_DOMINATES if _longest_run(above_a) >= STRICT_RUN else Dominance.DOMINATES
  elif above_b.any():
    kind = Dominance.STRICTLY_DOMINATED_BY if _longest_run(above_b) >= STRICT_RUN else Dominance.DOMINATED_BY
  else:
    kind = Dominance.EQUAL
  return DominanceVerdict(kind, *evidence)


def _witness_radius(curve: ErrorCdfCurve, index: int) -> float:
  d = float(curve.d_grid[index])
  if d > 0:
    return d
  # below the first positive distance the curve still reads F(0)
  return float(curve.d_grid[1]) * 1e-6 if curve.d_grid.size > 1 else 1e-9


def witness_costs(a: ErrorCdfCurve, b: ErrorCdfCurve, tol: float | NDArray[np.float64] | None = None) -> tuple[WithinRadius, WithinRadius]:
  """
  Step costs that rank two incomparable algorithms in opposite orders.

  g1 has its step where a leads b the most, so a has the lower expected g1;
  g2 has its step where b leads a the most.

  Raises:
      NotIncomparable: If the curves are ordered by dominance.
      GridMismatch: If the curves use different distance grids.
  """
  verdict = dominance(a, b, tol)
  if verdict.kind is not Dominance.INCOMPARABLE:
    raise NotIncomparable(f"{a.name or 'a'} vs {b.name or 'b'} is {verdict.kind.value}, not Incomparable")
  diff = a.values - b.values
  g1 = WithinRadius(_witness_radius(a, int(np.argmax(diff))))
  g2 = WithinRadius(_witness_radius(a, int(np.argmax(-diff))))
  return g1, g2
