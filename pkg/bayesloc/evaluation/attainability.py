from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from bayesloc.core.density import DensityGrid
from bayesloc.core.errors import InvalidParameters
from bayesloc.core.geometry import Location
from bayesloc.estimators.engine import TIE_TOL
from bayesloc.estimators.named import mpd_argmax_mask
from bayesloc.evaluation.curves import ErrorCdfCurve
from bayesloc.evaluation.dominance import Dominance, dominance


def attainable_mask(post: DensityGrid, d_grid: Sequence[float] | NDArray[np.float64], tol: float = TIE_TOL) -> NDArray[np.bool_]:
  """Grid points that maximize P(d) for every d in d_grid at once."""
  d_grid = np.atleast_1d(np.asarray(d_grid, dtype=np.float64))
  if d_grid.size == 0:
    raise InvalidParameters("Attainability needs at least one distance")
  return mpd_argmax_mask(post, d_grid, tol).all(axis=1)


def attainability_test(post: DensityGrid, d_grid: Sequence[float] | NDArray[np.float64], tol: float = TIE_TOL) -> tuple[Location, ...]:
  """
  Intersection of the MP(d) maximizer sets over d_grid.

  Any member reaches the envelope F* for this posterior at every listed d;
  an empty result means no single estimate does.
  """
  return tuple(post.grid.locations(np.flatnonzero(attainable_mask(post, d_grid, tol))))


@dataclass(frozen=True)
class UnattainabilityReport:
  """
  Attributes:
      unattainable (bool): True when the curves prove F* is not attained.
      witnesses (tuple[str, ...]): Algorithms the MEDE curve fails to dominate.
  """
  unattainable: bool
  witnesses: tuple[str, ...]


def unattainability_evidence(mede: ErrorCdfCurve, others: Sequence[ErrorCdfCurve], tol: float | None = None) -> UnattainabilityReport:
  """
  An algorithm attaining F* would dominate every other. MEDE minimizes the
  area to F*, so it would have to be that algorithm; any curve MEDE does not
  dominate therefore shows F* is unattainable.
  """
  witnesses = []
  for other in others:
    kind = dominance(mede, other, tol).kind
    if kind in (Dominance.INCOMPARABLE, Dominance.DOMINATED_BY, Dominance.STRICTLY_DOMINATED_BY):
      witnesses.append(other.name)
  return UnattainabilityReport(bool(witnesses), tuple(witnesses))
