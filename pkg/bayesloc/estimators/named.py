import math
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from bayesloc.core.density import DensityGrid
from bayesloc.core.errors import InvalidRadius
from bayesloc.core.geometry import Location
from bayesloc.estimators.cost import Distance, SquaredDistance, WithinRadius
from bayesloc.estimators.engine import TIE_TOL, Estimate, estimate, expected_cost


def _check_radius(d: float) -> None:
  if not (math.isfinite(d) and d > 0):
    raise InvalidRadius(f"Radius d must be finite and > 0, got {d}")


def mp_name(d: float) -> str:
  return f"MP({d:g})"


def map_estimate(post: DensityGrid, tol: float = TIE_TOL) -> Estimate:
  """
  Posterior mode. With a uniform prior this is the maximum-likelihood estimate.

  The expected cost is one minus the mass at the mode, the radius cost for a
  radius below one grid cell.
  """
  mass = post.mass
  best = float(mass.max())
  ties = np.flatnonzero(mass >= best - tol * max(best, 1.0))
  grid = post.grid
  return Estimate(
    location=grid.location(int(ties[0])),
    expected_cost=1.0 - best,
    tie_set=tuple(grid.locations(ties)),
    algorithm="MAP"
  )


def mmse_estimate(post: DensityGrid) -> Estimate:
  """Posterior mean in closed form; it need not be a grid point."""
  mean = post.mean()
  return Estimate(
    location=mean,
    expected_cost=expected_cost(post, mean, SquaredDistance()),
    tie_set=(mean,),
    algorithm="MMSE"
  )


def mede_estimate(post: DensityGrid, tol: float = TIE_TOL) -> Estimate:
  return estimate(post, Distance(), tol, algorithm="MEDE")


def mpd_estimate(post: DensityGrid, d: float, tol: float = TIE_TOL) -> Estimate:
  """
  Grid point capturing the most posterior mass within radius d.

  P(d) for the result is 1 - expected_cost.

  Raises:
      InvalidRadius: If d <= 0.
  """
  _check_radius(d)
  return estimate(post, WithinRadius(d), tol, algorithm=mp_name(d))


def mpd_argmax_mask(post: DensityGrid, radii: Sequence[float] | NDArray[np.float64], tol: float = TIE_TOL) -> NDArray[np.bool_]:
  """
  (n, k) mask: entry [i, j] is set when grid point i maximizes P(radii[j]).

  A radius of 0 is allowed and captures the point's own mass.
  """
  radii = np.atleast_1d(np.asarray(radii, dtype=np.float64))
  captured = post.grid.mass_within(post.mass, radii)
  best = captured.max(axis=0)
  return captured >= best - tol * np.maximum(best, 1.0)


def mpd_argmax_indices(post: DensityGrid, radii: Sequence[float] | NDArray[np.float64], tol: float = TIE_TOL) -> list[NDArray[np.intp]]:
  """Per radius, grid indices whose captured mass is within tol of the best."""
  mask = mpd_argmax_mask(post, radii, tol)
  return [np.flatnonzero(mask[:, j]) for j in range(mask.shape[1])]


def mpd_argmax_set(post: DensityGrid, d: float, tol: float = TIE_TOL) -> tuple[Location, ...]:
  """
  Every grid point that maximizes P(d), in grid order.

  Raises:
      InvalidRadius: If d <= 0.
  """
  _check_radius(d)
  (indices,) = mpd_argmax_indices(post, [d], tol)
  return tuple(post.grid.locations(indices))
