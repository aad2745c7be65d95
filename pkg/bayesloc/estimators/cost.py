import math
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np
from numpy.typing import NDArray

from bayesloc.core.errors import InvalidCost, InvalidRadius
from bayesloc.core.geometry import RADIUS_EPS


class CostFunction(Protocol):
  """
  A distance-error cost g: nonnegative and nondecreasing in the error distance.

  Calling it maps an array of distances in metres to an array of costs.
  """

  def __call__(self, d: NDArray[np.float64]) -> NDArray[np.float64]:
    ...


@dataclass(frozen=True, slots=True)
class SquaredDistance:
  """g(d) = d^2, minimized in expectation by the posterior mean."""

  def __call__(self, d: NDArray[np.float64]) -> NDArray[np.float64]:
    d = np.asarray(d, dtype=np.float64)
    return d * d


@dataclass(frozen=True, slots=True)
class Distance:
  """g(d) = d, minimized in expectation by the median-like MEDE point."""

  def __call__(self, d: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.asarray(d, dtype=np.float64)


@dataclass(frozen=True, slots=True)
class WithinRadius:
  """
  Step cost: 0 within `radius` metres of the truth, 1 outside.

  Its expected cost is one minus the probability captured by the disk.
  """
  radius: float

  def __post_init__(self):
    if not (math.isfinite(self.radius) and self.radius > 0):
      raise InvalidRadius(f"Radius must be finite and > 0, got {self.radius}")

  def __call__(self, d: NDArray[np.float64]) -> NDArray[np.float64]:
    return (np.asarray(d, dtype=np.float64) > self.radius + RADIUS_EPS).astype(np.float64)


@dataclass(frozen=True, eq=False)
class TabulatedMonotone:
  """
  Arbitrary monotone cost sampled at increasing distances.

  Values between samples are linearly interpolated; beyond the last sample the
  last value holds.

  Attributes:
      distances (NDArray): Strictly increasing sample distances, starting at >= 0.
      values (NDArray): Nonnegative, nondecreasing costs at those distances.
  """
  distances: NDArray[np.float64]
  values: NDArray[np.float64]

  def __post_init__(self):
    distances = np.array(self.distances, dtype=np.float64, copy=True)
    values = np.array(self.values, dtype=np.float64, copy=True)
    if distances.ndim != 1 or distances.shape != values.shape or distances.size < 2:
      raise InvalidCost(f"Need two or more matching samples, got {distances.shape} and {values.shape}")
    if not (np.all(np.isfinite(distances)) and np.all(np.isfinite(values))):
      raise InvalidCost("Cost samples must be finite")
    if distances[0] < 0 or np.any(np.diff(distances) <= 0):
      raise InvalidCost("Cost sample distances must start at >= 0 and strictly increase")
    if np.any(values < 0) or np.any(np.diff(values) < 0):
      raise InvalidCost("Cost values must be nonnegative and nondecreasing")
    distances.setflags(write=False)
    values.setflags(write=False)
    object.__setattr__(self, "distances", distances)
    object.__setattr__(self, "values", values)

  @classmethod
  def from_samples(cls, distances: Sequence[float], values: Sequence[float]) -> "TabulatedMonotone":
    return cls(np.asarray(distances), np.asarray(values))

  def __call__(self, d: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.interp(np.asarray(d, dtype=np.float64), self.distances, self.values)
