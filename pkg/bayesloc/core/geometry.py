import math
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import NDArray

from bayesloc.core.errors import InvalidSpace

# Type alias for an (n, 2) array of candidate coordinates in metres.
Points = NDArray[np.float64]

DEFAULT_RESOLUTION = 0.25

# Grids up to this size keep their pairwise distance and neighbour tables in
# memory; larger grids evaluate distances block by block.
PAIRWISE_LIMIT = 2500

# Within-radius count tables kept per grid, least recently used evicted first.
WITHIN_CACHE_SIZE = 8

_BLOCK_ROWS = 512

# Slack on "distance <= radius" so grid points exactly on a circle count as inside.
RADIUS_EPS = 1e-9


@dataclass(frozen=True, slots=True)
class Location:
  """A receiver or transmitter position in metres."""
  x: float
  y: float

  def __post_init__(self):
    if not (math.isfinite(self.x) and math.isfinite(self.y)):
      raise InvalidSpace(f"Location coordinates must be finite, got ({self.x}, {self.y})")


def distance(r: Location, l: Location) -> float:
  """
  Euclidean distance between two locations.

  Args:
      r (Location): First location.
      l (Location): Second location.

  Returns:
      float: Distance in metres.
  """
  return float(np.hypot(r.x - l.x, r.y - l.y))


def _axis_count(extent: float, resolution: float) -> int:
  # ceil(extent / resolution + 1), robust to float noise on exact multiples
  return int(math.ceil(extent / resolution - 1e-9)) + 1


@dataclass(frozen=True, slots=True)
class Space:
  """
  Closed rectangular region with a uniform discretization.

  Attributes:
      x_min, x_max, y_min, y_max (float): Bounds in metres.
      resolution (float): Grid spacing in metres.
  """
  x_min: float
  x_max: float
  y_min: float
  y_max: float
  resolution: float = DEFAULT_RESOLUTION

  def __post_init__(self):
    bounds = (self.x_min, self.x_max, self.y_min, self.y_max, self.resolution)
    if not all(math.isfinite(b) for b in bounds):
      raise InvalidSpace(f"Space bounds must be finite, got {bounds}")
    if not self.x_min < self.x_max:
      raise InvalidSpace(f"Space needs x_min < x_max, got [{self.x_min}, {self.x_max}]")
    if not self.y_min < self.y_max:
      raise InvalidSpace(f"Space needs y_min < y_max, got [{self.y_min}, {self.y_max}]")
    if not self.resolution > 0:
      raise InvalidSpace(f"Resolution must be > 0, got {self.resolution}")

  @classmethod
  def of_size(cls, width: float, height: float, resolution: float = DEFAULT_RESOLUTION) -> "Space":
    """Space anchored at the origin: [0, width] x [0, height]."""
    return cls(0.0, width, 0.0, height, resolution)

  @property
  def width(self) -> float:
    return self.x_max - self.x_min

  @property
  def height(self) -> float:
    return self.y_max - self.y_min

  def d_star(self) -> float:
    """Maximum distance between two points of the space (its diagonal)."""
    return float(np.hypot(self.width, self.height))

  @property
  def shape(self) -> tuple[int, int]:
    """Grid shape as (rows along y, columns along x)."""
    return (_axis_count(self.height, self.resolution), _axis_count(self.width, self.resolution))

  @property
  def point_count(self) -> int:
    rows, cols = self.shape
    return rows * cols

  def contains(self, location: Location) -> bool:
    return (self.x_min <= location.x <= self.x_max) and (self.y_min <= location.y <= self.y_max)

  def center(self) -> Location:
    return Location((self.x_min + self.x_max) / 2, (self.y_min + self.y_max) / 2)

  def grid(self) -> "Grid":
    """The discretization of this space; the same object for equal spaces."""
    return _space_grid(self)


@lru_cache(maxsize=4)
def _space_grid(space: Space) -> "Grid":
  rows, cols = space.shape
  xs = np.minimum(space.x_min + space.resolution * np.arange(cols), space.x_max)
  ys = np.minimum(space.y_min + space.resolution * np.arange(rows), space.y_max)
  # row-major: x varies fastest, so index order is lexicographic in (y, x)
  gx, gy = np.meshgrid(xs, ys)
  points = np.column_stack([gx.ravel(), gy.ravel()])
  return Grid(points=points, d_star=space.d_star(), resolution=space.resolution, space=space)


def grid_points(space: Space) -> list[Location]:
  """
  Enumerate the candidate locations of a space in row-major order.

  Args:
      space (Space): The discretized region.

  Returns:
      list[Location]: Points starting at (x_min, y_min), x varying fastest.
  """
  return space.grid().locations()


@dataclass(frozen=True, eq=False)
class Grid:
  """
  Ordered set of candidate locations on which densities live.

  A grid is usually the discretization of a `Space`, but lines and
  fingerprint survey locations are grids too. Grids compare and hash by
  identity so that models can cache per-grid tables.

  Attributes:
      points (Points): (n, 2) coordinates, read-only, in deterministic order.
      d_star (float): Maximum distance between two points of the region.
      resolution (float): Nominal spacing, used for tolerances.
      space (Space | None): The rectangle this grid discretizes, if any.
  """
  points: Points
  d_star: float
  resolution: float
  space: Space | None = None
  _cache: OrderedDict = field(default_factory=OrderedDict, init=False, repr=False)
  _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

  def __post_init__(self):
    points = np.array(self.points, dtype=np.float64, copy=True)
    if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] == 0:
      raise InvalidSpace(f"Grid points must have shape (n>0, 2), got {points.shape}")
    if not np.all(np.isfinite(points)):
      raise InvalidSpace("Grid points must be finite")
    if not self.d_star >= 0 or not self.resolution > 0:
      raise InvalidSpace(f"Grid needs d_star >= 0 and resolution > 0, got {self.d_star}, {self.resolution}")
    points.setflags(write=False)
    object.__setattr__(self, "points", points)

  @classmethod
  def from_line(cls, lo: float, hi: float, resolution: float) -> "Grid":
    """
    A 1-D grid on [lo, hi] embedded at y = 0.

    Raises:
        InvalidSpace: If lo >= hi or resolution <= 0.
    """
    if not lo < hi or not resolution > 0:
      raise InvalidSpace(f"Line needs lo < hi and resolution > 0, got [{lo}, {hi}] at {resolution}")
    count = _axis_count(hi - lo, resolution)
    xs = np.minimum(lo + resolution * np.arange(count), hi)
    points = np.column_stack([xs, np.zeros_like(xs)])
    return cls(points=points, d_star=hi - lo, resolution=resolution)

  @classmethod
  def from_locations(cls, locations: Sequence[Location], resolution: float | None = None) -> "Grid":
    """
    A grid over explicit locations, e.g. fingerprint survey points.

    Args:
        locations (Sequence[Location]): Candidate locations, kept in the given order.
        resolution (float | None): Nominal spacing; defaults to the smallest
          nonzero pairwise distance (1.0 for a single location).
    """
    points = np.array([[loc.x, loc.y] for loc in locations], dtype=np.float64).reshape(-1, 2)
    diffs = np.hypot(points[:, None, 0] - points[None, :, 0], points[:, None, 1] - points[None, :, 1])
    d_star = float(diffs.max()) if len(points) else 0.0
    if resolution is None:
      nonzero = diffs[diffs > 0]
      resolution = float(nonzero.min()) if nonzero.size else 1.0
    return cls(points=points, d_star=d_star, resolution=resolution)

  @property
  def size(self) -> int:
    return int(self.points.shape[0])

  def location(self, index: int) -> Location:
    x, y = self.points[index]
    return Location(float(x), float(y))

  def locations(self, indices: Iterable[int] | None = None) -> list[Location]:
    if indices is None:
      indices = range(self.size)
    return [self.location(int(i)) for i in indices]

  def distances_from(self, location: Location) -> NDArray[np.float64]:
    """Distances from one location to every grid point."""
    return np.hypot(self.points[:, 0] - location.x, self.points[:, 1] - location.y)

  def nearest_index(self, location: Location) -> int:
    """Index of the grid point closest to a location (first in grid order on ties)."""
    return int(np.argmin(self.distances_from(location)))

  @cached_property
  def pairwise_distances(self) -> NDArray[np.float64]:
    """(n, n) distance table; only for grids within PAIRWISE_LIMIT."""
    p = self.points
    table = np.hypot(p[:, None, 0] - p[None, :, 0], p[:, None, 1] - p[None, :, 1])
    table.setflags(write=False)
    return table

  @cached_property
  def _neighbourhoods(self) -> tuple[NDArray[np.intp], NDArray[np.float64]]:
    # per candidate: grid indices sorted by distance, and the sorted distances
    table = self.pairwise_distances
    order = np.argsort(table, axis=1, kind="stable")
    if self.size < np.iinfo(np.int32).max:
      order = order.astype(np.int32)
    return order, np.take_along_axis(table, order, axis=1)

  @property
  def cached(self) -> bool:
    return self.size <= PAIRWISE_LIMIT

  def _within_counts(self, radii: NDArray[np.float64]) -> NDArray[np.intp]:
    key = ("within", radii.tobytes())
    with self._lock:
      counts = self._cache.get(key)
      if counts is not None:
        self._cache.move_to_end(key)
        return counts
    _, sorted_d = self._neighbourhoods
    counts = np.stack([(sorted_d <= r + RADIUS_EPS).sum(axis=1) for r in radii], axis=1)
    with self._lock:
      self._cache[key] = counts
      while len(self._cache) > WITHIN_CACHE_SIZE:
        self._cache.popitem(last=False)
    return counts

  def mass_within(self, mass: NDArray[np.float64], radii: float | Sequence[float]) -> NDArray[np.float64]:
    """
    Mass captured by a disk of each radius around every candidate.

    Args:
        mass (NDArray): Mass per grid point.
        radii (float | Sequence[float]): Radii in metres (>= 0).

    Returns:
        NDArray: (n, k) array; entry [i, j] is the mass within radii[j] of point i.
    """
    radii = np.atleast_1d(np.asarray(radii, dtype=np.float64))
    out = np.empty((self.size, radii.size), dtype=np.float64)
    if self.cached:
      order, _ = self._neighbourhoods
      counts = self._within_counts(radii)
      for start in range(0, self.size, _BLOCK_ROWS):
        stop = min(start + _BLOCK_ROWS, self.size)
        cumulative = np.cumsum(mass[order[start:stop]], axis=1)
        out[start:stop] = np.take_along_axis(cumulative, counts[start:stop] - 1, axis=1)
      return out
    for start, block in self._distance_blocks():
      for j, r in enumerate(radii):
        out[start:start + len(block), j] = (block <= r + RADIUS_EPS) @ mass
    return out

  def kernel_expectation(self, mass: NDArray[np.float64], kernel) -> NDArray[np.float64]:
    """
    For every candidate c, the sum over grid points r of kernel(|c - r|) * mass[r].

    Args:
        mass (NDArray): Mass per grid point.
        kernel (Callable[[NDArray], NDArray]): Vectorized function of distance.

    Returns:
        NDArray: (n,) expected kernel values.
    """
    if self.cached:
      return kernel(self.pairwise_distances) @ mass
    out = np.empty(self.size, dtype=np.float64)
    for start, block in self._distance_blocks():
      out[start:start + len(block)] = kernel(block) @ mass
    return out

  def _distance_blocks(self):
    p = self.points
    for start in range(0, self.size, _BLOCK_ROWS):
      rows = p[start:start + _BLOCK_ROWS]
      yield start, np.hypot(rows[:, None, 0] - p[None, :, 0], rows[:, None, 1] - p[None, :, 1])
