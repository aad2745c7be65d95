import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np
from numpy.typing import NDArray

from bayesloc.core.errors import InvalidParameters, ParseError, UnknownLocation
from bayesloc.core.geometry import Grid, Location
from bayesloc.core.observation import ObservationVector
from bayesloc.infra.model.observation_model import LogLikelihoods
from bayesloc.infra.model.trace_dataset import TraceDataset

logger = logging.getLogger(__name__)

DEFAULT_BIN_WIDTH = 1.0
DEFAULT_SMOOTHING = 1.0
RANGE_EXTENSION_BINS = 3


def bin_index(value: float | NDArray, bin_width: float) -> int | NDArray:
  """Bin k covers [k * bin_width, (k + 1) * bin_width)."""
  return np.floor(np.asarray(value) / bin_width).astype(np.int64)


@dataclass(frozen=True, eq=False)
class Histogram:
  """
  Smoothed histogram of one transmitter's readings at one survey location.

  The support runs over the observed bins extended on both sides. Every bin of
  the support receives an equal share of the smoothing mass, so no bin has zero
  probability.

  Attributes:
      start (int): Bin index of the first support bin.
      counts (NDArray): Reading counts per support bin.
      mean (float): Sample mean of the raw readings in dBm.
      bin_width (float): Bin width in dB.
      smoothing (float): Total smoothing mass added over the support.
  """
  start: int
  counts: NDArray[np.int64]
  mean: float
  bin_width: float
  smoothing: float

  def __post_init__(self):
    counts = np.array(self.counts, dtype=np.int64, copy=True)
    if counts.ndim != 1 or counts.size == 0 or np.any(counts < 0) or counts.sum() < 1:
      raise InvalidParameters("A histogram needs nonnegative counts totalling at least one")
    if not self.bin_width > 0 or not self.smoothing > 0:
      raise InvalidParameters(f"bin_width and smoothing must be > 0, got {self.bin_width}, {self.smoothing}")
    counts.setflags(write=False)
    object.__setattr__(self, "counts", counts)

  @property
  def total(self) -> int:
    return int(self.counts.sum())

  @property
  def stop(self) -> int:
    return self.start + self.counts.size

  @property
  def floor_probability(self) -> float:
    """Probability of an empty support bin, also used outside the support."""
    return (self.smoothing / self.counts.size) / (self.total + self.smoothing)

  def probabilities(self) -> NDArray[np.float64]:
    return (self.counts + self.smoothing / self.counts.size) / (self.total + self.smoothing)

  def probability(self, value: float) -> float:
    k = int(bin_index(value, self.bin_width))
    if self.start <= k < self.stop:
      return float(self.probabilities()[k - self.start])
    return self.floor_probability

  def bin_lows(self) -> NDArray[np.float64]:
    return (self.start + np.arange(self.counts.size)) * self.bin_width

  def sample(self, rng: np.random.Generator) -> float:
    """Draw one reading: the centre of a bin drawn from the smoothed probabilities."""
    k = rng.choice(self.counts.size, p=self.probabilities())
    return float((self.start + k + 0.5) * self.bin_width)


@dataclass(frozen=True, eq=False)
class FingerprintDb:
  """
  Empirical observation distributions at surveyed locations.

  Attributes:
      bin_width (float): Histogram bin width in dB.
      smoothing (float): Smoothing mass per histogram.
      locations (tuple[Location, ...]): Survey locations; they form the estimator grid.
      histograms (tuple[Mapping[str, Histogram], ...]): Per location, histograms by transmitter.
      empty_cells (tuple[tuple[Location, str], ...]): (location, transmitter) pairs without readings.
  """
  bin_width: float
  smoothing: float
  locations: tuple[Location, ...]
  histograms: tuple[Mapping[str, Histogram], ...]
  empty_cells: tuple[tuple[Location, str], ...] = field(default=())

  def __post_init__(self):
    if not self.locations:
      raise InvalidParameters("A fingerprint database needs at least one survey location")
    if len(self.locations) != len(self.histograms):
      raise InvalidParameters(f"Got {len(self.locations)} locations but {len(self.histograms)} histogram maps")
    if not self.bin_width > 0 or not self.smoothing > 0:
      raise InvalidParameters(f"bin_width and smoothing must be > 0, got {self.bin_width}, {self.smoothing}")

  @cached_property
  def tx_ids(self) -> tuple[str, ...]:
    return tuple(sorted({tx_id for per_tx in self.histograms for tx_id in per_tx}))

  @cached_property
  def grid(self) -> Grid:
    return Grid.from_locations(self.locations)

  def location_index(self, r: Location, tol: float = 1e-9) -> int:
    """
    Index of a survey location.

    Raises:
        UnknownLocation: If r is not a survey location.
    """
    for i, loc in enumerate(self.locations):
      if abs(loc.x - r.x) <= tol and abs(loc.y - r.y) <= tol:
        return i
    raise UnknownLocation(f"({r.x}, {r.y}) is not one of the {len(self.locations)} survey locations")

  def scan_count(self, index: int) -> int:
    """Largest per-transmitter reading count at a survey location."""
    return max((h.total for h in self.histograms[index].values()), default=0)

  def unheard_probability(self, index: int) -> float:
    """Probability assigned to a reading from a transmitter never heard at this location."""
    return self.smoothing / (self.scan_count(index) + self.smoothing)


def fingerprint_train(data: TraceDataset, bin_width: float = DEFAULT_BIN_WIDTH, smoothing: float = DEFAULT_SMOOTHING) -> FingerprintDb:
  """
  Build smoothed per-(location, transmitter) histograms from survey readings.

  Args:
      data (TraceDataset): Readings at known locations.
      bin_width (float): Histogram bin width in dB.
      smoothing (float): Add-constant smoothing mass per histogram.

  Returns:
      FingerprintDb: Histograms and sample means; empty cells are recorded and
          treated as unheard transmitters.

  Raises:
      ParseError: If the dataset is empty.
      InvalidParameters: If bin_width or smoothing is not positive.
  """
  if len(data) == 0:
    raise ParseError("Cannot train a fingerprint database on an empty dataset")
  if not bin_width > 0 or not smoothing > 0:
    raise InvalidParameters(f"bin_width and smoothing must be > 0, got {bin_width}, {smoothing}")

  readings: dict[tuple[Location, str], list[float]] = defaultdict(list)
  for record in data.records:
    readings[(record.rx, record.tx_id)].append(record.rssi)

  locations = data.locations()
  tx_ids = data.tx_ids()
  histograms: list[dict[str, Histogram]] = []
  empty: list[tuple[Location, str]] = []
  for loc in locations:
    per_tx: dict[str, Histogram] = {}
    for tx_id in tx_ids:
      values = readings.get((loc, tx_id))
      if not values:
        empty.append((loc, tx_id))
        continue
      per_tx[tx_id] = _histogram(np.asarray(values, dtype=np.float64), bin_width, smoothing)
    histograms.append(per_tx)

  if empty:
    logger.warning("%d (location, transmitter) cells have no readings; treated as unheard", len(empty))
  return FingerprintDb(bin_width, smoothing, locations, tuple(histograms), tuple(empty))


def _histogram(values: NDArray[np.float64], bin_width: float, smoothing: float) -> Histogram:
  bins = bin_index(values, bin_width)
  start = int(bins.min()) - RANGE_EXTENSION_BINS
  stop = int(bins.max()) + RANGE_EXTENSION_BINS + 1
  counts = np.bincount(bins - start, minlength=stop - start)
  return Histogram(start=start, counts=counts, mean=float(values.mean()), bin_width=bin_width, smoothing=smoothing)


def fingerprint_loglik(db: FingerprintDb, o: ObservationVector, r: Location) -> float:
  """
  Log-probability of an observation at one survey location.

  Readings from transmitters unheard at r use the unheard floor; transmitters
  the database never heard anywhere are skipped.

  Raises:
      UnknownLocation: If r is not a survey location.
  """
  index = db.location_index(r)
  known = set(db.tx_ids)
  total = 0.0
  for tx_id, value in o.readings.items():
    if tx_id not in known:
      continue
    histogram = db.histograms[index].get(tx_id)
    p = histogram.probability(value) if histogram is not None else db.unheard_probability(index)
    total += math.log(p)
  return total


def fingerprint_mean(db: FingerprintDb, r: Location) -> NDArray[np.float64]:
  """
  Per-transmitter sample means at a survey location, aligned with db.tx_ids.

  Transmitters unheard at r are flagged absent with NaN.

  Raises:
      UnknownLocation: If r is not a survey location.
  """
  per_tx = db.histograms[db.location_index(r)]
  return np.array([per_tx[t].mean if t in per_tx else np.nan for t in db.tx_ids], dtype=np.float64)


class FingerprintModel:
  """
  Observation model backed by a fingerprint database.

  Log-probability tables over a shared bin range are built once per
  transmitter, so scoring an observation costs one lookup per transmitter.
  """

  def __init__(self, db: FingerprintDb):
    """
    Args:
        db (FingerprintDb): Trained database; its survey locations form the grid.
    """
    self.db = db
    self._tables = {tx_id: self._build_table(tx_id) for tx_id in db.tx_ids}

  def _build_table(self, tx_id: str) -> tuple[int, NDArray[np.float64], NDArray[np.float64]]:
    # (first bin, log-probabilities per (location, bin), out-of-range log floor per location)
    db = self.db
    present = [h[tx_id] for h in db.histograms if tx_id in h]
    lo = min(h.start for h in present)
    hi = max(h.stop for h in present)
    table = np.empty((len(db.locations), hi - lo))
    outside = np.empty(len(db.locations))
    for i, per_tx in enumerate(db.histograms):
      histogram = per_tx.get(tx_id)
      if histogram is None:
        table[i, :] = outside[i] = math.log(db.unheard_probability(i))
        continue
      table[i, :] = outside[i] = math.log(histogram.floor_probability)
      table[i, histogram.start - lo:histogram.stop - lo] = np.log(histogram.probabilities())
    return lo, table, outside

  def _check_grid(self, grid: Grid) -> None:
    if grid is self.db.grid:
      return
    if grid.size != self.db.grid.size or not np.allclose(grid.points, self.db.grid.points, atol=1e-9):
      raise UnknownLocation("Fingerprint likelihoods exist only on the database's survey locations")

  def loglik(self, observation: ObservationVector, grid: Grid) -> LogLikelihoods:
    """
    Log-probability of an observation at every survey location.

    Raises:
        UnknownLocation: If the grid is not the database's survey grid.
    """
    self._check_grid(grid)
    total = np.zeros(grid.size)
    for tx_id, value in observation.readings.items():
      entry = self._tables.get(tx_id)
      if entry is None:
        continue
      lo, table, outside = entry
      k = int(bin_index(value, self.db.bin_width)) - lo
      total += table[:, k] if 0 <= k < table.shape[1] else outside
    return total

  def sample(self, location: Location, rng: np.random.Generator) -> ObservationVector:
    """
    Draw one scan from the smoothed histograms at a survey location.

    Raises:
        UnknownLocation: If location is not a survey location.
    """
    per_tx = self.db.histograms[self.db.location_index(location)]
    return ObservationVector({tx_id: per_tx[tx_id].sample(rng) for tx_id in sorted(per_tx)})
