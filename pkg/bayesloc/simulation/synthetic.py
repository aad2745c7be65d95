from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from bayesloc.core.errors import InvalidParameters
from bayesloc.core.geometry import Location, Space
from bayesloc.infra.model.trace_dataset import TraceDataset, TraceRecord

# Small office: 4 m x 2 m split into eight 1 m cells, 250 scans per cell,
# ten access points, one scan every 400 ms.
OFFICE_WIDTH = 4.0
OFFICE_HEIGHT = 2.0
OFFICE_CELL = 1.0
OFFICE_SCANS = 250
OFFICE_TX_COUNT = 10
SCAN_INTERVAL_S = 0.4

# Access points sit around the room, up to this far outside it.
_TX_MARGIN = 8.0
_REFERENCE_DBM = -30.0
_ETA = 3.0
_MULTIPATH_DB = 3.0


class NoiseProfile(Enum):
  """LOW: quiet hours, readings tight around the mean. HIGH: busy hours, bimodal and wide."""
  LOW = "low"
  HIGH = "high"


@dataclass(frozen=True, eq=False)
class OfficeSource:
  """
  Generating distribution of the synthetic office readings.

  Each (cell, transmitter) reading is a two-component Gaussian mixture:
  mean + low_offset with probability weight, mean + high_offset otherwise,
  plus N(0, noise_db^2). The LOW profile collapses both components onto the mean.

  Attributes:
      cells (tuple[Location, ...]): Cell centres in grid order.
      tx_ids (tuple[str, ...]): Transmitter ids.
      means (NDArray): (cells, tx) mean readings in dBm.
      low_offset (NDArray): (cells, tx) offset of the first component.
      high_offset (NDArray): (cells, tx) offset of the second component.
      weight (NDArray): (cells, tx) probability of the first component.
      noise_db (float): Deviation around each component.
  """
  cells: tuple[Location, ...]
  tx_ids: tuple[str, ...]
  means: NDArray[np.float64]
  low_offset: NDArray[np.float64]
  high_offset: NDArray[np.float64]
  weight: NDArray[np.float64]
  noise_db: float

  def sample(self, rng: np.random.Generator, scans: int) -> NDArray[np.float64]:
    """(cells, scans, tx) integer-dBm readings."""
    shape = (len(self.cells), scans, len(self.tx_ids))
    first = rng.random(shape) < self.weight[:, None, :]
    offsets = np.where(first, self.low_offset[:, None, :], self.high_offset[:, None, :])
    values = self.means[:, None, :] + offsets + rng.normal(0.0, self.noise_db, size=shape)
    return np.rint(values)


def office_space() -> Space:
  return Space(0.0, OFFICE_WIDTH, 0.0, OFFICE_HEIGHT, OFFICE_CELL)


def office_cells() -> tuple[Location, ...]:
  """Centres of the eight 1 m cells, ordered by y then x."""
  xs = np.arange(OFFICE_CELL / 2, OFFICE_WIDTH, OFFICE_CELL)
  ys = np.arange(OFFICE_CELL / 2, OFFICE_HEIGHT, OFFICE_CELL)
  return tuple(Location(float(x), float(y)) for y in ys for x in xs)


def office_source(profile: NoiseProfile, tx_count: int = OFFICE_TX_COUNT, seed: int = 0) -> OfficeSource:
  """
  Draw access-point positions and per-cell reading distributions.

  Raises:
      InvalidParameters: If tx_count < 1.
  """
  if tx_count < 1:
    raise InvalidParameters(f"tx_count must be >= 1, got {tx_count}")
  rng = np.random.default_rng(seed)
  cells = office_cells()
  centres = np.array([[c.x, c.y] for c in cells])
  tx = np.column_stack([
    rng.uniform(-_TX_MARGIN, OFFICE_WIDTH + _TX_MARGIN, tx_count),
    rng.uniform(-_TX_MARGIN, OFFICE_HEIGHT + _TX_MARGIN, tx_count)
  ])
  d = np.maximum(np.linalg.norm(centres[:, None, :] - tx[None, :, :], axis=2), 1.0)
  means = _REFERENCE_DBM - 10.0 * _ETA * np.log10(d) + rng.normal(0.0, _MULTIPATH_DB, size=d.shape)

  shape = means.shape
  if profile is NoiseProfile.LOW:
    low = high = np.zeros(shape)
    weight = np.ones(shape)
    noise = 1.0
  else:
    low = -rng.uniform(4.0, 9.0, size=shape)
    high = rng.uniform(4.0, 9.0, size=shape)
    weight = rng.uniform(0.3, 0.7, size=shape)
    noise = 4.0
  tx_ids = tuple(f"ap{i}" for i in range(tx_count))
  return OfficeSource(cells, tx_ids, means, low, high, weight, noise)


def synthesize_office_traces(
  profile: NoiseProfile = NoiseProfile.LOW,
  scans_per_cell: int = OFFICE_SCANS,
  tx_count: int = OFFICE_TX_COUNT,
  seed: int = 0
) -> TraceDataset:
  """
  Survey traces of the synthetic office: every cell centre scanned
  scans_per_cell times, every scan hearing every access point.

  Readings are whole dBm and scans at one cell are SCAN_INTERVAL_S apart, so
  timestamps group readings back into scans.

  Raises:
      InvalidParameters: If scans_per_cell or tx_count < 1.
  """
  if scans_per_cell < 1:
    raise InvalidParameters(f"scans_per_cell must be >= 1, got {scans_per_cell}")
  source = office_source(profile, tx_count, seed)
  values = source.sample(np.random.default_rng([seed, 1]), scans_per_cell)
  records = [
    TraceRecord(rx=cell, tx_id=tx_id, rssi=float(values[c, k, t]), timestamp=round(k * SCAN_INTERVAL_S, 6))
    for c, cell in enumerate(source.cells)
    for k in range(scans_per_cell)
    for t, tx_id in enumerate(source.tx_ids)
  ]
  return TraceDataset(tuple(records), office_space())
