from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from bayesloc.core.errors import InvalidSpace, ParseError
from bayesloc.core.geometry import Location, Space
from bayesloc.core.observation import ObservationVector


@dataclass(frozen=True, slots=True)
class TraceRecord:
  """One RSS reading taken at a known receiver location."""
  rx: Location
  tx_id: str
  rssi: float
  timestamp: float | None = None


@dataclass(frozen=True, slots=True)
class Scan:
  """All readings taken together at one location: one observation vector."""
  location: Location
  observation: ObservationVector
  key: float


def _location_key(location: Location) -> tuple[float, float]:
  return (location.y, location.x)


@dataclass(frozen=True)
class TraceDataset:
  """
  Survey readings, the raw material for fingerprint databases and model fits.

  Attributes:
      records (tuple[TraceRecord, ...]): Readings in file order.
      space (Space | None): Declared region; every receiver must lie inside it.
  """
  records: tuple[TraceRecord, ...]
  space: Space | None = None

  def __post_init__(self):
    records = tuple(self.records)
    if not records:
      raise ParseError("A trace dataset needs at least one record")
    if self.space is not None:
      outside = [r.rx for r in records if not self.space.contains(r.rx)]
      if outside:
        raise InvalidSpace(f"{len(outside)} receiver locations lie outside the space, first {outside[0]}")
    object.__setattr__(self, "records", records)

  def __len__(self) -> int:
    return len(self.records)

  def locations(self) -> tuple[Location, ...]:
    """Distinct receiver locations in grid order (y, then x)."""
    return tuple(sorted({r.rx for r in self.records}, key=_location_key))

  def tx_ids(self) -> tuple[str, ...]:
    return tuple(sorted({r.tx_id for r in self.records}))

  @property
  def has_timestamps(self) -> bool:
    return all(r.timestamp is not None for r in self.records)

  def scans(self) -> list[Scan]:
    """
    Group readings into observation vectors.

    Readings sharing a location and timestamp form one scan. Without
    timestamps, the k-th reading of every transmitter at a location forms
    scan k. Scans come out in location order, then key order.
    """
    groups: dict[tuple[Location, float], dict[str, float]] = defaultdict(dict)
    ordinals: dict[tuple[Location, str], int] = defaultdict(int)
    use_time = self.has_timestamps
    for record in self.records:
      if use_time:
        key = float(record.timestamp)
      else:
        key = float(ordinals[(record.rx, record.tx_id)])
        ordinals[(record.rx, record.tx_id)] += 1
      groups[(record.rx, key)][record.tx_id] = record.rssi
    ordered = sorted(groups, key=lambda k: (_location_key(k[0]), k[1]))
    return [Scan(location=loc, observation=ObservationVector(groups[(loc, key)]), key=key) for loc, key in ordered]

  @classmethod
  def from_scans(cls, scans: Iterable[Scan], space: Space | None = None) -> "TraceDataset":
    records = [
      TraceRecord(rx=scan.location, tx_id=tx_id, rssi=value, timestamp=scan.key)
      for scan in scans
      for tx_id, value in scan.observation.readings.items()
    ]
    return cls(tuple(records), space)

  def subset(self, keep: Sequence[bool]) -> "TraceDataset":
    return TraceDataset(tuple(r for r, k in zip(self.records, keep) if k), self.space)
