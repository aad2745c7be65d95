import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Collection, Mapping

from bayesloc.core.errors import InvalidObservation


@dataclass(frozen=True)
class ObservationVector:
  """
  RSS readings in dBm keyed by transmitter id.

  Transmitters that were not heard are simply absent. NaN readings are
  treated as absent as well.

  Attributes:
      readings (Mapping[str, float]): Present readings, read-only.
  """
  readings: Mapping[str, float]

  def __post_init__(self):
    present = {}
    for tx_id, value in self.readings.items():
      value = float(value)
      if math.isnan(value):
        continue
      if math.isinf(value):
        raise InvalidObservation(f"Reading for {tx_id!r} must be finite, got {value}")
      present[str(tx_id)] = value
    if not present:
      raise InvalidObservation("An observation needs at least one present reading")
    object.__setattr__(self, "readings", MappingProxyType(present))

  @classmethod
  def parse(cls, text: str) -> "ObservationVector":
    """
    Parse inline `tx=rssi` pairs separated by commas or whitespace.

    Raises:
        InvalidObservation: If the text holds no pair or a pair is malformed.
    """
    readings: dict[str, float] = {}
    for token in text.replace(",", " ").split():
      tx_id, sep, value = token.partition("=")
      if not sep or not tx_id:
        raise InvalidObservation(f"Expected tx=rssi, got {token!r}")
      try:
        readings[tx_id] = float(value)
      except ValueError:
        raise InvalidObservation(f"Reading for {tx_id!r} is not a number: {value!r}") from None
    return cls(readings)

  @property
  def tx_ids(self) -> tuple[str, ...]:
    return tuple(self.readings)

  def __len__(self) -> int:
    return len(self.readings)

  def __contains__(self, tx_id: object) -> bool:
    return tx_id in self.readings

  def __getitem__(self, tx_id: str) -> float:
    return self.readings[tx_id]

  def restricted_to(self, tx_ids: Collection[str]) -> "ObservationVector":
    """Readings for the given transmitters only."""
    return ObservationVector({k: v for k, v in self.readings.items() if k in tx_ids})
