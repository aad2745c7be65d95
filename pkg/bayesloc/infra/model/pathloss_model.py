import math
import threading
import weakref
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np
from numpy.typing import NDArray
from scipy.stats import norm

from bayesloc.core.errors import InvalidParameters, SingularDistance, UnknownTransmitter
from bayesloc.core.geometry import Grid, Location, distance
from bayesloc.core.observation import ObservationVector
from bayesloc.infra.model.observation_model import LogLikelihoods

DEFAULT_D_MIN = 0.01


@dataclass(frozen=True, slots=True)
class PathLossParams:
  """
  Simplified path-loss model with log-normal shadowing.

  The received power in dBm is pt_dbm + k_db - 10 * eta * log10(d / d0) + W,
  with W ~ N(0, sigma_db^2).

  Attributes:
      k_db (float): Additive antenna/frequency gain K in dB (negative for a loss).
      eta (float): Path-loss exponent.
      sigma_db (float): Shadowing standard deviation in dB.
      d0 (float): Reference distance in metres.
      pt_dbm (float): Transmit power in dBm.
      d_min (float): Distance floor in metres; the model is singular at d = 0.
  """
  k_db: float = 0.0
  eta: float = 3.0
  sigma_db: float = 4.0
  d0: float = 1.0
  pt_dbm: float = 0.0
  d_min: float = DEFAULT_D_MIN

  def __post_init__(self):
    values = (self.k_db, self.eta, self.sigma_db, self.d0, self.pt_dbm, self.d_min)
    if not all(math.isfinite(v) for v in values):
      raise InvalidParameters(f"Path-loss parameters must be finite, got {values}")
    if not self.eta > 0:
      raise InvalidParameters(f"eta must be > 0, got {self.eta}")
    if not self.sigma_db > 0:
      raise InvalidParameters(f"sigma_db must be > 0, got {self.sigma_db}")
    if not self.d0 > 0:
      raise InvalidParameters(f"d0 must be > 0, got {self.d0}")
    if not self.d_min > 0:
      raise InvalidParameters(f"d_min must be > 0, got {self.d_min}")

  @property
  def offset_db(self) -> float:
    """Power that turns an observation O_i back into a reading: pt_dbm + k_db."""
    return self.pt_dbm + self.k_db


@dataclass(frozen=True)
class TransmitterSet:
  """
  Ordered transmitters with unique ids and known positions.

  Attributes:
      transmitters (tuple[tuple[str, Location], ...]): (id, position) pairs.
  """
  transmitters: tuple[tuple[str, Location], ...]

  def __post_init__(self):
    pairs = tuple((str(tx_id), loc) for tx_id, loc in self.transmitters)
    if not pairs:
      raise InvalidParameters("A transmitter set needs at least one transmitter")
    ids = [tx_id for tx_id, _ in pairs]
    if len(set(ids)) != len(ids):
      raise InvalidParameters(f"Transmitter ids must be unique, got {ids}")
    object.__setattr__(self, "transmitters", pairs)

  @classmethod
  def from_mapping(cls, positions: Mapping[str, Location]) -> "TransmitterSet":
    return cls(tuple(positions.items()))

  @classmethod
  def from_locations(cls, locations: Iterable[Location], prefix: str = "tx") -> "TransmitterSet":
    """Transmitters named `<prefix>0`, `<prefix>1`, ... in the given order."""
    return cls(tuple((f"{prefix}{i}", loc) for i, loc in enumerate(locations)))

  def __len__(self) -> int:
    return len(self.transmitters)

  def __iter__(self) -> Iterator[tuple[str, Location]]:
    return iter(self.transmitters)

  @property
  def ids(self) -> tuple[str, ...]:
    return tuple(tx_id for tx_id, _ in self.transmitters)

  @property
  def positions(self) -> NDArray[np.float64]:
    return np.array([[loc.x, loc.y] for _, loc in self.transmitters], dtype=np.float64)

  def index(self, tx_id: str) -> int:
    """
    Position of a transmitter in the set.

    Raises:
        UnknownTransmitter: If the id is not in the set.
    """
    for i, (known, _) in enumerate(self.transmitters):
      if known == tx_id:
        return i
    raise UnknownTransmitter(f"Unknown transmitter {tx_id!r}; known: {list(self.ids)}")

  def location(self, tx_id: str) -> Location:
    return self.transmitters[self.index(tx_id)][1]


def mean_observation(params: PathLossParams, tx: Location, r: Location) -> float:
  """
  Mean of the observation O_i = P_r - P_t - K for a receiver at r.

  Args:
      params (PathLossParams): Model parameters.
      tx (Location): Transmitter position.
      r (Location): Receiver position.

  Returns:
      float: -10 * eta * log10(d / d0) in dB.

  Raises:
      SingularDistance: If the receiver is closer than params.d_min.
  """
  d = distance(tx, r)
  if d < params.d_min:
    raise SingularDistance(f"Receiver at {d:.4g} m from transmitter, below the {params.d_min} m floor")
  return -10.0 * params.eta * math.log10(d / params.d0)


def pathloss_loglik(params: PathLossParams, txs: TransmitterSet, o: ObservationVector, r: Location) -> float:
  """
  Log-density of an observation vector at one receiver location.

  Missing transmitters contribute nothing; each present reading contributes a
  Gaussian log-density around its mean observation.

  Raises:
      UnknownTransmitter: If a reading names a transmitter outside txs.
      SingularDistance: If r is within d_min of a transmitter.
  """
  total = 0.0
  for tx_id, reading in o.readings.items():
    mean = mean_observation(params, txs.location(tx_id), r)
    total += float(norm.logpdf(reading - params.offset_db, loc=mean, scale=params.sigma_db))
  return total


def sample_rss(params: PathLossParams, txs: TransmitterSet, r: Location, seed: int | np.random.Generator) -> ObservationVector:
  """
  Simulate one reading per transmitter for a receiver at r.

  Args:
      params (PathLossParams): Model parameters.
      txs (TransmitterSet): Transmitters, read in order.
      r (Location): Receiver position.
      seed (int | np.random.Generator): Seed or generator; a seed gives a
          deterministic vector.

  Returns:
      ObservationVector: Readings in dBm.

  Raises:
      SingularDistance: If r is within d_min of a transmitter.
  """
  rng = np.random.default_rng(seed)
  means = [mean_observation(params, loc, r) for _, loc in txs]
  noise = rng.normal(0.0, params.sigma_db, size=len(means))
  return ObservationVector({
    tx_id: params.offset_db + mean + w for (tx_id, _), mean, w in zip(txs, means, noise)
  })


class PathLossModel:
  """
  Observation model backed by the log-normal path-loss equations.

  Mean observations for every (grid point, transmitter) pair are computed once
  per grid and cached. On grid evaluation, distances below d_min are clamped to
  d_min so a transmitter sitting on a grid point does not void the posterior.
  """

  def __init__(self, params: PathLossParams, txs: TransmitterSet):
    """
    Args:
        params (PathLossParams): Model parameters.
        txs (TransmitterSet): Known transmitters.
    """
    self.params = params
    self.txs = txs
    self._tables: "weakref.WeakKeyDictionary[Grid, NDArray[np.float64]]" = weakref.WeakKeyDictionary()
    self._lock = threading.Lock()

  def mean_table(self, grid: Grid) -> NDArray[np.float64]:
    """
    Mean observations at every grid point.

    Returns:
        NDArray: (n, N) array in dB, columns in transmitter order.
    """
    with self._lock:
      table = self._tables.get(grid)
      if table is None:
        tx = self.txs.positions
        d = np.hypot(grid.points[:, None, 0] - tx[None, :, 0], grid.points[:, None, 1] - tx[None, :, 1])
        d = np.maximum(d, self.params.d_min)
        table = -10.0 * self.params.eta * np.log10(d / self.params.d0)
        table.setflags(write=False)
        self._tables[grid] = table
      return table

  def loglik(self, observation: ObservationVector, grid: Grid) -> LogLikelihoods:
    """
    Sum of per-transmitter Gaussian log-densities at every grid point.

    Raises:
        UnknownTransmitter: If a reading names a transmitter outside the set.
    """
    columns = [self.txs.index(tx_id) for tx_id in observation.tx_ids]
    offsets = np.array([observation[tx_id] for tx_id in observation.tx_ids]) - self.params.offset_db
    means = self.mean_table(grid)[:, columns]
    return norm.logpdf(offsets[None, :], loc=means, scale=self.params.sigma_db).sum(axis=1)

  def sample(self, location: Location, rng: np.random.Generator) -> ObservationVector:
    return sample_rss(self.params, self.txs, location, rng)
