import logging
import threading

import faiss
import numpy as np
from numpy.typing import NDArray

from bayesloc.core.errors import NoCommonTransmitters
from bayesloc.core.observation import ObservationVector
from bayesloc.infra.model.fingerprint_model import FingerprintDb, fingerprint_mean

logger = logging.getLogger(__name__)

# Squared distances (dB^2), one per survey location.
Distances = NDArray[np.float64]


class FaissFingerprintIndex:
  """
  Nearest-fingerprint search over per-location mean RSS vectors.

  When every survey location has a mean for every queried transmitter, search
  runs on an exact `IndexFlatL2` built for that transmitter subset. Otherwise
  each location is compared over the transmitters it shares with the query,
  in NumPy.
  """

  def __init__(self, db: FingerprintDb):
    """
    Args:
        db (FingerprintDb): Trained database; rows follow its survey order.
    """
    self._db = db
    self._tx_ids = db.tx_ids
    self._means = np.vstack([fingerprint_mean(db, loc) for loc in db.locations])
    self._indexes: dict[tuple[int, ...], faiss.IndexFlatL2] = {}
    self._lock = threading.Lock()

  @property
  def size(self) -> int:
    return len(self._db.locations)

  def _columns(self, o: ObservationVector) -> tuple[list[int], NDArray[np.float64]]:
    columns, values = [], []
    for i, tx_id in enumerate(self._tx_ids):
      if tx_id in o:
        columns.append(i)
        values.append(o[tx_id])
    if not columns:
      raise NoCommonTransmitters(f"Observation transmitters {sorted(o.tx_ids)} are unknown to the fingerprint database")
    return columns, np.asarray(values, dtype=np.float64)

  def _flat_index(self, columns: tuple[int, ...]) -> faiss.IndexFlatL2:
    with self._lock:
      index = self._indexes.get(columns)
      if index is None:
        index = faiss.IndexFlatL2(len(columns))
        index.add(np.ascontiguousarray(self._means[:, columns], dtype=np.float32))
        self._indexes[columns] = index
      return index

  def squared_distances(self, o: ObservationVector) -> Distances:
    """
    Squared fingerprint distance from the observation to every survey location.

    Locations sharing no transmitter with the observation get +inf.

    Raises:
        NoCommonTransmitters: If no reading names a transmitter in the database.
    """
    columns, values = self._columns(o)
    block = self._means[:, columns]
    present = ~np.isnan(block)
    if present.all():
      index = self._flat_index(tuple(columns))
      query = np.ascontiguousarray(values[None, :], dtype=np.float32)
      D, I = index.search(query, self.size)
      out = np.empty(self.size, dtype=np.float64)
      out[I[0]] = D[0]
      return out

    diff = np.where(present, block - values[None, :], 0.0)
    out = (diff ** 2).sum(axis=1)
    out[~present.any(axis=1)] = np.inf
    if np.isinf(out).all():
      raise NoCommonTransmitters(f"No survey location heard any of {sorted(o.tx_ids)}")
    return out

  def nearest(self, o: ObservationVector, tol: float = 1e-9) -> tuple[int, float, NDArray[np.intp]]:
    """
    Closest survey location to an observation.

    Returns:
        tuple[int, float, NDArray]: Survey index (first in survey order on
            ties), Euclidean distance in dB, and every index within tol of it.

    Raises:
        NoCommonTransmitters: If no reading names a transmitter in the database.
    """
    d2 = self.squared_distances(o)
    best = float(d2.min())
    ties = np.flatnonzero(d2 <= best + tol * max(best, 1.0))
    return int(ties[0]), float(np.sqrt(best)), ties
