from bayesloc.core.observation import ObservationVector
from bayesloc.estimators.engine import Estimate
from bayesloc.infra.index import FaissFingerprintIndex
from bayesloc.infra.model.fingerprint_model import FingerprintDb


def fing_estimate(db: FingerprintDb, o: ObservationVector, index: FaissFingerprintIndex | None = None) -> Estimate:
  """
  Classical fingerprinting: the survey location whose mean RSS vector is
  closest to the observation over the transmitters both share.

  Args:
      db (FingerprintDb): Trained database.
      o (ObservationVector): The observation.
      index (FaissFingerprintIndex | None): Prebuilt index over db, reused across calls.

  Returns:
      Estimate: Its expected_cost is the fingerprint distance in dB.

  Raises:
      NoCommonTransmitters: If o shares no transmitter with db.
  """
  index = index if index is not None else FaissFingerprintIndex(db)
  best, dist, ties = index.nearest(o)
  return Estimate(
    location=db.locations[best],
    expected_cost=dist,
    tie_set=tuple(db.locations[int(t)] for t in ties),
    algorithm="FING"
  )
