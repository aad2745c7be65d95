import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from bayesloc.core.errors import DegenerateGeometry
from bayesloc.core.geometry import distance
from bayesloc.infra.model.pathloss_model import DEFAULT_D_MIN, PathLossParams, TransmitterSet
from bayesloc.infra.model.trace_dataset import TraceDataset

logger = logging.getLogger(__name__)

# Floor on the fitted shadowing deviation; noiseless data would otherwise give sigma = 0.
MIN_SIGMA_DB = 1e-6


@dataclass(frozen=True)
class PathLossFit:
  """
  Least-squares path-loss fit.

  Attributes:
      params (PathLossParams): Fitted K, eta and sigma with the given Pt and d0.
      r_squared (float): Coefficient of determination of the log-distance regression.
      residual_std (float): Standard deviation of the regression residuals in dB.
      samples (int): Readings used.
  """
  params: PathLossParams
  r_squared: float
  residual_std: float
  samples: int


def fit_pathloss(
  data: TraceDataset,
  txs: TransmitterSet,
  pt_dbm: float = 0.0,
  d0: float = 1.0,
  d_min: float = DEFAULT_D_MIN
) -> PathLossFit:
  """
  Fit K and eta by ordinary least squares of reading - Pt on -10 log10(d / d0);
  sigma is the residual standard deviation.

  Args:
      data (TraceDataset): Readings at known receiver locations.
      txs (TransmitterSet): Positions of every transmitter named in data.
      pt_dbm (float): Transmit power in dBm.
      d0 (float): Reference distance in metres.
      d_min (float): Distance floor applied to receiver-transmitter distances.

  Returns:
      PathLossFit: Fitted parameters with goodness of fit.

  Raises:
      UnknownTransmitter: If a reading names a transmitter missing from txs.
      DegenerateGeometry: If the readings span fewer than two distinct
          distances, or the fitted exponent is not positive.
  """
  dists = np.array([max(distance(r.rx, txs.location(r.tx_id)), d_min) for r in data.records])
  readings = np.array([r.rssi for r in data.records], dtype=np.float64)
  if np.unique(np.round(dists, 9)).size < 2:
    raise DegenerateGeometry(f"All {dists.size} readings lie at one distance; K and eta are not identifiable")

  x = -10.0 * np.log10(dists / d0)
  y = readings - pt_dbm
  fit = stats.linregress(x, y)
  if not fit.slope > 0:
    raise DegenerateGeometry(f"Fitted path-loss exponent {fit.slope:.4g} is not positive")

  residuals = y - (fit.intercept + fit.slope * x)
  dof = max(x.size - 2, 1)
  residual_std = math.sqrt(float(residuals @ residuals) / dof)
  params = PathLossParams(
    k_db=float(fit.intercept),
    eta=float(fit.slope),
    sigma_db=max(residual_std, MIN_SIGMA_DB),
    d0=d0,
    pt_dbm=pt_dbm,
    d_min=d_min
  )
  r_squared = float(fit.rvalue ** 2) if np.isfinite(fit.rvalue) else 1.0
  logger.info("Fitted K=%.3f dB eta=%.3f sigma=%.3f dB from %d readings (R^2=%.3f)", params.k_db, params.eta, params.sigma_db, x.size, r_squared)
  return PathLossFit(params, r_squared, residual_std, int(x.size))
