from bayesloc.infra.model.fingerprint_model import (
  FingerprintDb,
  FingerprintModel,
  Histogram,
  fingerprint_loglik,
  fingerprint_mean,
  fingerprint_train
)
from bayesloc.infra.model.observation_model import FLAT_TX_ID, FlatModel, LogLikelihoods, ObservationModel
from bayesloc.infra.model.pathloss_model import (
  PathLossModel,
  PathLossParams,
  TransmitterSet,
  mean_observation,
  pathloss_loglik,
  sample_rss
)
from bayesloc.infra.model.trace_dataset import Scan, TraceDataset, TraceRecord

__all__ = [
  "FLAT_TX_ID",
  "FingerprintDb",
  "FingerprintModel",
  "FlatModel",
  "Histogram",
  "LogLikelihoods",
  "ObservationModel",
  "PathLossModel",
  "PathLossParams",
  "Scan",
  "TraceDataset",
  "TraceRecord",
  "TransmitterSet",
  "fingerprint_loglik",
  "fingerprint_mean",
  "fingerprint_train",
  "mean_observation",
  "pathloss_loglik",
  "sample_rss"
]
