from bayesloc.estimators.cost import CostFunction, Distance, SquaredDistance, TabulatedMonotone, WithinRadius
from bayesloc.estimators.engine import TIE_TOL, Estimate, argmin_with_ties, estimate, expected_cost, expected_costs
from bayesloc.estimators.fingerprint import fing_estimate
from bayesloc.estimators.named import (
  map_estimate,
  mede_estimate,
  mmse_estimate,
  mp_name,
  mpd_argmax_indices,
  mpd_argmax_mask,
  mpd_argmax_set,
  mpd_estimate
)

__all__ = [
  "TIE_TOL",
  "CostFunction",
  "Distance",
  "Estimate",
  "SquaredDistance",
  "TabulatedMonotone",
  "WithinRadius",
  "argmin_with_ties",
  "estimate",
  "expected_cost",
  "expected_costs",
  "fing_estimate",
  "map_estimate",
  "mede_estimate",
  "mmse_estimate",
  "mp_name",
  "mpd_argmax_indices",
  "mpd_argmax_mask",
  "mpd_argmax_set",
  "mpd_estimate"
]
