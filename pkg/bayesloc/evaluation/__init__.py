from bayesloc.evaluation.algorithms import (
  DEFAULT_D,
  DEFAULT_EPSILON,
  FingLocalizer,
  FixedLocalizer,
  Localizer,
  PosteriorLocalizer,
  bayes_suite,
  map_localizer,
  mede_localizer,
  mmse_localizer,
  mpd_localizer
)
from bayesloc.evaluation.attainability import (
  UnattainabilityReport,
  attainability_test,
  attainable_mask,
  unattainability_evidence
)
from bayesloc.evaluation.curves import (
  DEFAULT_D_POINTS,
  ErrorCdfCurve,
  default_d_grid,
  error_cdf,
  expected_cost_from_curve,
  fstar,
  theta_area,
  theta_tolerance
)
from bayesloc.evaluation.dominance import Dominance, DominanceVerdict, dominance, pooled_tolerance, witness_costs
from bayesloc.evaluation.suite import SuiteResult, evaluate_suite
from bayesloc.evaluation.table import ALL_METRICS, Metric, PerformanceTable, performance_table, posterior_metrics
from bayesloc.evaluation.trials import Trial, TrialSource, draw_trial, run_trials, trial_rng

__all__ = [
  "ALL_METRICS",
  "DEFAULT_D",
  "DEFAULT_D_POINTS",
  "DEFAULT_EPSILON",
  "Dominance",
  "DominanceVerdict",
  "ErrorCdfCurve",
  "FingLocalizer",
  "FixedLocalizer",
  "Localizer",
  "Metric",
  "PerformanceTable",
  "PosteriorLocalizer",
  "SuiteResult",
  "Trial",
  "TrialSource",
  "UnattainabilityReport",
  "attainability_test",
  "attainable_mask",
  "bayes_suite",
  "default_d_grid",
  "dominance",
  "draw_trial",
  "error_cdf",
  "evaluate_suite",
  "expected_cost_from_curve",
  "fstar",
  "map_localizer",
  "mede_localizer",
  "mmse_localizer",
  "mpd_localizer",
  "performance_table",
  "pooled_tolerance",
  "posterior_metrics",
  "run_trials",
  "theta_area",
  "theta_tolerance",
  "trial_rng",
  "unattainability_evidence",
  "witness_costs"
]
