import logging
from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from bayesloc.core.errors import InvalidParameters
from bayesloc.core.geometry import distance
from bayesloc.estimators.named import mpd_argmax_mask
from bayesloc.evaluation.algorithms import DEFAULT_D, DEFAULT_EPSILON, Localizer
from bayesloc.evaluation.curves import ErrorCdfCurve, default_d_grid, envelope_curve, fstar_successes, theta_area
from bayesloc.evaluation.table import ALL_METRICS, Metric, PerformanceTable, posterior_metrics, table_from_samples
from bayesloc.evaluation.trials import Trial, TrialSource, run_trials

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuiteResult:
  """
  Everything one evaluation pass produces.

  Attributes:
      curves (dict[str, ErrorCdfCurve]): Error CDF per algorithm, in suite order.
      fstar (ErrorCdfCurve): Envelope of all error CDFs.
      theta (dict[str, float]): Area between F* and each curve.
      table (PerformanceTable): Posterior-expected metrics per algorithm.
      attainable_fraction (float): Share of trials whose posterior has a
          single estimate maximizing P(d) for every d.
      mean_attainable_size (float): Mean size of that estimate set.
      trials (int): Successful trials.
      failures (int): Failed trials.
  """
  curves: dict[str, ErrorCdfCurve]
  fstar: ErrorCdfCurve
  theta: dict[str, float]
  table: PerformanceTable
  attainable_fraction: float
  mean_attainable_size: float
  trials: int
  failures: int

  @property
  def d_grid(self) -> NDArray[np.float64]:
    return self.fstar.d_grid


@dataclass(frozen=True)
class _TrialOutcome:
  errors: NDArray[np.float64]
  successes: NDArray[np.bool_]
  metrics: NDArray[np.float64]
  attainable: int


def evaluate_suite(
  scenario: TrialSource,
  algorithms: Sequence[Localizer],
  trials: int,
  seed: int,
  d_grid: NDArray[np.float64] | None = None,
  epsilon: float = DEFAULT_EPSILON,
  d: float = DEFAULT_D,
  metrics: Sequence[Metric] = ALL_METRICS,
  executor: Executor | None = None
) -> SuiteResult:
  """
  Evaluate a suite of algorithms on shared seeded trials.

  Every algorithm sees the same truths and observations, so differences
  between curves reflect the algorithms rather than the draws.

  Raises:
      InvalidParameters: If the suite is empty or epsilon or d is not positive.
  """
  if not algorithms:
    raise InvalidParameters("A suite needs at least one algorithm")
  if not (epsilon > 0 and d > 0):
    raise InvalidParameters(f"epsilon and d must be > 0, got {epsilon}, {d}")
  names = [a.name for a in algorithms]
  if len(set(names)) != len(names):
    raise InvalidParameters(f"Algorithm names must be unique, got {names}")
  d_grid = default_d_grid(scenario.prior.grid.d_star) if d_grid is None else np.asarray(d_grid, dtype=np.float64)
  metrics = tuple(metrics)

  logger.info("Evaluating %s on %s: %d trials, seed %d", names, scenario.name, trials, seed)

  def measure(trial: Trial) -> _TrialOutcome:
    post = trial.posterior
    locations = [a.locate(trial) for a in algorithms]
    maximizers = mpd_argmax_mask(post, d_grid)
    return _TrialOutcome(
      errors=np.array([distance(loc, trial.truth) for loc in locations]),
      successes=fstar_successes(post, trial.truth, d_grid, maximizers=maximizers),
      metrics=np.stack([posterior_metrics(post, loc, metrics, epsilon, d) for loc in locations]),
      attainable=int(maximizers.all(axis=1).sum())
    )

  outcomes, failures = run_trials(scenario, trials, seed, measure, executor)
  errors = np.stack([o.errors for o in outcomes]) if outcomes else np.empty((0, len(names)))
  curves = {
    name: ErrorCdfCurve.from_errors(errors[:, j], d_grid, failures, name) for j, name in enumerate(names)
  }
  envelope = envelope_curve(np.stack([o.successes for o in outcomes]), d_grid, failures)
  sizes = np.array([o.attainable for o in outcomes])
  table = table_from_samples(names, metrics, np.stack([o.metrics for o in outcomes]), failures)

  logger.info("Finished %d trials (%d failed)", len(outcomes), failures)
  return SuiteResult(
    curves=curves,
    fstar=envelope,
    theta={name: theta_area(curve, envelope) for name, curve in curves.items()},
    table=table,
    attainable_fraction=float((sizes > 0).mean()),
    mean_attainable_size=float(sizes.mean()),
    trials=len(outcomes),
    failures=failures
  )
