from concurrent.futures import Executor
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from bayesloc.core.density import DensityGrid
from bayesloc.core.errors import InsufficientData, InvalidParameters
from bayesloc.core.geometry import RADIUS_EPS, Location
from bayesloc.evaluation.algorithms import DEFAULT_D, DEFAULT_EPSILON, Localizer
from bayesloc.evaluation.trials import Trial, TrialSource, run_trials
from bayesloc.infra.storage.result_writer import format_table


class Metric(Enum):
  LIKELIHOOD = "Likelihood"
  P_EPSILON = "P(eps)"
  P_D = "P(d)"
  MSE = "MSE"
  EDE = "EDE"

  @property
  def higher_is_better(self) -> bool:
    return self in (Metric.LIKELIHOOD, Metric.P_EPSILON, Metric.P_D)


ALL_METRICS: tuple[Metric, ...] = tuple(Metric)


def posterior_metrics(post: DensityGrid, location: Location, metrics: Sequence[Metric], epsilon: float, d: float) -> NDArray[np.float64]:
  """
  Posterior-expected quality of one estimate.

  Likelihood is the posterior mass of the grid cell holding the estimate;
  P(eps) and P(d) are the mass within those radii; MSE and EDE are the
  expected squared and plain distance errors.
  """
  dist = post.grid.distances_from(location)
  out = np.empty(len(metrics))
  for j, metric in enumerate(metrics):
    if metric is Metric.LIKELIHOOD:
      out[j] = post.mass_at(location)
    elif metric is Metric.P_EPSILON:
      out[j] = post.mass[dist <= epsilon + RADIUS_EPS].sum()
    elif metric is Metric.P_D:
      out[j] = post.mass[dist <= d + RADIUS_EPS].sum()
    elif metric is Metric.MSE:
      out[j] = post.mass @ (dist * dist)
    else:
      out[j] = post.mass @ dist
  return out


@dataclass(frozen=True, eq=False)
class PerformanceTable:
  """
  Cross-metric comparison of algorithms.

  Normalized entries divide each column by its best raw value: the maximum
  for higher-is-better metrics, the minimum otherwise. The best entry of every
  column is exactly 1.0.

  Attributes:
      rows (tuple[str, ...]): Algorithm names.
      metrics (tuple[Metric, ...]): Column metrics.
      raw (NDArray): (rows, metrics) trial means.
      standard_errors (NDArray): Standard errors of the raw means.
      trials (int): Successful trials.
      failures (int): Failed trials.
  """
  rows: tuple[str, ...]
  metrics: tuple[Metric, ...]
  raw: NDArray[np.float64]
  standard_errors: NDArray[np.float64]
  trials: int
  failures: int = 0

  @property
  def columns(self) -> tuple[str, ...]:
    return tuple(m.value for m in self.metrics)

  @property
  def best(self) -> NDArray[np.float64]:
    return np.array([
      self.raw[:, j].max() if m.higher_is_better else self.raw[:, j].min()
      for j, m in enumerate(self.metrics)
    ])

  @property
  def normalized(self) -> NDArray[np.float64]:
    best = self.best
    with np.errstate(divide="ignore", invalid="ignore"):
      out = self.raw / best[None, :]
    # a column whose best is 0 (e.g. zero error everywhere) normalizes to 1
    out[:, best == 0] = 1.0
    return out

  @property
  def normalized_standard_errors(self) -> NDArray[np.float64]:
    best = self.best
    safe = np.where(best == 0, 1.0, best)
    return self.standard_errors / np.abs(safe)[None, :]

  def row(self, name: str) -> int:
    return self.rows.index(name)

  def column(self, metric: Metric) -> int:
    return self.metrics.index(metric)

  def value(self, name: str, metric: Metric, normalized: bool = True) -> float:
    table = self.normalized if normalized else self.raw
    return float(table[self.row(name), self.column(metric)])

  def best_row(self, metric: Metric) -> str:
    j = self.column(metric)
    column = self.raw[:, j]
    return self.rows[int(np.argmax(column) if metric.higher_is_better else np.argmin(column))]

  def to_text(self, normalized: bool = True) -> str:
    return format_table(self.rows, self.columns, self.normalized if normalized else self.raw)


def table_from_samples(rows: Sequence[str], metrics: Sequence[Metric], samples: NDArray[np.float64], failures: int = 0) -> PerformanceTable:
  """
  Build a table from per-trial metrics of shape (trials, rows, metrics).
  """
  if samples.size == 0:
    raise InsufficientData(f"No successful trial to build a performance table ({failures} failed)")
  if samples.ndim != 3:
    raise InvalidParameters(f"Need per-trial metrics of shape (trials, rows, metrics), got {samples.shape}")
  trials = samples.shape[0]
  se = samples.std(axis=0, ddof=1) / np.sqrt(trials) if trials > 1 else np.zeros(samples.shape[1:])
  return PerformanceTable(tuple(rows), tuple(metrics), samples.mean(axis=0), se, trials, failures)


def performance_table(
  scenario: TrialSource,
  algorithms: Sequence[Localizer],
  metrics: Sequence[Metric] = ALL_METRICS,
  trials: int = 2000,
  seed: int = 0,
  epsilon: float = DEFAULT_EPSILON,
  d: float = DEFAULT_D,
  executor: Executor | None = None
) -> PerformanceTable:
  """
  Average posterior-expected metrics of each algorithm's estimate over seeded trials.

  Raises:
      InvalidParameters: If epsilon or d is not positive.
  """
  if not (epsilon > 0 and d > 0):
    raise InvalidParameters(f"epsilon and d must be > 0, got {epsilon}, {d}")
  metrics = tuple(metrics)

  def measure(trial: Trial) -> NDArray[np.float64]:
    return np.stack([
      posterior_metrics(trial.posterior, algo.locate(trial), metrics, epsilon, d) for algo in algorithms
    ])

  samples, failures = run_trials(scenario, trials, seed, measure, executor)
  return table_from_samples([a.name for a in algorithms], metrics, np.asarray(samples), failures)
