import logging
from concurrent.futures import Executor
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from bayesloc.core.density import DensityGrid
from bayesloc.core.errors import GridMismatch, InsufficientData, InvalidParameters
from bayesloc.core.geometry import RADIUS_EPS, Location, distance
from bayesloc.estimators.cost import CostFunction, WithinRadius
from bayesloc.estimators.engine import TIE_TOL
from bayesloc.estimators.named import mpd_argmax_mask
from bayesloc.evaluation.algorithms import Localizer
from bayesloc.evaluation.trials import Trial, TrialSource, run_trials

logger = logging.getLogger(__name__)

DEFAULT_D_POINTS = 64


def default_d_grid(d_star: float, points: int = DEFAULT_D_POINTS) -> NDArray[np.float64]:
  """Evenly spaced error distances on [0, d_star]."""
  return np.linspace(0.0, d_star, points)


@dataclass(frozen=True, eq=False)
class ErrorCdfCurve:
  """
  Estimated error CDF: F(d) = P(error <= d) on a grid of distances.

  Attributes:
      d_grid (NDArray): Sorted distances in metres, starting at 0.
      values (NDArray): Nondecreasing probabilities in [0, 1].
      trials (int): Successful trials behind the estimate.
      failures (int): Trials excluded because they failed.
      name (str): Algorithm name.
  """
  d_grid: NDArray[np.float64]
  values: NDArray[np.float64]
  trials: int
  failures: int = 0
  name: str = ""

  def __post_init__(self):
    d_grid = np.array(self.d_grid, dtype=np.float64, copy=True)
    values = np.array(self.values, dtype=np.float64, copy=True)
    if d_grid.ndim != 1 or d_grid.size == 0 or values.shape != d_grid.shape:
      raise InvalidParameters(f"Curve needs matching 1-D grid and values, got {d_grid.shape} and {values.shape}")
    if d_grid[0] != 0 or np.any(np.diff(d_grid) <= 0):
      raise InvalidParameters("Curve distances must start at 0 and strictly increase")
    if np.any(values < 0) or np.any(values > 1) or np.any(np.diff(values) < -1e-12):
      raise InvalidParameters("Curve values must be nondecreasing probabilities")
    if self.trials < 1:
      raise InvalidParameters(f"A curve needs at least one trial, got {self.trials}")
    d_grid.setflags(write=False)
    values.setflags(write=False)
    object.__setattr__(self, "d_grid", d_grid)
    object.__setattr__(self, "values", values)

  @classmethod
  def from_errors(cls, errors: NDArray[np.float64], d_grid: NDArray[np.float64], failures: int = 0, name: str = "") -> "ErrorCdfCurve":
    """
    Empirical CDF of observed errors.

    Raises:
        InsufficientData: If there are no errors, i.e. every trial failed.
    """
    errors = np.sort(np.asarray(errors, dtype=np.float64))
    if errors.size == 0:
      raise InsufficientData(f"No successful trial to build the {name or 'error'} curve ({failures} failed)")
    counts = np.searchsorted(errors, np.asarray(d_grid) + RADIUS_EPS, side="right")
    return cls(d_grid, counts / errors.size, errors.size, failures, name)

  @property
  def d_star(self) -> float:
    return float(self.d_grid[-1])

  @property
  def failure_fraction(self) -> float:
    return self.failures / (self.trials + self.failures)

  def at(self, d: float) -> float:
    """F at the largest grid distance not above d."""
    i = int(np.searchsorted(self.d_grid, d + RADIUS_EPS, side="right")) - 1
    return float(self.values[max(i, 0)])

  def standard_error(self) -> NDArray[np.float64]:
    """Binomial standard error per grid distance."""
    return np.sqrt(self.values * (1.0 - self.values) / self.trials)

  def check_same_grid(self, other: "ErrorCdfCurve") -> None:
    """
    Raises:
        GridMismatch: If the two curves use different distance grids.
    """
    if self.d_grid.shape != other.d_grid.shape or not np.allclose(self.d_grid, other.d_grid, rtol=0, atol=1e-12):
      raise GridMismatch(f"Curves {self.name!r} and {other.name!r} use different distance grids")


def error_cdf(
  algorithm: Localizer,
  scenario: TrialSource,
  trials: int,
  seed: int,
  d_grid: NDArray[np.float64] | None = None,
  executor: Executor | None = None
) -> ErrorCdfCurve:
  """
  Monte-Carlo error CDF of one algorithm.

  Each trial draws a truth from the prior, an observation from the model and
  records the distance between the algorithm's answer and the truth.
  Failed trials are excluded and counted.
  """
  d_grid = default_d_grid(scenario.prior.grid.d_star) if d_grid is None else np.asarray(d_grid, dtype=np.float64)

  def measure(trial: Trial) -> float:
    return distance(algorithm.locate(trial), trial.truth)

  errors, failures = run_trials(scenario, trials, seed, measure, executor)
  return ErrorCdfCurve.from_errors(np.asarray(errors), d_grid, failures, algorithm.name)


def fstar_successes(
  post: DensityGrid,
  truth: Location,
  d_grid: NDArray[np.float64],
  tol: float = TIE_TOL,
  maximizers: NDArray[np.bool_] | None = None
) -> NDArray[np.bool_]:
  """
  For each d, whether the MP(d) estimate of this posterior lies within d of the truth.

  d = 0 uses the posterior mode, the limit of MP(d) as d shrinks. A
  precomputed MP(d) maximizer mask over d_grid can be passed in.
  """
  if maximizers is None:
    maximizers = mpd_argmax_mask(post, d_grid, tol)
  # argmax on a boolean column picks the first maximizer in grid order
  winners = maximizers.argmax(axis=0)
  errors = post.grid.distances_from(truth)[winners]
  return errors <= d_grid + RADIUS_EPS


def envelope_curve(successes: NDArray[np.bool_], d_grid: NDArray[np.float64], failures: int = 0) -> ErrorCdfCurve:
  """
  F* from per-trial success indicators.

  The pointwise success rate is made monotone with a running maximum, since
  the envelope of CDFs cannot decrease.

  Raises:
      InsufficientData: If there are no successful trials.
  """
  if successes.shape[0] == 0:
    raise InsufficientData(f"No successful trial to build F* ({failures} failed)")
  rates = np.maximum.accumulate(successes.mean(axis=0))
  return ErrorCdfCurve(d_grid, np.minimum(rates, 1.0), successes.shape[0], failures, "F*")


def fstar(
  scenario: TrialSource,
  d_grid: NDArray[np.float64] | None,
  trials: int,
  seed: int,
  executor: Executor | None = None
) -> ErrorCdfCurve:
  """
  Upper envelope of all error CDFs.

  Per trial the posterior is computed once; for every d the MP(d) estimate is
  scored a success when it lands within d of the truth.
  """
  d_grid = default_d_grid(scenario.prior.grid.d_star) if d_grid is None else np.asarray(d_grid, dtype=np.float64)
  if d_grid.min() < 0:
    raise InvalidParameters("F* distances must be >= 0")

  def measure(trial: Trial) -> NDArray[np.bool_]:
    return fstar_successes(trial.posterior, trial.truth, d_grid)

  rows, failures = run_trials(scenario, trials, seed, measure, executor)
  return envelope_curve(np.asarray(rows, dtype=bool).reshape(len(rows), d_grid.size), d_grid, failures)


def expected_cost_from_curve(curve: ErrorCdfCurve, g: CostFunction) -> float:
  """
  E[g(D)] for an error D distributed as the curve.

  A radius cost is 1 - F(radius). Any other monotone cost uses the
  Stieltjes sum of g at each grid distance times the CDF increment there; mass
  the curve leaves above its last distance is charged at that distance.
  """
  if isinstance(g, WithinRadius):
    return 1.0 - curve.at(g.radius)
  increments = np.diff(curve.values, prepend=0.0)
  costs = np.asarray(g(curve.d_grid), dtype=np.float64)
  return float(costs @ increments + costs[-1] * (1.0 - curve.values[-1]))


def theta_area(a: ErrorCdfCurve, fstar_curve: ErrorCdfCurve, tolerance: float | None = None) -> float:
  """
  Area between F* and an algorithm's curve over [0, d*].

  Monte-Carlo noise can push the area slightly below zero. Values below
  -tolerance are clamped there with a warning; the default tolerance is the
  area of the two-standard-error band of the algorithm's curve.

  Raises:
      GridMismatch: If the curves use different distance grids.
  """
  a.check_same_grid(fstar_curve)
  area = float(np.trapezoid(fstar_curve.values - a.values, a.d_grid))
  if tolerance is None:
    tolerance = theta_tolerance(a)
  if area < -tolerance:
    logger.warning("Area for %s is %.6g, below -%.6g; clamped", a.name or "curve", area, tolerance)
    return -tolerance
  return area


def theta_tolerance(curve: ErrorCdfCurve, factor: float = 2.0) -> float:
  """Area under `factor` standard errors of a curve."""
  return float(np.trapezoid(factor * curve.standard_error(), curve.d_grid))
