import logging
from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Callable, Protocol, TypeVar

import numpy as np

from bayesloc.core.density import DensityGrid, posterior
from bayesloc.core.errors import AllZeroLikelihood, InvalidParameters, SingularDistance
from bayesloc.core.geometry import Location
from bayesloc.core.observation import ObservationVector
from bayesloc.infra.model.observation_model import ObservationModel

logger = logging.getLogger(__name__)

T = TypeVar("T")


class TrialSource(Protocol):
  """Anything that supplies a prior over locations and a model of observations."""
  name: str
  prior: DensityGrid
  model: ObservationModel


@dataclass(frozen=True)
class Trial:
  """
  One Monte-Carlo draw: a true location, an observation there, and the
  posterior it induces.
  """
  index: int
  truth: Location
  truth_index: int
  observation: ObservationVector
  posterior: DensityGrid


def trial_rng(seed: int, index: int) -> np.random.Generator:
  """Generator for one trial, derived from the master seed and the trial index."""
  return np.random.default_rng([seed, index])


def draw_trial(source: TrialSource, seed: int, index: int) -> Trial:
  """
  Draw the index-th trial of a run.

  Raises:
      AllZeroLikelihood: If the observation is impossible everywhere.
      SingularDistance: If the truth sits on a transmitter.
  """
  rng = trial_rng(seed, index)
  prior = source.prior
  truth_index = int(rng.choice(prior.grid.size, p=prior.mass))
  truth = prior.grid.location(truth_index)
  observation = source.model.sample(truth, rng)
  return Trial(
    index=index,
    truth=truth,
    truth_index=truth_index,
    observation=observation,
    posterior=posterior(prior, source.model, observation)
  )


def run_trials(
  source: TrialSource,
  trials: int,
  seed: int,
  evaluate: Callable[[Trial], T],
  executor: Executor | None = None
) -> tuple[list[T], int]:
  """
  Run independent trials and evaluate each one.

  Results come back in trial order whatever the executor, so outputs depend
  only on the seed.

  Args:
      source (TrialSource): Prior and observation model.
      trials (int): Number of trials, >= 1.
      seed (int): Master seed.
      evaluate (Callable[[Trial], T]): Per-trial measurement.
      executor (Executor | None): Pool to spread trials over.

  Returns:
      tuple[list[T], int]: Results of successful trials, and the failure count.
  """
  if trials < 1:
    raise InvalidParameters(f"trials must be >= 1, got {trials}")

  def one(index: int) -> T | None:
    try:
      trial = draw_trial(source, seed, index)
    except (AllZeroLikelihood, SingularDistance) as exc:
      logger.debug("Trial %d failed: %s", index, exc)
      return None
    return evaluate(trial)

  mapped = executor.map(one, range(trials)) if executor is not None else map(one, range(trials))
  outcomes = list(mapped)
  results = [r for r in outcomes if r is not None]
  failures = trials - len(results)
  if failures:
    logger.warning("%d of %d trials failed and were excluded", failures, trials)
  return results, failures
