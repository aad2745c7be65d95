from dataclasses import dataclass, field
from typing import Callable, Protocol

from bayesloc.core.density import DensityGrid
from bayesloc.core.geometry import Location
from bayesloc.estimators import Estimate, fing_estimate, map_estimate, mede_estimate, mmse_estimate, mp_name, mpd_estimate
from bayesloc.evaluation.trials import Trial
from bayesloc.infra.index import FaissFingerprintIndex
from bayesloc.infra.model.fingerprint_model import FingerprintDb

DEFAULT_EPSILON = 0.5
DEFAULT_D = 3.0


class Localizer(Protocol):
  """A localization algorithm under evaluation."""
  name: str

  def locate(self, trial: Trial) -> Location:
    ...


@dataclass(frozen=True)
class PosteriorLocalizer:
  """Runs an estimator on the trial's posterior."""
  name: str
  estimator: Callable[[DensityGrid], Estimate]

  def locate(self, trial: Trial) -> Location:
    return self.estimator(trial.posterior).location


@dataclass(frozen=True)
class FixedLocalizer:
  """Always answers the same location; a reference for curve checks."""
  name: str
  location: Location

  def locate(self, trial: Trial) -> Location:
    return self.location


@dataclass(frozen=True)
class FingLocalizer:
  """Nearest-fingerprint baseline; ignores the posterior."""
  db: FingerprintDb
  name: str = "FING"
  _index: FaissFingerprintIndex = field(init=False, repr=False, compare=False)

  def __post_init__(self):
    object.__setattr__(self, "_index", FaissFingerprintIndex(self.db))

  def locate(self, trial: Trial) -> Location:
    return fing_estimate(self.db, trial.observation, self._index).location


def map_localizer() -> PosteriorLocalizer:
  return PosteriorLocalizer("MAP", map_estimate)


def mmse_localizer() -> PosteriorLocalizer:
  return PosteriorLocalizer("MMSE", mmse_estimate)


def mede_localizer() -> PosteriorLocalizer:
  return PosteriorLocalizer("MEDE", mede_estimate)


def mpd_localizer(d: float) -> PosteriorLocalizer:
  return PosteriorLocalizer(mp_name(d), lambda post: mpd_estimate(post, d))


def bayes_suite(epsilon: float = DEFAULT_EPSILON, d: float = DEFAULT_D) -> list[PosteriorLocalizer]:
  """MAP, MP(epsilon), MP(d), MMSE and MEDE, in that order."""
  suite = [map_localizer(), mpd_localizer(epsilon)]
  if d != epsilon:
    suite.append(mpd_localizer(d))
  suite += [mmse_localizer(), mede_localizer()]
  return suite
