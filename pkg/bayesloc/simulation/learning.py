import logging
from collections import defaultdict
from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray
from scipy import stats

from bayesloc.core.density import posterior, uniform_prior
from bayesloc.core.errors import InsufficientData, InvalidParameters
from bayesloc.core.geometry import Location, distance
from bayesloc.estimators.fingerprint import fing_estimate
from bayesloc.estimators.named import map_estimate, mede_estimate, mmse_estimate
from bayesloc.infra.index import FaissFingerprintIndex
from bayesloc.infra.model.fingerprint_model import (
  DEFAULT_BIN_WIDTH,
  DEFAULT_SMOOTHING,
  FingerprintModel,
  fingerprint_train
)
from bayesloc.infra.model.trace_dataset import Scan, TraceDataset

logger = logging.getLogger(__name__)

TEST_FRACTION = 0.1
DEFAULT_FRACTIONS = (0.2, 0.4, 0.6, 0.8, 1.0)
DEFAULT_REPEATS = 100
LEARNING_ALGORITHMS = ("MAP", "MMSE", "MEDE", "FING")

_POSTERIOR_ESTIMATORS = {
  "MAP": map_estimate,
  "MMSE": mmse_estimate,
  "MEDE": mede_estimate
}


def _by_location(scans: Sequence[Scan]) -> list[list[Scan]]:
  groups: dict = defaultdict(list)
  for scan in scans:
    groups[scan.location].append(scan)
  return list(groups.values())


def split_scans(scans: Sequence[Scan], rng: np.random.Generator, test_fraction: float = TEST_FRACTION) -> tuple[list[Scan], list[Scan]]:
  """
  Random train/test split, stratified by survey location.

  Each location with at least two scans gives round(test_fraction * n) of
  them, and at least one, to the test side.

  Returns:
      tuple[list[Scan], list[Scan]]: Train and test scans, in input order.
  """
  if not 0 < test_fraction < 1:
    raise InvalidParameters(f"test_fraction must be in (0, 1), got {test_fraction}")
  position = {id(scan): i for i, scan in enumerate(scans)}
  test_ids: set[int] = set()
  for group in _by_location(scans):
    if len(group) < 2:
      continue
    count = max(1, int(round(test_fraction * len(group))))
    for j in rng.permutation(len(group))[:count]:
      test_ids.add(id(group[j]))
  train = [s for s in scans if id(s) not in test_ids]
  test = sorted((s for s in scans if id(s) in test_ids), key=lambda s: position[id(s)])
  return train, test


def subsample_scans(scans: Sequence[Scan], fraction: float, rng: np.random.Generator) -> list[Scan]:
  """Keep round(fraction * n) scans of every location, at least one."""
  kept = []
  for group in _by_location(scans):
    count = max(1, int(round(fraction * len(group))))
    kept.extend(group[j] for j in np.sort(rng.permutation(len(group))[:count]))
  return kept


@dataclass(frozen=True)
class LearningCurve:
  """
  Mean localization error against the share of training data used.

  Attributes:
      fractions (NDArray): Training fractions, in the order given.
      mean_errors (dict[str, NDArray]): Per algorithm, mean error in metres per fraction.
      slopes (dict[str, float]): Least-squares slope of mean error on fraction;
          NaN with a single fraction.
      repeats (int): Random splits averaged per fraction.
      empty_cell_runs (int): Trainings where subsampling emptied a (location,
          transmitter) cell; those transmitters were skipped for that training.
  """
  fractions: NDArray[np.float64]
  mean_errors: dict[str, NDArray[np.float64]]
  slopes: dict[str, float]
  repeats: int
  empty_cell_runs: int


def _heard_cells(scans: Sequence[Scan]) -> set[tuple[Location, str]]:
  return {(scan.location, tx_id) for scan in scans for tx_id in scan.observation.tx_ids}


def _evaluate(
  train: Sequence[Scan],
  test: Sequence[Scan],
  algorithms: Sequence[str],
  bin_width: float,
  smoothing: float,
  skipped: frozenset[str] = frozenset()
) -> NDArray[np.float64]:
  """
  Mean error of each algorithm on the test scans, with the skipped
  transmitters removed from every test observation.

  Raises:
      InsufficientData: If a test scan heard only skipped transmitters.
  """
  db = fingerprint_train(TraceDataset.from_scans(train), bin_width, smoothing)
  model = FingerprintModel(db)
  prior = uniform_prior(db.grid)
  index = FaissFingerprintIndex(db) if "FING" in algorithms else None
  needs_posterior = any(name in _POSTERIOR_ESTIMATORS for name in algorithms)
  errors = np.zeros((len(test), len(algorithms)))
  for i, scan in enumerate(test):
    kept = [tx_id for tx_id in scan.observation.tx_ids if tx_id not in skipped]
    if not kept:
      raise InsufficientData(f"Test scan at {scan.location} heard only transmitters with emptied cells {sorted(skipped)}")
    o = scan.observation.restricted_to(kept) if skipped else scan.observation
    post = posterior(prior, model, o) if needs_posterior else None
    for j, name in enumerate(algorithms):
      if name == "FING":
        location = fing_estimate(db, o, index).location
      else:
        location = _POSTERIOR_ESTIMATORS[name](post).location
      errors[i, j] = distance(location, scan.location)
  return errors.mean(axis=0)


def learning_curve(
  data: TraceDataset,
  fractions: Sequence[float] = DEFAULT_FRACTIONS,
  repeats: int = DEFAULT_REPEATS,
  seed: int = 0,
  algorithms: Sequence[str] = LEARNING_ALGORITHMS,
  bin_width: float = DEFAULT_BIN_WIDTH,
  smoothing: float = DEFAULT_SMOOTHING,
  executor: Executor | None = None
) -> LearningCurve:
  """
  Error of fingerprint-trained estimators as the training set grows.

  Every repeat holds out a stratified 10% of the scans for testing, then
  trains on each fraction of the rest and records the mean error of each
  algorithm on the held-out scans. Repeat r draws from a generator seeded
  with (seed, r), so results do not depend on the executor.

  Args:
      data (TraceDataset): Survey traces.
      fractions (Sequence[float]): Training fractions in (0, 1].
      repeats (int): Random splits per fraction, >= 1.
      seed (int): Master seed.
      algorithms (Sequence[str]): Subset of MAP, MMSE, MEDE and FING.
      bin_width (float): Histogram bin width in dB.
      smoothing (float): Histogram smoothing mass.
      executor (Executor | None): Pool to spread repeats over.

  Returns:
      LearningCurve: Mean errors and slopes per algorithm.

  Raises:
      InvalidParameters: If fractions, repeats or algorithms are invalid.
      InsufficientData: If the data has too few scans for a test split, or a
          test scan heard only transmitters whose cells subsampling emptied.
  """
  fractions = np.asarray(fractions, dtype=np.float64)
  if fractions.size == 0 or np.any(fractions <= 0) or np.any(fractions > 1):
    raise InvalidParameters(f"fractions must be a nonempty subset of (0, 1], got {fractions.tolist()}")
  if repeats < 1:
    raise InvalidParameters(f"repeats must be >= 1, got {repeats}")
  algorithms = tuple(algorithms)
  unknown = [a for a in algorithms if a != "FING" and a not in _POSTERIOR_ESTIMATORS]
  if not algorithms or unknown:
    raise InvalidParameters(f"algorithms must be chosen from {list(LEARNING_ALGORITHMS)}, got {list(algorithms)}")
  scans = data.scans()

  def one(repeat: int) -> tuple[NDArray[np.float64], int]:
    rng = np.random.default_rng([seed, repeat])
    train, test = split_scans(scans, rng)
    if not test:
      raise InsufficientData("Every survey location has a single scan; nothing to hold out")
    heard = _heard_cells(train)
    rows, empty = [], 0
    for fraction in fractions:
      subset = subsample_scans(train, fraction, rng)
      lost = heard - _heard_cells(subset)
      if lost:
        logger.debug("Repeat %d, fraction %g: skipping cells %s", repeat, fraction, sorted(lost, key=str))
        empty += 1
      skipped = frozenset(tx_id for _, tx_id in lost)
      rows.append(_evaluate(subset, test, algorithms, bin_width, smoothing, skipped))
    return np.stack(rows), empty

  logger.info("Learning curve over fractions %s, %d repeats, seed %d", fractions.tolist(), repeats, seed)
  mapped = executor.map(one, range(repeats)) if executor is not None else map(one, range(repeats))
  results = list(mapped)
  means = np.mean([r[0] for r in results], axis=0)
  empty_runs = sum(r[1] for r in results)
  if empty_runs:
    logger.warning("%d trainings left (location, transmitter) cells empty after subsampling; their transmitters were skipped", empty_runs)

  mean_errors = {name: means[:, j] for j, name in enumerate(algorithms)}
  slopes = {
    name: float(stats.linregress(fractions, values).slope) if np.unique(fractions).size > 1 else float("nan")
    for name, values in mean_errors.items()
  }
  return LearningCurve(fractions, mean_errors, slopes, repeats, empty_runs)
