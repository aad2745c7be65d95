import logging
from concurrent.futures import Executor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from bayesloc.core.errors import InvalidParameters
from bayesloc.estimators.cost import WithinRadius
from bayesloc.evaluation.algorithms import DEFAULT_D, DEFAULT_EPSILON, FingLocalizer, Localizer, bayes_suite
from bayesloc.evaluation.attainability import UnattainabilityReport, unattainability_evidence
from bayesloc.evaluation.curves import DEFAULT_D_POINTS, default_d_grid
from bayesloc.evaluation.dominance import Dominance, DominanceVerdict, dominance, witness_costs
from bayesloc.evaluation.suite import SuiteResult, evaluate_suite
from bayesloc.infra.model.pathloss_model import PathLossModel
from bayesloc.infra.storage.result_writer import write_curves, write_manifest, write_table_csv, write_text
from bayesloc.infra.storage.trace_reader import write_transmitters
from bayesloc.simulation.scenario import Scenario

logger = logging.getLogger(__name__)

CURVES_FILE = "curves.csv"
FSTAR_FILE = "fstar.csv"
TABLE_CSV_FILE = "table.csv"
TABLE_TEXT_FILE = "table.txt"
REPORT_FILE = "report.txt"
MANIFEST_FILE = "manifest.txt"
TRANSMITTERS_FILE = "transmitters.csv"


@dataclass(frozen=True)
class ExperimentConfig:
  """
  One Monte-Carlo experiment.

  Attributes:
      scenario (Scenario): Where and how trials are drawn.
      trials (int): Number of trials, >= 1.
      seed (int): Master seed; fixes every trial.
      epsilon (float): Small radius for MP(epsilon), metres.
      d (float): Large radius for MP(d), metres.
      d_points (int): Number of error distances on [0, d*].
      out_dir (Path | None): Where artifacts go; nothing is written when None.
      scenario_seed (int | None): Seed that placed the scenario's transmitters,
          recorded in the manifest.
  """
  scenario: Scenario
  trials: int
  seed: int
  epsilon: float = DEFAULT_EPSILON
  d: float = DEFAULT_D
  d_points: int = DEFAULT_D_POINTS
  out_dir: Path | None = None
  scenario_seed: int | None = None

  def __post_init__(self):
    if self.trials < 1:
      raise InvalidParameters(f"trials must be >= 1, got {self.trials}")
    if not (self.epsilon > 0 and self.d > 0):
      raise InvalidParameters(f"epsilon and d must be > 0, got {self.epsilon}, {self.d}")
    if self.d_points < 2:
      raise InvalidParameters(f"d_points must be >= 2, got {self.d_points}")

  @property
  def d_grid(self) -> NDArray[np.float64]:
    return default_d_grid(self.scenario.grid.d_star, self.d_points)

  def algorithms(self) -> list[Localizer]:
    """The Bayesian suite, plus FING when the scenario carries a fingerprint database."""
    suite: list[Localizer] = list(bayes_suite(self.epsilon, self.d))
    if self.scenario.db is not None:
      suite.append(FingLocalizer(self.scenario.db))
    return suite

  def manifest(self) -> dict[str, object]:
    scenario = self.scenario
    entries: dict[str, object] = {
      "scenario": scenario.name,
      "mode": scenario.mode.value,
      "grid_points": scenario.grid.size,
      "resolution": scenario.grid.resolution,
      "d_star": scenario.grid.d_star,
      "trials": self.trials,
      "seed": self.seed,
      "epsilon": self.epsilon,
      "d": self.d,
      "d_points": self.d_points
    }
    if self.scenario_seed is not None:
      entries["scenario_seed"] = self.scenario_seed
    if scenario.params is not None:
      p = scenario.params
      entries.update({"pt_dbm": p.pt_dbm, "k_db": p.k_db, "eta": p.eta, "sigma_db": p.sigma_db, "d0": p.d0})
    if scenario.txs is not None:
      for tx_id, loc in scenario.txs:
        entries[f"tx.{tx_id}"] = f"{loc.x:.10g},{loc.y:.10g}"
    return entries


@dataclass(frozen=True)
class ExperimentResult:
  """
  Attributes:
      suite (SuiteResult): Curves, F*, areas, table and attainability statistics.
      verdicts (dict[tuple[str, str], DominanceVerdict]): Dominance of the first
          algorithm over the second, for every ordered pair in suite order.
      witnesses (dict[tuple[str, str], tuple[WithinRadius, WithinRadius]]):
          Opposite-ranking radius costs for every incomparable pair.
      unattainability (UnattainabilityReport | None): Evidence from the MEDE
          curve, when MEDE is in the suite.
      paths (dict[str, Path]): Written artifacts by kind.
  """
  suite: SuiteResult
  verdicts: dict[tuple[str, str], DominanceVerdict]
  witnesses: dict[tuple[str, str], tuple[WithinRadius, WithinRadius]]
  unattainability: UnattainabilityReport | None
  paths: dict[str, Path] = field(default_factory=dict)

  def verdict(self, a: str, b: str) -> Dominance:
    return self.verdicts[(a, b)].kind


def compare_curves(suite: SuiteResult) -> tuple[dict[tuple[str, str], DominanceVerdict], dict[tuple[str, str], tuple[WithinRadius, WithinRadius]]]:
  """Pairwise dominance verdicts, both orders, and witness costs for incomparable pairs."""
  verdicts: dict[tuple[str, str], DominanceVerdict] = {}
  witnesses: dict[tuple[str, str], tuple[WithinRadius, WithinRadius]] = {}
  for a, b in combinations(suite.curves, 2):
    verdicts[(a, b)] = dominance(suite.curves[a], suite.curves[b])
    verdicts[(b, a)] = dominance(suite.curves[b], suite.curves[a])
    if verdicts[(a, b)].kind is Dominance.INCOMPARABLE:
      witnesses[(a, b)] = witness_costs(suite.curves[a], suite.curves[b])
  for name, curve in suite.curves.items():
    verdicts[(name, name)] = dominance(curve, curve)
  return verdicts, witnesses


def dominance_matrix(names: list[str], verdicts: dict[tuple[str, str], DominanceVerdict]) -> pd.DataFrame:
  """Verdict of the row algorithm against the column algorithm."""
  return pd.DataFrame([[verdicts[(a, b)].kind.value for b in names] for a in names], index=names, columns=names)


def format_report(result: ExperimentResult) -> str:
  """Plain-text summary: dominance matrix, areas to F*, witnesses and attainability."""
  suite = result.suite
  names = list(suite.curves)
  lines = [
    f"trials: {suite.trials} ({suite.failures} failed)",
    "",
    "dominance (row vs column):",
    dominance_matrix(names, result.verdicts).to_string(),
    "",
    "area between F* and each curve (m):"
  ]
  lines += [f"  {name}: {theta:.6f}" for name, theta in suite.theta.items()]
  if result.witnesses:
    lines += ["", "witness costs for incomparable pairs (step radius, m):"]
    for (a, b), (g1, g2) in result.witnesses.items():
      lines.append(f"  {a} vs {b}: {a} wins at {g1.radius:.6g}, {b} wins at {g2.radius:.6g}")
  lines += [
    "",
    f"attainable fraction: {suite.attainable_fraction:.6f}",
    f"mean attainable set size: {suite.mean_attainable_size:.6f}"
  ]
  if result.unattainability is not None:
    report = result.unattainability
    witnesses = ", ".join(report.witnesses) or "none"
    lines.append(f"F* unattainable: {'yes' if report.unattainable else 'not shown'} (MEDE fails to dominate: {witnesses})")
  return "\n".join(lines) + "\n"


def run_experiment(config: ExperimentConfig, executor: Executor | None = None) -> ExperimentResult:
  """
  Evaluate the suite on the configured scenario and write its artifacts.

  Outputs depend only on the config: the same config writes byte-identical
  files whatever the executor.

  Args:
      config (ExperimentConfig): The experiment.
      executor (Executor | None): Pool to spread trials over.

  Returns:
      ExperimentResult: Everything computed, with the written paths.
  """
  algorithms = config.algorithms()
  suite = evaluate_suite(
    config.scenario,
    algorithms,
    config.trials,
    config.seed,
    d_grid=config.d_grid,
    epsilon=config.epsilon,
    d=config.d,
    executor=executor
  )
  verdicts, witnesses = compare_curves(suite)
  evidence = None
  if "MEDE" in suite.curves:
    others = [curve for name, curve in suite.curves.items() if name != "MEDE"]
    evidence = unattainability_evidence(suite.curves["MEDE"], others)
  result = ExperimentResult(suite, verdicts, witnesses, evidence)
  if config.out_dir is not None:
    result.paths.update(write_experiment(config, result, Path(config.out_dir)))
  return result


def write_experiment(config: ExperimentConfig, result: ExperimentResult, out_dir: Path) -> dict[str, Path]:
  """
  Write curves, F*, the performance table, the report and the manifest under
  out_dir, plus the transmitter layout for path-loss scenarios.
  """
  suite = result.suite
  paths = {
    "curves": out_dir / CURVES_FILE,
    "fstar": out_dir / FSTAR_FILE,
    "table_csv": out_dir / TABLE_CSV_FILE,
    "table_text": out_dir / TABLE_TEXT_FILE,
    "report": out_dir / REPORT_FILE,
    "manifest": out_dir / MANIFEST_FILE
  }
  write_curves(paths["curves"], suite.d_grid, {name: curve.values for name, curve in suite.curves.items()})
  write_curves(paths["fstar"], suite.d_grid, {"F*": suite.fstar.values})
  table = suite.table
  write_table_csv(paths["table_csv"], table.rows, table.columns, table.normalized)
  write_text(paths["table_text"], table.to_text())
  write_text(paths["report"], format_report(result))
  write_manifest(paths["manifest"], {**config.manifest(), "successful_trials": suite.trials, "failed_trials": suite.failures})
  if isinstance(config.scenario.model, PathLossModel):
    paths["transmitters"] = out_dir / TRANSMITTERS_FILE
    write_transmitters(config.scenario.model.txs, paths["transmitters"])
  logger.info("Wrote experiment artifacts to %s", out_dir)
  return paths
