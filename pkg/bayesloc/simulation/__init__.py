from bayesloc.simulation.experiment import (
  ExperimentConfig,
  ExperimentResult,
  compare_curves,
  dominance_matrix,
  format_report,
  run_experiment,
  write_experiment
)
from bayesloc.simulation.fitting import PathLossFit, fit_pathloss
from bayesloc.simulation.learning import LearningCurve, learning_curve, split_scans, subsample_scans
from bayesloc.simulation.scenario import (
  FLOOR_PARAMS,
  Scenario,
  ScenarioMode,
  analytic_density,
  analytic_posterior,
  build_desk_scenario,
  build_fingerprint_scenario,
  build_linear_scenario,
  build_floor_scenario,
  build_symmetric_demo,
  pathloss_scenario,
  random_transmitters
)
from bayesloc.simulation.synthetic import NoiseProfile, OfficeSource, office_cells, office_source, synthesize_office_traces

__all__ = [
  "FLOOR_PARAMS",
  "ExperimentConfig",
  "ExperimentResult",
  "LearningCurve",
  "NoiseProfile",
  "OfficeSource",
  "PathLossFit",
  "Scenario",
  "ScenarioMode",
  "analytic_density",
  "analytic_posterior",
  "build_desk_scenario",
  "build_fingerprint_scenario",
  "build_linear_scenario",
  "build_floor_scenario",
  "build_symmetric_demo",
  "compare_curves",
  "dominance_matrix",
  "fit_pathloss",
  "format_report",
  "learning_curve",
  "office_cells",
  "office_source",
  "pathloss_scenario",
  "random_transmitters",
  "run_experiment",
  "split_scans",
  "subsample_scans",
  "synthesize_office_traces",
  "write_experiment"
]
