import logging
from concurrent.futures import Executor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from bayesloc.core.density import DensityGrid, posterior
from bayesloc.core.observation import ObservationVector
from bayesloc.estimators.engine import Estimate
from bayesloc.estimators.fingerprint import fing_estimate
from bayesloc.estimators.named import map_estimate, mede_estimate, mmse_estimate, mp_name, mpd_estimate
from bayesloc.evaluation.curves import ErrorCdfCurve, default_d_grid, fstar
from bayesloc.infra.model.fingerprint_model import FingerprintDb, fingerprint_train
from bayesloc.infra.model.pathloss_model import TransmitterSet
from bayesloc.infra.model.trace_dataset import TraceDataset
from bayesloc.infra.storage.fingerprint_store import save_fingerprint_db
from bayesloc.infra.storage.result_writer import write_columns, write_curve, write_manifest, write_posterior
from bayesloc.infra.storage.trace_reader import load_traces, write_traces
from bayesloc.simulation.experiment import ExperimentConfig, ExperimentResult, run_experiment
from bayesloc.simulation.fitting import PathLossFit, fit_pathloss
from bayesloc.simulation.learning import LearningCurve, learning_curve
from bayesloc.simulation.scenario import Scenario, analytic_posterior

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Localization:
    """
    Estimates for one observation.

    Attributes:
        estimates (list[Estimate]): MAP, MMSE, MEDE, MP(d), and FING when a
            fingerprint database is in use.
        posterior (DensityGrid): The posterior they were computed from.
    """
    estimates: list[Estimate]
    posterior: DensityGrid


class Service:
    """
    High-level application service: experiments, fingerprint training,
    localization and learning curves, with their artifacts.

    This layer hides file formats and the worker pool from the command line.
    """

    def __init__(self, executor: Executor | None = None):
        """
        Args:
            executor (Executor | None): Pool for Monte-Carlo trials and
                learning-curve repeats. Changes speed only, never results.
        """
        self._executor = executor

    def run_experiment(self, config: ExperimentConfig) -> ExperimentResult:
        """
        Evaluate the estimator suite on a scenario; artifacts go to config.out_dir.

        Returns:
            ExperimentResult: Curves, F*, areas, table, dominance and attainability.
        """
        return run_experiment(config, self._executor)

    def train_fingerprint(self, traces: Path, out: Path, bin_width: float, smoothing: float) -> FingerprintDb:
        """
        Train a fingerprint database from a trace CSV and save it as JSON.

        Raises:
            ParseError: If the trace file is malformed; the message names the line.
        """
        db = fingerprint_train(load_traces(traces), bin_width, smoothing)
        save_fingerprint_db(db, out)
        logger.info("Saved fingerprint database (%d locations, %d transmitters) to %s", len(db.locations), len(db.tx_ids), out)
        return db

    def localize(self, scenario: Scenario, observation: ObservationVector, d: float, posterior_out: Path | None = None) -> Localization:
        """
        Posterior and estimates for one observation.

        Args:
            scenario (Scenario): Prior and model; FING is added when it carries a database.
            observation (ObservationVector): The readings.
            d (float): Radius for MP(d), metres.
            posterior_out (Path | None): Where to dump the posterior as `x,y,mass`.

        Raises:
            UnknownTransmitter: If a reading names a transmitter the model lacks.
            NoCommonTransmitters: If FING shares no transmitter with the observation.
            AllZeroLikelihood: If the observation is impossible everywhere.
        """
        post = posterior(scenario.prior, scenario.model, observation)
        estimates = [map_estimate(post), mmse_estimate(post), mede_estimate(post), mpd_estimate(post, d)]
        if scenario.db is not None:
            estimates.append(fing_estimate(scenario.db, observation))
        if posterior_out is not None:
            write_posterior(posterior_out, post.grid.points, post.mass)
        return Localization(estimates, post)

    def localize_analytic(self, d: float, resolution: float = 0.001) -> Localization:
        """
        Estimates on the piecewise-linear 1-D demo posterior.

        Here d is a window width, so MP(d) captures the mass within d / 2 and
        lands at d / 6.
        """
        post = analytic_posterior(resolution)
        window = replace(mpd_estimate(post, d / 2), algorithm=mp_name(d))
        return Localization([map_estimate(post), mmse_estimate(post), mede_estimate(post), window], post)

    def fstar(self, scenario: Scenario, trials: int, seed: int, d_points: int, out: Path | None = None) -> ErrorCdfCurve:
        """
        Envelope of all error CDFs, written as `d,F` when out is given.
        """
        curve = fstar(scenario, default_d_grid(scenario.grid.d_star, d_points), trials, seed, self._executor)
        if out is not None:
            write_curve(out / "fstar.csv", curve.d_grid, curve.values)
            write_manifest(out / "manifest.txt", {
                "scenario": scenario.name,
                "trials": trials,
                "seed": seed,
                "d_points": d_points,
                "successful_trials": curve.trials,
                "failed_trials": curve.failures
            })
        return curve

    def learning_curve(
        self,
        data: TraceDataset,
        fractions: Sequence[float],
        repeats: int,
        seed: int,
        bin_width: float,
        smoothing: float,
        out: Path | None = None
    ) -> LearningCurve:
        """
        Mean error against training fraction, written as `fraction,<algorithm>...`
        with slopes in the manifest when out is given. The survey itself is
        saved next to it as `traces.csv`, so synthetic runs can be replayed.
        """
        curve = learning_curve(
            data,
            fractions,
            repeats,
            seed,
            bin_width=bin_width,
            smoothing=smoothing,
            executor=self._executor
        )
        if out is not None:
            write_traces(data, out / "traces.csv")
            write_columns(out / "learning_curve.csv", {"fraction": curve.fractions, **curve.mean_errors})
            write_manifest(out / "manifest.txt", {
                "repeats": repeats,
                "seed": seed,
                "bin_width": bin_width,
                "smoothing": smoothing,
                **{f"slope.{name}": slope for name, slope in curve.slopes.items()},
                "empty_cell_runs": curve.empty_cell_runs
            })
        return curve

    def fit_pathloss(self, traces: Path, txs: TransmitterSet, pt_dbm: float, d0: float) -> PathLossFit:
        """Fit K, eta and sigma from a trace CSV with known transmitter positions."""
        return fit_pathloss(load_traces(traces), txs, pt_dbm, d0)
