import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from bayesloc.application import build_container, configure_logging
from bayesloc.application.config import Config
from bayesloc.application.service import Localization, Service
from bayesloc.core.errors import BayeslocError
from bayesloc.core.geometry import Space
from bayesloc.core.observation import ObservationVector
from bayesloc.evaluation.algorithms import DEFAULT_D, DEFAULT_EPSILON
from bayesloc.evaluation.curves import DEFAULT_D_POINTS
from bayesloc.infra.model.fingerprint_model import DEFAULT_BIN_WIDTH, DEFAULT_SMOOTHING
from bayesloc.infra.model.pathloss_model import PathLossParams, TransmitterSet
from bayesloc.infra.storage.fingerprint_store import load_fingerprint_db
from bayesloc.infra.storage.trace_reader import load_traces, load_transmitters
from bayesloc.simulation.experiment import ExperimentConfig, format_report
from bayesloc.simulation.learning import DEFAULT_FRACTIONS, DEFAULT_REPEATS
from bayesloc.simulation.scenario import (
  Scenario,
  build_desk_scenario,
  build_fingerprint_scenario,
  build_linear_scenario,
  build_floor_scenario,
  build_symmetric_demo,
  pathloss_scenario,
  random_transmitters
)
from bayesloc.simulation.synthetic import NoiseProfile, synthesize_office_traces

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

DEMO_WINDOW = 0.6


def _positive_int(text: str) -> int:
  try:
    value = int(text)
  except ValueError:
    raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
  if value < 1:
    raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
  return value


def _nonnegative_int(text: str) -> int:
  try:
    value = int(text)
  except ValueError:
    raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
  if value < 0:
    raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
  return value


def _positive_float(text: str) -> float:
  try:
    value = float(text)
  except ValueError:
    raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
  if not (value > 0 and value != float("inf")):
    raise argparse.ArgumentTypeError(f"must be finite and > 0, got {text}")
  return value


def _finite_float(text: str) -> float:
  try:
    value = float(text)
  except ValueError:
    raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
  if value != value or value in (float("inf"), float("-inf")):
    raise argparse.ArgumentTypeError(f"must be finite, got {text}")
  return value


def _space_size(text: str) -> tuple[float, float]:
  width, sep, height = text.lower().partition("x")
  if not sep:
    raise argparse.ArgumentTypeError(f"expected WxH in metres, e.g. 16x16, got {text!r}")
  return _positive_float(width), _positive_float(height)


def _txs_source(text: str) -> str | int:
  """`random:N` gives N random transmitters; anything else is a CSV path."""
  if text.startswith("random:"):
    return _positive_int(text.removeprefix("random:"))
  return text


def _fractions(text: str) -> list[float]:
  values = [_positive_float(part) for part in text.split(",") if part.strip()]
  if not values or any(v > 1 for v in values):
    raise argparse.ArgumentTypeError(f"expected comma-separated fractions in (0, 1], got {text!r}")
  return values


def _add_scenario_flags(parser: argparse.ArgumentParser, required: bool = True) -> None:
  group = parser.add_argument_group("scenario")
  choice = group.add_mutually_exclusive_group(required=required)
  choice.add_argument("--floor-scenario", action="store_true",
                      help="50 m x 70 m, 16 random transmitters, Pt 16 dBm, K -39.13 dB, sigma 16.16 dB, eta 3.93")
  choice.add_argument("--desk-scenario", action="store_true",
                      help="16 m x 16 m, 4 transmitters near the corners, sigma 4 dB, eta 3")
  choice.add_argument("--linear-scenario", action="store_true",
                      help="40 m line, 9 evenly spaced transmitters, sigma 6 dB, eta 3")
  choice.add_argument("--symmetric-demo", action="store_true",
                      help="8 m x 8 m, centred Gaussian prior, uninformative observations")
  choice.add_argument("--space", type=_space_size, metavar="WxH",
                      help="custom area in metres, e.g. 16x16; needs --txs")
  choice.add_argument("--db", type=Path, metavar="FILE",
                      help="fingerprint database JSON; survey locations become the grid")
  group.add_argument("--txs", type=_txs_source, metavar="FILE|random:N",
                     help="transmitters for --space: CSV with header tx_id,x,y (metres), or N random ones")
  group.add_argument("--traces", type=Path, metavar="FILE",
                     help="trace CSV to fit K, eta and sigma from, with --space and a --txs file")
  group.add_argument("--resolution", type=_positive_float, metavar="M",
                     help="grid spacing in metres (default: BAYESLOC_RESOLUTION; 1 for the floor scenario, 0.5 for desk)")
  group.add_argument("--scenario-seed", type=_nonnegative_int, metavar="N",
                     help="seed for random transmitter placement (default: --seed)")
  group.add_argument("--eta", type=_positive_float, default=3.0, metavar="ETA",
                     help="path-loss exponent for --space (default: 3)")
  group.add_argument("--sigma", type=_positive_float, default=4.0, metavar="DB",
                     help="shadowing deviation in dB for --space (default: 4)")
  group.add_argument("--k-db", type=_finite_float, default=0.0, metavar="DB",
                     help="additive gain K in dB for --space (default: 0)")
  group.add_argument("--pt", type=_finite_float, default=0.0, metavar="DBM",
                     help="transmit power in dBm for --space (default: 0)")
  group.add_argument("--d0", type=_positive_float, default=1.0, metavar="M",
                     help="reference distance in metres (default: 1)")


def _add_run_flags(parser: argparse.ArgumentParser, with_radii: bool = True) -> None:
  parser.add_argument("--trials", type=_positive_int, default=2000, metavar="N",
                      help="Monte-Carlo trials (default: 2000)")
  parser.add_argument("--seed", type=_nonnegative_int, default=0, metavar="N",
                      help="master seed; identical seeds give identical artifacts (default: 0)")
  parser.add_argument("--d-points", type=_positive_int, default=DEFAULT_D_POINTS, metavar="N",
                      help=f"error distances on [0, d*] (default: {DEFAULT_D_POINTS})")
  if with_radii:
    parser.add_argument("--epsilon", type=_positive_float, default=DEFAULT_EPSILON, metavar="M",
                        help=f"small MP radius in metres (default: {DEFAULT_EPSILON})")
    parser.add_argument("--d", type=_positive_float, default=DEFAULT_D, metavar="M",
                        help=f"large MP radius in metres (default: {DEFAULT_D})")


def build_parser() -> argparse.ArgumentParser:
  parser = argparse.ArgumentParser(prog="bayesloc", description="Bayesian RSS localization: estimators and error-CDF evaluation")
  commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

  simulate = commands.add_parser("simulate", help="run a Monte-Carlo experiment and write curves, F*, table and manifest")
  _add_scenario_flags(simulate)
  _add_run_flags(simulate)
  simulate.add_argument("--out", type=Path, metavar="DIR", help="artifact directory (default: BAYESLOC_OUTPUT_DIR)")
  simulate.set_defaults(handler=cmd_simulate, command_parser=simulate)

  evaluate = commands.add_parser("evaluate", help="print dominance matrix, areas to F* and attainability")
  _add_scenario_flags(evaluate)
  _add_run_flags(evaluate)
  evaluate.add_argument("--out", type=Path, metavar="DIR", help="also write the experiment artifacts here")
  evaluate.set_defaults(handler=cmd_evaluate, command_parser=evaluate)

  fstar = commands.add_parser("fstar", help="estimate the envelope F* of all error CDFs")
  _add_scenario_flags(fstar)
  _add_run_flags(fstar, with_radii=False)
  fstar.add_argument("--out", type=Path, metavar="DIR", help="artifact directory (default: BAYESLOC_OUTPUT_DIR)")
  fstar.set_defaults(handler=cmd_fstar, command_parser=fstar)

  train = commands.add_parser("train-fingerprint", help="train a fingerprint database from survey traces")
  train.add_argument("--traces", type=Path, required=True, metavar="FILE",
                     help="trace CSV with header rx_x,rx_y,tx_id,rssi_dbm[,timestamp] (metres, dBm, seconds)")
  train.add_argument("--out", type=Path, required=True, metavar="FILE", help="database JSON to write")
  train.add_argument("--bin-width", type=_positive_float, default=DEFAULT_BIN_WIDTH, metavar="DB",
                     help=f"histogram bin width in dB (default: {DEFAULT_BIN_WIDTH:g})")
  train.add_argument("--smoothing", type=_positive_float, default=DEFAULT_SMOOTHING, metavar="MASS",
                     help=f"add-constant smoothing mass per histogram (default: {DEFAULT_SMOOTHING:g})")
  train.set_defaults(handler=cmd_train_fingerprint, command_parser=train)

  localize = commands.add_parser("localize", help="print MAP, MMSE, MEDE and MP(d) estimates for one observation")
  _add_scenario_flags(localize, required=False)
  localize.add_argument("--seed", type=_nonnegative_int, default=0, metavar="N", help="seed for random transmitter placement (default: 0)")
  observation = localize.add_mutually_exclusive_group()
  observation.add_argument("--obs", metavar="TX=DBM,...", help="inline readings, e.g. tx0=-61.5,tx1=-70")
  observation.add_argument("--obs-file", type=Path, metavar="FILE", help="file holding tx=dBm pairs")
  localize.add_argument("--d", type=_positive_float, default=DEFAULT_D, metavar="M",
                        help=f"MP radius in metres (default: {DEFAULT_D})")
  localize.add_argument("--posterior-out", type=Path, metavar="FILE", help="write the posterior as x,y,mass CSV")
  localize.add_argument("--analytic-demo", action="store_true",
                        help=f"1-D piecewise-linear posterior on [-1, 1] m; MP uses a {DEMO_WINDOW} m window")
  localize.set_defaults(handler=cmd_localize, command_parser=localize)

  learning = commands.add_parser("learning-curve", help="mean error of fingerprint-trained estimators against training size")
  source = learning.add_mutually_exclusive_group(required=True)
  source.add_argument("--traces", type=Path, metavar="FILE", help="survey trace CSV")
  source.add_argument("--synthetic", choices=[p.value for p in NoiseProfile],
                      help="synthetic 4 m x 2 m office traces with this noise profile")
  learning.add_argument("--fractions", type=_fractions, default=list(DEFAULT_FRACTIONS), metavar="F,...",
                        help="training fractions in (0, 1] (default: 0.2,0.4,0.6,0.8,1.0)")
  learning.add_argument("--repeats", type=_positive_int, default=DEFAULT_REPEATS, metavar="N",
                        help=f"random splits per fraction (default: {DEFAULT_REPEATS})")
  learning.add_argument("--seed", type=_nonnegative_int, default=0, metavar="N", help="master seed (default: 0)")
  learning.add_argument("--bin-width", type=_positive_float, default=DEFAULT_BIN_WIDTH, metavar="DB",
                        help=f"histogram bin width in dB (default: {DEFAULT_BIN_WIDTH:g})")
  learning.add_argument("--smoothing", type=_positive_float, default=DEFAULT_SMOOTHING, metavar="MASS",
                        help=f"histogram smoothing mass (default: {DEFAULT_SMOOTHING:g})")
  learning.add_argument("--out", type=Path, metavar="DIR", help="artifact directory (default: BAYESLOC_OUTPUT_DIR)")
  learning.set_defaults(handler=cmd_learning_curve, command_parser=learning)
  return parser


def _scenario(args: argparse.Namespace, config: Config, service: Service, parser: argparse.ArgumentParser) -> Scenario:
  """Scenario named by the flags; flag combinations are checked before anything runs."""
  scenario_seed = args.scenario_seed if args.scenario_seed is not None else args.seed
  if args.space is None and (args.txs is not None or args.traces is not None):
    parser.error("--txs and --traces only apply with --space")
  if args.floor_scenario:
    return build_floor_scenario(scenario_seed, args.resolution or 1.0)
  if args.desk_scenario:
    return build_desk_scenario(args.resolution or 0.5)
  if args.linear_scenario:
    return build_linear_scenario(args.resolution or 0.25)
  if args.symmetric_demo:
    return build_symmetric_demo(args.resolution or 0.5)
  if args.db is not None:
    return build_fingerprint_scenario(load_fingerprint_db(args.db))

  if args.txs is None:
    parser.error("--space needs --txs FILE|random:N")
  width, height = args.space
  space = Space.of_size(width, height, args.resolution or config.resolution)
  if isinstance(args.txs, int):
    if args.traces is not None:
      parser.error("--traces needs --txs FILE with known transmitter positions")
    txs: TransmitterSet = random_transmitters(space, args.txs, scenario_seed)
  else:
    txs = load_transmitters(Path(args.txs))
  if args.traces is not None:
    params = service.fit_pathloss(args.traces, txs, args.pt, args.d0).params
  else:
    params = PathLossParams(k_db=args.k_db, eta=args.eta, sigma_db=args.sigma, d0=args.d0, pt_dbm=args.pt)
  return pathloss_scenario("custom", space, txs, params)


def _experiment(args: argparse.Namespace, scenario: Scenario, out: Path | None) -> ExperimentConfig:
  return ExperimentConfig(
    scenario=scenario,
    trials=args.trials,
    seed=args.seed,
    epsilon=args.epsilon,
    d=args.d,
    d_points=args.d_points,
    out_dir=out,
    scenario_seed=args.scenario_seed if args.scenario_seed is not None else args.seed
  )


def _print_localization(result: Localization) -> None:
  print(f"{'algorithm':<10} {'x':>12} {'y':>12} {'expected_cost':>14} {'ties':>5}")
  for estimate in result.estimates:
    loc = estimate.location
    print(f"{estimate.algorithm:<10} {loc.x:>12.4f} {loc.y:>12.4f} {estimate.expected_cost:>14.6g} {len(estimate.tie_set):>5}")


def cmd_simulate(args: argparse.Namespace, config: Config, service: Service, parser: argparse.ArgumentParser) -> int:
  out = args.out or config.output_dir
  result = service.run_experiment(_experiment(args, _scenario(args, config, service, parser), out))
  print(result.suite.table.to_text(), end="")
  for kind, path in result.paths.items():
    print(f"{kind}: {path}")
  return EXIT_OK


def cmd_evaluate(args: argparse.Namespace, config: Config, service: Service, parser: argparse.ArgumentParser) -> int:
  result = service.run_experiment(_experiment(args, _scenario(args, config, service, parser), args.out))
  print(format_report(result), end="")
  return EXIT_OK


def cmd_fstar(args: argparse.Namespace, config: Config, service: Service, parser: argparse.ArgumentParser) -> int:
  out = args.out or config.output_dir
  curve = service.fstar(_scenario(args, config, service, parser), args.trials, args.seed, args.d_points, out)
  print(f"F* over {curve.trials} trials ({curve.failures} failed) written to {out / 'fstar.csv'}")
  return EXIT_OK


def cmd_train_fingerprint(args: argparse.Namespace, config: Config, service: Service, parser: argparse.ArgumentParser) -> int:
  db = service.train_fingerprint(args.traces, args.out, args.bin_width, args.smoothing)
  scans = sum(db.scan_count(i) for i in range(len(db.locations)))
  print(f"locations: {len(db.locations)}")
  print(f"transmitters: {len(db.tx_ids)}")
  print(f"scans: {scans}")
  print(f"empty cells: {len(db.empty_cells)}")
  print(f"database: {args.out}")
  return EXIT_OK


def cmd_localize(args: argparse.Namespace, config: Config, service: Service, parser: argparse.ArgumentParser) -> int:
  if args.analytic_demo:
    _print_localization(service.localize_analytic(DEMO_WINDOW))
    return EXIT_OK
  if not any([args.floor_scenario, args.desk_scenario, args.linear_scenario, args.symmetric_demo, args.space, args.db]):
    parser.error("localize needs a scenario flag or --analytic-demo")
  if args.obs is None and args.obs_file is None:
    parser.error("localize needs --obs or --obs-file")
  text = args.obs if args.obs is not None else args.obs_file.read_text(encoding="utf-8")
  if not text.strip():
    parser.error("the observation is empty")
  try:
    observation = ObservationVector.parse(text)
  except BayeslocError as exc:
    parser.error(str(exc))
  _print_localization(service.localize(_scenario(args, config, service, parser), observation, args.d, args.posterior_out))
  return EXIT_OK


def cmd_learning_curve(args: argparse.Namespace, config: Config, service: Service, parser: argparse.ArgumentParser) -> int:
  if args.traces is not None:
    data = load_traces(args.traces)
  else:
    data = synthesize_office_traces(NoiseProfile(args.synthetic), seed=args.seed)
  out = args.out or config.output_dir
  curve = service.learning_curve(data, args.fractions, args.repeats, args.seed, args.bin_width, args.smoothing, out)
  header = "fraction " + " ".join(f"{name:>10}" for name in curve.mean_errors)
  print(header)
  for i, fraction in enumerate(curve.fractions):
    print(f"{fraction:>8.3f} " + " ".join(f"{values[i]:>10.4f}" for values in curve.mean_errors.values()))
  print("slope    " + " ".join(f"{curve.slopes[name]:>10.4f}" for name in curve.mean_errors))
  return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
  """
  Run one command.

  Returns:
      int: 0 on success, 1 on a runtime error, 2 on a usage error.
  """
  parser = build_parser()
  try:
    args = parser.parse_args(argv)
    config = Config()
    configure_logging(config)
    with build_container(config) as container:
      return args.handler(args, config, container.service, args.command_parser)
  except SystemExit as exc:
    return exc.code if isinstance(exc.code, int) else EXIT_OK
  except (BayeslocError, OSError) as exc:
    print(f"error: {exc}", file=sys.stderr)
    return EXIT_RUNTIME


if __name__ == "__main__":
  sys.exit(main())
