"""
Command-line entry point.

    pynearfield fig1|fig2|fig3|fig4|fig5|run [--config PATH] [--seed N]
        [--trials N] [--threads N] [--out DIR] [--paper-scale] [--log-level L]

Process settings default to the environment (or a `.env` file):
NEARFIELD_LOG_LEVEL, NEARFIELD_LOG_FILE, NEARFIELD_WORKERS and
NEARFIELD_OUT_DIR. Exit codes: 0 on success, 1 on a configuration error,
2 on a numerical failure.
"""
import argparse
import logging
import sys

from decouple import config as env

from pynearfield.log_utils import init_logger
from pynearfield.core.exceptions import ConfigurationError, NumericalError
from pynearfield.harness.config import ScenarioConfig, preset
from pynearfield.harness.figures import FIGURES
from pynearfield.harness.export import write_figure


EXIT_OK = 0
EXIT_CONFIGURATION = 1
EXIT_NUMERICAL = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pynearfield",
        description="Near-field uplink simulations: 2D-MUSIC localization and beam focusing."
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    helps = {
        "fig1": "closed-form two-antenna distance estimates with Gamma fit",
        "fig2": "distance-estimate variance versus distance with quartic fit",
        "fig3": "three-antenna spectrum denominator for two users",
        "fig4": "sum-SE versus SNR",
        "fig5": "sum-SE versus carrier frequency",
        "run": "per-trial sum-SE of one scenario",
    }
    for name, text in helps.items():
        sub = subparsers.add_parser(name, help=text)
        sub.add_argument("--config", type=str, default=None, help="JSON file overriding the preset")
        sub.add_argument("--seed", type=int, default=None, help="master seed")
        sub.add_argument("--trials", type=int, default=None, help="number of Monte-Carlo trials")
        sub.add_argument(
            "--threads", type=int, default=None,
            help="worker processes (default NEARFIELD_WORKERS)"
        )
        sub.add_argument("--out", type=str, default=None, help="output directory (default NEARFIELD_OUT_DIR)")
        sub.add_argument("--paper-scale", action="store_true", help="N = 512 and 100 trials for fig4/fig5")
        sub.add_argument("--log-level", type=str, default=None, help="debug, info, warning, error")
    return parser


def load_config(args: argparse.Namespace) -> ScenarioConfig:
    """Preset of the subcommand, overridden by the JSON file and the flags."""
    config = preset(args.command, paper_scale=args.paper_scale)
    if args.config:
        config = ScenarioConfig.from_json(args.config, base=config)
    workers = args.threads if args.threads is not None else env("NEARFIELD_WORKERS", default=1, cast=int)
    return config.with_overrides(seed=args.seed, trials=args.trials, workers=workers)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    log_level = args.log_level or env("NEARFIELD_LOG_LEVEL", default="info")
    log_file = env("NEARFIELD_LOG_FILE", default="nearfield.log") or None
    init_logger(log_level, log_file)
    logger = logging.getLogger("pynearfield")
    out_dir = args.out or env("NEARFIELD_OUT_DIR", default="results")

    try:
        config = load_config(args)
        result = FIGURES[args.command](config)
        write_figure(result, out_dir)
    except ConfigurationError as error:
        logger.error(f"Configuration error: {error}")
        return EXIT_CONFIGURATION
    except NumericalError as error:
        logger.error(f"Numerical failure: {type(error).__name__}: {error}")
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
