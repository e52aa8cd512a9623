"""Command-line front end: Mittag-Leffler values, Debye curves, validation, path ensembles and form factors.

Machine output (JSON) goes to stdout; logs and progress bars go to stderr.
Exit codes: 0 success, 1 validation or convergence failure, 2 usage or
domain error, 3 I/O error.
"""
import sys
import json
import argparse

import yaml

from cli.commands import (CurveRequest, Scale, cmd_ml, cmd_curve, cmd_figures, cmd_simulate, cmd_formfactor)
from cli.validate import ValidationContext, run_validation
from formfactor.params import Family, GgbmParams
from simulate.config import SimConfig
from utils import (get_logger, load_config, simple_table, ContainerError, ConvergenceError,
                   DomainError, DimensionMismatchError, InsufficientPointsError, SimulationError)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3


def build_parser():
    parser = argparse.ArgumentParser(description="Debye functions of generalized grey Brownian motion")
    parser.add_argument("--config", '-c', type=str, default=None,
                        help="yaml format configuration file. (default=config/ggbm_config.yaml)")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override one config entry, value parsed as yaml. repeatable.")
    parser.add_argument("--verbose", '-v', type=int, default=1,
                        help="logging level. higher is more logging. (default=1)")
    parser.add_argument("--log-file", type=str, default=None,
                        help="also write the log to this file.")
    sub = parser.add_subparsers(dest="command", required=True)

    ml = sub.add_parser("ml", help="evaluate E_{beta,rho}(z) for z <= 0")
    ml.add_argument("--beta", type=float, required=True)
    ml.add_argument("--rho", type=float, required=True)
    ml.add_argument("--z", type=float, required=True)

    curve = sub.add_parser("curve", help="tabulate a Debye curve as csv")
    curve.add_argument("--family", type=str, default=Family.GENERAL.value, choices=[f.value for f in Family])
    curve.add_argument("--beta", type=float, default=None)
    curve.add_argument("--alpha", type=float, default=None)
    curve.add_argument("--limit", action="store_true", help="beta -> 0 limit of the GreyBm or AlphaOne family")
    curve.add_argument("--y-min", type=float, default=None)
    curve.add_argument("--y-max", type=float, default=None)
    curve.add_argument("--points", type=int, default=None)
    curve.add_argument("--scale", type=str, default=None, choices=[s.value for s in Scale])
    curve.add_argument("--out", type=str, default=None, help="csv file of a single curve")
    curve.add_argument("--preset", type=str, default=None, choices=["figures"])
    curve.add_argument("--out-dir", type=str, default="figures", help="output directory of a preset")

    validate = sub.add_parser("validate", help="run the cross-check matrix")
    validate.add_argument("level", choices=["fast", "full"])
    validate.add_argument("--seed", type=int, default=None, help="required for full")
    validate.add_argument("--paths", type=int, default=None)
    validate.add_argument("--steps", type=int, default=None)

    simulate = sub.add_parser("simulate", help="sample a path ensemble and summarize it")
    simulate.add_argument("--beta", type=float, required=True)
    simulate.add_argument("--alpha", type=float, required=True)
    simulate.add_argument("--d", type=int, default=None)
    simulate.add_argument("--steps", type=int, default=None)
    simulate.add_argument("--horizon", type=float, default=None)
    simulate.add_argument("--paths", type=int, default=None)
    simulate.add_argument("--seed", type=int, required=True)
    simulate.add_argument("--workers", type=int, default=None)
    simulate.add_argument("--out", type=str, default="ensemble.ggbm")

    formfactor = sub.add_parser("formfactor", help="form factor S(k) of a path of length n")
    formfactor.add_argument("--k", type=float, nargs="+", required=True, help="wave vector components")
    formfactor.add_argument("--n", type=float, default=None, help="path length (default=1 or the ensemble horizon)")
    formfactor.add_argument("--beta", type=float, default=None, help="(default=1 or the ensemble beta)")
    formfactor.add_argument("--alpha", type=float, default=None, help="(default=1 or the ensemble alpha)")
    formfactor.add_argument("--mc", type=str, default=None, help="ensemble file for a Monte Carlo comparison")
    return parser


def _pick(value, default):
    return default if value is None else value


def run_curve(args, config, logger):
    if args.preset == "figures":
        return cmd_figures(args.out_dir, config, progress=args.verbose > 0), EXIT_OK
    if args.out is None:
        raise DomainError("curve needs --out or --preset figures")
    preset = config["figures"]
    req = CurveRequest(family=args.family, beta=args.beta, alpha=args.alpha, limit=args.limit,
                       y_min=_pick(args.y_min, preset["y_min"]), y_max=_pick(args.y_max, preset["y_max"]),
                       points=_pick(args.points, preset["points"]), scale=_pick(args.scale, preset["scale"]))
    return cmd_curve(req, args.out, config, progress=args.verbose > 0), EXIT_OK


def run_validate(args, config, logger):
    mc = config.get("validate", {}).get("mc", {})
    if args.level == "full" and args.seed is None:
        raise DomainError("validate full needs an explicit --seed")
    ctx = ValidationContext(config, seed=_pick(args.seed, mc.get("seed", 7)),
                            paths=_pick(args.paths, mc.get("paths", 100000)),
                            steps=_pick(args.steps, mc.get("steps", 256)),
                            n_sigma=mc.get("n_sigma", 3.0))
    report = run_validation(args.level, ctx, progress=args.verbose > 0)
    logger.info("\n" + simple_table([(c["name"], "pass" if c["passed"] else "FAIL") for c in report["checks"]]))
    return report, EXIT_OK if report["passed"] else EXIT_FAILURE


def run_simulate(args, config, logger):
    defaults = config.get("simulate", {})
    sim_config = SimConfig(GgbmParams(args.beta, args.alpha), d=_pick(args.d, defaults.get("d", 1)),
                           n_steps=_pick(args.steps, defaults.get("n_steps", 256)),
                           horizon=_pick(args.horizon, defaults.get("horizon", 1.0)),
                           n_paths=_pick(args.paths, defaults.get("n_paths", 10000)), seed=args.seed)
    logger.info("\n" + simple_table(sim_config.to_dict().items()))
    summary = cmd_simulate(sim_config, args.out, workers=args.workers,
                           chunk_size=defaults.get("chunk_size", 1024), progress=args.verbose > 0)
    return summary, EXIT_OK


def run_ml(args, config, logger):
    return cmd_ml(args.beta, args.rho, args.z, config), EXIT_OK


def run_formfactor(args, config, logger):
    return cmd_formfactor(args.k, args.n, args.beta, args.alpha, args.mc, config), EXIT_OK


COMMANDS = {
    "ml": run_ml,
    "curve": run_curve,
    "validate": run_validate,
    "simulate": run_simulate,
    "formfactor": run_formfactor,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code

    # ----------------- set logger ----------------- #
    logger = get_logger("ggbm", args.verbose, args.log_file)
    if args.verbose <= 0:
        logger.warning("Skip DEBUG/INFO messages")

    try:
        config = load_config(args.config, args.overrides)
        logger.info("Config:")
        for section in ("special_fn", "quadrature", "formfactor"):
            logger.info(f"{section}\n" + simple_table(config.get(section, {}).items()))
        payload, code = COMMANDS[args.command](args, config, logger)
    except ContainerError as err:
        logger.error(f"{type(err).__name__}: {err}")
        return EXIT_IO
    except (DomainError, DimensionMismatchError, InsufficientPointsError, ValueError, yaml.YAMLError) as err:
        logger.error(f"{type(err).__name__}: {err}")
        return EXIT_USAGE
    except (ConvergenceError, SimulationError) as err:
        logger.error(f"{type(err).__name__}: {err}")
        return EXIT_FAILURE
    except OSError as err:
        logger.error(f"{type(err).__name__}: {err}")
        return EXIT_IO

    print(json.dumps(payload, indent=2, sort_keys=False))
    return code


if __name__ == "__main__":
    sys.exit(main())
