import argparse
import dataclasses
import json
import logging
import sys

import avnmp

from avnmp import constants
from avnmp.errors import ConfigError, UnknownNodeError
from avnmp.core import NodeState
from avnmp.metrics.emit import emit_trajectory, trajectory_frame
from avnmp.utils import resolve_output_path, save_config, setup_logging

logger = logging.getLogger("avnmp.run")


def non_negative_int(value):
    t = int(value)
    if t < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {t}")
    return t


def get_parser():
    parser = argparse.ArgumentParser(
        description="Run AVNMP scenarios, query predicted node state, emit oracle trajectories"
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", default=False, help="debug logging"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", metavar="scenario.yaml", help="path to scenario config")
    common.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"random seed, overrides ${constants.SEED_ENV_VAR} and the config",
    )

    run_parser = subparsers.add_parser("run", parents=[common], help="run a scenario")
    run_parser.add_argument(
        "--out", type=str, default=None, help="report file, or directory for <name>.<format>"
    )
    run_parser.add_argument(
        "--format", choices=constants.REPORT_FORMATS, default="csv", help="report format"
    )

    query_parser = subparsers.add_parser(
        "query", parents=[common], help="run, then query one node's predicted state"
    )
    query_parser.add_argument("--node", type=str, required=True, help="node identifier")
    query_parser.add_argument("--time", type=non_negative_int, required=True, help="virtual time")

    oracle_parser = subparsers.add_parser(
        "oracle", parents=[common], help="emit the sequential oracle trajectory as CSV"
    )
    oracle_parser.add_argument(
        "--out", type=str, default=None, help="CSV file or directory; stdout if omitted"
    )

    return parser


def run_command(cfg, args):
    report = avnmp.run_scenario(cfg)
    summary = avnmp.summarize(report)

    if args.out is not None:
        path = resolve_output_path(args.out, args.format, cfg.experiment_name)
        avnmp.emit_report(report, args.format, path)
        config_path = save_config(cfg, path)
        logger.info("saved report to %s and config to %s", path, config_path)

    print(json.dumps(dataclasses.asdict(summary), indent=2))


def query_command(cfg, args):
    _, engine = avnmp.run_scenario(cfg, return_engine=True)
    result = avnmp.query_predicted(engine, args.node, args.time)
    if isinstance(result, NodeState):
        print(json.dumps({"node": args.node, "time": args.time, **result.as_dict()}))
    else:
        print(result)


def oracle_command(cfg, args):
    trajectory = avnmp.run_oracle(cfg)
    if args.out is None:
        trajectory_frame(trajectory).to_csv(sys.stdout, index=False)
    else:
        path = resolve_output_path(args.out, "csv", f"{cfg.experiment_name}_oracle")
        emit_trajectory(trajectory, path)


COMMANDS = {"run": run_command, "query": query_command, "oracle": oracle_command}


def main(argv=None):
    args = get_parser().parse_args(argv)
    setup_logging(args.verbose)

    try:
        cfg = avnmp.load_scenario(args.config, seed=args.seed)
        COMMANDS[args.command](cfg, args)
    except (ConfigError, UnknownNodeError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return constants.EXIT_CONFIG_ERROR
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return constants.EXIT_IO_ERROR
    return constants.EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
