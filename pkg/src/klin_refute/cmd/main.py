"""Command line for k-LIN refutation, dependency mining and pseudo-expectation witnesses."""

import argparse
import importlib.metadata
import logging
import pathlib
import sys
import time
import uuid
from typing import Any, NoReturn

import sentry_sdk
from pyhocon import ConfigFactory, ConfigTree

from klin_refute.internal.models import Command, KlinError, ResourceCapError, RunConfig
from klin_refute.internal.service import (
    EXIT_CAP,
    EXIT_INVALID,
    Generator,
    SosAction,
    run_command,
)

from ._logging import setup_json_logging

log = logging.getLogger(__name__)

DEFAULT_CONFIG = pathlib.Path(__file__).parent / "klin.conf"
EXIT_FAILURE = 1

CAP_NAMES = ("vertices", "brute_force", "exhaustive", "pe_entries")


class _Parser(argparse.ArgumentParser):
    """Reports usage errors with the invalid-input exit code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("-o", "--output", help="write the output document here instead of stdout")
    p.add_argument("--config", help="HOCON file replacing the packaged klin.conf")
    p.add_argument("--group", help="domain, e.g. 'p=3', 'gf p=2 m=2' or 'zm=4,6'")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--l", dest="ell", type=int, help="Kikuchi level or subset size")
    p.add_argument("--eps", type=float)
    p.add_argument("--eta", type=int, help="edge deletion threshold")
    p.add_argument("--d", type=int, help="pseudo-expectation degree")
    p.add_argument("--seed", type=int)
    p.add_argument("--seeds", type=int, help="use seeds 0..N-1")
    p.add_argument("--workers", type=int)
    p.add_argument("--group-odd-experimental", action="store_true", default=None)
    for name in CAP_NAMES:
        flag = name.replace("_", "-")
        p.add_argument(f"--cap-{flag}", dest=f"cap_{name}", type=int)
    p.add_argument("--dense-limit", dest="spectral_dense_limit", type=int)
    p.add_argument("--spectral-tol", dest="spectral_tol", type=float)
    return p


def build_parser() -> argparse.ArgumentParser:
    """The ``klin`` argument parser with one subparser per command."""
    common = _common_flags()
    parser = _Parser(prog="klin", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser(Command.gen.value, parents=[common], help="generate an instance")
    gen.add_argument("--generator", choices=[g.value for g in Generator])
    gen.add_argument("--width", type=int, help="semirandom support width")
    gen.add_argument(
        "--lhs",
        metavar="file",
        help="semirandom: reuse the left-hand sides of this instance file",
    )

    refute = sub.add_parser(Command.refute.value, parents=[common], help="spectral refutation")
    refute.add_argument("inputs", nargs=1, metavar="instance")
    refute.add_argument(
        "--pipeline",
        choices=["auto", "even-field", "even-group", "group-reduction", "odd"],
    )

    simple = sub.add_parser(Command.simple.value, parents=[common], help="simple refutation")
    simple.add_argument("inputs", nargs=1, metavar="instance")
    simple.add_argument("--variant", choices=["random", "semirandom"])

    deps = sub.add_parser(Command.deps.value, parents=[common], help="dependency search")
    deps.add_argument("inputs", nargs=1, metavar="instance")
    deps.add_argument("--mode", choices=["exhaustive", "kikuchi"])
    deps.add_argument("--max-size", type=int)

    sos = sub.add_parser(Command.sos.value, parents=[common], help="pseudo-expectations")
    sos.add_argument("action", choices=[a.value for a in SosAction])
    sos.add_argument("inputs", nargs="+", metavar="file")
    sos.add_argument("--order", choices=["fifo", "lifo"])
    sos.add_argument("--beta", type=float)
    sos.add_argument("--max-size", type=int)
    sos.add_argument("--spot-checks", type=int)

    verify = sub.add_parser(
        Command.verify.value,
        parents=[common],
        help="re-check a certificate or pseudo-expectation dump",
    )
    verify.add_argument(
        "inputs",
        nargs=2,
        metavar="file",
        help="certificate or pseudo-expectation dump, then the instance",
    )
    verify.add_argument("--spot-checks", type=int)

    bench = sub.add_parser(Command.bench.value, parents=[common], help="parameter sweep to CSV")
    bench.add_argument("--sweep", help="key=start:stop[:step] with key in m, n, ell")
    bench.add_argument("--generator", choices=[g.value for g in Generator])
    bench.add_argument("--width", type=int)
    bench.add_argument("--pipeline")
    bench.add_argument("--no-timings", dest="timings", action="store_false", default=None)

    return parser


def build_config(args: argparse.Namespace, conf: ConfigTree) -> RunConfig:
    """Merge the HOCON defaults with the command-line flags."""
    values: dict[str, Any] = {
        "caps": {name: conf.get_int(f"caps.{name}") for name in CAP_NAMES},
        "spectral": {
            "dense_limit": conf.get_int("spectral.dense_limit"),
            "tol": conf.get_float("spectral.tol"),
            "seed": conf.get_int("spectral.seed"),
        },
        "group_odd_experimental": conf.get_bool("refute.group_odd_experimental"),
        "workers": conf.get_int("bench.workers"),
        "timings": conf.get_bool("bench.timings"),
    }

    flags = vars(args).copy()
    flags.pop("config", None)
    for name in CAP_NAMES:
        if (v := flags.pop(f"cap_{name}", None)) is not None:
            values["caps"][name] = v
    for name in ("dense_limit", "tol"):
        if (v := flags.pop(f"spectral_{name}", None)) is not None:
            values["spectral"][name] = v
    seed, seeds = flags.pop("seed", None), flags.pop("seeds", None)
    if seeds is not None:
        values["seeds"] = list(range(seeds))
    elif seed is not None:
        values["seeds"] = [seed]

    values |= {k: v for k, v in flags.items() if v is not None}
    return RunConfig.model_validate(values)


def _init_sentry(conf: ConfigTree, command: str) -> None:
    sentry_sdk.init(
        dsn=conf.get_string("sentry.dsn"),
        environment=conf.get_string("sentry.environment"),
        traces_sample_rate=1,
    )
    sentry_sdk.set_tag("command", command)
    sentry_sdk.set_tag("version", importlib.metadata.version("klin-refute"))


def _write(text: str, output: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        pathlib.Path(output).write_text(text, encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    """Parse, configure, run one command and return its exit code."""
    args = build_parser().parse_args(argv)
    conf = ConfigFactory.parse_file(pathlib.Path(args.config or DEFAULT_CONFIG).as_posix())
    setup_json_logging(
        level=logging.getLevelName(conf.get_string("klin.loglevel").upper()),
        run_id=uuid.uuid4().hex[:12],
    )

    if conf.get_string("sentry.dsn") != "":
        _init_sentry(conf, args.command)

    start = time.perf_counter()
    try:
        cfg = build_config(args, conf)
        out = run_command(cfg)
        _write(out.text, cfg.output)
    except ResourceCapError as e:
        log.error("resource cap exceeded", extra={"error": str(e), "what": e.what})
        return EXIT_CAP
    except (KlinError, ValueError, OSError) as e:
        # pydantic's ValidationError is a ValueError
        log.error("invalid input", extra={"error": str(e), "kind": type(e).__name__})
        return EXIT_INVALID
    except Exception:
        log.exception("command failed", extra={"command": args.command})
        return EXIT_FAILURE

    log.info(
        "command finished",
        extra={
            "command": args.command,
            "exit_code": out.exit_code,
            "elapsed_ms": (time.perf_counter() - start) * 1000,
        },
    )
    return out.exit_code


def run() -> None:
    """Entry point of the ``klin`` script."""
    sys.exit(main())


if __name__ == "__main__":
    run()
