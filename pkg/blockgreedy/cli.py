"""Command-line entry point: run, sweep and generate experiments."""

import argparse
import asyncio
import sys
from collections.abc import Sequence
from typing import Any

from loguru import logger
from pydantic import ValidationError

from blockgreedy.config import settings
from blockgreedy.errors import IncompatibleAlgorithmError, SpecError
from blockgreedy.log import configure_logging
from blockgreedy.models.reports import RunReport
from blockgreedy.services.experiment_service import (
    render_csv,
    run_experiment,
    sweep_configs,
    write_csv,
    write_report,
)
from blockgreedy.services.instance_service import (
    generate_instance_spec,
    load_experiment_config,
    parse_generator,
    save_instance,
)

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_INCOMPATIBLE = 3


def _parse_value(raw: str) -> Any:
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            pass
    if raw.lower() in ("none", "null"):
        return None
    return raw


def _parse_params(pairs: Sequence[str]) -> dict[str, Any]:
    params: dict[str, Any] = {}
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep or not key:
            raise SpecError(f"expected key=value, got {pair!r}")
        params[key] = _parse_value(raw)
    return params


def _parse_values(raw: str) -> list[float]:
    try:
        return [float(v) for v in raw.split(",") if v.strip()]
    except ValueError as e:
        raise SpecError(f"bad --values list {raw!r}") from e


def _summary(report: RunReport) -> str:
    line = (
        f"{report.instance} {report.algorithm} eps={report.eps} reps={report.reps}: "
        f"value={report.mean_value:.6g}±{report.stderr_value:.3g} "
        f"rounds={report.mean_rounds:.1f}"
    )
    if report.ratio is not None:
        line += f" ratio={report.ratio:.4f}"
    return line


async def _run(args: argparse.Namespace) -> int:
    config = await load_experiment_config(args.config)
    report = run_experiment(config, workers=args.workers, opt=args.opt)
    if args.out:
        await write_report(report, args.out, include_timings=args.timings)
    if args.csv:
        await write_csv([report], args.csv)
    print(_summary(report))
    return EXIT_OK


async def _sweep(args: argparse.Namespace) -> int:
    config = await load_experiment_config(args.config)
    configs = sweep_configs(config, args.param, _parse_values(args.values))
    reports = [
        run_experiment(c, workers=args.workers, opt=args.opt) for c in configs
    ]
    if args.csv:
        await write_csv(reports, args.csv)
    else:
        sys.stdout.write(render_csv(reports))
    if args.out:
        await write_report(reports[-1], args.out)
    for report in reports:
        print(_summary(report), file=sys.stderr)
    return EXIT_OK


async def _gen(args: argparse.Namespace) -> int:
    spec = parse_generator(args.kind, _parse_params(args.params))
    instance = generate_instance_spec(spec, args.seed)
    if args.out:
        await save_instance(instance, args.out)
        print(f"wrote {instance.name} to {args.out}")
    else:
        print(instance.model_dump_json(indent=2))
    return EXIT_OK


def _serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("blockgreedy.main:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockgreedy",
        description="Low-adaptivity submodular maximization experiments",
    )
    parser.add_argument("--log-level", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment config")
    run.add_argument("config")
    run.add_argument("--out", help="JSON report path")
    run.add_argument("--csv", help="CSV rows path")
    run.add_argument("--timings", action="store_true", help="keep wall times")
    run.add_argument("--workers", type=int, default=None)
    run.add_argument("--opt", choices=["auto", "off"], default="auto")

    sweep = sub.add_parser("sweep", help="run a config over a parameter grid")
    sweep.add_argument("config")
    sweep.add_argument("--param", choices=["eps", "seed", "reps"], required=True)
    sweep.add_argument("--values", required=True, help="comma separated")
    sweep.add_argument("--out", help="JSON report path for the last run")
    sweep.add_argument("--csv", help="CSV rows path, stdout otherwise")
    sweep.add_argument("--workers", type=int, default=None)
    sweep.add_argument("--opt", choices=["auto", "off"], default="auto")

    gen = sub.add_parser("gen", help="generate an instance")
    gen.add_argument("kind")
    gen.add_argument("params", nargs="*", help="key=value generator parameters")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out")

    serve = sub.add_parser("serve", help="start the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or settings.log_level)
    try:
        match args.command:
            case "run":
                return asyncio.run(_run(args))
            case "sweep":
                return asyncio.run(_sweep(args))
            case "gen":
                return asyncio.run(_gen(args))
            case _:
                return _serve(args)
    except (SpecError, ValidationError) as e:
        logger.error("invalid input: {}", e)
        return EXIT_SPEC
    except IncompatibleAlgorithmError as e:
        logger.error("incompatible algorithm: {}", e)
        return EXIT_INCOMPATIBLE


if __name__ == "__main__":
    sys.exit(main())
