"""Command-line entry point.

Usage::

    meaningwalk generate   --kind contrast --mu 1 2 3 --out runs/g3
    meaningwalk analyze    --config exp.yaml
    meaningwalk walk       --graph g1.txt --phi 1 --steps 1000000 --seed 7 --out runs/walk
    meaningwalk sweep      --graph g3.txt --phi 0 1 3 --out runs/sweep
    meaningwalk zipf-chain --alpha 1 --gamma 0.5 --ranks 1000 --out runs/zipf

Exit codes: 0 success, 2 config error, 3 input error, 4 infeasible
generation. Failures print a one-line JSON error record on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, GraphError, InfeasibleParametersError
from .experiment import (
    ANALYSES,
    ExperimentConfig,
    GraphSource,
    load_config,
    run,
    run_generate,
    run_sweep,
)

EXIT_OK, EXIT_CONFIG, EXIT_INPUT, EXIT_INFEASIBLE = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--config", default=default, help="YAML experiment config")
    p.add_argument("--seed", type=int, default=default, help="master seed (unsigned 64-bit)")
    p.add_argument("--out", default=default, help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="meaningwalk", description=__doc__.split("\n\n")[0])
    _add_globals(parser, suppress=False)
    common = _Parser(add_help=False)
    _add_globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", parents=[common], help="generate a graph file")
    gen.add_argument("--kind", choices=("random", "contrast", "mi-optimal"))
    gen.add_argument("--n", type=int)
    gen.add_argument("--m", type=int)
    gen.add_argument("--p", type=float, help="edge probability (random)")
    gen.add_argument("--mu", type=int, nargs="+", help="word degrees (contrast)")
    gen.add_argument("--d", type=int, help="degree (mi-optimal)")
    gen.add_argument("--id", help="graph id, also the output file stem")

    for name, helptext in (("analyze", "run the configured analyses"),
                           ("walk", "simulate biased walks"),
                           ("sweep", "sweep phi over a grid")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--graph", help="edge-list graph file")
        p.add_argument("--phi", type=float, nargs="+")
        if name == "analyze":
            p.add_argument("--analyses", nargs="+", choices=ANALYSES)
        if name == "walk":
            p.add_argument("--steps", type=int)
            p.add_argument("--burn-in", type=int)
            p.add_argument("--chains", type=int)
            p.add_argument("--start")

    z = sub.add_parser("zipf-chain", parents=[common], help="reproduce delta = gamma/alpha")
    z.add_argument("--alpha", type=float)
    z.add_argument("--gamma", type=float)
    z.add_argument("--ranks", type=int)
    return parser


def _config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.out = args.out
    if args.format is not None:
        cfg.format = args.format
    if getattr(args, "graph", None):
        cfg.graph = GraphSource(file=args.graph)
    if getattr(args, "phi", None):
        cfg.phi = list(args.phi)
    return cfg


def _dispatch(args: argparse.Namespace) -> Path:
    cfg = _config(args)
    if args.command == "generate":
        if args.kind:
            params = {k: getattr(args, k) for k in ("n", "m", "p", "mu", "d") if getattr(args, k) is not None}
            cfg.graph = GraphSource(generator=args.kind, params=params, id=args.id)
        elif args.id and cfg.graph is not None:
            cfg.graph.id = args.id
        bundle = run_generate(cfg)
    elif args.command == "analyze":
        if args.analyses:
            cfg.analyses = list(args.analyses)
        bundle = run(cfg, "analyze")
    elif args.command == "walk":
        cfg.analyses = ["walk"]
        for key, attr in (("steps", "steps"), ("burn_in", "burn_in"), ("chains", "chains"), ("start", "start")):
            if getattr(args, attr) is not None:
                cfg.walk[key] = getattr(args, attr)
        bundle = run(cfg, "walk")
    elif args.command == "sweep":
        bundle = run_sweep(cfg, list(args.phi) if args.phi else None)
    elif args.command == "zipf-chain":
        cfg.analyses = ["zipf-chain"]
        for key in ("alpha", "gamma", "ranks"):
            if getattr(args, key) is not None:
                cfg.zipf_chain[key] = getattr(args, key)
        bundle = run(cfg, "zipf-chain")
    else:  # pragma: no cover - argparse enforces the choices
        raise ConfigError(f"unknown command {args.command!r}")
    return bundle.manifest


def _fail(kind: str, code: int, exc: BaseException) -> int:
    record = {"error": kind, "exit_code": code, "type": type(exc).__name__, "message": str(exc)}
    print(json.dumps(record, sort_keys=True), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        manifest = _dispatch(args)
    except ConfigError as exc:
        return _fail("config", EXIT_CONFIG, exc)
    except InfeasibleParametersError as exc:
        return _fail("infeasible", EXIT_INFEASIBLE, exc)
    except (GraphError, OSError) as exc:
        return _fail("input", EXIT_INPUT, exc)
    print(manifest)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
