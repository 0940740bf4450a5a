"""Command line entry points.

    continuum-sim validate [--config F] [--samples N]
    continuum-sim run --script S [--config F] [--export out.csv] [--export-jsonl out.jsonl]
    continuum-sim serve [--config F] [--bind HOST:PORT]
    continuum-sim export --input run.jsonl --output run.csv

Exit codes: 0 success, 1 suite or simulation failure, 2 usage or
configuration error.
"""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .errors import ConfigError, ScriptError, SimFault

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="continuum-sim",
        description="Multisection continuum manipulator simulator and teleoperation gateway",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="run the kinematics property suites")
    p_val.add_argument("--config", default=None, help="configuration file (JSON)")
    p_val.add_argument("--samples", type=int, default=1000, help="samples per suite")
    p_val.add_argument("--jacobian-samples", type=int, default=100)

    p_run = sub.add_parser("run", help="run a scenario script headlessly")
    p_run.add_argument("--script", required=True, help="scenario file (.scn JSON) or bundled name")
    p_run.add_argument("--config", default=None)
    p_run.add_argument("--export", default=None, help="CSV output path")
    p_run.add_argument("--export-jsonl", default=None, help="JSON-lines output path")

    p_serve = sub.add_parser("serve", help="start the teleoperation gateway")
    p_serve.add_argument("--config", default=None)
    p_serve.add_argument("--bind", default="127.0.0.1:8750", help="HOST:PORT")

    p_exp = sub.add_parser("export", help="convert a JSONL telemetry file to CSV")
    p_exp.add_argument("--input", required=True, help="JSONL telemetry file")
    p_exp.add_argument("--output", required=True, help="CSV output path")
    return parser


def _cmd_validate(args) -> int:
    from .config import load_config
    from .validation import run_all

    cfg = load_config(args.config)
    results = run_all(cfg, samples=args.samples, jacobian_samples=args.jacobian_samples)
    ok = True
    for res in results:
        print(res.line())
        ok = ok and res.passed
    return EXIT_OK if ok else EXIT_FAILURE


def _cmd_run(args) -> int:
    from .config import load_config
    from .scenario import load_script, run_scenario
    from .telemetry import export_csv, export_jsonl

    cfg = load_config(args.config)
    script = load_script(args.script)
    try:
        result = run_scenario(script, cfg)
    except SimFault as exc:
        print(f"simulation fault: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    for line in result.report.summary_lines():
        print(line)
    if args.export:
        export_csv(result.records, args.export)
        print(f"wrote {args.export}")
    if args.export_jsonl:
        export_jsonl(result.records, args.export_jsonl)
        print(f"wrote {args.export_jsonl}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .config import load_config
    from .server import create_app

    cfg = load_config(args.config)
    try:
        host, port_text = args.bind.rsplit(":", 1)
        port = int(port_text)
    except ValueError:
        print(f"invalid bind address: {args.bind}", file=sys.stderr)
        return EXIT_USAGE
    app = create_app(cfg)
    uvicorn.run(app, host=host, port=port, log_level="info")
    return EXIT_OK


def _cmd_export(args) -> int:
    from .telemetry import export_csv, import_jsonl

    records = import_jsonl(args.input)
    export_csv(records, args.output)
    print(f"wrote {args.output} ({len(records)} records)")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "export":
            return _cmd_export(args)
    except (ConfigError, ScriptError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
