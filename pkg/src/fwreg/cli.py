"""Command-line driver: ``fwreg COMMAND INSTANCE [flags]``.

Exit codes: 0 success (negative verdicts included), 1 a check failed or a
certificate was rejected, 2 usage, 3 parse error, 4 precondition, 5
inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from fwreg.certificates import COMMANDS, dumps, produce, verify
from fwreg.corpus import NAMES, example
from fwreg.errors import FWRegError, ParseError
from fwreg.instance import serialize

EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fwreg", description="Partial actions, globalization and regularization on finite models.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        c = sub.add_parser(name)
        c.add_argument("instance", type=Path)
        c.add_argument("--out", type=Path)
        if name in ("commensurated", "transfix", "neumann", "noetherian-core"):
            c.add_argument("--subset")
        if name in ("globalize", "commensurated", "transfix", "neumann", "regularize"):
            c.add_argument("--radius", type=int)
        if name in ("validate", "neumann", "regularize"):
            c.add_argument("--bound", type=int)
        if name == "transfix":
            c.add_argument("--transfixer", nargs="+", metavar=("STRATEGY", "FILE"))
        if name == "regularize":
            c.add_argument("--transfixer", choices=("exact", "symbolic"))
    v = sub.add_parser("verify")
    v.add_argument("certificate", type=Path)
    e = sub.add_parser("example")
    e.add_argument("name", choices=NAMES)
    e.add_argument("--out", type=Path)
    return p


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _run_args(ns: argparse.Namespace) -> dict:
    args = {}
    for key in ("subset", "radius", "bound"):
        if getattr(ns, key, None) is not None:
            args[key] = getattr(ns, key)
    strategy = getattr(ns, "transfixer", None)
    if ns.command == "transfix" and strategy is not None:
        name, *rest = strategy
        if name not in ("exact", "symbolic", "cert") or len(rest) != (name == "cert"):
            raise SystemExit(f"fwreg transfix: --transfixer takes exact, symbolic or cert FILE, got {' '.join(strategy)}")
        args["transfixer"] = name
        if rest:
            args["transfixer_set"] = Path(rest[0]).read_text()
    elif strategy is not None:
        args["transfixer"] = strategy
    return args


def _failed(cert: dict) -> bool:
    r = cert["result"]
    if cert["command"] == "validate":
        return not r["ok"]
    if cert["command"] == "regularize":
        return not (all(r["checks"].values()) and r["idempotent"])
    return False


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    try:
        if ns.command == "example":
            _emit(serialize(example(ns.name)), ns.out)
            return 0
        if ns.command == "verify":
            cert = json.loads(ns.certificate.read_text())
            problems = verify(cert)
            for line in problems:
                print(line, file=sys.stderr)
            print("rejected" if problems else "accepted")
            return EXIT_CHECK_FAILED if problems else 0
        try:
            args = _run_args(ns)
        except SystemExit as exc:
            print(exc, file=sys.stderr)
            return EXIT_USAGE
        cert = produce(ns.command, ns.instance.read_text(), args)
        _emit(dumps(cert), ns.out)
        if ns.command == "validate":
            for v in cert["result"]["violations"]:
                print(f"violation: {v['axiom']} at g={v['g']} h={v['h']} x={v['x']}", file=sys.stderr)
        return EXIT_CHECK_FAILED if _failed(cert) else 0
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return exc.exit_code
    except FWRegError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
