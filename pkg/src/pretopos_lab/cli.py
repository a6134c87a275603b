"""``pretopos-lab`` command line.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage or parse error,
3 an enumeration cap was exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Optional

from . import suites
from .commands import run_command
from .core import Certificate, default_cap
from .dsl import DslError, Workspace, parse
from .errors import CapExceeded, PretoposError

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

SUITES: dict[str, Callable[[int, int], Certificate]] = {
    "piw": lambda n, seed: suites.verify_piw_pretopos(n, seed),
    "lextensive": lambda n, seed: suites.suite_lextensive(n, seed),
    "regular": lambda n, seed: suites.suite_regular(n),
    "exact": lambda n, seed: suites.suite_exact(n, min(n, 3)),
    "adjunctions": lambda n, seed: suites.suite_adjunctions(n, n, min(n, 2)),
    "w-types": lambda n, seed: suites.suite_wtypes(n, n + 1),
    "classifiers": lambda n, seed: suites.suite_classifiers(n, n, n),
    "small-maps": lambda n, seed: suites.suite_smallmaps(n),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pretopos-lab", description="Finite-set pretopos laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="Parse and validate a workspace file")
    p_check.add_argument("file", help="Workspace file, or '-' for stdin")

    p_run = sub.add_parser("run", help="Run commands against a workspace file")
    p_run.add_argument("file", help="Workspace file, or '-' for stdin")
    p_run.add_argument("--cmd", action="append", required=True, help="Command, e.g. 'verify effectiveness S'; repeatable")
    p_run.add_argument("--json", dest="json_out", help="Write certificates here instead of stdout")

    p_verify = sub.add_parser("verify", help="Run a verification suite")
    p_verify.add_argument("suite", choices=sorted(SUITES))
    p_verify.add_argument("--max-size", type=int, default=3)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--json", dest="json_out", help="Write the certificate here ('-' for stdout)")
    return parser


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")


def _write(text: str, dest: Optional[str]):
    if dest is None or dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8")


def _load(path: str) -> Workspace:
    ws = parse(_read(path))
    ws.config["cap"] = default_cap()
    return ws


def _summary(cert: Certificate, depth: int = 0) -> list[str]:
    status = "PASS" if cert.passed else "FAIL"
    lines = [f"{'  ' * depth}{status} {cert.kind} ({cert.witnesses.get('checks', 1)} checks)"]
    for child in cert.witnesses.get("subsuites", []):
        lines.extend(_summary(_from_dict(child), depth + 1))
    return lines


def _from_dict(d: dict) -> Certificate:
    return Certificate(d["kind"], d["inputs"], d["witnesses"], d["passed"], d["caps"], d["seed"])


def cmd_check(args) -> int:
    ws = _load(args.file)
    for name, src in ws.sources.items():
        print(f"{src[0]} {name}")
    print(f"ok: {len(ws.sources)} bindings")
    return EXIT_OK


def cmd_run(args) -> int:
    ws = _load(args.file)
    certs = [run_command(ws, c) for c in args.cmd]
    body = ",\n".join(c.to_json() for c in certs)
    _write(body + "\n" if len(certs) == 1 else "[\n" + body + "\n]\n", args.json_out)
    for c, text in zip(certs, args.cmd):
        print(f"{'PASS' if c.passed else 'FAIL'} {text}", file=sys.stderr)
    return EXIT_OK if all(c.passed for c in certs) else EXIT_FAILED


def cmd_verify(args) -> int:
    if args.max_size < 0:
        print("pretopos-lab: --max-size must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    cert = SUITES[args.suite](args.max_size, args.seed)
    if args.json_out is not None:
        _write(cert.to_json() + "\n", args.json_out)
    out = sys.stderr if args.json_out == "-" else sys.stdout
    print("\n".join(_summary(cert)), file=out)
    return EXIT_OK if cert.passed else EXIT_FAILED


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"check": cmd_check, "run": cmd_run, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except CapExceeded as err:
        print(f"pretopos-lab: {err}", file=sys.stderr)
        return EXIT_CAP
    except (DslError, PretoposError, OSError, ValueError) as err:
        print(f"pretopos-lab: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
