"""Command-line client.

Runs against the in-process service layer by default; pass --server URL to
send the same requests to a running HTTP instance instead.  Exit codes:
0 all checks pass, 1 any residual failure, 2 parse/elaboration error.

    oddjacobi verify FILE [--format json|text] [--seed N] [--max-degree D]
                          [--samples K] [--parallel] [--server URL]
    oddjacobi examples list
    oddjacobi examples run NAME [--param k=v ...] [--format ...] [--server URL]
    oddjacobi bracket FILE NAME F G [--server URL]
    oddjacobi serve [--host HOST] [--port PORT]
"""

from __future__ import annotations

import argparse
import sys

from .core import EngineError
from .catalog import CatalogError
from .dsl import DslError
from .service import RunOptions, RunOutcome, bracket_source, emit, examples_listing, run_catalog, run_source


def _options(args) -> RunOptions:
    return RunOptions(
        seed=args.seed,
        max_degree=args.max_degree,
        samples=args.samples,
        parallel=getattr(args, "parallel", False),
    )


def _add_run_flags(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--samples", type=int, default=4)
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--server", default=None, help="run against a remote service instead")


def _emit_outcome(outcome: RunOutcome, fmt: str) -> int:
    sys.stdout.buffer.write(emit(outcome, fmt))
    sys.stdout.flush()
    return outcome.exit_code


def _remote_run(server: str, path: str, payload: dict, fmt: str) -> int:
    import httpx

    resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=120.0)
    if resp.status_code == 400:
        detail = resp.json().get("detail", {})
        msg = detail.get("message", str(detail)) if isinstance(detail, dict) else str(detail)
        line, col = (detail.get("line"), detail.get("col")) if isinstance(detail, dict) else (None, None)
        return _emit_outcome(RunOutcome([], msg, line, col), fmt)
    resp.raise_for_status()
    body = resp.json()
    print(resp.text if fmt == "json" else _remote_text(body))
    return body.get("exit_code", 1)


def _remote_text(body: dict) -> str:
    lines = []
    for rep in body.get("reports", []):
        lines.append(f"structure {rep['structure']}")
        for c in rep["conditions"]:
            flag = "PASS" if c["pass"] else "FAIL"
            lines.append(f"  [{flag}] {c['name']}: {c['residual']}")
        lines.append(f"  verdict: {'PASS' if rep['verdict'] else 'FAIL'}")
    lines.append(f"overall: {'PASS' if body.get('verdict') else 'FAIL'}")
    return "\n".join(lines)


def cmd_verify(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        source = fh.read()
    if args.server:
        payload = {"source": source, "options": _options_dict(args)}
        return _remote_run(args.server, "/verify", payload, args.format)
    return _emit_outcome(run_source(source, _options(args)), args.format)


def _options_dict(args) -> dict:
    return {
        "seed": args.seed,
        "max_degree": args.max_degree,
        "samples": args.samples,
        "parallel": getattr(args, "parallel", False),
    }


def cmd_examples(args) -> int:
    if args.action == "list":
        for name in examples_listing():
            print(name)
        return 0
    params = {}
    for item in args.param or []:
        key, _, value = item.partition("=")
        params[key] = int(value)
    if args.server:
        payload = {"params": params, "options": _options_dict(args)}
        return _remote_run(args.server, f"/examples/{args.name}", payload, args.format)
    try:
        return _emit_outcome(run_catalog(args.name, params, _options(args)), args.format)
    except CatalogError as e:
        print(str(e), file=sys.stderr)
        return 2


def cmd_bracket(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        source = fh.read()
    if args.server:
        import httpx

        resp = httpx.post(
            args.server.rstrip("/") + "/bracket",
            json={"source": source, "structure": args.structure, "f": args.f, "g": args.g},
            timeout=120.0,
        )
        if resp.status_code != 200:
            print(resp.text, file=sys.stderr)
            return 2
        print(resp.json()["result"])
        return 0
    try:
        print(bracket_source(source, args.structure, args.f, args.g))
        return 0
    except DslError as e:
        print(str(e), file=sys.stderr)
        return 2
    except EngineError as e:
        print(str(e), file=sys.stderr)
        return 1


def cmd_serve(args) -> int:
    import uvicorn

    from .api import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oddjacobi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="parse a model file and run its directives")
    p.add_argument("file")
    _add_run_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("examples", help="list or run the built-in examples")
    esub = p.add_subparsers(dest="action", required=True)
    pl = esub.add_parser("list")
    pl.set_defaults(func=cmd_examples, action="list")
    pr = esub.add_parser("run")
    pr.add_argument("name")
    pr.add_argument("--param", action="append", help="example parameter, e.g. --param n=2")
    _add_run_flags(pr)
    pr.set_defaults(func=cmd_examples, action="run")

    p = sub.add_parser("bracket", help="evaluate an odd Jacobi bracket from a model file")
    p.add_argument("file")
    p.add_argument("structure")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--server", default=None)
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
