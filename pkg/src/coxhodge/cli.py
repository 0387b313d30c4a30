"""Thin command-line client for the coxhodge service.

By default requests are answered by an in-process instance of the FastAPI
app (no sockets involved); `--server URL` talks to a remote instance
instead.  Text and JSON output are both rendered client-side from the same
response payload, so the two formats carry identical numeric content.

Exit codes: 0 success, 2 invalid input, 3 group enumeration exceeded its
bound, 4 internal error or transport failure.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys

import httpx

from .coxeter import DEFAULT_BOUND

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFINITE = 3
EXIT_INTERNAL = 4

THREADS_ENV = "COXHODGE_THREADS"

_app = None


def _get_app():
    global _app
    if _app is None:
        from .service import app
        _app = app
    return _app


def _post(path: str, payload: dict, server: str | None):
    if server:
        try:
            with httpx.Client(base_url=server, timeout=None) as client:
                resp = client.post(path, json=payload)
        except httpx.HTTPError as exc:
            return None, {"error": {"code": "transport", "message": str(exc)}}
        return resp.status_code, resp.json()

    async def go():
        transport = httpx.ASGITransport(app=_get_app())
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://coxhodge.local",
                                     timeout=None) as client:
            return await client.post(path, json=payload)

    resp = asyncio.run(go())
    return resp.status_code, resp.json()


def _status_to_exit(status) -> int:
    if status is None:
        return EXIT_INTERNAL
    if status == 200:
        return EXIT_OK
    if status in (400, 422):
        return EXIT_INVALID
    if status == 409:
        return EXIT_INFINITE
    return EXIT_INTERNAL


def _group_payload(args) -> dict:
    if args.type and args.matrix:
        raise SystemExit(EXIT_INVALID)
    if args.type:
        return {"type": args.type}
    if args.matrix:
        try:
            with open(args.matrix) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read matrix file: {exc}", file=sys.stderr)
            raise SystemExit(EXIT_INVALID)
        return {"matrix": data}
    print("error: one of --type or --matrix is required", file=sys.stderr)
    raise SystemExit(EXIT_INVALID)


def _parse_word(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p != ""]
    except ValueError:
        print(f"error: bad word {text!r}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# -- text renderers ----------------------------------------------------------

def _render_roots(data: dict) -> str:
    lines = [f"group {data['group']}  rank {data['rank']}  conductor {data['conductor']}"]
    lines.append("cartan:")
    for row in data["cartan"]:
        lines.append("  [" + ", ".join(row) + "]")
    lines.append(f"positive roots ({data['count']}):")
    for r in data["roots"]:
        word = "".join(str(s) for s in r["reflection"]) or "id"
        lines.append("  root [" + ", ".join(r["coords"]) + "]"
                     + "  coroot [" + ", ".join(r["coroot"]) + "]"
                     + f"  reflection {word} (length {r['length']})")
    return "\n".join(lines)


def _render_schubert(data: dict) -> str:
    lines = [f"group {data['group']}  order {data['order']}  w0 "
             + "".join(str(s) for s in data["w0"])]
    lines.append("classes:")
    for c in data["classes"]:
        word = "".join(str(s) for s in c["word"]) or "id"
        lines.append(f"  Y_{{{word}}} degree {c['degree']}: {c['poly']}")
    lines.append("pairing matrix (rows/cols in class order):")
    for row in data["pairing"]:
        lines.append("  " + " ".join(str(v) for v in row))
    lines.append(f"chevalley edges ({len(data['edges'])}):")
    for e in data["edges"]:
        src = "".join(str(s) for s in e["source"]) or "id"
        dst = "".join(str(s) for s in e["target"]) or "id"
        lines.append(f"  Y_{{{src}}} -> Y_{{{dst}}}  [{e['label']}]")
    return "\n".join(lines)


def _render_decompose(data: dict) -> str:
    lines = [f"group {data['group']}  word "
             + ",".join(str(s) for s in data["word"])
             + f"  dim {data['total_dim']}"]
    lines.append(data["text"])
    for s in data["summands"]:
        dims = " ".join(f"{d}:{n}" for d, n in s["graded_dims"])
        lines.append(f"  {s['tag']} shift {s['shift']} multiplicity "
                     f"{s['multiplicity']} dims {dims}")
    return "\n".join(lines)


def _render_check(data: dict) -> str:
    lines = [f"group {data['group']}  reports {len(data['reports'])}"]
    for r in data["reports"]:
        word = "".join(str(s) for s in r["word"]) or "id"
        lines.append(f"  {r['summand']} w={word} lambda=["
                     + ", ".join(r["lambda"])
                     + f"] ample={r['ample']} verdict={r['verdict']}"
                     + f" millis={r['millis']}")
        for d in r["degrees"]:
            sig = ",".join(str(v) for v in d["signature"])
            lines.append(f"    i={d['i']} dim={d['dim']} rank={d['rank']}"
                         f" hl={d['hl']} prim={d['prim_dim']}"
                         f" signature=({sig}) hr={d['hr']}")
    return "\n".join(lines)


_RENDERERS = {
    "/v1/roots": _render_roots,
    "/v1/schubert": _render_schubert,
    "/v1/decompose": _render_decompose,
    "/v1/check": _render_check,
}


def _run(args, path: str, payload: dict) -> int:
    status, data = _post(path, payload, args.server)
    code = _status_to_exit(status)
    if code != EXIT_OK:
        message = data.get("error", {}).get("message") if isinstance(data, dict) else None
        if message is None and isinstance(data, dict):
            message = json.dumps(data)
        print(f"error: {message}", file=sys.stderr)
        return code
    if args.format == "json":
        _emit(args, json.dumps(data, indent=2, sort_keys=True))
    else:
        _emit(args, _RENDERERS[path](data))
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--type", help="named group descriptor, e.g. A3 or I2:5")
    parser.add_argument("--matrix", help="path to a JSON Coxeter matrix file "
                                         "(use \"inf\" for infinite entries)")
    parser.add_argument("--bound", type=int, default=DEFAULT_BOUND,
                        help="enumeration bound (default %(default)s)")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--output", help="write the result to a file")
    parser.add_argument("--server", help="base URL of a running service "
                                         "(default: in-process)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coxhodge",
        description="Exact Coxeter groups, Schubert calculus, Soergel modules "
                    "and hard Lefschetz / Hodge-Riemann verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", help="positive roots, reflections and Cartan matrix")
    _add_common(p)

    p = sub.add_parser("schubert", help="Schubert basis, pairing and Chevalley graph")
    _add_common(p)

    p = sub.add_parser("decompose", help="decompose a Bott-Samelson module")
    _add_common(p)
    p.add_argument("--word", required=True,
                   help="comma-separated 1-based generator indices, e.g. 1,2,1")
    p.add_argument("--modules", action="store_true",
                   help="include JSON dumps of the summand modules")

    p = sub.add_parser("check", help="hard Lefschetz / Hodge-Riemann reports")
    _add_common(p)
    p.add_argument("--word", help="check D_w for this reduced word")
    p.add_argument("--all", action="store_true", help="check every element")
    p.add_argument("--lambda", dest="lam", default="rho",
                   help="weight: 'rho' or comma-separated rationals in the "
                        "simple-root basis")
    p.add_argument("--full", action="store_true",
                   help="check the full Bott-Samelson module instead of D_w")
    p.add_argument("--threads", type=int,
                   help=f"parallel width for --all (default ${THREADS_ENV} or 1)")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8714)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service import app
        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK

    group = _group_payload(args)
    if args.command == "roots":
        return _run(args, "/v1/roots", {"group": group, "bound": args.bound})
    if args.command == "schubert":
        return _run(args, "/v1/schubert", {"group": group, "bound": args.bound})
    if args.command == "decompose":
        return _run(args, "/v1/decompose",
                    {"group": group, "word": _parse_word(args.word),
                     "bound": args.bound, "include_modules": args.modules})
    if args.command == "check":
        if args.all == (args.word is not None):
            print("error: provide exactly one of --word or --all", file=sys.stderr)
            return EXIT_INVALID
        lam = args.lam if args.lam == "rho" else [p for p in args.lam.split(",")]
        payload = {"group": group, "all": args.all, "lambda": lam,
                   "full": args.full, "bound": args.bound}
        if args.word is not None:
            payload["word"] = _parse_word(args.word)
        if args.threads is not None:
            payload["width"] = args.threads
        elif os.environ.get(THREADS_ENV, "").isdigit():
            payload["width"] = int(os.environ[THREADS_ENV])
        return _run(args, "/v1/check", payload)
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
