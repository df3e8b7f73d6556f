"""Command-line front end.

Exit status: 0 when the property holds or the command succeeded, 1 when it
is violated, 2 on errors or inconclusive answers.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .cluster import Cluster
from .core import TermError, classify
from .semantics import DYNAMIC, STATIC, explore, successors
from .syntax import ParseError, parse_mm, parse_process, render

MOD_SEPARATOR = "---"


def read_text(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def read_process(path: str, encoded: bool = False):
    return parse_process(read_text(path), encoded=encoded)


def split_mods(text: str) -> list[str]:
    """Modification processes are separated by lines holding only `---`."""
    chunks, cur = [], []
    for line in text.splitlines():
        if line.strip() == MOD_SEPARATOR:
            chunks.append("\n".join(cur))
            cur = []
        else:
            cur.append(line)
    chunks.append("\n".join(cur))
    return [c for c in chunks if c.split("#", 1)[0].strip()]


def read_cluster_file(path: str) -> Cluster:
    """`initial:` section followed by any number of `mod:` sections."""
    sections: list[tuple[str, list[str]]] = []
    for raw in read_text(path).splitlines():
        head = raw.strip()
        if head in ("initial:", "mod:"):
            sections.append((head[:-1], []))
        elif sections:
            sections[-1][1].append(raw)
        elif head and not head.startswith("#"):
            raise ParseError(f"{path}: expected an 'initial:' header")
    initial = [body for kind, body in sections if kind == "initial"]
    if len(initial) != 1:
        raise ParseError(f"{path}: need exactly one 'initial:' section")
    mods = [parse_process("\n".join(body)) for kind, body in sections if kind == "mod"]
    return Cluster(parse_process("\n".join(initial[0])), mods)


def load_cluster(args) -> Cluster:
    if getattr(args, "cluster", None):
        return read_cluster_file(args.cluster)
    path = args.process or getattr(args, "file", None)
    if not path:
        raise ParseError("give --process (and optionally --mods) or --cluster")
    mods = []
    if args.mods:
        mods = [parse_process(t) for t in split_mods(read_text(args.mods))]
    return Cluster(read_process(path), mods)


def emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


# -- subcommands ------------------------------------------------------------

def cmd_parse(args) -> int:
    t = read_process(args.file, args.encoded)
    emit(args, {"term": render(t)}, render(t))
    return 0


def cmd_classify(args) -> int:
    c = classify(read_process(args.file, args.encoded))
    pattern = "none" if c.pattern is None else c.pattern
    emit(args, {"topology": c.topology, "pattern": pattern}, str(c))
    return 0


def cmd_step(args) -> int:
    succ = sorted(successors(read_process(args.file, args.encoded), args.mode),
                  key=lambda t: t.key)
    out = [render(t) for t in succ]
    emit(args, {"successors": out}, "\n".join(out))
    return 0


def cmd_explore(args) -> int:
    g = explore(read_process(args.file, args.encoded), args.mode, depth=args.depth,
                state_limit=args.state_limit)
    states = sorted(g.depth, key=lambda t: (g.depth[t], t.key))
    payload = {"states": len(states), "closed": g.closed,
               "edges": sum(len(v) for v in g.succ.values())}
    lines = [f"states={len(states)} closed={str(g.closed).lower()} edges={payload['edges']}"]
    if args.list:
        payload["list"] = [render(t) for t in states]
        lines += [f"{g.depth[t]}\t{render(t)}" for t in states]
    emit(args, payload, "\n".join(lines))
    return 0


def cmd_dyn(args) -> int:
    """With modifications, all members are encoded against one registry."""
    from .statdyn import dyn_cluster

    c = dyn_cluster(load_cluster(args))
    mods = [render(m) for m in c.mods]
    payload = {"term": render(c.initial)}
    if args.mods or args.cluster:
        payload["mods"] = mods
    emit(args, payload, "\n".join([render(c.initial)] + [f"{MOD_SEPARATOR}\n{m}" for m in mods]))
    return 0


def _verdict(args, v) -> int:
    lines = [v.status]
    if v.counts is not None:
        lines.append("copies: " + " ".join(map(str, v.counts)))
    if v.trace:
        lines += ["trace:"] + ["  " + render(t) for t in v.trace]
    if v.reason:
        lines.append(v.reason)
    emit(args, v.to_json(), "\n".join(lines))
    return {"holds": 0, "violated": 1}.get(v.status, 2)


def cmd_ba(args) -> int:
    from .wsts_ba import decide_ba

    return _verdict(args, decide_ba(load_cluster(args), args.barb, args.k, args.mode))


def cmd_ea3(args) -> int:
    from .petri_ea import decide_ea3

    return _verdict(args, decide_ea3(load_cluster(args), args.barb))


def cmd_mm(args) -> int:
    from .minsky import encode_mm, run

    m = parse_mm(read_text(args.file))
    if args.action == "encode":
        t = encode_mm(m, args.variant)
        emit(args, {"term": render(t)}, render(t))
        return 0
    trace, halted = run(m, args.fuel)
    rows = [(c.pc, c.m0, c.m1) for c in trace]
    text = "\n".join(f"{pc} {m0} {m1}" for pc, m0, m1 in rows)
    text += "\nhalted" if halted else "\nout of fuel"
    emit(args, {"trace": rows, "halted": halted}, text)
    return 0


def cmd_pn(args) -> int:
    from .petri_ea import export_net, place_bounded, place_by_id, translate

    net = translate(load_cluster(args))
    if args.action == "export":
        text = export_net(net)
        emit(args, {"net": text}, text.rstrip("\n"))
        return 0
    if not args.place:
        raise ParseError("pn bounded needs --place")
    bounded = place_bounded(net, place_by_id(net, args.place))
    emit(args, {"place": args.place, "bounded": bounded},
         "bounded" if bounded else "unbounded")
    return 0 if bounded else 1


# -- argument parsing -------------------------------------------------------

def _mode(p):
    p.add_argument("--mode", choices=[STATIC, DYNAMIC], default=DYNAMIC)


def _cluster_args(p, positional=True):
    if positional:
        p.add_argument("file", nargs="?", help="initial process (same as --process)")
    p.add_argument("--process")
    p.add_argument("--mods", help="modification processes separated by '---' lines")
    p.add_argument("--cluster", help="file with 'initial:' and 'mod:' sections")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)

    ap = argparse.ArgumentParser(prog="adapt", description="Adaptable process workbench")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, fn in (("parse", cmd_parse), ("classify", cmd_classify)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("file")
        p.add_argument("--encoded", action="store_true", help="admit err and k$ names")
        p.set_defaults(fn=fn)

    p = sub.add_parser("step", parents=[common])
    p.add_argument("file")
    p.add_argument("--encoded", action="store_true")
    _mode(p)
    p.set_defaults(fn=cmd_step)

    p = sub.add_parser("explore", parents=[common])
    p.add_argument("file")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--state-limit", type=int)
    p.add_argument("--list", action="store_true", help="print every state")
    p.add_argument("--encoded", action="store_true")
    _mode(p)
    p.set_defaults(fn=cmd_explore)

    p = sub.add_parser("dyn", parents=[common])
    _cluster_args(p)
    p.set_defaults(fn=cmd_dyn)

    p = sub.add_parser("ba", parents=[common])
    _cluster_args(p)
    p.add_argument("--barb", required=True)
    p.add_argument("--k", type=int, required=True)
    _mode(p)
    p.set_defaults(fn=cmd_ba)

    p = sub.add_parser("ea3", parents=[common])
    _cluster_args(p)
    p.add_argument("--barb", required=True)
    p.set_defaults(fn=cmd_ea3)

    p = sub.add_parser("mm", parents=[common])
    p.add_argument("action", choices=["encode", "run"])
    p.add_argument("file")
    p.add_argument("--variant", type=int, choices=[1, 2, 3], default=1)
    p.add_argument("--fuel", type=int, default=1000)
    p.set_defaults(fn=cmd_mm)

    p = sub.add_parser("pn", parents=[common])
    p.add_argument("action", choices=["export", "bounded"])
    _cluster_args(p)
    p.add_argument("--place")
    p.set_defaults(fn=cmd_pn)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    random.seed(args.seed)
    try:
        return args.fn(args)
    except (ParseError, TermError, OSError, KeyError, ValueError, RuntimeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
