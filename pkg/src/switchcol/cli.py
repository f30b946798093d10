"""Command line interface.

Exit codes: 0 for YES / verified, 1 for NO / refuted, 2 for bad input.
"""

from __future__ import annotations

import argparse
import sys

from .certificate import YesCertificate, format_certificate, load_certificate
from .errors import SwitchcolError
from .graph import OddCycleWitness, bipartition, format_graph, load_graph
from .group import arc_action_group, arc_group_to_edge_group, edge_action_group, format_group, load_group
from .oracle import DEFAULT_CAP, oracle_decide_2col
from .solver import arcs_to_edges, decide_2col, np_gadget
from .substitution import substitution_classes
from .verify import verify_certificate

EXIT_YES, EXIT_NO, EXIT_INPUT = 0, 1, 2


class _InputError(Exception):
    pass


def _summary(cert) -> str:
    if isinstance(cert, YesCertificate):
        return f"YES {cert.target}"
    line = f"NO {cert.reason}"
    if cert.pair is not None:
        line += f" ({cert.pair[0]}, {cert.pair[1]})"
    return line


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_solve(args) -> int:
    if args.certificate and args.verdict_only:
        raise _InputError("--certificate and --verdict-only cannot be combined")
    g = load_graph(args.graph)
    grp = load_group(args.group)
    cert = decide_2col(g, grp, certificate=not args.verdict_only)
    print(_summary(cert))
    if args.certificate:
        _write(args.certificate, format_certificate(cert))
    return EXIT_YES if isinstance(cert, YesCertificate) else EXIT_NO


def cmd_verify(args) -> int:
    g = load_graph(args.graph)
    grp = load_group(args.group)
    cert = load_certificate(args.cert, grp.m, grp.n)
    verdict = verify_certificate(g, grp, cert)
    print(("verified: " if verdict.ok else "refuted: ") + verdict.message)
    return EXIT_YES if verdict.ok else EXIT_NO


def _class_lines(grp) -> list[str]:
    classes = substitution_classes(grp)
    lines = [
        f"class {i} : {' '.join(map(str, sorted(classes.of(i))))}" for i in range(1, grp.m + 1)
    ]
    lines.append(f"c_gamma {classes.c_gamma}")
    return lines


def cmd_classes(args) -> int:
    grp = load_group(args.group)
    out = []
    if grp.m:
        out += _class_lines(edge_action_group(grp)[0])
    if grp.n:
        # reduced colours: c for an arc of colour c leaving side 0, n + c otherwise
        out.append("arcs")
        out += _class_lines(arc_group_to_edge_group(arc_action_group(grp)[0]))
    print("\n".join(out))
    return EXIT_YES


def cmd_reduce(args) -> int:
    g = load_graph(args.graph)
    grp = load_group(args.group)
    if g.edges:
        raise _InputError("reduce needs a graph with arcs only")
    bip = bipartition(g)
    if isinstance(bip, OddCycleWitness):
        raise _InputError("reduce needs a bipartite graph; odd cycle " + " ".join(map(str, bip.vertices)))
    reduced = arcs_to_edges(g, bip)
    rgrp = arc_group_to_edge_group(arc_action_group(grp)[0])
    sys.stdout.write(format_graph(reduced))
    sys.stdout.write(format_group(rgrp))
    return EXIT_YES


def cmd_gadget(args) -> int:
    edges = []
    vertex_count = None
    with open(args.edges, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            toks = raw.split("#", 1)[0].split()
            if not toks:
                continue
            try:
                if toks[0] == "v" and len(toks) == 2:
                    vertex_count = int(toks[1])
                elif len(toks) == 2:
                    edges.append((int(toks[0]), int(toks[1])))
                else:
                    raise ValueError
            except ValueError:
                raise _InputError(f"line {lineno}: expected 'u v' or 'v <count>'") from None
    sys.stdout.write(format_graph(np_gadget(edges, args.m, args.n, vertex_count)))
    return EXIT_YES


def cmd_oracle(args) -> int:
    g = load_graph(args.graph)
    grp = load_group(args.group)
    res = oracle_decide_2col(g, grp, cap=args.cap)
    print(f"YES {res.certificate.target}" if res.yes else "NO")
    if args.states:
        print(f"states {res.states}")
    if args.certificate and res.yes:
        _write(args.certificate, format_certificate(res.certificate))
    return EXIT_YES if res.yes else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="switchcol", description="Switchable 2-colouring of (m, n)-mixed graphs"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide 2-colourability and emit a certificate")
    p.add_argument("graph")
    p.add_argument("group")
    p.add_argument("--certificate", metavar="FILE", help="write the certificate here ('-' for stdout)")
    p.add_argument("--verdict-only", action="store_true", help="skip building the switch sequence")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a certificate")
    p.add_argument("graph")
    p.add_argument("group")
    p.add_argument("cert")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classes", help="print substitution classes of a group")
    p.add_argument("group")
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("reduce", help="rewrite an arcs-only graph as a 2n-edge-coloured graph")
    p.add_argument("graph")
    p.add_argument("group")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gadget", help="colour every edge of a classical graph with colour 1")
    p.add_argument("edges")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, default=0)
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("oracle", help="brute-force decision by exhaustive search")
    p.add_argument("graph")
    p.add_argument("group")
    p.add_argument("--certificate", metavar="FILE")
    p.add_argument("--states", action="store_true", help="print the number of explored configurations")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_YES
    try:
        return args.func(args)
    except (SwitchcolError, _InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
