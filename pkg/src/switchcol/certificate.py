"""Certificate values and their text format.

A YES certificate is a switch sequence plus a 2-colouring of the vertices.
The sequence has an explicit part (``s`` lines) followed by *lifts*: each
lift names a cotree edge ``uv`` and a switch sequence on the labelled C4
v0 v1 v2 v3; it stands for that sequence with v0 replaced by ``u``, v3 by
``v``, v2 by the rest of ``u``'s side of its component and v1 by the rest of
``v``'s side (all in ascending vertex order). Lifts keep certificates
linear in size; :meth:`YesCertificate.expand` produces the plain sequence.

File layout::

    cert yes k2 <i>          | cert yes t2 <i> | cert yes k1 | cert no <reason>
    s <vertex> <element>     (explicit steps)
    l <u> <v> <count>        (a lift, followed by <count> witness lines)
    w <c4 vertex 0-3> <element>
    map <one 0/1 character per vertex>     (YES k2/t2; for t2, side 0 holds tails)
    walk <v0> <v1> ...       (NO: closed walk)
    inc e|a <1-based index>  (NO: incidences)
    pair <i> <j>             (NO bad_cycle: target colour, lone colour)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, ParseError
from .graph import MixedGraph, spanning_forest
from .group import SwitchElement, format_element, parse_element
from .switching import SwitchSequence, format_step, parse_step

NO_REASONS = ("odd_cycle", "mixed_edge_arc", "orbit", "direction_conflict", "bad_cycle", "incidence")
TARGET_KINDS = ("k1", "k2", "t2")


@dataclass(frozen=True)
class Target:
    kind: str
    colour: int = 0

    def __post_init__(self):
        if self.kind not in TARGET_KINDS:
            raise InvalidInputError(f"unknown target kind {self.kind!r}")

    def __str__(self) -> str:
        return self.kind if self.kind == "k1" else f"{self.kind} {self.colour}"


@dataclass(frozen=True)
class Lift:
    u: int
    v: int
    witness: tuple[tuple[int, SwitchElement], ...]  # (C4 vertex 0..3, element)


@dataclass(frozen=True)
class YesCertificate:
    target: Target
    sequence: SwitchSequence | None = field(default_factory=SwitchSequence)
    lifts: tuple[Lift, ...] = ()
    colouring: tuple[int, ...] | None = None

    @property
    def materialized(self) -> bool:
        return self.sequence is not None

    def elements(self):
        if self.sequence is not None:
            for _, p in self.sequence.steps:
                yield p
        for lift in self.lifts:
            for _, p in lift.witness:
                yield p

    def expand(self, g: MixedGraph) -> SwitchSequence:
        """The plain switch sequence this certificate stands for."""
        if self.sequence is None:
            raise InvalidInputError("verdict-only certificate has no sequence")
        if not self.lifts:
            return self.sequence
        classes = _LiftClasses(g, self.colouring)
        steps = list(self.sequence.steps)
        for lift in self.lifts:
            groups = classes.roles(lift.u, lift.v)
            for role, p in lift.witness:
                steps.extend((w, p) for w in groups[role])
        return SwitchSequence(tuple(steps))

    def length(self, g: MixedGraph) -> int:
        """Length of :meth:`expand` without materialising it."""
        if self.sequence is None:
            raise InvalidInputError("verdict-only certificate has no sequence")
        total = len(self.sequence)
        if self.lifts:
            classes = _LiftClasses(g, self.colouring)
            for lift in self.lifts:
                sizes = classes.role_sizes(lift.u, lift.v)
                total += sum(sizes[role] for role, _ in lift.witness)
        return total


class _LiftClasses:
    """Side classes per component under a certificate's colouring."""

    def __init__(self, g: MixedGraph, colouring):
        if colouring is None or len(colouring) != g.vertex_count:
            raise InvalidInputError("lifts need a colouring with one entry per vertex")
        f = spanning_forest(g)
        self.comp = f.component
        self.side = np.asarray(colouring, dtype=np.int64)
        self._members: dict = {}
        key = self.comp * 2 + self.side
        counts = np.bincount(key, minlength=2 * (int(self.comp.max()) + 1) if len(key) else 0)
        self.counts = counts

    def _class(self, comp: int, side: int) -> list[int]:
        k = (comp, side)
        if k not in self._members:
            mask = (self.comp == comp) & (self.side == side)
            self._members[k] = (np.flatnonzero(mask) + 1).tolist()
        return self._members[k]

    def roles(self, u: int, v: int) -> list[list[int]]:
        C = int(self.comp[u - 1])
        xs = [w for w in self._class(C, int(self.side[u - 1])) if w != u]
        ys = [w for w in self._class(C, int(self.side[v - 1])) if w != v]
        return [[u], ys, xs, [v]]

    def role_sizes(self, u: int, v: int) -> list[int]:
        C = int(self.comp[u - 1])
        nx = int(self.counts[2 * C + int(self.side[u - 1])]) - 1
        ny = int(self.counts[2 * C + int(self.side[v - 1])]) - 1
        return [1, ny, nx, 1]


@dataclass(frozen=True)
class NoCertificate:
    reason: str
    walk: tuple[int, ...] = ()
    incidences: tuple[tuple[str, int], ...] = ()  # ('e' | 'a', 1-based index)
    pair: tuple[int, int] | None = None

    def __post_init__(self):
        if self.reason not in NO_REASONS:
            raise InvalidInputError(f"unknown NO reason {self.reason!r}")


Certificate = YesCertificate | NoCertificate


def incidence_ref(g: MixedGraph, k: int) -> tuple[str, int]:
    """('e'|'a', 1-based index) for combined incidence id ``k``."""
    E = len(g.edges)
    return ("e", k + 1) if k < E else ("a", k - E + 1)


# -- text format ----------------------------------------------------------------


def format_certificate(cert: Certificate) -> str:
    out: list[str] = []
    if isinstance(cert, YesCertificate):
        if cert.sequence is None:
            raise InvalidInputError("verdict-only certificates cannot be written")
        out.append(f"cert yes {cert.target}")
        out.extend(format_step(v, p) for v, p in cert.sequence.steps)
        for lift in cert.lifts:
            out.append(f"l {lift.u} {lift.v} {len(lift.witness)}")
            out.extend(f"w {r} {format_element(p)}" for r, p in lift.witness)
        if cert.colouring is not None:
            out.append("map " + "".join(map(str, cert.colouring)))
    else:
        out.append(f"cert no {cert.reason}")
        if cert.walk:
            out.append("walk " + " ".join(map(str, cert.walk)))
        out.extend(f"inc {kind} {idx}" for kind, idx in cert.incidences)
        if cert.pair is not None:
            out.append(f"pair {cert.pair[0]} {cert.pair[1]}")
    return "\n".join(out) + "\n"


def parse_certificate(text: str, m: int, n: int) -> Certificate:
    lines = [
        (lineno, raw.split("#", 1)[0].strip())
        for lineno, raw in enumerate(text.splitlines(), 1)
    ]
    lines = [(k, s) for k, s in lines if s]
    if not lines:
        raise ParseError("empty certificate")
    lineno, header = lines[0]
    toks = header.split()
    if len(toks) < 3 or toks[0] != "cert" or toks[1] not in ("yes", "no"):
        raise ParseError("header must be 'cert yes <target>' or 'cert no <reason>'", lineno)
    body = lines[1:]
    if toks[1] == "yes":
        return _parse_yes(toks, body, m, n, lineno)
    return _parse_no(toks, body, lineno)


def _ints(toks, lineno) -> list[int]:
    try:
        return [int(t) for t in toks]
    except ValueError:
        raise ParseError("expected integers", lineno) from None


def _parse_yes(toks, body, m, n, lineno) -> YesCertificate:
    kind = toks[2]
    if kind == "k1":
        if len(toks) != 3:
            raise ParseError("'cert yes k1' takes no colour", lineno)
        target = Target("k1")
    elif kind in ("k2", "t2"):
        if len(toks) != 4:
            raise ParseError(f"'cert yes {kind}' needs a colour", lineno)
        target = Target(kind, _ints(toks[3:], lineno)[0])
    else:
        raise ParseError(f"unknown target {kind!r}", lineno)
    steps = []
    lifts = []
    colouring = None
    pos = 0
    while pos < len(body):
        lineno, line = body[pos]
        head = line.split(None, 1)[0]
        if head == "s":
            if lifts:
                raise ParseError("explicit steps must precede lifts", lineno)
            steps.append(parse_step(line, m, n, lineno))
            pos += 1
        elif head == "l":
            parts = line.split()
            if len(parts) != 4:
                raise ParseError("lift record is 'l <u> <v> <count>'", lineno)
            u, v, count = _ints(parts[1:], lineno)
            witness = []
            for off in range(1, count + 1):
                if pos + off >= len(body):
                    raise ParseError("lift is missing witness lines", lineno)
                wno, wline = body[pos + off]
                wtoks = wline.split(None, 2)
                if len(wtoks) != 3 or wtoks[0] != "w":
                    raise ParseError("expected a witness record 'w <vertex> <element>'", wno)
                role = _ints(wtoks[1:2], wno)[0]
                if not 0 <= role <= 3:
                    raise ParseError("witness vertex must be 0..3", wno)
                witness.append((role, parse_element(wtoks[2], m, n, wno)))
            lifts.append(Lift(u, v, tuple(witness)))
            pos += count + 1
        elif head == "map":
            bits = line.split(None, 1)[1] if len(line.split()) > 1 else ""
            if set(bits) - {"0", "1"}:
                raise ParseError("map must be a string of 0/1 characters", lineno)
            colouring = tuple(int(ch) for ch in bits)
            pos += 1
        else:
            raise ParseError(f"unexpected record {head!r} in YES certificate", lineno)
    return YesCertificate(target, SwitchSequence(tuple(steps)), tuple(lifts), colouring)


def _parse_no(toks, body, lineno) -> NoCertificate:
    if len(toks) != 3 or toks[2] not in NO_REASONS:
        raise ParseError(f"unknown NO reason {' '.join(toks[2:])!r}", lineno)
    walk: tuple[int, ...] = ()
    incs = []
    pair = None
    for lineno, line in body:
        parts = line.split()
        if parts[0] == "walk":
            walk = tuple(_ints(parts[1:], lineno))
        elif parts[0] == "inc":
            if len(parts) != 3 or parts[1] not in ("e", "a"):
                raise ParseError("incidence record is 'inc e|a <index>'", lineno)
            incs.append((parts[1], _ints(parts[2:], lineno)[0]))
        elif parts[0] == "pair":
            if len(parts) != 3:
                raise ParseError("pair record is 'pair <i> <j>'", lineno)
            pair = tuple(_ints(parts[1:], lineno))
        else:
            raise ParseError(f"unexpected record {parts[0]!r} in NO certificate", lineno)
    return NoCertificate(toks[2], walk, tuple(incs), pair)


def load_certificate(path, m: int, n: int) -> Certificate:
    with open(path, encoding="utf-8") as fh:
        return parse_certificate(fh.read(), m, n)
