"""Switch elements, their composition, and finite switch groups.

A switch element acts on an (m, n)-mixed graph at one vertex: ``alpha``
permutes the m edge colours, ``beta`` permutes the n arc colours and
``flips[i]`` says whether arcs of colour ``i + 1`` are reversed. Colours are
1-based throughout the public API.

Composition follows what two successive switches at one vertex actually do
to an arc: its colour goes through ``beta`` twice, and the second flip is
looked up at the *already permuted* colour.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Literal, Sequence

import numpy as np

from .errors import InvalidInputError, ParseError, ResourceLimitError

DEFAULT_CLOSURE_CAP = 10**6
# Cayley tables above this order would not fit comfortably in memory.
MAX_TABLE_ORDER = 4096

ColourKind = Literal["edge", "arc"]


def _check_perm(images: Sequence[int], what: str) -> tuple[int, ...]:
    images = tuple(int(x) for x in images)
    if sorted(images) != list(range(1, len(images) + 1)):
        raise InvalidInputError(f"{what} {images} is not a permutation of 1..{len(images)}")
    return images


def perm_from_cycles(size: int, cycles: Iterable[Sequence[int]] = ()) -> tuple[int, ...]:
    """Image tuple of the permutation of ``1..size`` given in cycle notation."""
    images = list(range(1, size + 1))
    for cycle in cycles:
        for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
            if not 1 <= a <= size:
                raise InvalidInputError(f"cycle entry {a} outside 1..{size}")
            images[a - 1] = b
    return _check_perm(images, "cycle product")


@dataclass(frozen=True)
class SwitchElement:
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    flips: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_perm(self.alpha, "alpha"))
        object.__setattr__(self, "beta", _check_perm(self.beta, "beta"))
        object.__setattr__(self, "flips", tuple(bool(f) for f in self.flips))
        if len(self.flips) != len(self.beta):
            raise InvalidInputError(
                f"flips has {len(self.flips)} entries, expected {len(self.beta)}"
            )

    @classmethod
    def build(
        cls,
        m: int = 0,
        n: int = 0,
        alpha: Iterable[Sequence[int]] = (),
        beta: Iterable[Sequence[int]] = (),
        flips: Iterable[int] = (),
    ) -> "SwitchElement":
        """Convenience constructor from cycle notation; ``flips`` lists the
        1-based arc colours whose arcs get reversed."""
        flipset = set(flips)
        return cls(
            perm_from_cycles(m, alpha),
            perm_from_cycles(n, beta),
            tuple(i + 1 in flipset for i in range(n)),
        )

    @property
    def m(self) -> int:
        return len(self.alpha)

    @property
    def n(self) -> int:
        return len(self.beta)

    def sort_key(self) -> tuple:
        return (self.alpha, self.beta, self.flips)

    def is_identity(self) -> bool:
        return (
            all(a == i + 1 for i, a in enumerate(self.alpha))
            and all(b == i + 1 for i, b in enumerate(self.beta))
            and not any(self.flips)
        )

    def __str__(self) -> str:
        return format_element(self)


def identity(m: int, n: int) -> SwitchElement:
    return SwitchElement(tuple(range(1, m + 1)), tuple(range(1, n + 1)), (False,) * n)


def compose_action(p1: SwitchElement, p2: SwitchElement) -> SwitchElement:
    """The single element equivalent to switching with ``p1`` and then ``p2``."""
    if (p1.m, p1.n) != (p2.m, p2.n):
        raise InvalidInputError(
            f"cannot compose elements of dimensions {(p1.m, p1.n)} and {(p2.m, p2.n)}"
        )
    alpha = tuple(p2.alpha[a - 1] for a in p1.alpha)
    beta = tuple(p2.beta[b - 1] for b in p1.beta)
    flips = tuple(f ^ p2.flips[b - 1] for f, b in zip(p1.flips, p1.beta))
    return SwitchElement(alpha, beta, flips)


def inverse(p: SwitchElement) -> SwitchElement:
    alpha = [0] * p.m
    for i, a in enumerate(p.alpha):
        alpha[a - 1] = i + 1
    beta = [0] * p.n
    flips = [False] * p.n
    for i, b in enumerate(p.beta):
        beta[b - 1] = i + 1
        # the inverse undoes the flip that p applied to colour i, now sitting at b
        flips[b - 1] = p.flips[i]
    return SwitchElement(tuple(alpha), tuple(beta), tuple(flips))


@dataclass(frozen=True)
class ColourOrbit:
    kind: ColourKind
    members: frozenset[int]


@dataclass(frozen=True, eq=False)
class SwitchGroup:
    """A finite group of switch elements, stored as a sorted element list.

    Elements are sorted lexicographically on (alpha, beta, flips), so the
    identity always has index 0.
    """

    m: int
    n: int
    elements: tuple[SwitchElement, ...]
    generators: tuple[SwitchElement, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[SwitchElement]:
        return iter(self.elements)

    def __contains__(self, p: object) -> bool:
        return p in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SwitchGroup):
            return NotImplemented
        return (self.m, self.n, self.elements) == (other.m, other.n, other.elements)

    def __hash__(self) -> int:
        return hash((self.m, self.n, self.elements))

    @cached_property
    def _index(self) -> dict[SwitchElement, int]:
        return {p: k for k, p in enumerate(self.elements)}

    def index(self, p: SwitchElement) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise InvalidInputError(f"element {format_element(p)} is not in the group") from None

    @property
    def identity(self) -> SwitchElement:
        return self.elements[0]

    # -- dense tables, 0-based, for the array kernels ------------------------

    @cached_property
    def alpha_table(self) -> np.ndarray:
        """``alpha_table[e, c]`` is the 0-based image of 0-based edge colour c."""
        t = np.zeros((len(self), self.m), dtype=np.int64)
        for k, p in enumerate(self.elements):
            t[k] = np.asarray(p.alpha, dtype=np.int64) - 1
        return t

    @cached_property
    def arc_table(self) -> np.ndarray:
        """``arc_table[e, 2*c + d]``: image of arc state (0-based colour c,
        reversed-bit d) under element e, encoded the same way."""
        t = np.zeros((len(self), 2 * self.n), dtype=np.int64)
        for k, p in enumerate(self.elements):
            for c in range(self.n):
                for d in (0, 1):
                    t[k, 2 * c + d] = 2 * (p.beta[c] - 1) + (d ^ int(p.flips[c]))
        return t

    @cached_property
    def inv_table(self) -> np.ndarray:
        return np.array([self.index(inverse(p)) for p in self.elements], dtype=np.int64)

    @cached_property
    def mul_table(self) -> np.ndarray:
        """``mul_table[a, b]`` indexes ``compose_action(elements[a], elements[b])``."""
        order = len(self)
        if order > MAX_TABLE_ORDER:
            raise ResourceLimitError(
                f"group of order {order} exceeds the Cayley-table limit {MAX_TABLE_ORDER}"
            )
        alpha = self.alpha_table
        beta = np.zeros((order, self.n), dtype=np.int64)
        flips = np.zeros((order, self.n), dtype=np.int64)
        for k, p in enumerate(self.elements):
            beta[k] = np.asarray(p.beta, dtype=np.int64) - 1
            flips[k] = np.asarray(p.flips, dtype=np.int64)
        lookup = _KeyLookup(alpha, beta, flips)
        table = np.empty((order, order), dtype=np.int64)
        for a in range(order):
            # row a: apply a first, then every b
            ra = alpha[:, alpha[a]] if self.m else alpha[:, :0]
            rb = beta[:, beta[a]] if self.n else beta[:, :0]
            rf = flips[a][None, :] ^ (flips[:, beta[a]] if self.n else flips[:, :0])
            table[a] = lookup(ra, rb, rf)
        return table


class _KeyLookup:
    """Maps rows of (alpha, beta, flips) arrays back to element indices."""

    def __init__(self, alpha, beta, flips):
        m = alpha.shape[1]
        n = beta.shape[1]
        self.radix_a = max(m, 1)
        self.radix_b = max(n, 1)
        bits = m * max(m - 1, 1).bit_length() + n * max(n - 1, 1).bit_length() + n
        self.vectorised = bits <= 62
        if self.vectorised:
            keys = self._keys(alpha, beta, flips)
            self.order = np.argsort(keys)
            self.sorted_keys = keys[self.order]
        else:
            self.table = {
                (tuple(a), tuple(b), tuple(f)): k
                for k, (a, b, f) in enumerate(zip(alpha.tolist(), beta.tolist(), flips.tolist()))
            }

    def _keys(self, alpha, beta, flips):
        key = np.zeros(alpha.shape[0], dtype=np.int64)
        for col in range(alpha.shape[1]):
            key = key * self.radix_a + alpha[:, col]
        for col in range(beta.shape[1]):
            key = key * self.radix_b + beta[:, col]
        for col in range(flips.shape[1]):
            key = key * 2 + flips[:, col]
        return key

    def __call__(self, alpha, beta, flips):
        if self.vectorised:
            keys = self._keys(alpha, beta, flips)
            pos = np.searchsorted(self.sorted_keys, keys)
            if np.any(pos >= len(self.sorted_keys)) or np.any(self.sorted_keys[pos] != keys):
                raise InvalidInputError("element set is not closed under composition")
            return self.order[pos]
        out = np.empty(alpha.shape[0], dtype=np.int64)
        for r, (a, b, f) in enumerate(zip(alpha.tolist(), beta.tolist(), flips.tolist())):
            try:
                out[r] = self.table[(tuple(a), tuple(b), tuple(f))]
            except KeyError:
                raise InvalidInputError("element set is not closed under composition") from None
        return out


def closure(
    generators: Sequence[SwitchElement],
    m: int | None = None,
    n: int | None = None,
    cap: int = DEFAULT_CLOSURE_CAP,
) -> SwitchGroup:
    """Smallest group containing ``generators``.

    ``m`` and ``n`` are only needed when ``generators`` is empty.
    """
    generators = tuple(generators)
    if generators:
        m0, n0 = generators[0].m, generators[0].n
        if any((g.m, g.n) != (m0, n0) for g in generators):
            raise InvalidInputError("generators have mismatched dimensions")
        if (m, n) != (None, None) and (m, n) != (m0, n0):
            raise InvalidInputError(f"generators have dimensions {(m0, n0)}, expected {(m, n)}")
        m, n = m0, n0
    elif m is None or n is None:
        raise InvalidInputError("dimensions are required for an empty generator list")

    e = identity(m, n)
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in generators:
            y = compose_action(x, g)
            if y not in seen:
                if len(seen) >= cap:
                    raise ResourceLimitError(f"group closure exceeds {cap} elements")
                seen.add(y)
                queue.append(y)
    elements = tuple(sorted(seen, key=SwitchElement.sort_key))
    return SwitchGroup(m, n, elements, generators)


def orbit(g: SwitchGroup, kind: ColourKind, i: int) -> ColourOrbit:
    size = g.m if kind == "edge" else g.n
    if kind not in ("edge", "arc"):
        raise InvalidInputError(f"unknown colour kind {kind!r}")
    if not 1 <= i <= size:
        raise InvalidInputError(f"{kind} colour {i} outside 1..{size}")
    if kind == "edge":
        members = {p.alpha[i - 1] for p in g.elements}
    else:
        members = {p.beta[i - 1] for p in g.elements}
    return ColourOrbit(kind, frozenset(members))


def orbits(g: SwitchGroup, kind: ColourKind) -> list[ColourOrbit]:
    """All orbits of ``kind`` colours, ordered by least member."""
    size = g.m if kind == "edge" else g.n
    out: list[ColourOrbit] = []
    covered: set[int] = set()
    for i in range(1, size + 1):
        if i not in covered:
            o = orbit(g, kind, i)
            covered |= o.members
            out.append(o)
    return out


def is_abelian(g: SwitchGroup) -> bool:
    # generators suffice when present; they generate the whole group
    gens = g.generators or g.elements
    return all(
        compose_action(a, b) == compose_action(b, a)
        for a, b in itertools.combinations(gens, 2)
    )


def arc_element_to_edge_element(p: SwitchElement) -> SwitchElement:
    """Image of an arc-only element on 2n edge colours: colour ``i`` encodes
    an arc of colour i running A->B, colour ``n + i`` one running B->A."""
    if p.m != 0:
        raise InvalidInputError("arc-to-edge conversion needs an element with m = 0")
    n = p.n
    alpha = [0] * (2 * n)
    for i in range(n):
        b = p.beta[i]
        if p.flips[i]:
            alpha[i], alpha[n + i] = n + b, b
        else:
            alpha[i], alpha[n + i] = b, n + b
    return SwitchElement(tuple(alpha), (), ())


def arc_group_to_edge_group(g: SwitchGroup) -> SwitchGroup:
    if g.m != 0:
        raise InvalidInputError(f"arc-to-edge conversion needs m = 0, got m = {g.m}")
    images = [arc_element_to_edge_element(p) for p in g.elements]
    if len(set(images)) != len(images):
        raise InvalidInputError("element map is not injective; group is not faithful")
    return SwitchGroup(
        2 * g.n,
        0,
        tuple(sorted(images, key=SwitchElement.sort_key)),
        tuple(arc_element_to_edge_element(p) for p in g.generators),
    )


def _projection(
    g: SwitchGroup, project
) -> tuple[SwitchGroup, dict[SwitchElement, SwitchElement]]:
    preimage: dict[SwitchElement, SwitchElement] = {}
    for p in g.elements:  # sorted, so the first preimage seen is the least
        preimage.setdefault(project(p), p)
    gens = []
    for x in g.generators:
        img = project(x)
        if img not in gens:
            gens.append(img)
    first = next(iter(preimage))
    group = SwitchGroup(
        first.m,
        first.n,
        tuple(sorted(preimage, key=SwitchElement.sort_key)),
        tuple(gens),
    )
    return group, preimage


def edge_action_group(g: SwitchGroup) -> tuple[SwitchGroup, dict[SwitchElement, SwitchElement]]:
    """Image of ``g`` acting on edge colours alone (n = 0), with the least
    preimage of every image element."""
    return _projection(g, lambda p: SwitchElement(p.alpha, (), ()))


def arc_action_group(g: SwitchGroup) -> tuple[SwitchGroup, dict[SwitchElement, SwitchElement]]:
    """Image of ``g`` acting on arcs alone (m = 0), with least preimages."""
    return _projection(g, lambda p: SwitchElement((), p.beta, p.flips))


# -- text format --------------------------------------------------------------


def format_element(p: SwitchElement) -> str:
    alpha = " ".join(map(str, p.alpha)) or "."
    beta = " ".join(map(str, p.beta)) or "."
    flips = "".join("-" if f else "+" for f in p.flips) or "."
    return f"{alpha} | {beta} | {flips}"


def parse_element(text: str, m: int, n: int, line: int | None = None) -> SwitchElement:
    parts = [s.strip() for s in text.split("|")]
    if len(parts) != 3:
        raise ParseError("element needs three '|'-separated sections", line)

    def ints(section: str, size: int, what: str) -> list[int]:
        if section == ".":
            values = []
        else:
            try:
                values = [int(tok) for tok in section.split()]
            except ValueError:
                raise ParseError(f"non-integer entry in {what} section", line) from None
        if len(values) != size:
            raise ParseError(f"{what} section has {len(values)} entries, expected {size}", line)
        return values

    alpha = ints(parts[0], m, "alpha")
    beta = ints(parts[1], n, "beta")
    flipstr = "" if parts[2] == "." else parts[2].replace(" ", "")
    if len(flipstr) != n or set(flipstr) - {"+", "-"}:
        raise ParseError(f"flip section must be {n} characters from '+-'", line)
    try:
        return SwitchElement(tuple(alpha), tuple(beta), tuple(ch == "-" for ch in flipstr))
    except InvalidInputError as exc:
        raise ParseError(str(exc), line) from None


def format_group(g: SwitchGroup) -> str:
    lines = [f"grp {g.m} {g.n}"]
    lines += [f"g {format_element(p)}" for p in g.generators]
    return "\n".join(lines) + "\n"


def parse_group(text: str, cap: int = DEFAULT_CLOSURE_CAP) -> SwitchGroup:
    m = n = None
    gens: list[SwitchElement] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "grp":
            if m is not None:
                raise ParseError("duplicate 'grp' header", lineno)
            try:
                m, n = (int(tok) for tok in rest.split())
            except ValueError:
                raise ParseError("header must be 'grp <m> <n>'", lineno) from None
            if m < 0 or n < 0:
                raise ParseError("colour counts must be non-negative", lineno)
        elif head == "g":
            if m is None:
                raise ParseError("generator before 'grp' header", lineno)
            gens.append(parse_element(rest, m, n, lineno))
        else:
            raise ParseError(f"unknown record {head!r}", lineno)
    if m is None:
        raise ParseError("missing 'grp <m> <n>' header")
    return closure(gens, m, n, cap=cap)


def load_group(path, cap: int = DEFAULT_CLOSURE_CAP) -> SwitchGroup:
    with open(path, encoding="utf-8") as fh:
        return parse_group(fh.read(), cap=cap)
