"""Quiver presentations with monomial relations.

A presentation is a finite quiver, a set of relation paths of length at
least two, and a prime field order.  The file grammar is line oriented:

    # comment
    vertices: 1 2 3
    arrow: a 1 2
    relation: a b
    field: 32003

Serialization reproduces the grammar bit-exactly in declaration order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import NotFiniteDimensionalError, ParseError, StringAlgError
from .linalg import is_prime

DEFAULT_FIELD_ORDER = 32003

_ID_CHARS = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_")


def _valid_id(s: str) -> bool:
    return bool(s) and set(s) <= _ID_CHARS


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise StringAlgError("duplicate vertex identifiers")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise StringAlgError("duplicate arrow identifiers")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise StringAlgError(f"arrow {a.name} has undeclared endpoint")

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise StringAlgError(f"unknown arrow {name!r}")

    def arrows_from(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def arrows_into(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.target == v]

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.name == name:
                return i
        raise StringAlgError(f"unknown arrow {name!r}")


@dataclass(frozen=True)
class Presentation:
    quiver: Quiver
    relations: tuple[tuple[str, ...], ...]  # arrow-name sequences, length >= 2
    field_order: int = DEFAULT_FIELD_ORDER
    _arrow_map: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not is_prime(self.field_order):
            raise StringAlgError(f"field order {self.field_order} is not prime")
        amap = {a.name: a for a in self.quiver.arrows}
        object.__setattr__(self, "_arrow_map", amap)
        for rel in self.relations:
            if len(rel) < 2:
                raise StringAlgError(f"relation {' '.join(rel)} shorter than two arrows")
            for i, name in enumerate(rel):
                if name not in amap:
                    raise StringAlgError(f"relation uses unknown arrow {name!r}")
                if i > 0 and amap[rel[i - 1]].target != amap[name].source:
                    raise StringAlgError(
                        f"relation {' '.join(rel)} is not a composable path: "
                        f"{rel[i - 1]} ends at {amap[rel[i - 1]].target}, "
                        f"{name} starts at {amap[name].source}"
                    )

    @property
    def q(self) -> int:
        return self.field_order

    def arrow(self, name: str) -> Arrow:
        try:
            return self._arrow_map[name]
        except KeyError:
            raise StringAlgError(f"unknown arrow {name!r}") from None

    def max_relation_length(self) -> int:
        return max((len(r) for r in self.relations), default=0)

    def with_field(self, q: int) -> "Presentation":
        return replace(self, field_order=q)

    def path_is_relation_free(self, path: tuple[str, ...]) -> bool:
        """True when no relation occurs as a contiguous factor of the path."""
        for rel in self.relations:
            r = len(rel)
            for i in range(len(path) - r + 1):
                if path[i : i + r] == rel:
                    return False
        return True


# ---------------------------------------------------------------------------
# parsing and serialization
# ---------------------------------------------------------------------------


def parse_presentation(text: str) -> Presentation:
    vertices: list[str] = []
    arrows: list[Arrow] = []
    relations: list[tuple[str, ...]] = []
    field_order: int | None = None
    seen_vertices: set[str] = set()
    arrow_names: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(f"expected '<keyword>: ...', got {raw!r}", lineno, 1)
        keyword, _, rest = line.partition(":")
        keyword = keyword.strip()
        tokens = rest.split()
        if keyword == "vertices":
            if not tokens:
                raise ParseError("empty vertex list", lineno)
            for tok in tokens:
                if not _valid_id(tok):
                    raise ParseError(f"bad vertex identifier {tok!r}", lineno)
                if tok in seen_vertices:
                    raise ParseError(f"duplicate vertex {tok!r}", lineno)
                seen_vertices.add(tok)
                vertices.append(tok)
        elif keyword == "arrow":
            if len(tokens) != 3:
                raise ParseError("arrow line needs '<id> <src> <tgt>'", lineno)
            name, src, tgt = tokens
            if not _valid_id(name):
                raise ParseError(f"bad arrow identifier {name!r}", lineno)
            if name in arrow_names:
                raise ParseError(f"duplicate arrow {name!r}", lineno)
            if src not in seen_vertices:
                raise ParseError(f"unknown vertex {src!r}", lineno)
            if tgt not in seen_vertices:
                raise ParseError(f"unknown vertex {tgt!r}", lineno)
            arrow_names.add(name)
            arrows.append(Arrow(name, src, tgt))
        elif keyword == "relation":
            if len(tokens) < 2:
                raise ParseError("relation needs at least two arrows", lineno)
            amap = {a.name: a for a in arrows}
            for tok in tokens:
                if tok not in amap:
                    raise ParseError(f"unknown arrow {tok!r} in relation", lineno)
            for left, right in zip(tokens, tokens[1:]):
                if amap[left].target != amap[right].source:
                    raise ParseError(
                        f"non-composable path: {left} ends at {amap[left].target}, "
                        f"{right} starts at {amap[right].source}",
                        lineno,
                    )
            relations.append(tuple(tokens))
        elif keyword == "field":
            if len(tokens) != 1 or not tokens[0].isdigit():
                raise ParseError("field line needs a single integer", lineno)
            value = int(tokens[0])
            if not is_prime(value):
                raise ParseError(f"field order {value} is not prime", lineno)
            field_order = value
        else:
            raise ParseError(f"unknown keyword {keyword!r}", lineno, 1)

    return Presentation(
        quiver=Quiver(tuple(vertices), tuple(arrows)),
        relations=tuple(relations),
        field_order=DEFAULT_FIELD_ORDER if field_order is None else field_order,
    )


def serialize_presentation(p: Presentation) -> str:
    lines = []
    if p.quiver.vertices:
        lines.append("vertices: " + " ".join(p.quiver.vertices))
    for a in p.quiver.arrows:
        lines.append(f"arrow: {a.name} {a.source} {a.target}")
    for rel in p.relations:
        lines.append("relation: " + " ".join(rel))
    lines.append(f"field: {p.field_order}")
    return "\n".join(lines) + "\n"


def load_presentation(path) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())


# ---------------------------------------------------------------------------
# finite dimensionality
# ---------------------------------------------------------------------------


def _suffix_states(p: Presentation):
    """Automaton on relation-free paths; states are bounded suffixes.

    A path extends by an arrow exactly when the window made of the last
    (max relation length - 1) arrows plus the new arrow stays relation free.
    """
    window = max(p.max_relation_length() - 1, 0)

    def step(state: tuple[str, ...], arrow_name: str) -> tuple[str, ...] | None:
        ext = state + (arrow_name,)
        if not p.path_is_relation_free(ext):
            return None
        return ext[-window:] if window else ()

    return window, step


def surviving_paths(p: Presentation, max_len: int | None = None):
    """All relation-free paths, as arrow-name tuples, including one empty
    path per vertex (returned as (vertex, ()) pairs).

    With max_len None the enumeration runs to exhaustion and raises
    NotFiniteDimensionalError when the algebra is infinite dimensional.
    """
    if max_len is None:
        finite, witness = check_finite_dimensional(p)
        if not finite:
            raise NotFiniteDimensionalError(witness)
        bound = None
    else:
        bound = max_len
    out = [(v, ()) for v in p.quiver.vertices]
    frontier = [(v, ()) for v in p.quiver.vertices]
    length = 0
    while frontier and (bound is None or length < bound):
        nxt = []
        for endv, path in frontier:
            for a in p.quiver.arrows_from(endv):
                ext = path + (a.name,)
                tail = ext[-p.max_relation_length():] if p.relations else ext[:0]
                if p.path_is_relation_free(tail):
                    nxt.append((a.target, ext))
        out.extend(nxt)
        frontier = nxt
        length += 1
    return out


def check_finite_dimensional(p: Presentation) -> tuple[bool, tuple[str, ...] | None]:
    """Whether only finitely many paths avoid the relations.

    On False the witness is a directed cycle of arrows whose repeated
    traversal never meets a relation.
    """
    _, step = _suffix_states(p)
    # States are (current vertex, bounded window of trailing arrows).
    Node = tuple[str, tuple[str, ...]]
    seen: set[Node] = set()
    order: list[Node] = []
    edges: dict[Node, list[tuple[Node, str]]] = {}
    todo: list[Node] = [(v, ()) for v in p.quiver.vertices]
    while todo:
        node = todo.pop()
        if node in seen:
            continue
        seen.add(node)
        endv, win = node
        outs = []
        for a in p.quiver.arrows_from(endv):
            nwin = step(win, a.name)
            if nwin is None:
                continue
            nxt = (a.target, nwin)
            outs.append((nxt, a.name))
            if nxt not in seen:
                todo.append(nxt)
        edges[node] = outs
    # cycle detection with arrow labels for the witness
    WHITE, GRAY, BLACK = 0, 1, 2
    color: dict[Node, int] = {n: WHITE for n in seen}
    parent: dict[Node, tuple[Node, str]] = {}

    for start in sorted(seen):
        if color[start] != WHITE:
            continue
        stack = [(start, iter(edges[start]))]
        color[start] = GRAY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt, label in it:
                if color[nxt] == GRAY:
                    # reconstruct the arrow cycle nxt -> ... -> node -> nxt
                    cycle = [label]
                    cur = node
                    while cur != nxt:
                        cur, lab = parent[cur]
                        cycle.append(lab)
                    cycle.reverse()
                    return False, tuple(cycle)
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    parent[nxt] = (node, label)
                    stack.append((nxt, iter(edges[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
    return True, None


# ---------------------------------------------------------------------------
# string axioms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomReport:
    s1: bool
    s2: bool
    s3: bool
    violations: tuple[str, ...]

    @property
    def is_string(self) -> bool:
        return self.s1 and self.s2 and self.s3


def validate_axioms(p: Presentation) -> AxiomReport:
    """Check the three string-presentation conditions.

    S1: every vertex has in-degree and out-degree at most two.
    S2: each arrow has at most one relation-free successor and at most one
        relation-free predecessor among length-two paths.
    S3: structural in this format, since relations are paths by construction.
    """
    violations: list[str] = []
    s1 = True
    for v in p.quiver.vertices:
        indeg = len(p.quiver.arrows_into(v))
        outdeg = len(p.quiver.arrows_from(v))
        if indeg > 2:
            s1 = False
            violations.append(f"S1: vertex {v} has in-degree {indeg}")
        if outdeg > 2:
            s1 = False
            violations.append(f"S1: vertex {v} has out-degree {outdeg}")
    s2 = True
    for a in p.quiver.arrows:
        succ = [
            b.name
            for b in p.quiver.arrows_from(a.target)
            if p.path_is_relation_free((a.name, b.name))
        ]
        if len(succ) > 1:
            s2 = False
            violations.append(
                f"S2: arrow {a.name} has successors {' '.join(succ)} all avoiding relations"
            )
        pred = [
            b.name
            for b in p.quiver.arrows_into(a.source)
            if p.path_is_relation_free((b.name, a.name))
        ]
        if len(pred) > 1:
            s2 = False
            violations.append(
                f"S2: arrow {a.name} has predecessors {' '.join(pred)} all avoiding relations"
            )
    return AxiomReport(s1=s1, s2=s2, s3=True, violations=tuple(violations))


def require_string(p: Presentation):
    from .errors import NonStringPresentationError

    report = validate_axioms(p)
    if not report.is_string:
        raise NonStringPresentationError("; ".join(report.violations))
    finite, witness = check_finite_dimensional(p)
    if not finite:
        raise NotFiniteDimensionalError(witness)
