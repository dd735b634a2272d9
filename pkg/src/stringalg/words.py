"""Letters, walks, words and cyclic words over a presentation.

A letter is an arrow or its formal inverse.  A walk is a composable
sequence of letters, or a single vertex (the trivial walk).  A walk is a
word when it has no factor l l^{-1} and neither it nor its inverse
contains a relation path as a factor.  Cyclic words are the non-serial
closed words whose square is again a word; bands are the primitive ones.

CLI syntax: letters separated by spaces, inverses marked "^-1", trivial
words written "e(<vertex>)".  Example: "a b^-1 a".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import total_ordering

from .errors import CompositionError, ParseError, StringAlgError
from .presentation import Presentation


class Direction(Enum):
    DIRECT = 0
    INVERSE = 1


@total_ordering
@dataclass(frozen=True)
class Letter:
    arrow: str
    direction: Direction

    @property
    def is_direct(self) -> bool:
        return self.direction is Direction.DIRECT

    def inverse(self) -> "Letter":
        return Letter(
            self.arrow,
            Direction.INVERSE if self.is_direct else Direction.DIRECT,
        )

    def __repr__(self):
        return self.arrow + ("" if self.is_direct else "^-1")

    def __lt__(self, other: "Letter"):
        # ordering refined per presentation via letter_key; this is a fallback
        return (self.arrow, self.direction.value) < (other.arrow, other.direction.value)


def letter_source(p: Presentation, l: Letter) -> str:
    a = p.arrow(l.arrow)
    return a.source if l.is_direct else a.target


def letter_target(p: Presentation, l: Letter) -> str:
    a = p.arrow(l.arrow)
    return a.target if l.is_direct else a.source


def letter_key(p: Presentation, l: Letter) -> tuple[int, int]:
    """Total order on letters: arrow declaration order, direct before inverse."""
    return (p.quiver.arrow_index(l.arrow), l.direction.value)


def all_letters(p: Presentation) -> list[Letter]:
    out = []
    for a in p.quiver.arrows:
        out.append(Letter(a.name, Direction.DIRECT))
        out.append(Letter(a.name, Direction.INVERSE))
    return out


@dataclass(frozen=True)
class Walk:
    """Either a trivial walk at a vertex or a nonempty letter sequence."""

    letters: tuple[Letter, ...]
    vertex: str | None = None  # set exactly when the walk is trivial

    def __post_init__(self):
        if (len(self.letters) == 0) != (self.vertex is not None):
            raise StringAlgError("a walk is either a vertex or a nonempty letter sequence")

    @property
    def is_trivial(self) -> bool:
        return not self.letters

    def __len__(self):
        return len(self.letters)

    def __repr__(self):
        return f"Walk({format_walk(self)!r})"


def trivial_walk(vertex: str) -> Walk:
    return Walk((), vertex)


def make_walk(p: Presentation, letters) -> Walk:
    """Build a walk, checking that consecutive letters compose."""
    letters = tuple(letters)
    if not letters:
        raise StringAlgError("use trivial_walk for length-zero walks")
    for left, right in zip(letters, letters[1:]):
        if letter_target(p, left) != letter_source(p, right):
            raise CompositionError(
                f"letters {left} and {right} do not compose: "
                f"{left} ends at {letter_target(p, left)}, "
                f"{right} starts at {letter_source(p, right)}"
            )
    return Walk(letters)


def walk_source(p: Presentation, w: Walk) -> str:
    return w.vertex if w.is_trivial else letter_source(p, w.letters[0])


def walk_target(p: Presentation, w: Walk) -> str:
    return w.vertex if w.is_trivial else letter_target(p, w.letters[-1])


def inverse(w: Walk) -> Walk:
    """Reverse the walk and invert each letter; trivial walks are fixed."""
    if w.is_trivial:
        return w
    return Walk(tuple(l.inverse() for l in reversed(w.letters)))


def concat(p: Presentation, u: Walk, v: Walk) -> Walk:
    """Concatenation; trivial walks act as units."""
    if walk_target(p, u) != walk_source(p, v):
        raise CompositionError(
            f"walks do not compose: {format_walk(u)} ends at {walk_target(p, u)}, "
            f"{format_walk(v)} starts at {walk_source(p, v)}"
        )
    if u.is_trivial:
        return v
    if v.is_trivial:
        return u
    return Walk(u.letters + v.letters)


def walk_vertices(p: Presentation, w: Walk) -> list[str]:
    """The length+1 vertices visited by the walk."""
    if w.is_trivial:
        return [w.vertex]
    out = [letter_source(p, w.letters[0])]
    for l in w.letters:
        out.append(letter_target(p, l))
    return out


# ---------------------------------------------------------------------------
# word conditions
# ---------------------------------------------------------------------------


def _direct_run_violation(p: Presentation, letters: tuple[Letter, ...]):
    """Find a relation occurring inside the letters or their inverses.

    Relations are direct paths, so any occurrence lies inside a maximal run
    of direct letters (reading the walk) or of inverse letters (reading the
    inverse walk).  Returns a description or None.
    """
    n = len(letters)
    maxrel = p.max_relation_length()
    if maxrel == 0:
        return None
    i = 0
    while i < n:
        d = letters[i].direction
        j = i
        while j < n and letters[j].direction == d:
            j += 1
        run = [l.arrow for l in letters[i:j]]
        if d is Direction.INVERSE:
            run.reverse()
        path = tuple(run)
        for rel in p.relations:
            r = len(rel)
            for k in range(len(path) - r + 1):
                if path[k : k + r] == rel:
                    side = "walk" if d is Direction.DIRECT else "inverse walk"
                    return f"relation {' '.join(rel)} occurs in the {side} at letters {i}..{j - 1}"
        i = j
    return None


def is_word(p: Presentation, w: Walk) -> tuple[bool, str | None]:
    """Word test; on failure the second component pinpoints the violation."""
    if w.is_trivial:
        if w.vertex not in p.quiver.vertices:
            return False, f"unknown vertex {w.vertex!r}"
        return True, None
    for i, (left, right) in enumerate(zip(w.letters, w.letters[1:])):
        if letter_target(p, left) != letter_source(p, right):
            return False, f"letters {left} {right} at {i} do not compose"
        if right == left.inverse():
            return False, f"factor {left} {right} of the form l l^-1 at position {i}"
    violation = _direct_run_violation(p, w.letters)
    if violation is not None:
        return False, violation
    return True, None


@dataclass(frozen=True)
class Word:
    """A walk together with its checked word certificate."""

    walk: Walk

    def __len__(self):
        return len(self.walk)

    @property
    def letters(self) -> tuple[Letter, ...]:
        return self.walk.letters

    @property
    def is_trivial(self) -> bool:
        return self.walk.is_trivial

    def __repr__(self):
        return f"Word({format_walk(self.walk)!r})"


def word(p: Presentation, w: Walk) -> Word:
    ok, violation = is_word(p, w)
    if not ok:
        raise StringAlgError(f"not a word: {violation}")
    return Word(w)


def is_serial(w: Walk) -> bool:
    """Direct or inverse; trivial walks are serial."""
    return all(l.is_direct for l in w.letters) or all(not l.is_direct for l in w.letters)


def is_cyclic(p: Presentation, w: Word) -> bool:
    """Non-serial, closed, and with a valid square."""
    walk = w.walk
    if is_serial(walk):
        return False
    if walk_source(p, walk) != walk_target(p, walk):
        return False
    square = Walk(walk.letters + walk.letters)
    ok, _ = is_word(p, square)
    return ok


@dataclass(frozen=True)
class CyclicWord:
    word: Word
    primitive: bool

    @property
    def letters(self) -> tuple[Letter, ...]:
        return self.word.letters

    def __len__(self):
        return len(self.word)

    def __repr__(self):
        return f"CyclicWord({format_walk(self.word.walk)!r})"


def cyclic_word(p: Presentation, w: Word) -> CyclicWord:
    if not is_cyclic(p, w):
        raise StringAlgError(f"{format_walk(w.walk)} is not a cyclic word")
    primitive, _, _ = is_primitive(p, w)
    return CyclicWord(w, primitive)


def is_primitive(p: Presentation, w: Word) -> tuple[bool, Word, int]:
    """Primitivity of a cyclic word; on failure also the root and exponent.

    Returns (True, w, 1) when primitive, else (False, root, r) with
    w = root^r and root itself cyclic.
    """
    if not is_cyclic(p, w):
        raise StringAlgError("primitivity is only defined for cyclic words")
    n = len(w)
    for period in range(1, n):
        if n % period:
            continue
        if all(w.letters[i] == w.letters[i % period] for i in range(n)):
            root = Word(Walk(w.letters[:period]))
            return False, root, n // period
    return True, w, 1


def rotations(w: Word) -> list[Word]:
    n = len(w)
    return [Word(Walk(w.letters[i:] + w.letters[:i])) for i in range(n)]


def canonical_cyclic(p: Presentation, w: Word | CyclicWord):
    """Lexicographically least rotation of w or of its inverse.

    The letter order is arrow declaration order with direct before inverse,
    so the choice is reproducible; the function is idempotent.  The return
    type matches the input type.
    """
    base = w.word if isinstance(w, CyclicWord) else w
    candidates = rotations(base) + rotations(Word(inverse(base.walk)))
    best = min(candidates, key=lambda ww: [letter_key(p, l) for l in ww.letters])
    if isinstance(w, CyclicWord):
        return CyclicWord(best, w.primitive)
    return best


# ---------------------------------------------------------------------------
# Fine and Wilf periodicity threshold
# ---------------------------------------------------------------------------


class Verdict(Enum):
    FORCED_COMMON_ROOT = "ForcedCommonRoot"
    INCONCLUSIVE = "Inconclusive"


def fine_wolf_common_power(x, y, prefix_len: int) -> Verdict:
    """Periodicity verdict for two sequences sharing a left factor.

    When powers of x and of y share a left factor of length at least
    |x| + |y| - gcd(|x|, |y|), the two are powers of a common sequence.
    The caller supplies the observed common-left-factor length.
    """
    nx, ny = len(x), len(y)
    if nx == 0 or ny == 0:
        raise StringAlgError("sequences must be nonempty")
    threshold = nx + ny - math.gcd(nx, ny)
    return Verdict.FORCED_COMMON_ROOT if prefix_len >= threshold else Verdict.INCONCLUSIVE


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _extensions(p: Presentation, letters: tuple[Letter, ...], at_vertex: str) -> list[Letter]:
    """Letters that extend the given valid word by one position."""
    out = []
    maxrel = p.max_relation_length()
    for a in p.quiver.arrows_from(at_vertex):
        out.append(Letter(a.name, Direction.DIRECT))
    for a in p.quiver.arrows_into(at_vertex):
        out.append(Letter(a.name, Direction.INVERSE))
    good = []
    for cand in out:
        if letters:
            last = letters[-1]
            if cand == last.inverse():
                continue
        window = letters[-max(maxrel - 1, 0):] + (cand,) if maxrel else (cand,)
        if _direct_run_violation(p, window) is None:
            good.append(cand)
    return sorted(good, key=lambda l: letter_key(p, l))


def enumerate_words(p: Presentation, max_len: int) -> list[Word]:
    """All words of length at most max_len, one per inversion pair {w, w^-1}.

    Includes the trivial word at each vertex.  Output is sorted by length
    and then lexicographically by letter keys.
    """
    out: list[Word] = [Word(trivial_walk(v)) for v in p.quiver.vertices]
    frontier: list[tuple[tuple[Letter, ...], str]] = [((), v) for v in p.quiver.vertices]
    for _ in range(max_len):
        nxt = []
        for letters, endv in frontier:
            for cand in _extensions(p, letters, endv):
                ext = letters + (cand,)
                nxt.append((ext, letter_target(p, cand)))
        frontier = nxt
        for letters, _ in frontier:
            keyed = [letter_key(p, l) for l in letters]
            inv = [letter_key(p, l.inverse()) for l in reversed(letters)]
            if keyed <= inv:
                out.append(Word(Walk(letters)))
    out.sort(key=lambda w: (len(w), [letter_key(p, l) for l in w.letters], str(w.walk.vertex)))
    return out


# ---------------------------------------------------------------------------
# text syntax
# ---------------------------------------------------------------------------


def format_walk(w: Walk) -> str:
    if w.is_trivial:
        return f"e({w.vertex})"
    return " ".join(l.arrow + ("" if l.is_direct else "^-1") for l in w.letters)


def format_word(w: Word | CyclicWord) -> str:
    if isinstance(w, CyclicWord):
        return format_walk(w.word.walk)
    return format_walk(w.walk)


def parse_walk(p: Presentation, text: str) -> Walk:
    text = text.strip()
    if text.startswith("e(") and text.endswith(")"):
        v = text[2:-1].strip()
        if v not in p.quiver.vertices:
            raise ParseError(f"unknown vertex {v!r} in trivial word")
        return trivial_walk(v)
    letters = []
    for tok in text.split():
        if tok.endswith("^-1"):
            name, direction = tok[:-3], Direction.INVERSE
        else:
            name, direction = tok, Direction.DIRECT
        try:
            p.arrow(name)
        except StringAlgError:
            raise ParseError(f"unknown arrow {name!r} in word") from None
        letters.append(Letter(name, direction))
    if not letters:
        raise ParseError("empty word text")
    return make_walk(p, letters)


def parse_word(p: Presentation, text: str) -> Word:
    return word(p, parse_walk(p, text))
