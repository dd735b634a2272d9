"""Almost-split sequences, the hom order, and summand-count accounting.

Over a finite-type string presentation the indecomposables are exactly the
string modules of the finitely many words.  The almost-split sequence
ending at a non-projective string module is built by word surgery: at each
end of the word, add a hook (a direct letter followed by the maximal
inverse run) when possible, otherwise delete a cohook (the trailing direct
run together with the inverse letter before it).  The two one-sided
surgeries give the middle summands, both-sided surgery gives the translate.
Every sequence is certified against the defect identity

    dim Hom(U, tau V) - dim Hom(U, E) + dim Hom(U, V) = [U iso V]

over the full catalog, which characterizes almost-split sequences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classify import find_cyclic_witness
from .errors import InfiniteTypeError, StringAlgError, VerificationError
from .homalg import Intertwiner, ShortExactSequence, hom_basis
from .linalg import Matrix
from .presentation import Presentation, require_string
from .reps import (
    Representation,
    direct_sum,
    projective,
    string_module_with_nodes,
    zero_representation,
)
from .words import (
    Letter,
    Walk,
    Word,
    _extensions,
    format_walk,
    inverse,
    letter_key,
    letter_target,
    trivial_walk,
    walk_source,
    enumerate_words,
    word,
)


# ---------------------------------------------------------------------------
# catalog of indecomposables
# ---------------------------------------------------------------------------


@dataclass
class CatalogEntry:
    index: int
    word: Word
    rep: Representation
    nodes: list  # node placements of the string module
    is_projective: bool = False


class Catalog:
    """All indecomposables of a finite-type string presentation.

    Construction refuses infinite type, carrying a band witness.  Hom
    dimensions between members are precomputed; almost-split data is cached
    lazily per member.
    """

    def __init__(self, p: Presentation):
        require_string(p)
        band = find_cyclic_witness(p)
        if band is not None:
            raise InfiniteTypeError(format_walk(band.word.walk))
        from .classify import LetterAutomaton

        bound = LetterAutomaton(p).state_count
        words = enumerate_words(p, bound)
        self.p = p
        self.entries: list[CatalogEntry] = []
        self._by_key: dict[tuple, CatalogEntry] = {}
        for w in words:
            rep, nodes = string_module_with_nodes(p, w)
            entry = CatalogEntry(len(self.entries), w, rep, nodes)
            self.entries.append(entry)
            self._by_key[self._word_key(w)] = entry
        self.hom = [
            [len(hom_basis(u.rep, v.rep)) for v in self.entries] for u in self.entries
        ]
        self._mark_projectives()
        self._ar_cache: dict[int, "ARSequence"] = {}
        self._hom_into_cache: dict[Representation, list[int]] = {}

    def _word_key(self, w: Word):
        p = self.p
        if w.is_trivial:
            return ("e", w.walk.vertex)
        fwd = tuple(letter_key(p, l) for l in w.letters)
        bwd = tuple(letter_key(p, l) for l in inverse(w.walk).letters)
        return min(fwd, bwd)

    def lookup(self, w: Word) -> CatalogEntry:
        key = self._word_key(w)
        if key not in self._by_key:
            raise StringAlgError(f"word {format_walk(w.walk)} not in the catalog")
        return self._by_key[key]

    def _mark_projectives(self):
        for v in self.p.quiver.vertices:
            pv = projective(self.p, v)
            profile = [len(hom_basis(u.rep, pv)) for u in self.entries]
            hits = [e for e in self.entries if self.hom_column(e) == profile]
            if len(hits) != 1:
                raise VerificationError(
                    f"projective at {v} matched {len(hits)} catalog entries"
                )
            hits[0].is_projective = True

    def hom_column(self, e: CatalogEntry) -> list[int]:
        return [self.hom[i][e.index] for i in range(len(self.entries))]

    def hom_into(self, m: Representation) -> list[int]:
        """Hom dimensions from every catalog member into m, cached."""
        if m not in self._hom_into_cache:
            self._hom_into_cache[m] = [
                len(hom_basis(u.rep, m)) for u in self.entries
            ]
        return self._hom_into_cache[m]

    def ar_sequence(self, e: CatalogEntry) -> "ARSequence":
        if e.index not in self._ar_cache:
            self._ar_cache[e.index] = _build_ar_sequence(self, e)
        return self._ar_cache[e.index]

    def nonprojective(self) -> list[CatalogEntry]:
        return [e for e in self.entries if not e.is_projective]

    def __len__(self):
        return len(self.entries)


_catalog_cache: dict[int, Catalog] = {}


def catalog_for(p: Presentation) -> Catalog:
    key = id(p)
    if key not in _catalog_cache:
        _catalog_cache[key] = Catalog(p)
    return _catalog_cache[key]


def enumerate_indecomposables(p: Presentation, max_dim: int) -> list[CatalogEntry]:
    """Catalog members of total dimension at most max_dim.

    Raises InfiniteTypeError with a band witness when bands exist.
    """
    cat = catalog_for(p)
    return [e for e in cat.entries if e.rep.total_dim <= max_dim]


# ---------------------------------------------------------------------------
# word surgery
# ---------------------------------------------------------------------------


def _direct_extensions(p: Presentation, letters: tuple[Letter, ...], endv: str):
    return [m for m in _extensions(p, letters, endv) if m.is_direct]


def _walk_end(p: Presentation, letters: tuple[Letter, ...], start: str) -> str:
    return letter_target(p, letters[-1]) if letters else start


# Surgery operates on (letters, anchor) pairs; the anchor is the source
# vertex, which survives even when every letter is deleted.


def _invert_pair(p: Presentation, pair):
    letters, anchor = pair
    if not letters:
        return pair
    return tuple(l.inverse() for l in reversed(letters)), letter_target(p, letters[-1])


def _add_hook_right(p: Presentation, pair, beta: Letter):
    """Append the direct letter beta and then the maximal inverse run."""
    letters, anchor = pair
    out = letters + (beta,)
    while True:
        endv = _walk_end(p, out, anchor)
        inv = [m for m in _extensions(p, out, endv) if not m.is_direct]
        if not inv:
            return out, anchor
        if len(inv) > 1:
            raise VerificationError("inverse continuation not unique; axioms violated?")
        out = out + (inv[0],)


def _delete_cohook_right(p: Presentation, pair):
    """Drop the trailing direct run and the inverse letter before it.

    Returns None when the word is entirely direct (nothing to delete); an
    empty remainder is the trivial word at the anchor.
    """
    letters, anchor = pair
    n = len(letters)
    m = 0
    while m < n and letters[n - 1 - m].is_direct:
        m += 1
    if m == n:
        return None
    return letters[: n - m - 1], anchor


@dataclass
class _EndOp:
    kind: str  # "add" or "delete"
    beta: Letter | None = None


def _apply_right(p: Presentation, op: _EndOp, pair):
    if op.kind == "add":
        return _add_hook_right(p, pair, op.beta)
    return _delete_cohook_right(p, pair)


def _apply_left(p: Presentation, op: _EndOp, pair):
    out = _apply_right(p, op, _invert_pair(p, pair))
    return None if out is None else _invert_pair(p, out)


def _pair_word(p: Presentation, pair) -> Word:
    letters, anchor = pair
    if not letters:
        return word(p, trivial_walk(anchor))
    return word(p, Walk(letters))


@dataclass
class ARSequence:
    """Almost-split sequence 0 -> tau V -> E -> V -> 0 for V = M(word)."""

    target_word: Word
    tau_word: Word
    middle_words: list[Word]
    tau: Representation
    middle: Representation
    target: Representation
    ses: ShortExactSequence
    middle_summand_count: int
    defect_checked: bool = False


def ar_sequence(p: Presentation, w: Word, catalog: Catalog | None = None) -> ARSequence:
    cat = catalog or catalog_for(p)
    entry = cat.lookup(w)
    return cat.ar_sequence(entry)


def _build_ar_sequence(cat: Catalog, entry: CatalogEntry) -> ARSequence:
    p = cat.p
    if entry.is_projective:
        raise StringAlgError(
            f"M({format_walk(entry.word.walk)}) is projective; no almost-split sequence ends there"
        )
    w = entry.word
    letters = w.letters
    start = walk_source(p, w.walk)
    base = (letters, start)

    right_cands = _direct_extensions(p, letters, _walk_end(p, letters, start))
    rev_pair = _invert_pair(p, base)
    left_cands = _direct_extensions(p, rev_pair[0], _walk_end(p, rev_pair[0], rev_pair[1]))
    if not letters:
        # the two ends of a trivial word take distinct extensions
        pool = sorted(right_cands, key=lambda l: letter_key(p, l))
        right_cands = pool[:1]
        left_cands = pool[1:2]
    elif len(right_cands) > 1 or len(left_cands) > 1:
        raise VerificationError("extension not unique at an end; axioms violated?")

    op_r = _EndOp("add", right_cands[0]) if right_cands else _EndOp("delete")
    op_l = _EndOp("add", left_cands[0]) if left_cands else _EndOp("delete")

    # middle summands: one-sided surgery on w
    pair_r = _apply_right(p, op_r, base)
    pair_l = _apply_left(p, op_l, base)

    # translate: both ends, additions before deletions so that a deletion
    # may consume into freshly added material on serial words
    t = base
    for op, side in ((op_r, "r"), (op_l, "l")):
        if op.kind == "add":
            t = _apply_right(p, op, t) if side == "r" else _apply_left(p, op, t)
    for op, side in ((op_r, "r"), (op_l, "l")):
        if t is not None and op.kind == "delete":
            t = _apply_right(p, op, t) if side == "r" else _apply_left(p, op, t)
    if t is None:
        raise StringAlgError("surgery deleted everything; input looks projective")

    tau_w = _pair_word(p, t)
    tau_entry, tau_nodes = _oriented_entry(cat, tau_w)

    # node-offset bookkeeping for the four canonical graph maps; node lists
    # are re-oriented when the catalog stores the inverse representative
    middles: list[CatalogEntry] = []
    maps_from_tau: list[dict] = []
    maps_to_v: list[dict] = []
    n_w, n_tau = len(letters), len(tau_w.letters)
    if pair_r is not None:
        er, er_nodes = _oriented_entry(cat, _pair_word(p, pair_r))
        n_r = len(pair_r[0])
        middles.append(er)
        maps_from_tau.append(
            _graph_map(p, tau_entry.rep, tau_nodes, er.rep, er_nodes, n_r - n_tau)
        )
        maps_to_v.append(_graph_map(p, er.rep, er_nodes, entry.rep, entry.nodes, 0))
    if pair_l is not None:
        el, el_nodes = _oriented_entry(cat, _pair_word(p, pair_l))
        n_l = len(pair_l[0])
        middles.append(el)
        # tau and the left-surgery word share their left ends exactly
        maps_from_tau.append(
            _graph_map(p, tau_entry.rep, tau_nodes, el.rep, el_nodes, 0)
        )
        maps_to_v.append(
            _graph_map(p, el.rep, el_nodes, entry.rep, entry.nodes, -(n_l - n_w))
        )
    if not middles:
        raise StringAlgError("empty middle; input looks projective")

    middle_rep = direct_sum([e.rep for e in middles])
    ses = _assemble_ses(p, tau_entry.rep, middle_rep, entry.rep, middles,
                        maps_from_tau, maps_to_v)
    seq = ARSequence(
        target_word=w,
        tau_word=tau_w,
        middle_words=[e.word for e in middles],
        tau=tau_entry.rep,
        middle=middle_rep,
        target=entry.rep,
        ses=ses,
        middle_summand_count=len(middles),
    )
    _check_defect(cat, entry, tau_entry, seq)
    seq.defect_checked = True
    return seq


def _oriented_entry(cat: Catalog, w: Word):
    """Catalog entry for w together with its nodes enumerated in w's own
    reading direction (reversed when the stored representative is the
    inverse word)."""
    entry = cat.lookup(w)
    if entry.word.letters == w.letters:
        return entry, entry.nodes
    rev = tuple(l.inverse() for l in reversed(entry.word.letters))
    if rev != w.letters:
        raise VerificationError("catalog entry does not match the surgery word")
    return entry, list(reversed(entry.nodes))


def _graph_map(p, src_rep, src_nodes, dst_rep, dst_nodes, node_offset: int) -> dict:
    """Map sending node i of the source word to node i + node_offset of the
    destination word when in range, else to zero; per-vertex matrices."""
    q = p.field_order
    mats = {
        v: np.zeros((src_rep.dim(v), dst_rep.dim(v)), dtype=np.int64)
        for v in p.quiver.vertices
    }
    for i, (sv, sc) in enumerate(src_nodes):
        j = i + node_offset
        if 0 <= j < len(dst_nodes):
            dv, dc = dst_nodes[j]
            if dv != sv:
                raise VerificationError("graph map misaligned: vertex mismatch")
            mats[sv][sc, dc] = 1
    return {v: Matrix(m, q) for v, m in mats.items()}


def _assemble_ses(p, tau_rep, middle_rep, v_rep, middles, maps_from_tau, maps_to_v):
    q = p.field_order
    incl_mats = {}
    proj_mats = {}
    # try sign choices so that the composite vanishes
    for sign in (1, q - 1):
        for v in p.quiver.vertices:
            blocks_in = []
            blocks_out = []
            for k, entry in enumerate(middles):
                g = maps_from_tau[k][v]
                f = maps_to_v[k][v]
                if k == 1:
                    f = f.scale(sign)
                blocks_in.append(g.a)
                blocks_out.append(f.a)
            incl_mats[v] = Matrix(np.hstack(blocks_in), q) if blocks_in else Matrix.zeros(tau_rep.dim(v), 0, q)
            proj_mats[v] = Matrix(np.vstack(blocks_out), q) if blocks_out else Matrix.zeros(0, v_rep.dim(v), q)
        ses = ShortExactSequence(
            left=tau_rep,
            middle=middle_rep,
            right=v_rep,
            incl=Intertwiner(tau_rep, middle_rep, incl_mats),
            proj=Intertwiner(middle_rep, v_rep, proj_mats),
        )
        try:
            ses.verify()
            return ses
        except VerificationError:
            if len(middles) < 2:
                raise
            continue
    raise VerificationError("no sign choice makes the surgery sequence exact")


def _check_defect(cat: Catalog, v_entry: CatalogEntry, tau_entry: CatalogEntry, seq: ARSequence):
    for u in cat.entries:
        lhs = (
            cat.hom[u.index][tau_entry.index]
            - sum(cat.hom[u.index][cat.lookup(mw).index] for mw in seq.middle_words)
            + cat.hom[u.index][v_entry.index]
        )
        want = 1 if u.index == v_entry.index else 0
        if lhs != want:
            raise VerificationError(
                f"defect identity fails at U=M({format_walk(u.word.walk)}): {lhs} != {want}"
            )


# ---------------------------------------------------------------------------
# hom order and the summand-count ledger
# ---------------------------------------------------------------------------


@dataclass
class DeltaProfile:
    """delta(V) = dim Hom(V, N) - dim Hom(V, M), indexed like the catalog."""

    values: list[int]

    def nonnegative(self) -> bool:
        return all(x >= 0 for x in self.values)


def hom_leq(
    M: Representation, N: Representation, catalog: Catalog | None = None
) -> tuple[bool, DeltaProfile]:
    """The hom-order test: equal dimension vectors and delta(V) >= 0 for
    every indecomposable V."""
    cat = catalog or catalog_for(M.pres)
    into_m = cat.hom_into(M)
    into_n = cat.hom_into(N)
    delta = DeltaProfile([n - m for m, n in zip(into_m, into_n)])
    if M.dimension_vector() != N.dimension_vector():
        return False, delta
    return delta.nonnegative(), delta


@dataclass
class RiedtmannWitness:
    X: Representation
    Y: Representation
    Z: Representation
    verified: bool


def riedtmann_witness(
    M: Representation, N: Representation, catalog: Catalog | None = None
) -> RiedtmannWitness:
    """Build X, Y, Z so that M + X + Z and N + Y have equal hom counts
    against every catalog member; verified by direct computation."""
    cat = catalog or catalog_for(M.pres)
    ok, delta = hom_leq(M, N, cat)
    if not ok:
        raise StringAlgError("riedtmann witness needs hom_leq(M, N) to hold")
    xs, ys, zs = [], [], []
    for e in cat.nonprojective():
        d = delta.values[e.index]
        if d <= 0:
            continue
        seq = cat.ar_sequence(e)
        for _ in range(d):
            xs.append(seq.tau)
            ys.append(seq.middle)
            zs.append(seq.target)
    p = M.pres
    X = direct_sum(xs, label="X") if xs else zero_representation(p)
    Y = direct_sum(ys, label="Y") if ys else zero_representation(p)
    Z = direct_sum(zs, label="Z") if zs else zero_representation(p)
    left = direct_sum([M, X, Z]) if (xs or zs) else M
    right = direct_sum([N, Y]) if ys else N
    for u in cat.entries:
        if len(hom_basis(u.rep, left)) != len(hom_basis(u.rep, right)):
            raise VerificationError(
                f"witness identity fails against M({format_walk(u.word.walk)})"
            )
    return RiedtmannWitness(X, Y, Z, True)


def delta_count_formula(
    M: Representation, N: Representation, catalog: Catalog | None = None
) -> int:
    """The accounting sum over non-projective indecomposables of
    delta(V) * (2 - middle summand count of the sequence at V)."""
    cat = catalog or catalog_for(M.pres)
    ok, delta = hom_leq(M, N, cat)
    if not ok:
        raise StringAlgError("delta formula needs hom_leq(M, N) to hold")
    total = 0
    for e in cat.nonprojective():
        d = delta.values[e.index]
        if d:
            total += d * (2 - cat.ar_sequence(e).middle_summand_count)
    return total
