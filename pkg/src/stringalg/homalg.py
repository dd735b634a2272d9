"""Hom spaces, first extension groups, and explicit extension middle terms.

Hom(M, N) is the solution space of the commutation system
X^M_a f_t = f_s X^N_a over all arrows a.  The system is assembled sparsely;
between string-like modules every equation has at most two terms, so
elimination never fills in and large band modules stay cheap.

Ext^1(M, N) is realized on a projective cover P0 of M with syzygy S:
the cokernel of restriction Hom(P0, N) -> Hom(S, N).  Each cocycle gives
an explicit short exact sequence by pushing P0 out along it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StringAlgError, VerificationError
from .linalg import Matrix, sparse_kernel, vstack
from .reps import (
    Representation,
    direct_sum,
    projective_with_basis,
    quotient_representation,
    subrepresentation,
)


@dataclass
class Intertwiner:
    """A module map: one matrix per vertex, commuting with all arrow actions."""

    source: Representation
    target: Representation
    mats: dict[str, Matrix]

    def verify(self) -> None:
        p = self.source.pres
        for v in p.quiver.vertices:
            want = (self.source.dim(v), self.target.dim(v))
            if self.mats[v].shape != want:
                raise VerificationError(f"map at vertex {v} has shape {self.mats[v].shape}")
        for a in p.quiver.arrows:
            lhs = self.source.mats[a.name] @ self.mats[a.target]
            rhs = self.mats[a.source] @ self.target.mats[a.name]
            if lhs != rhs:
                raise VerificationError(f"map does not commute with arrow {a.name}")

    def compose(self, other: "Intertwiner") -> "Intertwiner":
        if self.target is not other.source:
            raise StringAlgError("intertwiners do not compose")
        mats = {v: self.mats[v] @ other.mats[v] for v in self.mats}
        return Intertwiner(self.source, other.target, mats)

    def add(self, other: "Intertwiner") -> "Intertwiner":
        return Intertwiner(
            self.source, self.target, {v: self.mats[v] + other.mats[v] for v in self.mats}
        )

    def scale(self, c: int) -> "Intertwiner":
        return Intertwiner(self.source, self.target, {v: m.scale(c) for v, m in self.mats.items()})

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats.values())

    def flatten(self) -> np.ndarray:
        p = self.source.pres
        parts = [self.mats[v].a.reshape(-1) for v in p.quiver.vertices]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def rank(self) -> int:
        return sum(self.mats[v].rank() for v in self.source.pres.quiver.vertices)


def zero_map(M: Representation, N: Representation) -> Intertwiner:
    return Intertwiner(
        M, N, {v: Matrix.zeros(M.dim(v), N.dim(v), M.q) for v in M.pres.quiver.vertices}
    )


def identity_map(M: Representation) -> Intertwiner:
    return Intertwiner(
        M, M, {v: Matrix.identity(M.dim(v), M.q) for v in M.pres.quiver.vertices}
    )


# ---------------------------------------------------------------------------
# Hom
# ---------------------------------------------------------------------------


def hom_basis(M: Representation, N: Representation) -> list[Intertwiner]:
    """Basis of the intertwiner space, deterministic and verified."""
    if M.pres is not N.pres:
        raise StringAlgError("modules live over different presentations")
    p = M.pres
    q = M.q
    verts = p.quiver.vertices
    off: dict[str, int] = {}
    total = 0
    for v in verts:
        off[v] = total
        total += M.dim(v) * N.dim(v)

    def var(v: str, i: int, j: int) -> int:
        return off[v] + i * N.dim(v) + j

    rows: list[dict[int, int]] = []
    for a in p.quiver.arrows:
        s, t = a.source, a.target
        XM = M.mats[a.name].a
        XN = N.mats[a.name].a
        ds, dt = M.dim(s), N.dim(t)
        xm_nz = [np.nonzero(XM[i])[0] for i in range(ds)]
        xn_nz = [np.nonzero(XN[:, j])[0] for j in range(dt)]
        for i in range(ds):
            for j in range(dt):
                row: dict[int, int] = {}
                for k in xm_nz[i]:
                    key = var(t, int(k), j)
                    row[key] = (row.get(key, 0) + int(XM[i, k])) % q
                for l in xn_nz[j]:
                    key = var(s, i, int(l))
                    row[key] = (row.get(key, 0) - int(XN[l, j])) % q
                if any(row.values()):
                    rows.append(row)
    basis_vecs = sparse_kernel(total, rows, q)
    out = []
    for vec in basis_vecs:
        mats = {}
        for v in verts:
            m = np.zeros((M.dim(v), N.dim(v)), dtype=np.int64)
            flat = m.reshape(-1)
            base = off[v]
            size = m.size
            for idx, c in vec.items():
                if base <= idx < base + size:
                    flat[idx - base] = c
            mats[v] = Matrix(m, q)
        f = Intertwiner(M, N, mats)
        f.verify()
        out.append(f)
    return out


def hom_dim(M: Representation, N: Representation) -> int:
    return len(hom_basis(M, N))


# ---------------------------------------------------------------------------
# projective cover and syzygy
# ---------------------------------------------------------------------------


@dataclass
class CoverData:
    module: Representation
    cover: Representation  # P0
    epi: Intertwiner  # P0 -> M
    syzygy: Representation
    incl: Intertwiner  # syzygy -> P0
    top_vertices: list[str]  # one entry per projective summand of P0


def _radical_rows(M: Representation, v: str) -> Matrix:
    mats = [M.mats[a.name] for a in M.pres.quiver.arrows_into(v)]
    mats = [m for m in mats if m.rows]
    if not mats:
        return Matrix.zeros(0, M.dim(v), M.q)
    return vstack(mats)


def projective_cover(M: Representation) -> CoverData:
    """Minimal projective cover with its syzygy, all maps verified."""
    if M.total_dim == 0:
        raise StringAlgError("zero module has no projective cover summands")
    p = M.pres
    q = M.q
    # lift a basis of the top at each vertex
    lifts: list[tuple[str, Matrix]] = []
    for v in p.quiver.vertices:
        rad = _radical_rows(M, v)
        _, pivots = rad.rref()
        free = [j for j in range(M.dim(v)) if j not in pivots]
        for j in free:
            row = np.zeros((1, M.dim(v)), dtype=np.int64)
            row[0, j] = 1
            lifts.append((v, Matrix(row, q)))
    summands = []
    bases = []
    for v, _ in lifts:
        rep, index, gen = projective_with_basis(p, v)
        summands.append(rep)
        bases.append(index)
    P0 = direct_sum(summands, label="P0") if summands else None
    if P0 is None:
        raise StringAlgError("module has empty top")
    # epi on each summand: generator path e_v goes to the lift, paths act
    eps = {v: np.zeros((P0.dim(v), M.dim(v)), dtype=np.int64) for v in p.quiver.vertices}
    offsets = {v: 0 for v in p.quiver.vertices}
    for (v, lift_row), rep, index in zip(lifts, summands, bases):
        for path, (endv, local_idx) in index.items():
            img = lift_row @ M.path_action(path, v)
            eps[endv][offsets[endv] + local_idx] = img.a[0]
        for u in p.quiver.vertices:
            offsets[u] += rep.dim(u)
    epi = Intertwiner(P0, M, {v: Matrix(eps[v], q) for v in p.quiver.vertices})
    epi.verify()
    for v in p.quiver.vertices:
        if epi.mats[v].rank() != M.dim(v):
            raise VerificationError(f"projective cover is not surjective at vertex {v}")
    kernel_rows = {v: epi.mats[v].left_kernel() for v in p.quiver.vertices}
    syz, incl_mats = subrepresentation(P0, kernel_rows, label=f"syzygy({M.label})")
    incl = Intertwiner(syz, P0, incl_mats)
    incl.verify()
    return CoverData(M, P0, epi, syz, incl, [v for v, _ in lifts])


def syzygy(M: Representation) -> tuple[Representation, Intertwiner]:
    data = projective_cover(M)
    return data.syzygy, data.incl


# ---------------------------------------------------------------------------
# Ext^1
# ---------------------------------------------------------------------------


@dataclass
class Ext1Context:
    M: Representation
    N: Representation
    cover: CoverData
    basis: list[Intertwiner]  # cocycles syzygy -> N representing an Ext basis

    @property
    def dim(self) -> int:
        return len(self.basis)

    def cocycle(self, coeffs) -> Intertwiner:
        out = zero_map(self.cover.syzygy, self.N)
        for c, b in zip(coeffs, self.basis):
            if int(c) % self.M.q:
                out = out.add(b.scale(int(c)))
        return out

    def extension(self, coeffs) -> "ShortExactSequence":
        return extension_of_cocycle(self.cover, self.N, self.cocycle(coeffs))


def ext1(M: Representation, N: Representation) -> Ext1Context:
    if M.pres is not N.pres:
        raise StringAlgError("modules live over different presentations")
    p = M.pres
    cover = projective_cover(M)
    hom_syz = hom_basis(cover.syzygy, N)
    hom_p0 = hom_basis(cover.cover, N)
    q = M.q
    width = sum(cover.syzygy.dim(v) * N.dim(v) for v in p.quiver.vertices)
    restricted = [cover.incl.compose(h).flatten() for h in hom_p0]
    span = np.array(restricted, dtype=np.int64).reshape(len(restricted), width)
    current = Matrix(span, q)
    rank = current.rank()
    reps: list[Intertwiner] = []
    for g in hom_syz:
        cand = Matrix(np.vstack([current.a, g.flatten().reshape(1, width)]), q)
        r = cand.rank()
        if r > rank:
            reps.append(g)
            current = cand
            rank = r
    return Ext1Context(M, N, cover, reps)


def ext1_basis(M: Representation, N: Representation) -> list[Intertwiner]:
    return ext1(M, N).basis


def ext1_dim(M: Representation, N: Representation) -> int:
    return ext1(M, N).dim


# ---------------------------------------------------------------------------
# extensions
# ---------------------------------------------------------------------------


@dataclass
class ShortExactSequence:
    left: Representation
    middle: Representation
    right: Representation
    incl: Intertwiner  # left -> middle
    proj: Intertwiner  # middle -> right

    def verify(self) -> None:
        """Exactness, vertexwise: mono, epi, composite zero, dimensions add."""
        self.incl.verify()
        self.proj.verify()
        p = self.left.pres
        for v in p.quiver.vertices:
            if self.incl.mats[v].rank() != self.left.dim(v):
                raise VerificationError(f"inclusion not injective at vertex {v}")
            if self.proj.mats[v].rank() != self.right.dim(v):
                raise VerificationError(f"projection not surjective at vertex {v}")
            comp = self.incl.mats[v] @ self.proj.mats[v]
            if not comp.is_zero():
                raise VerificationError(f"composite not zero at vertex {v}")
            if self.left.dim(v) + self.right.dim(v) != self.middle.dim(v):
                raise VerificationError(f"dimensions do not add at vertex {v}")


def extension_of_cocycle(
    cover: CoverData, N: Representation, c: Intertwiner
) -> ShortExactSequence:
    """Pushout of the syzygy inclusion along the cocycle c: syzygy -> N."""
    M = cover.module
    p = M.pres
    q = M.q
    if c.target is not N:
        raise StringAlgError("cocycle must land in N")
    if c.source is not cover.syzygy:
        # rebind onto this cover's syzygy; covers are deterministic, so a
        # structurally equal syzygy carries the same coordinates
        if c.source.dimension_vector() != cover.syzygy.dimension_vector():
            raise StringAlgError("cocycle source does not match the cover's syzygy")
        c = Intertwiner(cover.syzygy, N, c.mats)
    c.verify()
    amb = direct_sum([N, cover.cover], label="N+P0")
    wrows = {}
    for v in p.quiver.vertices:
        w = np.hstack([c.mats[v].a, (-cover.incl.mats[v].a) % q])
        wrows[v] = Matrix(w, q)
    E, proj_mats, lift_mats = quotient_representation(amb, wrows, label="E")
    incl_mats = {}
    surj_mats = {}
    for v in p.quiver.vertices:
        n_v = N.dim(v)
        p_v = cover.cover.dim(v)
        embed = np.hstack([np.eye(n_v, dtype=np.int64), np.zeros((n_v, p_v), dtype=np.int64)])
        incl_mats[v] = Matrix(embed, q) @ proj_mats[v]
        down = np.vstack(
            [np.zeros((n_v, M.dim(v)), dtype=np.int64), cover.epi.mats[v].a]
        )
        surj_mats[v] = lift_mats[v] @ Matrix(down, q)
    ses = ShortExactSequence(
        left=N,
        middle=E,
        right=M,
        incl=Intertwiner(N, E, incl_mats),
        proj=Intertwiner(E, M, surj_mats),
    )
    ses.verify()
    return ses


def extension_from_cocycle(
    M: Representation, N: Representation, c: Intertwiner
) -> ShortExactSequence:
    """Extension 0 -> N -> E -> M -> 0 from an intertwiner syzygy(M) -> N.

    The projective cover is recomputed deterministically, so cocycles from
    ext1(M, N) remain valid here.
    """
    cover = projective_cover(M)
    return extension_of_cocycle(cover, N, c)


# ---------------------------------------------------------------------------
# census over the projective space of Ext^1
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusLine:
    coeffs: tuple[int, ...]
    summands: int
    dimvec: tuple[int, ...]


@dataclass
class CensusReport:
    ext_dim: int
    lines: list[CensusLine]
    histogram: dict[int, int]


def projective_line_representatives(q: int, k: int):
    """One vector per 1-dimensional subspace of F_q^k: first nonzero entry 1."""
    if k == 0:
        return
    coeffs = [0] * k
    for lead in range(k):
        tail = k - lead - 1

        def rec(pos, cur):
            if pos == tail:
                yield tuple(cur)
                return
            for a in range(q):
                yield from rec(pos + 1, cur + [a])

        for rest in rec(0, []):
            yield tuple([0] * lead + [1] + list(rest))


def middle_census(
    M: Representation,
    N: Representation,
    max_lines: int = 10_000,
    seed: int = 0,
    trials: int = 50,
    jobs: int = 1,
) -> CensusReport:
    """Summand counts of extension middles over every line of P(Ext^1(M, N))."""
    from .decomp import decompose

    ctx = ext1(M, N)
    k = ctx.dim
    q = M.q
    if k == 0:
        return CensusReport(0, [], {})
    nlines = (q**k - 1) // (q - 1)
    if nlines > max_lines:
        raise StringAlgError(
            f"census over {nlines} lines exceeds the cap of {max_lines}"
        )
    all_coeffs = list(projective_line_representatives(q, k))

    def run(coeffs):
        ses = ctx.extension(coeffs)
        report = decompose(ses.middle, seed=seed, trials=trials)
        dv = tuple(ses.middle.dim(v) for v in M.pres.quiver.vertices)
        return CensusLine(coeffs, report.summand_count, dv)

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            lines = list(pool.map(run, all_coeffs))
    else:
        lines = [run(c) for c in all_coeffs]
    histogram: dict[int, int] = {}
    for line in lines:
        histogram[line.summands] = histogram.get(line.summands, 0) + 1
    return CensusReport(k, lines, dict(sorted(histogram.items())))
