"""Decomposition into indecomposable summands.

Splitting is by Fitting's lemma: an endomorphism whose characteristic
polynomial has two distinct irreducible factors splits the module into
the corresponding primary components.  decompose searches a basis of the
endomorphism ring and then a fixed number of seeded random combinations;
a piece with a one-dimensional endomorphism ring is certainly
indecomposable, and a piece where no candidate splits is declared
indecomposable Las-Vegas style with the trial count recorded.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CatalogError, StringAlgError
from .linalg import Matrix, Poly, factor_poly, vstack
from .homalg import Intertwiner, hom_basis, hom_dim
from .reps import Representation, subrepresentation


def _primary_kernel_rows(f: Intertwiner, factor: Poly, max_power: int):
    """Rows, per vertex, of the stabilized kernel of factor(f)^k."""
    rep = f.source
    p = rep.pres
    A = {v: factor.eval_matrix(f.mats[v]) for v in p.quiver.vertices}
    B = {v: A[v] for v in p.quiver.vertices}
    best = {v: B[v].left_kernel() for v in p.quiver.vertices}
    total = sum(k.rows for k in best.values())
    power = 1
    while power < max_power:
        B = {v: B[v] @ A[v] for v in p.quiver.vertices}
        nxt = {v: B[v].left_kernel() for v in p.quiver.vertices}
        ntotal = sum(k.rows for k in nxt.values())
        power += 1
        if ntotal == total:
            break
        best, total = nxt, ntotal
    return best, total


def _krylov_minpoly(M: Representation, f: Intertwiner, rng: random.Random) -> Poly:
    """Least common multiple of the minimal polynomials of f on a few random
    vectors.  Agrees with the true minimal polynomial with high probability
    and always divides it, which keeps the split test one sided."""
    q = M.q
    verts = [v for v in M.pres.quiver.vertices if M.dim(v)]
    lcm = Poly([1], q)
    for _ in range(3):
        w = {v: np.array([[rng.randrange(q) for _ in range(M.dim(v))]], dtype=np.int64)
             for v in verts}
        flat = [np.concatenate([w[v][0] for v in verts])]
        cur = w
        for _ in range(M.total_dim):
            cur = {v: (cur[v] @ f.mats[v].a) % q for v in verts}
            flat.append(np.concatenate([cur[v][0] for v in verts]))
            K = Matrix(np.array(flat, dtype=np.int64), q)
            if K.rank() < len(flat):
                break
        d = len(flat) - 1
        lead = Matrix(np.array(flat[:d], dtype=np.int64), q)
        target = Matrix(np.array([flat[d]], dtype=np.int64), q)
        sol = lead.solve_left(target)
        if sol is None:
            raise StringAlgError("krylov dependence did not resolve")
        coeffs = [(-int(sol.a[0, i])) % q for i in range(d)] + [1]
        m = Poly(coeffs, q)
        g = lcm.gcd(m)
        lcm = (lcm * m) // g if not g.is_zero() else lcm * m
    return lcm


def _split_rows_by_factors(M: Representation, f: Intertwiner, factors):
    """Stabilized primary kernel rows for each factor; None unless they span."""
    out = []
    total = 0
    for g, eg in factors:
        rows, d = _primary_kernel_rows(f, g, M.total_dim)
        out.append((g, eg, rows))
        total += d
    if total != M.total_dim:
        return None
    return out


def _primary_rows(M: Representation, f: Intertwiner, rng: random.Random | None = None):
    """Factors of a splitting polynomial for f and the row spaces of the
    primary components, or None when no splitting is detected.

    The minimal polynomial is estimated by Krylov iteration first; when its
    primary kernels do not exhaust the module the exact characteristic
    polynomial is used instead.
    """
    rng = rng or random.Random(0x5BA)
    minpoly = _krylov_minpoly(M, f, rng)
    factors = factor_poly(minpoly)
    if len(factors) >= 2:
        data = _split_rows_by_factors(M, f, factors)
        if data is not None:
            return data
    # exact fallback
    charpoly = Poly([1], M.q)
    for v in M.pres.quiver.vertices:
        charpoly = charpoly * f.mats[v].charpoly()
    factors = factor_poly(charpoly)
    if len(factors) < 2:
        return None
    data = _split_rows_by_factors(M, f, factors)
    if data is None:
        raise StringAlgError("primary components do not span; split failed")
    return data


def _primary_components(
    M: Representation, f: Intertwiner, rng: random.Random | None = None, checked: bool = False
) -> tuple[list[Representation], str] | None:
    """All primary components of M along an endomorphism, or None when the
    splitting polynomial is a power of a single irreducible."""
    if f.source is not M or f.target is not M:
        raise StringAlgError("fitting decomposition needs an endomorphism of M")
    if not checked:
        f.verify()
    data = _primary_rows(M, f, rng)
    if data is None:
        return None
    parts = []
    for g, eg, rows in data:
        sub, _ = subrepresentation(M, rows, label=f"{M.label}|{g!r}")
        if sub.total_dim == 0:
            raise StringAlgError("empty primary component; split failed")
        parts.append(sub)
    witness = "splitting factors: " + " * ".join(f"({g!r})" for g, _, _ in data)
    return parts, witness


def fitting_split(
    M: Representation, f: Intertwiner
) -> tuple[Representation, Representation, str] | None:
    """Split M into the first primary component of f and its complement,
    or None when no splitting polynomial factor is found."""
    if f.source is not M or f.target is not M:
        raise StringAlgError("fitting_split needs an endomorphism of M")
    f.verify()
    data = _primary_rows(M, f)
    if data is None:
        return None
    first_g, first_e, first_rows = data[0]
    rest = {}
    for v in M.pres.quiver.vertices:
        mats = [rows[v] for _, _, rows in data[1:] if rows[v].rows]
        rest[v] = vstack(mats) if mats else Matrix.zeros(0, M.dim(v), M.q)
    M1, _ = subrepresentation(M, first_rows, label=f"{M.label}|{first_g!r}")
    M2, _ = subrepresentation(M, rest, label=f"{M.label}|rest")
    witness = f"splits off the ({first_g!r})-primary part"
    return M1, M2, witness


@dataclass
class DecompositionReport:
    module: Representation
    summands: list[Representation]
    certificates: list[str]  # one per summand
    witnesses: list[str]  # splitting chain
    seed: int
    trials: int

    @property
    def summand_count(self) -> int:
        return len(self.summands)

    def lines(self) -> list[str]:
        out = []
        verts = self.module.pres.quiver.vertices
        for k, (s, cert) in enumerate(zip(self.summands, self.certificates)):
            dv = ",".join(str(s.dim(v)) for v in verts)
            out.append(f"summand {k}: dimvec=({dv}) {cert}")
        return out


def decompose(M: Representation, seed: int = 0, trials: int = 50) -> DecompositionReport:
    """Full decomposition into indecomposable summands."""
    if M.total_dim == 0:
        raise StringAlgError("cannot decompose the zero module")
    summands: list[Representation] = []
    certificates: list[str] = []
    witnesses: list[str] = []

    def rec(rep: Representation, path: tuple[int, ...]):
        endo = hom_basis(rep, rep)
        if len(endo) == 1:
            summands.append(rep)
            certificates.append("endo_local=yes(end_dim=1)")
            return
        rng = random.Random(hash((seed, 0x5BA) + path))

        def candidates():
            # random combinations split decomposables almost surely, so try
            # them first; the basis sweep completes the certificate
            for t in range(trials):
                coeffs = [rng.randrange(rep.q) for _ in endo]
                f = endo[0].scale(coeffs[0])
                for c, g in zip(coeffs[1:], endo[1:]):
                    f = f.add(g.scale(c))
                yield f"random[{t}]", f
            for i, f in enumerate(endo):
                yield f"basis[{i}]", f

        for name, f in candidates():
            split = _primary_components(rep, f, rng=rng, checked=True)
            if split is not None:
                parts, why = split
                witnesses.append(f"split at depth {len(path)} by {name}: {why}")
                for k, part in enumerate(parts):
                    rec(part, path + (k,))
                return
        summands.append(rep)
        certificates.append(f"endo_local=yes(trials={trials})")

    rec(M, ())
    return DecompositionReport(M, summands, certificates, witnesses, seed, trials)


def catalog_decompose(
    M: Representation,
    catalog: list[Representation],
    hom_matrix: list[list[int]] | None = None,
) -> list[int]:
    """Multiplicities of catalog members in M, via the hom-count linear system.

    Solves H x = h where H[i][j] = dim Hom(catalog[i], catalog[j]) and
    h[i] = dim Hom(catalog[i], M).  The solution must be a vector of
    nonnegative integers; anything else signals an incomplete catalog.
    """
    n = len(catalog)
    if n == 0:
        raise CatalogError("empty catalog")
    if hom_matrix is None:
        hom_matrix = [[hom_dim(u, v) for v in catalog] for u in catalog]
    h = [hom_dim(u, M) for u in catalog]
    # exact rational elimination
    aug = [[Fraction(hom_matrix[i][j]) for j in range(n)] + [Fraction(h[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise CatalogError("singular hom matrix; catalog incomplete or redundant")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    mults = [aug[i][n] for i in range(n)]
    for x in mults:
        if x.denominator != 1 or x < 0:
            raise CatalogError(f"non-integral or negative multiplicity {x}; catalog incomplete")
    result = [int(x) for x in mults]
    if sum(result[i] * catalog[i].total_dim for i in range(n)) != M.total_dim:
        raise CatalogError("multiplicities do not account for the module dimension")
    return result
