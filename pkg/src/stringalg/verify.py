"""Whole-corpus verification runs behind the command line front end."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .artheory import Catalog, catalog_for, delta_count_formula, hom_leq
from .decomp import decompose
from .homalg import hom_basis, middle_census
from .presentation import Presentation, check_finite_dimensional, validate_axioms
from .reps import Representation, direct_sum, projective, simple
from .words import format_walk


@dataclass
class CensusFinding:
    left_label: str
    right_label: str
    ext_dim: int
    histogram: dict[int, int]
    worst: int


@dataclass
class MiddleScanReport:
    ok: bool
    pair_count: int
    findings: list[CensusFinding] = field(default_factory=list)
    violations: list[CensusFinding] = field(default_factory=list)


def middle_term_scan(
    p: Presentation,
    max_dim: int,
    seed: int = 0,
    trials: int = 50,
    jobs: int = 1,
    allow_non_string: bool = False,
    extra_modules: list[Representation] | None = None,
) -> MiddleScanReport:
    """Census over every ordered pair of indecomposables with nonzero
    extension space; reports any middle with more than two summands.

    With allow_non_string the catalog is the simples, the projectives and
    any supplied literal modules, each certified indecomposable first.
    """
    modules: list[tuple[str, Representation]] = []
    if allow_non_string:
        seen_profiles = []
        candidates = [(f"S({v})", simple(p, v)) for v in p.quiver.vertices]
        candidates += [(f"P({v})", projective(p, v)) for v in p.quiver.vertices]
        candidates += [(m.label or f"literal{i}", m) for i, m in enumerate(extra_modules or [])]
        probes = [simple(p, v) for v in p.quiver.vertices] + [
            projective(p, v) for v in p.quiver.vertices
        ]
        for label, m in candidates:
            if m.total_dim == 0 or m.total_dim > max_dim:
                continue
            if decompose(m, seed=seed, trials=trials).summand_count != 1:
                continue
            profile = tuple(len(hom_basis(u, m)) for u in probes)
            key = (tuple(sorted(m.dimension_vector().items())), profile)
            if key in seen_profiles:
                continue
            seen_profiles.append(key)
            modules.append((label, m))
    else:
        cat = catalog_for(p)
        for e in cat.entries:
            if e.rep.total_dim <= max_dim:
                modules.append((f"M({format_walk(e.word.walk)})", e.rep))
    report = MiddleScanReport(ok=True, pair_count=0)
    for (la, ma), (lb, mb) in itertools.product(modules, repeat=2):
        census = middle_census(ma, mb, seed=seed, trials=trials, jobs=jobs)
        if census.ext_dim == 0:
            continue
        report.pair_count += 1
        worst = max(census.histogram)
        finding = CensusFinding(la, lb, census.ext_dim, census.histogram, worst)
        report.findings.append(finding)
        if worst > 2:
            report.ok = False
            report.violations.append(finding)
    return report


@dataclass
class DegenerationRow:
    left_label: str
    right_label: str
    hom_leq: bool
    left_count: int
    right_count: int
    delta_formula: int | None
    consistent: bool


@dataclass
class DegenerationReport:
    ok: bool
    module_count: int
    pair_count: int
    rows: list[DegenerationRow]


def _direct_sums_up_to(cat: Catalog, max_dim: int):
    """All direct sums from the catalog with total dimension <= max_dim,
    one per multiset, with labels."""
    reps = [(e.rep.total_dim, f"M({format_walk(e.word.walk)})", e.rep) for e in cat.entries]
    out = []

    def rec(start: int, chosen: list[int], dim_left: int):
        if chosen:
            parts = [reps[i] for i in chosen]
            label = "+".join(lbl for _, lbl, _ in parts)
            out.append((label, direct_sum([r for _, _, r in parts], label=label)))
        for i in range(start, len(reps)):
            d = reps[i][0]
            if d <= dim_left:
                rec(i, chosen + [i], dim_left - d)

    rec(0, [], max_dim)
    return out


def degeneration_scan(
    p: Presentation, max_dim: int, seed: int = 0, trials: int = 50
) -> DegenerationReport:
    """Ordered pairs of catalog direct sums within each dimension-vector
    class: whenever the hom order holds, the summand counts must be ordered
    and the accounting formula must equal their difference."""
    cat = catalog_for(p)
    sums = _direct_sums_up_to(cat, max_dim)
    by_dimvec: dict[tuple, list] = {}
    counts: dict[str, int] = {}
    for label, m in sums:
        key = tuple(sorted(m.dimension_vector().items()))
        by_dimvec.setdefault(key, []).append((label, m))
        counts[label] = decompose(m, seed=seed, trials=trials).summand_count
    rows = []
    ok = True
    pair_count = 0
    for group in by_dimvec.values():
        for (la, ma), (lb, mb) in itertools.product(group, repeat=2):
            pair_count += 1
            leq, _ = hom_leq(ma, mb, cat)
            formula = None
            consistent = True
            if leq:
                formula = delta_count_formula(ma, mb, cat)
                consistent = (
                    counts[la] <= counts[lb]
                    and formula == counts[lb] - counts[la]
                )
                if not consistent:
                    ok = False
            rows.append(
                DegenerationRow(la, lb, leq, counts[la], counts[lb], formula, consistent)
            )
    return DegenerationReport(ok, len(sums), pair_count, rows)


def axiom_summary(p: Presentation) -> tuple[bool, list[str]]:
    """Validation lines for the validate command; first value is the string
    verdict (axioms plus finite dimensionality)."""
    report = validate_axioms(p)
    finite, witness = check_finite_dimensional(p)
    lines = [
        f"S1={'ok' if report.s1 else 'violated'}",
        f"S2={'ok' if report.s2 else 'violated'}",
        f"S3={'ok' if report.s3 else 'violated'}",
        f"finite_dimensional={'yes' if finite else 'no'}",
    ]
    for v in report.violations:
        lines.append(f"violation: {v}")
    if witness is not None:
        lines.append("relation_free_cycle: " + " ".join(witness))
    return report.is_string and finite, lines
