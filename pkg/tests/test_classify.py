import pytest

from stringalg.classify import (
    LetterAutomaton,
    build_witness,
    classify,
    find_bands,
    find_cyclic_witness,
    find_witness_triple,
    n_alpha_generators,
)
from stringalg.decomp import decompose
from stringalg.errors import StringAlgError
from stringalg.words import (
    canonical_cyclic,
    format_walk,
    is_cyclic,
    is_primitive,
)


def test_automaton_acyclic_a3(a3):
    assert LetterAutomaton(a3).find_cycle() is None
    assert find_cyclic_witness(a3) is None


def test_automaton_cycle_gp(gp, kronecker):
    for p in (gp, kronecker):
        band = find_cyclic_witness(p)
        assert band is not None
        assert band.primitive


def test_find_bands_a3(a3):
    assert find_bands(a3, 8) == []


def test_find_bands_kronecker(kronecker):
    for bound in (2, 4, 8):
        bands = find_bands(kronecker, bound)
        assert len(bands) == 1
        assert format_walk(bands[0].word.walk) == "a b^-1"


def test_find_bands_gp(gp):
    bands = find_bands(gp, 8)
    assert len(bands) >= 3
    texts = {format_walk(b.word.walk) for b in bands}
    assert "a b^-1" in texts
    assert "a b a^-1 b^-1" in texts
    # canonicalization is a fixed point on every output
    for b in bands:
        again = canonical_cyclic(gp, b.word)
        assert again.letters == b.word.letters


def test_n_alpha_generators_a3(a3):
    assert n_alpha_generators(a3, "a", 6) == []


def test_n_alpha_generators_gp(gp):
    gens = n_alpha_generators(gp, "a", 4)
    texts = [format_walk(g.walk) for g in gens]
    assert "a b^-1" in texts
    assert "a b a^-1 b^-1" in texts
    # every generator starts with the arrow, ends with an inverse letter,
    # and is cyclic
    for g in gens:
        assert g.letters[0].arrow == "a" and g.letters[0].is_direct
        assert not g.letters[-1].is_direct
        assert is_cyclic(gp, g)


def test_n_alpha_generators_kronecker(kronecker):
    for bound in (4, 8, 12):
        gens = n_alpha_generators(kronecker, "a", bound)
        assert len(gens) == 1
        assert format_walk(gens[0].walk) == "a b^-1"


def test_classify_finite(a3, a3nr):
    for p in (a3, a3nr):
        cert = classify(p)
        assert cert.verdict == "Finite"


def test_classify_domestic_kronecker(kronecker):
    cert = classify(kronecker)
    assert cert.verdict == "Domestic"
    assert cert.bound is not None
    assert cert.band_witness is not None


def test_classify_nondomestic_gp(gp):
    cert = classify(gp)
    assert cert.verdict == "NonDomestic"
    g1, g2 = cert.generator_pair
    _, r1, _ = is_primitive(gp, g1)
    _, r2, _ = is_primitive(gp, g2)
    assert r1.letters != r2.letters


def test_witness_triple_gp(gp):
    triple = find_witness_triple(gp, search_len=6)
    assert triple is not None
    triple.validate(gp)
    # xy and xz are not powers of the same word: last letters have
    # different directions
    assert triple.y.letters[-1].is_direct
    assert not triple.z.letters[-1].is_direct


def test_witness_triple_a3_refused(a3):
    with pytest.raises(StringAlgError):
        find_witness_triple(a3, search_len=4)


def test_witness_triple_deterministic(gp):
    t1 = find_witness_triple(gp, search_len=6)
    t2 = find_witness_triple(gp, search_len=6)
    assert t1.x.letters == t2.x.letters
    assert t1.y.letters == t2.y.letters
    assert t1.z.letters == t2.z.letters


def test_build_witness_p11(gp):
    p23 = gp.with_field(23)
    triple = find_witness_triple(p23, search_len=6)
    result = build_witness(p23, triple, 11)
    assert result.summand_count == 11
    assert result.middle.total_dim == result.band_u.total_dim + result.band_v.total_dim
    result.sequence.verify()
    # all eleven summands are twelve dimensional
    assert sorted(sum(dv) for dv in result.summand_dimvecs) == [12] * 11
    # the sequence ends are indecomposable
    assert decompose(result.left_end, trials=15).summand_count == 1
    assert decompose(result.right_end, trials=15).summand_count == 1
    # u and v have the expected lengths
    n = (11 - 1) // 2
    block = len(triple.x.letters) * 2 + len(triple.y.letters) + len(triple.z.letters)
    assert len(result.u.letters) == n * block + len(triple.x.letters) + len(triple.y.letters)
    assert len(result.v.letters) == len(result.u.letters)
    # the bands themselves are indecomposable
    assert decompose(result.band_u, trials=15).summand_count == 1
    assert decompose(result.band_v, trials=15).summand_count == 1


def test_quoted_band_gluing_is_indecomposable(gp):
    # the literal two-entry gluing of the bands is a verified extension of
    # B(v) by B(u) whose middle does not decompose; this is why the witness
    # middle is built on the cut uv cycle instead
    from stringalg.classify import glue_bands_quoted

    p7 = gp.with_field(7)
    triple = find_witness_triple(p7, search_len=6)
    glued = glue_bands_quoted(p7, triple, 3)
    assert glued.total_dim == 36
    assert decompose(glued, trials=12).summand_count == 1


def test_build_witness_field_preconditions(gp):
    triple_words = find_witness_triple(gp.with_field(23), search_len=6)
    with pytest.raises(StringAlgError):
        build_witness(gp, triple_words, 11)  # 32003 != 1 mod 22
    with pytest.raises(StringAlgError):
        build_witness(gp.with_field(23), triple_words, 7)  # prime too small
