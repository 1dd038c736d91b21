import pytest
from hypothesis import given, settings

from cgwalk.basis import (
    ProductLabel, coupled_labels, decode, encode, enumerate_m_plane, line_start,
    plane_indices, pyramid_dims,
)
from cgwalk.errors import DomainError
from cgwalk.halfint import HalfInt, SpinPair, spin_pairs_upto

from conftest import spin_pairs


def ranked_labels(sp):
    """Brute-force ranking: planes from the top, then descending m2."""
    labs = [ProductLabel(HalfInt(a), HalfInt(b))
            for a in range(-sp.j1.twice, sp.j1.twice + 1, 2)
            for b in range(-sp.j2.twice, sp.j2.twice + 1, 2)]
    return sorted(labs, key=lambda p: (-(p.m1.twice + p.m2.twice), -p.m2.twice))


def closed_form_plane_count(sp, m):
    if abs(m.twice) <= sp.jmin.twice:
        return sp.d2
    return (sp.jmax.twice - abs(m.twice)) // 2 + 1


@pytest.mark.parametrize("j1,j2,dim,jmax,jmin", [
    ("1/2", "1/2", 4, 2, 0), (1, "1/2", 6, 3, 1), ("3/2", 1, 12, 5, 1),
])
def test_pyramid_dims(j1, j2, dim, jmax, jmin):
    sp = SpinPair.of(j1, j2)
    assert pyramid_dims(sp).dim == dim
    assert sp.jmax.twice == jmax and sp.jmin.twice == jmin


def test_encode_examples():
    hh = SpinPair.of("1/2", "1/2")
    assert encode(hh, ProductLabel("-1/2", "1/2")) == 1
    assert encode(hh, ProductLabel("1/2", "-1/2")) == 2
    assert encode(hh, ProductLabel("1/2", "1/2")) == 0
    sp = SpinPair.of(1, "1/2")
    assert encode(sp, ProductLabel(0, "1/2")) == 1
    assert encode(sp, ProductLabel(1, "-1/2")) == 2


def test_decode_examples():
    assert decode(SpinPair.of(1, "1/2"), 4) == ProductLabel(0, "-1/2")
    assert decode(SpinPair.of("1/2", "1/2"), 3) == ProductLabel("-1/2", "-1/2")


def test_five_halves_two_against_brute_force():
    sp = SpinPair.of("5/2", 2)
    ref = ranked_labels(sp)
    assert len(ref) == 30
    assert [decode(sp, i) for i in range(30)] == ref
    assert [encode(sp, p) for p in ref] == list(range(30))


def test_encode_rejects():
    sp = SpinPair.of(1, "1/2")
    for bad in (ProductLabel(2, "1/2"), ProductLabel("1/2", "1/2"), ProductLabel(0, "3/2")):
        with pytest.raises(DomainError):
            encode(sp, bad)
    with pytest.raises(DomainError):
        decode(sp, 6)
    with pytest.raises(DomainError):
        decode(sp, -1)


def test_enumerate_plane_examples():
    assert list(plane_indices(SpinPair.of("1/2", "1/2"), 0)) == [1, 2]
    assert list(plane_indices(SpinPair.of(1, "1/2"), "3/2")) == [0]
    sp = SpinPair.of("3/2", 1)
    assert len(enumerate_m_plane(sp, "1/2")) == 3
    with pytest.raises(DomainError):
        plane_indices(sp, "7/2")


def test_exhaustive_roundtrip_upto_ten():
    mismatches = 0
    total = 0
    for sp in spin_pairs_upto(10):
        for i in range(sp.dim):
            mismatches += encode(sp, decode(sp, i)) != i
        total += sp.dim
    assert total > 1000
    assert mismatches == 0


@settings(max_examples=60, deadline=None)
@given(spin_pairs(max_twice=14))
def test_encoding_matches_ranking(sp):
    ref = ranked_labels(sp)
    for i, p in enumerate(ref):
        assert encode(sp, p) == i
        assert decode(sp, i) == p


@settings(max_examples=60, deadline=None)
@given(spin_pairs(max_twice=14))
def test_line_start_monotone_and_complete(sp):
    starts = [line_start(sp, d) for d in range(sp.jmax.twice + 2)]
    assert starts[0] == 0
    assert all(a <= b for a, b in zip(starts, starts[1:]))
    assert starts[-1] == sp.dim


@settings(max_examples=60, deadline=None)
@given(spin_pairs(max_twice=14))
def test_branches_agree_on_overlap(sp):
    dj1, dj2, dm = sp.d1, sp.d2, sp.jmax.twice + 1
    top = lambda d: d * (d + 1) // 2
    bottom = lambda d: sp.dim - (dm + 1 - d) * (dm - d) // 2
    middle = lambda d: dj2 * (2 * d - sp.j2.twice) // 2
    assert top(dj2) == middle(dj2)
    assert bottom(dj1) == middle(dj1)
    # when the ranges touch directly (j2 = j1), top and bottom must agree there
    if dj1 == dj2:
        assert top(dj1) == bottom(dj1)


@settings(max_examples=60, deadline=None)
@given(spin_pairs(max_twice=14))
def test_plane_counts(sp):
    total = 0
    for m in sp.m_values():
        labs = enumerate_m_plane(sp, m)
        assert len(labs) == sp.plane_size(m) == closed_form_plane_count(sp, m)
        assert all(p.m == m for p in labs)
        assert [p.m2.twice for p in labs] == sorted((p.m2.twice for p in labs), reverse=True)
        total += len(labs)
    assert total == sp.dim
    assert len(coupled_labels(sp)) == sp.dim
