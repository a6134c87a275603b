import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from strategies import maps
from pretopos_lab.colimits import (
    SumObject,
    UnionFind,
    coequalizer,
    copair,
    disjointness_square,
    from_initial,
    image_factorization,
    initial,
    is_cover,
    is_regular_epi,
    mapping_cone,
    prop_truncate,
    pushout,
    sum_,
    unique_choice,
    verify_coeq_universal,
    verify_epi_surjective_cone_equivalence,
    verify_image_uniqueness,
    verify_pullback_of_surjection,
    verify_sum_disjoint,
    verify_sum_stability,
    verify_surj_is_regular_epi,
    verify_trunc_universal,
)
from pretopos_lab.core import FinMap, FinSet, all_maps_up_to, compose, identity, is_iso, is_mono, is_surjective
from pretopos_lab.errors import NotTotal, NotUnique
from pretopos_lab.limits import Cospan, verify_pullback_square


def m(a, b, t):
    return FinMap(FinSet(a), FinSet(b), t)


def test_initial_examples():
    assert initial().size == 0
    assert from_initial(FinSet(3)).table == ()
    assert from_initial(FinSet(0)) == identity(FinSet(0))


def test_sum_examples():
    s = sum_(FinSet(2), FinSet(3))
    assert s.carrier.size == 5
    assert s.carrier.decoder[2] == ("inr", 0)
    z = sum_(FinSet(0), FinSet(3))
    assert is_iso(z.inr) is not None
    sq = disjointness_square(sum_(FinSet(2), FinSet(1)))
    assert sq.corner.size == 0 and verify_pullback_square(sq).passed


@pytest.mark.parametrize("a,b", list(itertools.product(range(4), repeat=2)))
def test_sum_invariants(a, b):
    s = sum_(FinSet(a), FinSet(b))
    assert s.carrier.size == a + b
    assert is_mono(s.inl) and is_mono(s.inr)
    assert set(s.inl.table).isdisjoint(s.inr.table)
    assert set(s.inl.table) | set(s.inr.table) == set(range(a + b))
    assert verify_sum_disjoint(s).passed


def test_fake_overlapping_sum_fails():
    one, two = FinSet(1), FinSet(2)
    fake = SumObject(two, m(1, 2, (0,)), m(1, 2, (0,)))
    cert = verify_sum_disjoint(fake)
    assert not cert.passed and cert.witnesses["intersection_size"] == 1


def test_copair():
    s = sum_(FinSet(2), FinSet(1))
    u, v = m(2, 3, (2, 0)), m(1, 3, (1,))
    k = copair(s, u, v)
    assert compose(k, s.inl) == u and compose(k, s.inr) == v


def test_sum_stability_examples():
    x = m(2, 1, (0, 0))
    a0, a1 = m(3, 1, (0, 0, 0)), m(1, 1, (0,))
    c = verify_sum_stability(a0, a1, x)
    assert c.passed and c.witnesses["lhs_size"] == (3 + 1) * 2
    empty = m(0, 1, ())
    c = verify_sum_stability(a0, a1, empty)
    assert c.passed and c.witnesses["rhs_size"] == 0


@given(st.data())
def test_sum_stability_random(data):
    b = data.draw(st.integers(1, 3))
    f0, f1, g = (data.draw(maps(max_dom=3, cod=b)) for _ in range(3))
    assert verify_sum_stability(f0, f1, g).passed


def test_union_find_labels_by_least_element():
    uf = UnionFind(5)
    uf.union(4, 1)
    uf.union(3, 0)
    labels, reps = uf.labels()
    assert reps == [0, 1, 2]
    assert labels == [0, 1, 2, 0, 1]


@pytest.mark.parametrize(
    "f,g,size",
    [(m(1, 2, (0,)), m(1, 2, (1,)), 1), (m(2, 3, (0, 1)), m(2, 3, (1, 2)), 1)],
)
def test_coequalizer_examples(f, g, size):
    assert coequalizer(f, g).carrier.size == size


def test_coequalizer_of_equal_pair_is_identity_like():
    f = m(2, 3, (0, 2))
    q = coequalizer(f, f)
    assert q.proj == identity(FinSet(3))
    assert verify_coeq_universal(f, f, q).passed


@given(st.data())
def test_coequalizer_matches_class_oracle(data):
    b = data.draw(st.integers(1, 4))
    f = data.draw(maps(max_dom=4, cod=b))
    g = data.draw(maps(dom=f.dom.size, cod=b))
    q = coequalizer(f, g)
    want = oracles.classes(b, list(zip(f.table, g.table)))
    got = sorted((frozenset(q.proj.fiber(c)) for c in range(q.carrier.size)), key=min)
    assert got == want
    assert compose(q.proj, f) == compose(q.proj, g)
    assert is_surjective(q.proj)


def test_coequalizer_universal_exhaustive():
    for a, b in itertools.product(range(3), range(1, 4)):
        for f in oracles.functions(a, b):
            for g in oracles.functions(a, b):
                ff, gg = m(a, b, f), m(a, b, g)
                assert verify_coeq_universal(ff, gg, coequalizer(ff, gg)).passed


def test_non_surjective_candidate_rejected():
    f, g = m(1, 2, (0,)), m(1, 2, (0,))
    cert = verify_coeq_universal(f, g, m(2, 3, (0, 1)))
    assert not cert.passed
    assert cert.witnesses["counterexample"]["reason"] == "mediating map not unique"
    cert = verify_coeq_universal(m(1, 2, (0,)), m(1, 2, (1,)), identity(FinSet(2)))
    assert cert.witnesses["counterexample"]["reason"] == "does not coequalize"


def test_pushout_examples():
    p, i1, i2 = pushout(m(0, 2, ()), m(0, 3, ()))
    assert p.size == 5
    assert pushout(m(1, 1, (0,)), m(1, 1, (0,)))[0].size == 1


@pytest.mark.parametrize(
    "f,size",
    [(identity(FinSet(2)), 1), (m(1, 2, (0,)), 2), (m(0, 3, ()), 4)],
)
def test_mapping_cone_examples(f, size):
    assert mapping_cone(f)[1] == size


def test_cone_of_surjection_is_point():
    for f in all_maps_up_to(3):
        if is_surjective(f):
            assert mapping_cone(f)[1] == 1


def test_truncation():
    assert prop_truncate(FinSet(0)).size == 0
    assert prop_truncate(FinSet(5)).size == 1
    for n in range(5):
        assert verify_trunc_universal(FinSet(n)).passed


def test_image_examples():
    f = m(3, 3, (0, 0, 1))
    im, e, i = image_factorization(f)
    assert im.size == 2 and compose(i, e) == f
    mono = m(2, 3, (2, 0))
    assert is_iso(image_factorization(mono)[1]) is not None


@given(maps(max_dom=5, max_cod=5))
def test_image_invariants(f):
    im, e, i = image_factorization(f)
    assert compose(i, e) == f
    assert im.size == len(set(f.table))
    assert is_surjective(e) and is_mono(i)


def test_image_uniqueness_exhaustive():
    for f in all_maps_up_to(3):
        assert verify_image_uniqueness(f).passed


def test_cover_and_regular_examples():
    f = m(3, 2, (0, 1, 0))
    assert is_cover(f).passed and is_regular_epi(f).passed
    g = m(2, 3, (0, 1))
    assert not is_cover(g).passed and not is_regular_epi(g).passed
    i = identity(FinSet(2))
    assert is_cover(i).passed and is_regular_epi(i).passed


def test_cover_regular_surjective_agree():
    for f in all_maps_up_to(4):
        s = is_surjective(f)
        assert is_cover(f).passed == s == is_regular_epi(f).passed


def test_surj_is_regular_epi():
    assert verify_surj_is_regular_epi(m(2, 1, (0, 0))).passed
    c = verify_surj_is_regular_epi(m(1, 2, (0,)))
    assert c.passed and c.witnesses["applicable"] is False
    for f in all_maps_up_to(3):
        assert verify_surj_is_regular_epi(f).passed


def test_pullback_of_surjection_examples():
    g = m(3, 2, (0, 1, 1))
    for h in oracles.functions(2, 2):
        assert verify_pullback_of_surjection(Cospan(m(2, 2, h), g)).passed
    i = identity(FinSet(2))
    from pretopos_lab.limits import pullback

    _, p1, _ = pullback(Cospan(m(3, 2, (1, 0, 1)), i))
    assert is_iso(p1) is not None


def test_unique_choice():
    graph = [[False, True], [True, False], [False, True]]
    assert unique_choice(FinSet(3), FinSet(2), graph).table == (1, 0, 1)
    with pytest.raises(NotUnique):
        unique_choice(FinSet(1), FinSet(2), [[True, True]])
    with pytest.raises(NotTotal):
        unique_choice(FinSet(1), FinSet(2), [[False, False]])
    assert unique_choice(FinSet(0), FinSet(2), []).table == ()


def test_epi_surjective_cone_equivalence():
    c = verify_epi_surjective_cone_equivalence(m(1, 2, (0,)))
    assert c.passed
    assert (c.witnesses["epi"], c.witnesses["cone_connected"], c.witnesses["surjective"]) == (False, False, False)
    assert c.witnesses["cone_components"] == 2
    c = verify_epi_surjective_cone_equivalence(identity(FinSet(3)))
    assert c.passed and c.witnesses["epi"] and c.witnesses["surjective"]
