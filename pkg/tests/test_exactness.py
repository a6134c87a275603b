import pytest
from hypothesis import given

import oracles
from strategies import maps, relations
from pretopos_lab.core import FinMap, FinSet, compose, identity, is_iso, is_surjective
from pretopos_lab.errors import NotEquivalenceRelation, NotPreserving
from pretopos_lab.exactness import (
    Q_functor,
    Q_on_map,
    Relation,
    Setoid,
    SetoidMap,
    all_setoids,
    is_equivalence_relation,
    kernel_relation,
    partitions,
    quotient,
    recover_proposition,
    rst_closure,
    setoid_homs,
    setoid_inclusion,
    setoid_of_partition,
    two_mod_P,
    verify_adjunction_Q_i,
    verify_effectiveness,
    verify_kernel_effective,
    verify_vv_quotient,
    vv_quotient,
)


def classes_setoid(n, blocks):
    a = FinSet(n)
    return Setoid(a, rst_closure(Relation.from_pairs(a, [(min(b), x) for b in blocks for x in b])))


def test_equivalence_relation_examples():
    a = FinSet(3)
    assert is_equivalence_relation(Relation.identity(a)).passed
    assert is_equivalence_relation(Relation.full(a)).passed
    cert = is_equivalence_relation(Relation.from_pairs(FinSet(2), [(0, 1)]))
    assert not cert.passed
    assert cert.witnesses["laws"] == {"reflexive": False, "symmetric": False, "transitive": True}


def test_categorical_witnesses_present():
    s = classes_setoid(3, [{0, 1}, {2}])
    cert = is_equivalence_relation(s.rel)
    assert {"rho", "sigma", "tau"} <= set(cert.witnesses)
    # composable pairs of a 5-element relation with blocks {0,1},{2}: 2^3 + 1
    assert cert.witnesses["tau"].dom.size == 9


@given(relations(4))
def test_matrix_laws_match_categorical_witnesses(r):
    n = r.base.size
    refl = all(r(i, i) for i in range(n))
    sym = all(r(j, i) for i, j in r.pairs())
    trans = all(r(i, k) for i, j in r.pairs() for k in range(n) if r(j, k))
    assert is_equivalence_relation(r).passed == (refl and sym and trans)


def test_setoid_rejects_non_equivalence():
    with pytest.raises(NotEquivalenceRelation):
        Setoid(FinSet(2), Relation.from_pairs(FinSet(2), [(0, 1)]))


def test_closure_examples():
    a = FinSet(3)
    c = rst_closure(Relation.from_pairs(a, [(0, 1)]))
    assert sorted(c.pairs()) == [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]
    assert rst_closure(Relation.from_pairs(a, [])) == Relation.identity(a)


@given(relations(5))
def test_closure_matches_oracle_and_is_idempotent(r):
    c = rst_closure(r)
    blocks = oracles.classes(r.base.size, r.pairs())
    assert set(c.pairs()) == {(i, j) for b in blocks for i in b for j in b}
    assert rst_closure(c) == c


def test_quotient_examples():
    q, c = quotient(setoid_inclusion(FinSet(3)))
    assert is_iso(c) is not None
    assert quotient(Setoid(FinSet(4), Relation.full(FinSet(4))))[0].size == 1
    assert quotient(classes_setoid(3, [{0, 1}, {2}]))[0].size == 2


def test_effectiveness_examples():
    cert = verify_effectiveness(classes_setoid(3, [{0, 1}, {2}]))
    assert cert.passed and cert.witnesses["relation_size"] == 5 == cert.witnesses["kernel_pair_size"]
    cert = verify_effectiveness(setoid_inclusion(FinSet(3)))
    assert cert.passed and cert.witnesses["kernel_pair_size"] == 3


@pytest.mark.parametrize("n", range(6))
def test_partition_count_is_bell(n):
    rgs = list(partitions(n))
    assert len(rgs) == len(set(rgs)) == oracles.bell(n)


def test_all_setoids_up_to_five_effective():
    setoids = list(all_setoids(5))
    assert len(setoids) == sum(oracles.bell(n) for n in range(6)) == 76
    for s in setoids:
        assert verify_effectiveness(s).passed
        assert verify_vv_quotient(s).passed
        assert is_regular(s)


def is_regular(s):
    from pretopos_lab.colimits import is_regular_epi

    return is_regular_epi(quotient(s)[1]).passed


def test_kernel_examples():
    mono = FinMap(FinSet(3), FinSet(4), (3, 1, 0))
    assert kernel_relation(mono).rel == Relation.identity(FinSet(3))
    const = FinMap(FinSet(3), FinSet(2), (1, 1, 1))
    assert kernel_relation(const).rel == Relation.full(FinSet(3))
    f = FinMap(FinSet(3), FinSet(2), (0, 0, 1))
    cert = verify_kernel_effective(f)
    assert cert.passed and cert.witnesses["kernel_size"] == 5 and cert.witnesses["quotient_size"] == 2


@given(maps(max_dom=4, max_cod=4))
def test_kernels_effective(f):
    assert verify_kernel_effective(f).passed


def test_setoid_maps_preserve():
    s = classes_setoid(3, [{0, 1}, {2}])
    t = setoid_inclusion(FinSet(2))
    SetoidMap(s, t, FinMap(FinSet(3), FinSet(2), (1, 1, 0)))
    with pytest.raises(NotPreserving):
        SetoidMap(s, t, FinMap(FinSet(3), FinSet(2), (0, 1, 0)))


def test_Q_counit_and_functoriality():
    a = FinSet(3)
    assert Q_functor(setoid_inclusion(a)).size == 3
    setoids = list(all_setoids(3))
    for s in setoids:
        for t in setoids:
            for u in setoids:
                if (s.carrier.size, t.carrier.size, u.carrier.size) != (3, 2, 2):
                    continue
                for f in setoid_homs(s, t):
                    for g in setoid_homs(t, u):
                        fm, gm = SetoidMap(s, t, f), SetoidMap(t, u, g)
                        gf = SetoidMap(s, u, compose(g, f))
                        assert Q_on_map(gf) == compose(Q_on_map(gm), Q_on_map(fm))
    s = classes_setoid(3, [{0, 2}, {1}])
    assert Q_on_map(SetoidMap(s, s, identity(a))) == identity(Q_functor(s))


def test_inclusion_full_and_faithful():
    for a in range(4):
        for b in range(4):
            ia, ib = setoid_inclusion(FinSet(a)), setoid_inclusion(FinSet(b))
            assert len(setoid_homs(ia, ib)) == b**a


def test_adjunction_examples():
    s = Setoid(FinSet(3), Relation.full(FinSet(3)))
    cert = verify_adjunction_Q_i(s, FinSet(2))
    assert cert.passed and cert.witnesses["hom_eqrel"] == 2 == cert.witnesses["hom_set"]
    cert = verify_adjunction_Q_i(setoid_inclusion(FinSet(2)), FinSet(3))
    assert cert.passed and cert.witnesses["unit"] == identity(FinSet(2))
    assert cert.witnesses["finite_model_equivalence"]


def test_adjunction_all_setoids_up_to_four():
    for s in all_setoids(4):
        for a in range(4):
            assert verify_adjunction_Q_i(s, FinSet(a)).passed


def test_transpose_natural_sampled():
    import random

    rng = random.Random(5)
    setoids = list(all_setoids(4))
    for _ in range(100):
        s = rng.choice(setoids)
        t = rng.choice(setoids)
        a, b = rng.randint(1, 3), rng.randint(1, 3)
        homs_st = setoid_homs(s, t)
        if not homs_st:
            continue
        h = rng.choice(homs_st)
        qt, ct = quotient(t)
        psi = FinMap(qt, FinSet(a), [rng.randrange(a) for _ in range(qt.size)])
        k = FinMap(FinSet(a), FinSet(b), [rng.randrange(b) for _ in range(a)])
        # transpose(psi) = psi ∘ c; naturality in S (precompose with h) and in A (postcompose with k)
        qh = Q_on_map(SetoidMap(s, t, h))
        qs, cs = quotient(s)
        assert compose(compose(psi, ct), h) == compose(compose(psi, qh), cs)
        assert compose(k, compose(psi, ct)) == compose(compose(k, psi), ct)


def test_vv_quotient_examples():
    a = FinSet(3)
    assert vv_quotient(setoid_inclusion(a))[0].size == 3
    assert vv_quotient(Setoid(a, Relation.full(a)))[0].size == 1
    s = classes_setoid(3, [{0, 1}, {2}])
    qv, comparison = vv_quotient(s)
    assert qv.size == 2 and qv.decoder == (("eqclass", "110"), ("eqclass", "001"))
    assert is_iso(comparison) is not None


def test_two_mod_p():
    assert two_mod_P(True).size == 1
    assert two_mod_P(False).size == 2
    assert recover_proposition(True) is True
    assert recover_proposition(False) is False


def test_setoid_of_partition_blocks():
    s = setoid_of_partition((0, 1, 0, 2))
    assert quotient(s)[1].table == (0, 1, 0, 2)
    assert is_surjective(quotient(s)[1])
