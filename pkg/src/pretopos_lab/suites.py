"""Exhaustive verification suites and the aggregated ΠW-pretopos check.

Each suite runs many single checks and condenses them into one
certificate: counts, plus the first failing check's inputs and
counterexample.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, Iterable, Optional

from . import colimits as co
from . import exactness as ex
from . import lcc
from . import limits as lim
from .classifiers import (
    object_classifier,
    pointed_prop_check,
    representatives,
    verify_family_equivalence,
    verify_object_classifier_pullback,
    verify_subobject_classifier,
)
from .core import Certificate, FinMap, FinSet, all_maps_up_to, hom_tables, is_surjective
from .errors import CapExceeded, PretoposError
from .smallmaps import (
    covering_squares,
    fiber_bound_class,
    is_collection_square,
    verify_locally_full,
    verify_stable,
)
from .wtypes import verify_w_type


def run_checks(kind: str, checks: Iterable[Callable[[], Certificate]], caps: Optional[dict] = None) -> Certificate:
    total = failed = 0
    first = None
    for check in checks:
        total += 1
        try:
            cert = check()
        except CapExceeded:
            raise
        except (PretoposError, AssertionError, KeyError, ValueError, IndexError) as err:
            cert = Certificate(
                "error", {"check": getattr(check, "label", kind)}, {"counterexample": {"error": repr(err)}}, False
            )
        if not cert.passed:
            failed += 1
            if first is None:
                first = {"kind": cert.kind, "inputs": cert.inputs, "counterexample": cert.witnesses["counterexample"]}
    witnesses: dict = {"checks": total, "failures": failed}
    if first is not None:
        witnesses["counterexample"] = first
    return Certificate(kind, {}, witnesses, failed == 0, caps or {})


def aggregate(kind: str, children: list[Certificate], caps: Optional[dict] = None, seed: Optional[int] = None, **extra) -> Certificate:
    failing = next((c for c in children if not c.passed), None)
    witnesses: dict = {
        "checks": sum(c.witnesses.get("checks", 1) for c in children),
        "subsuites": [c.to_dict() for c in children],
        **extra,
    }
    if failing is not None:
        witnesses["counterexample"] = {"subsuite": failing.kind, **{"detail": failing.witnesses["counterexample"]}}
    return Certificate(kind, {}, witnesses, failing is None, caps or {}, seed)


def _maps_into(b: int, max_dom: int) -> list[FinMap]:
    cod = FinSet(b)
    return [FinMap(FinSet(a), cod, t) for a in range(max_dom + 1) for t in itertools.product(range(b), repeat=a)]


# ---------------------------------------------------------------- lextensive


def suite_initial(max_size: int) -> Certificate:
    def check(n):
        homs = list(hom_tables(0, n))
        passed = len(homs) == 1 and co.from_initial(FinSet(n)).table == ()
        w: dict = {"maps_from_initial": len(homs)}
        if not passed:
            w["counterexample"] = {"A": n, "maps": len(homs)}
        return Certificate("initial-object", {"A": n}, w, passed)

    return run_checks("initial-object", (lambda n=n: check(n) for n in range(max_size + 1)))


def suite_finite_limits(max_size: int, seed: int) -> Certificate:
    cone = min(max_size, 2)
    checks = []
    for x in range(max_size + 1):
        maps = _maps_into(x, max_size)
        for f, g in itertools.product(maps, repeat=2):
            c = lim.Cospan(f, g)
            checks.append(lambda c=c: lim.verify_pullback_square(lim.pullback_square(c)))
            checks.append(lambda c=c: lim.verify_pullback_universal(c, cone))
    rng = random.Random(seed)
    sampled = []
    for _ in range(50):
        sampled.append(_pasting_check(rng, max_size + 1))
    checks.extend(sampled)
    return run_checks("finite-limits", checks, {"max_size": max_size, "max_cone": cone, "pasting_samples": 50})


def _random_map(rng: random.Random, a: int, b: int) -> FinMap:
    return FinMap(FinSet(a), FinSet(b), [rng.randrange(b) for _ in range(a)])


def _pasting_check(rng: random.Random, n: int):
    def check():
        x = rng.randint(1, n)
        f = _random_map(rng, rng.randint(0, n), x)
        h = _random_map(rng, rng.randint(0, n), x)
        right = lim.pullback_square(lim.Cospan(h, f))
        target = right.left.cod.size
        k = _random_map(rng, rng.randint(0, n) if target else 0, target)
        left = lim.pullback_square(lim.Cospan(k, right.left))
        outer = lim.paste(left, right)
        cert = lim.verify_pullback_square(outer)
        cert.kind = "pasting"
        return cert

    return check


def suite_disjoint_sums(max_size: int) -> Certificate:
    checks = []
    for a, b in itertools.product(range(max_size + 1), repeat=2):
        s = co.sum_(FinSet(a), FinSet(b))
        checks.append(lambda s=s: co.verify_sum_disjoint(s))
        checks.append(lambda s=s: lim.verify_pullback_square(co.disjointness_square(s)))
    return run_checks("disjoint-sums", checks, {"max_size": max_size})


def suite_sum_stability(max_size: int) -> Certificate:
    checks = []
    for b in range(max_size + 1):
        maps = _maps_into(b, max_size)
        for f0, f1, g in itertools.product(maps, repeat=3):
            checks.append(lambda f0=f0, f1=f1, g=g: co.verify_sum_stability(f0, f1, g))
    return run_checks("sums-stable-under-pullback", checks, {"max_size": max_size})


def suite_lextensive(max_size: int, seed: int = 0) -> Certificate:
    return aggregate(
        "lextensive",
        [
            suite_initial(max_size),
            suite_finite_limits(max_size, seed),
            suite_disjoint_sums(max_size),
            suite_sum_stability(max_size),
        ],
        {"max_size": max_size},
        seed,
    )


# ------------------------------------------------------------------- regular


def suite_epi_surjective(max_size: int = 4) -> Certificate:
    return run_checks(
        "epi-surjective-cone",
        (lambda f=f: co.verify_epi_surjective_cone_equivalence(f) for f in all_maps_up_to(max_size)),
        {"max_size": max_size},
    )


def _kernel_pair_coeq(f: FinMap, max_codomain: int) -> Certificate:
    _, p1, p2 = lim.kernel_pair(f)
    q = co.coequalizer(p1, p2)
    cert = co.verify_coeq_universal(p1, p2, q, max_codomain=max_codomain)
    if not cert.passed:
        return cert
    cert = co.verify_surj_is_regular_epi(f, max_codomain=max_codomain)
    if not cert.passed:
        return cert
    cover = co.is_cover(f)
    reg = co.is_regular_epi(f)
    if cover.passed != reg.passed or reg.passed != is_surjective(f):
        return Certificate(
            "cover-regular-surjective",
            {"f": f},
            {"counterexample": {"f": f, "cover": cover.passed, "regular_epi": reg.passed}},
            False,
        )
    return cert


def suite_kernel_pair_coequalizers(max_size: int, max_codomain: int = 3) -> Certificate:
    return run_checks(
        "kernel-pair-coequalizers",
        (lambda f=f: _kernel_pair_coeq(f, max_codomain) for f in all_maps_up_to(max_size)),
        {"max_size": max_size, "max_codomain": max_codomain},
    )


def suite_pullback_of_surjections(max_size: int) -> Certificate:
    checks = []
    for x in range(max_size + 1):
        maps = _maps_into(x, max_size)
        for h, g in itertools.product(maps, repeat=2):
            if is_surjective(g):
                checks.append(lambda h=h, g=g: co.verify_pullback_of_surjection(lim.Cospan(h, g)))
    return run_checks("regular-epis-pullback-stable", checks, {"max_size": max_size})


def suite_regular(max_size: int) -> Certificate:
    return aggregate(
        "regular",
        [
            suite_epi_surjective(max_size),
            suite_kernel_pair_coequalizers(max_size),
            suite_pullback_of_surjections(max_size),
        ],
        {"max_size": max_size},
    )


# --------------------------------------------------------------------- exact


def _least_equivalence(r: ex.Relation) -> ex.Relation:
    """Brute force: intersection of all partitions whose relation contains r."""
    n = r.base.size
    pairs = r.pairs()
    best = None
    for rgs in ex.partitions(n):
        if all(rgs[i] == rgs[j] for i, j in pairs):
            if best is None:
                best = list(rgs)
            else:
                best = [(best[i], rgs[i]) for i in range(n)]
    labels: dict = {}
    blocks = [labels.setdefault(b, len(labels)) for b in best]
    return ex.setoid_of_partition(tuple(blocks)).rel


def _closure_check(r: ex.Relation) -> Certificate:
    got = ex.rst_closure(r)
    want = _least_equivalence(r)
    laws = ex.is_equivalence_relation(got)
    if got != want or not laws.passed:
        missing = sorted(set(want.pairs()) - set(got.pairs()))
        extra = sorted(set(got.pairs()) - set(want.pairs()))
        return Certificate(
            "closure",
            {"R": r},
            {"counterexample": {"R": r.pairs(), "missing": missing, "extra": extra}},
            False,
        )
    return Certificate("closure", {"R": r}, {"size": len(got.pairs())}, True)


def _setoid_check(s: ex.Setoid) -> Certificate:
    for cert in (
        ex.is_equivalence_relation(s.rel),
        ex.verify_effectiveness(s),
        ex.verify_vv_quotient(s),
        co.is_regular_epi(ex.quotient(s)[1]),
    ):
        if not cert.passed:
            return cert
    return Certificate("setoid", {"S": s.rel}, {}, True)


def suite_exact(max_size: int = 5, closure_size: int = 3) -> Certificate:
    setoids = run_checks(
        "effective-equivalence-relations",
        (lambda s=s: _setoid_check(s) for s in ex.all_setoids(max_size)),
        {"max_size": max_size},
    )
    closures = []
    for n in range(closure_size + 1):
        base = FinSet(n)
        cells = [(i, j) for i in range(n) for j in range(n)]
        for bits in itertools.product((False, True), repeat=len(cells)):
            r = ex.Relation.from_pairs(base, [c for c, b in zip(cells, bits) if b])
            closures.append(lambda r=r: _closure_check(r))
    closure = run_checks("equivalence-closure", closures, {"max_size": closure_size})
    kernels = run_checks(
        "kernels-effective",
        (lambda f=f: ex.verify_kernel_effective(f) for f in all_maps_up_to(min(max_size, 3))),
    )
    return aggregate("exact", [setoids, closure, kernels], {"max_size": max_size})


# --------------------------------------------------------------- adjunctions


def suite_q_adjunction(max_setoid: int = 4, max_target: int = 3) -> Certificate:
    checks = [
        (lambda s=s, a=a: ex.verify_adjunction_Q_i(s, FinSet(a)))
        for s in ex.all_setoids(max_setoid)
        for a in range(max_target + 1)
    ]
    return run_checks("Q-adjoint-to-inclusion", checks, {"max_setoid": max_setoid, "max_target": max_target})


def suite_pi_adjunction(max_total: int = 3, max_base: int = 2) -> Certificate:
    checks = []
    for xs, ys in itertools.product(range(max_base + 1), repeat=2):
        x, y = FinSet(xs), FinSet(ys)
        over_y = list(lcc.slice_objects(y, max_total))
        over_x = list(lcc.slice_objects(x, max_total))
        for t in itertools.product(range(ys), repeat=xs):
            f = FinMap(x, y, t)
            for g in over_y:
                for h in over_x:
                    checks.append(lambda f=f, g=g, h=h: lcc.verify_pi_adjunction(f, g, h))
    return run_checks("pi-adjunction", checks, {"max_total": max_total, "max_base": max_base})


def suite_adjunctions(max_setoid: int = 4, max_total: int = 3, max_base: int = 2) -> Certificate:
    return aggregate(
        "adjunctions",
        [suite_q_adjunction(max_setoid), suite_pi_adjunction(max_total, max_base)],
        {"max_setoid": max_setoid, "max_total": max_total, "max_base": max_base},
    )


# ------------------------------------------------------------------- W-types


def suite_wtypes(max_size: int = 3, max_carrier: int = 4) -> Certificate:
    return run_checks(
        "w-types",
        (lambda f=f: verify_w_type(f, max_carrier) for f in all_maps_up_to(max_size)),
        {"max_size": max_size, "max_carrier": max_carrier},
    )


# --------------------------------------------------------------- classifiers


def suite_classifiers(max_sub: int = 4, max_size: int = 3, max_bound: int = 3) -> Certificate:
    subs = run_checks(
        "subobject-classifier",
        (lambda b=b: verify_subobject_classifier(FinSet(b)) for b in range(max_sub + 1)),
        {"max_size": max_sub},
    )
    squares = []
    families = []
    for n in range(max_bound + 1):
        oc = object_classifier(n)
        for f in all_maps_up_to(max_size):
            if all(len(fib) <= n for fib in f.fibers()):
                squares.append(lambda f=f, oc=oc: verify_object_classifier_pullback(f, oc))
        for b in range(max_size + 1):
            families.append(lambda b=b, oc=oc: verify_family_equivalence(FinSet(b), oc))
    squares_cert = run_checks("object-classifier-pullback", squares, {"max_size": max_size, "max_bound": max_bound})
    families_cert = run_checks("family-equivalence", families, {"max_size": max_size, "max_bound": max_bound})
    pointed = pointed_prop_check()
    return aggregate("classifiers", [subs, squares_cert, families_cert, pointed])


# ---------------------------------------------------------------- small maps


def suite_smallmaps(max_size: int = 3, max_k: int = 2, e_bound: int = 4) -> Certificate:
    children = []
    for k in range(max_k + 1):
        s = fiber_bound_class(k)
        st = verify_stable(s, max_size)
        st.kind = f"stable[k={k}]"
        lf = verify_locally_full(s, max_size)
        lf.kind = f"locally-full[k={k}]"
        children += [st, lf]
    children.append(
        run_checks(
            "collection-squares",
            (lambda cs=cs: is_collection_square(cs, e_bound) for cs in covering_squares(max_size)),
            {"max_size": max_size, "e_bound": e_bound},
        )
    )
    return aggregate("small-maps", children, {"max_size": max_size, "max_k": max_k, "e_bound": e_bound})


# ------------------------------------------------------------------ ΠW check


def verify_piw_pretopos(max_size: int = 3, seed: int = 0) -> Certificate:
    """Aggregated check following the proof outline for the ΠW-pretopos theorem.

    lextensive -> regular -> exact -> pretopos -> locally cartesian closed
    -> W-types.  Bounds: carriers <= max_size everywhere, slice bases
    <= min(2, max_size), W-algebra carriers <= max_size + 1.
    """
    lex = suite_lextensive(max_size, seed)
    reg = suite_regular(max_size)
    exact_inner = suite_exact(max_size, closure_size=min(max_size, 3))
    exact = aggregate("exact", [reg, exact_inner], {"max_size": max_size})
    pretopos = aggregate("pretopos", [lex, exact])
    base = min(2, max_size)
    lcc_cert = aggregate("locally-cartesian-closed", [suite_pi_adjunction(max_size, base)])
    w = aggregate("w-types", [suite_wtypes(max_size, max_size + 1)])
    caps = {"max_size": max_size, "max_slice_base": base, "max_algebra_carrier": max_size + 1}
    return aggregate("piw-pretopos", [pretopos, lcc_cert, w], caps, seed)
