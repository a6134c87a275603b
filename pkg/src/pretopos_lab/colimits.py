"""Finite colimits, image factorization and the regularity toolkit."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from . import faults
from .core import (
    Certificate,
    FinMap,
    FinSet,
    compose,
    default_cap,
    hom_tables,
    identity,
    is_epi_bruteforce,
    is_iso,
    is_mono,
    is_surjective,
)
from .errors import DomainMismatch, NotTotal, NotUnique, ParallelMismatch
from .limits import Cospan, Square, iso_failure, kernel_pair, pullback, verify_pullback_square


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x

    def labels(self) -> tuple[list[int], list[int]]:
        """Class index per element and least representative per class.

        Classes are numbered in order of their least element.
        """
        n = len(self.parent)
        label: dict[int, int] = {}
        reps: list[int] = []
        out = []
        for x in range(n):
            r = self.find(x)
            if r not in label:
                label[r] = len(reps)
                reps.append(x)
            out.append(label[r])
        return out, reps


def initial() -> FinSet:
    return FinSet(0, "0")


def from_initial(a: FinSet) -> FinMap:
    return FinMap(initial(), a, ())


# ------------------------------------------------------------------------ sums


@dataclass(frozen=True)
class SumObject:
    carrier: FinSet
    inl: FinMap
    inr: FinMap


def sum_(a: FinSet, b: FinSet) -> SumObject:
    dec = tuple(("inl", i) for i in range(a.size)) + tuple(("inr", j) for j in range(b.size))
    s = FinSet(a.size + b.size, decoder=dec)
    shift = a.size
    if faults.active("sum_overlap") and a.size and b.size:
        shift = a.size - 1
    return SumObject(s, FinMap(a, s, range(a.size)), FinMap(b, s, [shift + j for j in range(b.size)]))


def copair(s: SumObject, u: FinMap, v: FinMap) -> FinMap:
    """The map ``[u, v] : A + B -> C``."""
    table = [0] * s.carrier.size
    for i in range(u.dom.size):
        table[s.inl(i)] = u(i)
    for j in range(v.dom.size):
        table[s.inr(j)] = v(j)
    return FinMap(s.carrier, u.cod, table)


def sum_map(f: FinMap, g: FinMap) -> FinMap:
    """``f + g : A + C -> B + D``."""
    src, dst = sum_(f.dom, g.dom), sum_(f.cod, g.cod)
    return copair(src, compose(dst.inl, f), compose(dst.inr, g))


def disjointness_square(s: SumObject) -> Square:
    return Square(
        top=from_initial(s.inr.dom),
        right=s.inr,
        bottom=s.inl,
        left=from_initial(s.inl.dom),
    )


def verify_sum_disjoint(s: SumObject) -> Certificate:
    p, _, _ = pullback(Cospan(s.inl, s.inr))
    checks = {"inl_mono": is_mono(s.inl), "inr_mono": is_mono(s.inr), "intersection_size": p.size}
    passed = checks["inl_mono"] and checks["inr_mono"] and p.size == 0
    witnesses: dict = dict(checks)
    if not passed:
        witnesses["counterexample"] = {
            "inl": s.inl,
            "inr": s.inr,
            "overlap": list(p.decoder),
        }
    return Certificate("sum-disjoint", {"A": s.inl.dom, "B": s.inr.dom}, witnesses, passed)


def verify_sum_stability(f0: FinMap, f1: FinMap, g: FinMap) -> Certificate:
    """``(A0 ×_B X) + (A1 ×_B X) -> (A0 + A1) ×_B X`` is an iso over X."""
    if not (f0.cod.size == f1.cod.size == g.cod.size):
        raise DomainMismatch("all three maps must land in the same carrier")
    p0, _, q0 = pullback(Cospan(f0, g))
    p1, _, q1 = pullback(Cospan(f1, g))
    lhs = sum_(p0, p1)
    a = sum_(f0.dom, f1.dom)
    rhs, _, rq = pullback(Cospan(copair(a, f0, f1), g))
    index = {pair: i for i, pair in enumerate(rhs.decoder)}
    table: list[Optional[int]] = [None] * lhs.carrier.size
    for i, (a0, x) in enumerate(p0.decoder):
        table[lhs.inl(i)] = index.get((a.inl(a0), x))
    for j, (a1, x) in enumerate(p1.decoder):
        table[lhs.inr(j)] = index.get((a.inr(a1), x))
    failure = iso_failure(table, rhs.size)
    over_x = failure is None and all(
        rq(table[lhs.inl(i)]) == q0(i) for i in range(p0.size)
    ) and all(rq(table[lhs.inr(j)]) == q1(j) for j in range(p1.size))
    witnesses: dict = {"lhs_size": lhs.carrier.size, "rhs_size": rhs.size, "comparison": table}
    passed = failure is None and over_x
    if not passed:
        witnesses["counterexample"] = failure or {"reason": "comparison not over X"}
    return Certificate("sum-stability", {"f0": f0, "f1": f1, "g": g}, witnesses, passed)


# ---------------------------------------------------------------- coequalizers


@dataclass(frozen=True)
class CoeqObject:
    carrier: FinSet
    proj: FinMap
    class_reps: tuple


def _quotient_by_pairs(b: FinSet, pairs: Sequence[tuple[int, int]]) -> CoeqObject:
    uf = UnionFind(b.size)
    for x, y in pairs:
        uf.union(x, y)
    labels, reps = uf.labels()
    q = FinSet(len(reps), decoder=tuple(("class", r) for r in reps))
    return CoeqObject(q, FinMap(b, q, labels), tuple(reps))


def coequalizer(f: FinMap, g: FinMap) -> CoeqObject:
    if f.dom.size != g.dom.size or f.cod.size != g.cod.size:
        raise ParallelMismatch("coequalizer needs a parallel pair")
    pairs = list(zip(f.table, g.table))
    if faults.active("coeq_skip_union"):
        pairs = [p for p in pairs if p[0] != p[1]][:-1]
    return _quotient_by_pairs(f.cod, pairs)


def verify_coeq_universal(
    f: FinMap,
    g: FinMap,
    q: Union[CoeqObject, FinMap],
    cap: Optional[int] = None,
    max_codomain: int = 3,
) -> Certificate:
    """Exhaustive universal-property check of a candidate coequalizer.

    ``q`` may be a :class:`CoeqObject` or any map out of ``cod(f)``.
    """
    proj = q.proj if isinstance(q, CoeqObject) else q
    cap = default_cap() if cap is None else cap
    caps = {"max_codomain": max_codomain, "cap": cap}
    inputs = {"f": f, "g": g, "proj": proj}
    bad = next((a for a in range(f.dom.size) if proj(f(a)) != proj(g(a))), None)
    if bad is not None:
        return Certificate(
            "coeq-universal",
            inputs,
            {"counterexample": {"reason": "does not coequalize", "element": bad}},
            False,
            caps,
        )
    b, qs = f.cod.size, proj.cod.size
    cocones = 0
    for c in range(max_codomain + 1):
        ks = list(hom_tables(qs, c, cap))
        for h in hom_tables(b, c, cap):
            if any(h[f(a)] != h[g(a)] for a in range(f.dom.size)):
                continue
            cocones += 1
            mediating = [k for k in ks if all(k[proj(x)] == h[x] for x in range(b))]
            if len(mediating) != 1:
                return Certificate(
                    "coeq-universal",
                    inputs,
                    {
                        "cocones": cocones,
                        "counterexample": {
                            "reason": "no mediating map" if not mediating else "mediating map not unique",
                            "h": FinMap(f.cod, FinSet(c), h),
                            "mediating": [FinMap(proj.cod, FinSet(c), k) for k in mediating[:2]],
                        },
                    },
                    False,
                    caps,
                )
    return Certificate("coeq-universal", inputs, {"cocones": cocones}, True, caps)


def pushout(f: FinMap, g: FinMap) -> tuple[FinSet, FinMap, FinMap]:
    """Pushout of ``B <-f- A -g-> C`` as a coequalizer into ``B + C``."""
    if f.dom.size != g.dom.size:
        raise DomainMismatch("pushout legs must share a domain")
    s = sum_(f.cod, g.cod)
    q = coequalizer(compose(s.inl, f), compose(s.inr, g))
    return q.carrier, compose(q.proj, s.inl), compose(q.proj, s.inr)


def mapping_cone(f: FinMap) -> tuple[FinSet, int]:
    """Glue the image of f to a single point; returns the carrier and its size."""
    from .limits import bang

    p, _, _ = pushout(bang(f.dom), f)
    return p, p.size


# ------------------------------------------------------------------ truncation


def prop_truncate(a: FinSet) -> FinSet:
    return FinSet(min(a.size, 1))


def truncation_map(a: FinSet) -> FinMap:
    return FinMap(a, prop_truncate(a), [0] * a.size)


def verify_trunc_universal(a: FinSet, cap: Optional[int] = None) -> Certificate:
    """Precomposition with ``A -> ‖A‖`` is a bijection on maps into propositions."""
    t = truncation_map(a)
    rows = []
    passed = True
    counterexample = None
    for p in (0, 1):
        pre = [tuple(k[v] for v in t.table) for k in hom_tables(t.cod.size, p, cap)]
        targets = list(hom_tables(a.size, p, cap))
        bijective = len(set(pre)) == len(pre) and sorted(pre) == sorted(targets)
        rows.append({"P": p, "from_truncation": len(pre), "from_A": len(targets), "bijective": bijective})
        if not bijective and counterexample is None:
            passed, counterexample = False, rows[-1]
    witnesses: dict = {"props": rows}
    if counterexample is not None:
        witnesses["counterexample"] = counterexample
    return Certificate("truncation-universal", {"A": a}, witnesses, passed)


# ------------------------------------------------------- images and regularity


def image_factorization(f: FinMap) -> tuple[FinSet, FinMap, FinMap]:
    hit = f.image()
    im = FinSet(len(hit), decoder=tuple(hit))
    pos = {v: i for i, v in enumerate(hit)}
    return im, FinMap(f.dom, im, [pos[v] for v in f.table]), FinMap(im, f.cod, hit)


def verify_image_uniqueness(f: FinMap, cap: Optional[int] = None) -> Certificate:
    """Every (surjection, mono) factorization is uniquely isomorphic to the image."""
    im, e0, m0 = image_factorization(f)
    seen = 0
    for n in range(f.cod.size + 1):
        mid = FinSet(n)
        for m in hom_tables(n, f.cod.size, cap):
            if len(set(m)) != n:
                continue
            inv = {v: i for i, v in enumerate(m)}
            if any(v not in inv for v in f.table):
                continue
            e = [inv[v] for v in f.table]
            if len(set(e)) != n:
                continue
            seen += 1
            links = [
                phi
                for phi in hom_tables(im.size, n, cap)
                if all(phi[e0(a)] == e[a] for a in range(f.dom.size))
                and all(m[phi[i]] == m0(i) for i in range(im.size))
            ]
            if len(links) != 1 or is_iso(FinMap(im, mid, links[0])) is None:
                return Certificate(
                    "image-uniqueness",
                    {"f": f},
                    {"counterexample": {"surj": FinMap(f.dom, mid, e), "mono": FinMap(mid, f.cod, m), "links": len(links)}},
                    False,
                )
    return Certificate("image-uniqueness", {"f": f}, {"factorizations": seen}, True)


def is_cover(f: FinMap, cap: Optional[int] = None) -> Certificate:
    """Brute force over monos through which f factors; each must be an iso.

    The same verdict is read off the image factorization and both are recorded.
    """
    through = []
    for n in range(f.cod.size + 1):
        for m in hom_tables(n, f.cod.size, cap):
            if len(set(m)) == n and set(f.table) <= set(m):
                through.append(m)
    non_iso = [m for m in through if len(m) != f.cod.size]
    brute = not non_iso
    _, _, inj = image_factorization(f)
    via_image = is_iso(inj) is not None
    witnesses: dict = {"cover": brute, "via_image": via_image, "monos_through": len(through)}
    if brute != via_image:
        raise AssertionError(f"cover verdicts disagree for {f!r}")
    if not brute:
        m = non_iso[0]
        witnesses["counterexample"] = {"mono": FinMap(FinSet(len(m)), f.cod, m)}
    return Certificate("cover", {"f": f}, witnesses, brute, {"cap": cap or default_cap()})


def is_regular_epi(f: FinMap) -> Certificate:
    """Coequalizer of the kernel pair compared against ``cod(f)``."""
    _, p1, p2 = kernel_pair(f)
    q = coequalizer(p1, p2)
    table: list[Optional[int]] = [None] * q.carrier.size
    clash = None
    for a in range(f.dom.size):
        c = q.proj(a)
        if table[c] is None:
            table[c] = f(a)
        elif table[c] != f(a):
            clash = {"reason": "kernel-pair class not constant under f", "element": a}
    failure = clash or iso_failure(table, f.cod.size)
    witnesses: dict = {"comparison": table, "quotient_size": q.carrier.size}
    if failure is not None:
        witnesses["counterexample"] = failure
    return Certificate("regular-epi", {"f": f}, witnesses, failure is None)


def verify_surj_is_regular_epi(f: FinMap, cap: Optional[int] = None, max_codomain: int = 3) -> Certificate:
    if not is_surjective(f):
        return Certificate("surj-is-regular-epi", {"f": f}, {"applicable": False}, True)
    _, e, _ = image_factorization(f)
    reg = is_regular_epi(e)
    _, p1, p2 = kernel_pair(f)
    universal = verify_coeq_universal(p1, p2, f, cap, max_codomain)
    witnesses: dict = {"applicable": True, "regular_epi": reg, "universal": universal}
    passed = reg.passed and universal.passed
    if not passed:
        witnesses["counterexample"] = (reg if not reg.passed else universal).witnesses["counterexample"]
    return Certificate("surj-is-regular-epi", {"f": f}, witnesses, passed, {"max_codomain": max_codomain})


def verify_pullback_of_surjection(c: Cospan) -> Certificate:
    """Pull the surjective leg ``c.g`` back along ``c.f``.

    The pulled-back leg must be surjective with fibers matching those of g.
    """
    h, g = c.f, c.g
    inputs = {"along": h, "surjection": g}
    if not is_surjective(g):
        return Certificate("pullback-of-surjection", inputs, {"applicable": False}, True)
    p, p1, p2 = pullback(c)
    witnesses: dict = {"applicable": True, "pullback_size": p.size}
    if not is_surjective(p1):
        missed = next(y for y in range(h.dom.size) if y not in set(p1.table))
        witnesses["counterexample"] = {"reason": "pulled-back leg not surjective", "missed": missed}
        return Certificate("pullback-of-surjection", inputs, witnesses, False)
    fibers = p1.fibers()
    for y in range(h.dom.size):
        got = sorted(p2(i) for i in fibers[y])
        want = g.fiber(h(y))
        if got != want:
            witnesses["counterexample"] = {"reason": "fiber mismatch", "element": y, "got": got, "want": want}
            return Certificate("pullback-of-surjection", inputs, witnesses, False)
    reg = is_regular_epi(p1)
    witnesses["pulled_back_regular_epi"] = reg.passed
    if not reg.passed:
        witnesses["counterexample"] = reg.witnesses["counterexample"]
    return Certificate("pullback-of-surjection", inputs, witnesses, reg.passed)


def unique_choice(a: FinSet, b: FinSet, graph: Sequence[Sequence[bool]]) -> FinMap:
    table = []
    for i in range(a.size):
        hits = [j for j in range(b.size) if graph[i][j]]
        if not hits:
            raise NotTotal(i)
        if len(hits) > 1:
            raise NotUnique(i)
        table.append(hits[0])
    return FinMap(a, b, table)


def verify_epi_surjective_cone_equivalence(f: FinMap, cap: Optional[int] = None) -> Certificate:
    epi = is_epi_bruteforce(f, cap)
    _, components = mapping_cone(f)
    surj = is_surjective(f)
    verdicts = {"epi": epi.passed, "cone_connected": components == 1, "surjective": surj}
    passed = len(set(verdicts.values())) == 1
    witnesses: dict = dict(verdicts, cone_components=components)
    if not epi.passed:
        witnesses["separating_pair"] = epi.witnesses["counterexample"]
    if not passed:
        witnesses["counterexample"] = {"f": f, **verdicts}
    return Certificate("epi-surjective-cone", {"f": f}, witnesses, passed, epi.caps)
