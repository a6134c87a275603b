"""Equivalence relations, setoids, quotients and their effectiveness."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from . import faults
from .colimits import UnionFind, coequalizer, image_factorization
from .core import Certificate, FinMap, FinSet, compose, hom_tables, identity, is_iso
from .errors import NotEquivalenceRelation, NotPreserving
from .limits import Cospan, iso_failure, kernel_pair, pullback


@dataclass(frozen=True)
class Relation:
    base: FinSet
    matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(bool(v) for v in row) for row in self.matrix)
        n = self.base.size
        if len(m) != n or any(len(row) != n for row in m):
            raise ValueError(f"relation matrix must be {n}x{n}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pairs(cls, base: FinSet, pairs: Iterable[tuple[int, int]]) -> "Relation":
        n = base.size
        m = [[False] * n for _ in range(n)]
        for i, j in pairs:
            m[i][j] = True
        return cls(base, tuple(map(tuple, m)))

    @classmethod
    def identity(cls, base: FinSet) -> "Relation":
        return cls.from_pairs(base, ((i, i) for i in range(base.size)))

    @classmethod
    def full(cls, base: FinSet) -> "Relation":
        n = base.size
        return cls(base, tuple((True,) * n for _ in range(n)))

    def __call__(self, i: int, j: int) -> bool:
        return self.matrix[i][j]

    def pairs(self) -> list[tuple[int, int]]:
        n = self.base.size
        return [(i, j) for i in range(n) for j in range(n) if self.matrix[i][j]]

    def tabulate(self) -> tuple[FinSet, FinMap, FinMap]:
        """The relation as a carrier of pairs with its two projections."""
        pairs = self.pairs()
        r = FinSet(len(pairs), decoder=tuple(pairs))
        return r, FinMap(r, self.base, [i for i, _ in pairs]), FinMap(r, self.base, [j for _, j in pairs])

    def to_dict(self):
        return {"base": self.base.size, "pairs": [list(p) for p in self.pairs()]}


def _law_failures(r: Relation) -> dict:
    n = r.base.size
    out = {}
    bad = next((i for i in range(n) if not r(i, i)), None)
    if bad is not None:
        out["reflexive"] = {"missing": [bad, bad]}
    bad = next(((i, j) for i, j in r.pairs() if not r(j, i)), None)
    if bad is not None:
        out["symmetric"] = {"has": list(bad), "missing": [bad[1], bad[0]]}
    bad = next(
        ((i, j, k) for i, j in r.pairs() for k in range(n) if r(j, k) and not r(i, k)), None
    )
    if bad is not None:
        i, j, k = bad
        out["transitive"] = {"has": [[i, j], [j, k]], "missing": [i, k]}
    return out


@dataclass(frozen=True)
class Setoid:
    carrier: FinSet
    rel: Relation

    def __post_init__(self):
        if self.rel.base.size != self.carrier.size:
            raise ValueError("relation lives on a different carrier")
        failures = _law_failures(self.rel)
        if failures:
            raise NotEquivalenceRelation(f"not an equivalence relation: {failures}")


@dataclass(frozen=True)
class SetoidMap:
    src: Setoid
    dst: Setoid
    f0: FinMap

    def __post_init__(self):
        f = self.f0
        for x, y in self.src.rel.pairs():
            if not self.dst.rel(f(x), f(y)):
                raise NotPreserving(x, y)


def is_equivalence_relation(r: Relation) -> Certificate:
    """Matrix laws plus the categorical witnesses on the tabulated relation.

    ``ρ : A -> R``, ``σ : R -> R`` and ``τ : R ×_A R -> R`` are built as maps
    whenever they exist and their defining equations are checked strictly.
    The composable pairs ``R ×_A R`` are the pullback of ``r2`` against ``r1``.
    """
    failures = _law_failures(r)
    t, r1, r2 = r.tabulate()
    index = {p: i for i, p in enumerate(t.decoder)}
    a = r.base
    witnesses: dict = {"tabulated_size": t.size}
    if "reflexive" not in failures:
        rho = FinMap(a, t, [index[(i, i)] for i in range(a.size)])
        ok = compose(r1, rho) == identity(a) and compose(r2, rho) == identity(a)
        witnesses["rho"] = rho
        if not ok:
            failures["rho_equations"] = {}
    if "symmetric" not in failures:
        sigma = FinMap(t, t, [index[(j, i)] for i, j in t.decoder])
        ok = compose(r1, sigma) == r2 and compose(r2, sigma) == r1
        witnesses["sigma"] = sigma
        if not ok:
            failures["sigma_equations"] = {}
    if "transitive" not in failures:
        comp, pi2, pi1 = pullback(Cospan(r2, r1))
        tau = FinMap(comp, t, [index[(r1(pi2(w)), r2(pi1(w)))] for w in range(comp.size)])
        ok = compose(r1, tau) == compose(r1, pi2) and compose(r2, tau) == compose(r2, pi1)
        witnesses["tau"] = tau
        if not ok:
            failures["tau_equations"] = {}
    passed = not failures
    witnesses["laws"] = {k: k not in failures for k in ("reflexive", "symmetric", "transitive")}
    if not passed:
        witnesses["counterexample"] = failures
    return Certificate("equivalence-relation", {"R": r}, witnesses, passed)


def rst_closure(r: Relation) -> Relation:
    """Least equivalence relation containing r."""
    n = r.base.size
    if faults.active("closure_drop_transitivity"):
        pairs = set(r.pairs()) | {(j, i) for i, j in r.pairs()} | {(i, i) for i in range(n)}
        return Relation.from_pairs(r.base, pairs)
    uf = UnionFind(n)
    for i, j in r.pairs():
        uf.union(i, j)
    labels, _ = uf.labels()
    return Relation.from_pairs(r.base, ((i, j) for i in range(n) for j in range(n) if labels[i] == labels[j]))


def quotient(s: Setoid) -> tuple[FinSet, FinMap]:
    """Coequalizer of the two projections of the tabulated relation."""
    _, r1, r2 = s.rel.tabulate()
    q = coequalizer(r1, r2)
    return q.carrier, FinMap(s.carrier, q.carrier, q.proj.table)


def verify_effectiveness(s: Setoid) -> Certificate:
    """The relation is the kernel pair of its own quotient map."""
    _, c = quotient(s)
    t, _, _ = s.rel.tabulate()
    k, _, _ = kernel_pair(c)
    index = {p: i for i, p in enumerate(k.decoder)}
    comparison = [index.get(p) for p in t.decoder]
    failure = iso_failure(comparison, k.size)
    witnesses: dict = {"relation_size": t.size, "kernel_pair_size": k.size, "comparison": comparison}
    if failure is not None:
        if failure["reason"] == "not surjective":
            failure["missed_pair"] = k.decoder[failure["missed"]]
        witnesses["counterexample"] = failure
    return Certificate("effectiveness", {"S": s.rel}, witnesses, failure is None)


def kernel_relation(f: FinMap) -> Setoid:
    n = f.dom.size
    rel = Relation(f.dom, tuple(tuple(f(x) == f(y) for y in range(n)) for x in range(n)))
    return Setoid(f.dom, rel)


def verify_kernel_effective(f: FinMap) -> Certificate:
    """``A/ker f`` is the image of f over ``cod f``, and ker f is effective."""
    s = kernel_relation(f)
    q, c = quotient(s)
    im, surj, inj = image_factorization(f)
    table: list[Optional[int]] = [None] * q.size
    clash = None
    for a in range(f.dom.size):
        if table[c(a)] is not None and table[c(a)] != surj(a):
            clash = {"reason": "class not constant under f", "element": a}
        table[c(a)] = surj(a)
    failure = clash or iso_failure(table, im.size)
    over = failure is None and all(inj(table[c(a)]) == f(a) for a in range(f.dom.size))
    eff = verify_effectiveness(s)
    witnesses: dict = {
        "kernel_size": len(s.rel.pairs()),
        "quotient_size": q.size,
        "image_size": im.size,
        "comparison": table,
        "effective": eff.passed,
    }
    passed = failure is None and over and eff.passed
    if not passed:
        witnesses["counterexample"] = failure or eff.witnesses.get("counterexample") or {"reason": "not over cod(f)"}
    return Certificate("kernel-effective", {"f": f}, witnesses, passed)


# ---------------------------------------------------------------- EqRel and Q


def setoid_inclusion(a: FinSet) -> Setoid:
    return Setoid(a, Relation.identity(a))


def Q_functor(s: Setoid) -> FinSet:
    return quotient(s)[0]


def Q_on_map(m: SetoidMap) -> FinMap:
    qs, cs = quotient(m.src)
    qd, cd = quotient(m.dst)
    table = [0] * qs.size
    for x in range(m.src.carrier.size):
        table[cs(x)] = cd(m.f0(x))
    return FinMap(qs, qd, table)


def setoid_homs(s: Setoid, t: Setoid, cap: Optional[int] = None) -> list[FinMap]:
    pairs = s.rel.pairs()
    return [
        FinMap(s.carrier, t.carrier, h)
        for h in hom_tables(s.carrier.size, t.carrier.size, cap)
        if all(t.rel(h[x], h[y]) for x, y in pairs)
    ]


def verify_adjunction_Q_i(s: Setoid, a: FinSet, cap: Optional[int] = None) -> Certificate:
    """Unit, counit, both triangle identities and the hom-set transposes."""
    qs, c = quotient(s)
    iqs = setoid_inclusion(qs)
    unit = SetoidMap(s, iqs, c)
    # counit Q(iA) -> A sends the class of x to x
    qia, cia = quotient(setoid_inclusion(a))
    counit = is_iso(cia)
    qiqs, ciqs = quotient(iqs)
    counit_qs = is_iso(ciqs)
    failures = {}
    # triangle 1: ε_{QS} ∘ Q(η_S) = id_{QS}
    tri1 = compose(counit_qs, Q_on_map(unit))
    if tri1 != identity(qs):
        failures["triangle_Q"] = {"got": tri1}
    # triangle 2: i(ε_A) ∘ η_{iA} = id_{iA}
    eta_ia = SetoidMap(setoid_inclusion(a), setoid_inclusion(qia), cia)
    tri2 = compose(counit, eta_ia.f0)
    if tri2 != identity(a):
        failures["triangle_i"] = {"got": tri2}

    left = setoid_homs(s, setoid_inclusion(a), cap)
    right = [FinMap(qs, a, k) for k in hom_tables(qs.size, a.size, cap)]
    reps = [c.table.index(k) for k in range(qs.size)]

    def down(phi: FinMap) -> FinMap:
        return FinMap(qs, a, [phi(r) for r in reps])

    def up(psi: FinMap) -> FinMap:
        return compose(psi, c)

    if any(up(down(phi)) != phi for phi in left):
        failures["transpose_roundtrip_left"] = {}
    if any(down(up(psi)) != psi for psi in right):
        failures["transpose_roundtrip_right"] = {}
    if len(left) != len(right):
        failures["hom_sizes"] = {"eqrel": len(left), "set": len(right)}

    # finite-model artifact: a chosen section makes S and i(QS) equivalent
    section = FinMap(qs, s.carrier, reps)
    back = compose(section, c)
    finite_ac = all(s.rel(x, back(x)) for x in range(s.carrier.size))

    witnesses: dict = {
        "unit": c,
        "counit": counit,
        "hom_eqrel": len(left),
        "hom_set": len(right),
        "finite_model_equivalence": finite_ac,
        "flags": ["finite-model artifact: Q and i are inverse equivalences because choice holds"],
    }
    if failures:
        witnesses["counterexample"] = failures
    return Certificate("adjunction-Q-i", {"S": s.rel, "A": a}, witnesses, not failures)


def vv_quotient(s: Setoid) -> tuple[FinSet, FinMap]:
    """Quotient as the set of equivalence-class predicates (distinct rows)."""
    rows: list[tuple] = []
    for row in s.rel.matrix:
        if row not in rows:
            rows.append(row)
    bits = tuple("".join("1" if v else "0" for v in row) for row in rows)
    qv = FinSet(len(rows), decoder=tuple(("eqclass", b) for b in bits))
    q, c = quotient(s)
    table = [c(row.index(True)) for row in rows]
    return qv, FinMap(qv, q, table)


def verify_vv_quotient(s: Setoid) -> Certificate:
    qv, comparison = vv_quotient(s)
    failure = iso_failure(list(comparison.table), comparison.cod.size)
    witnesses: dict = {"class_predicates": qv.size, "quotient_size": comparison.cod.size}
    if failure is not None:
        witnesses["counterexample"] = failure
    return Certificate("vv-quotient", {"S": s.rel}, witnesses, failure is None)


def two_mod_P(p: bool) -> FinSet:
    two = FinSet(2)
    r = Relation.from_pairs(two, [(0, 1)] if p else [])
    return Q_functor(Setoid(two, rst_closure(r)))


def recover_proposition(p: bool) -> bool:
    """Split the quotient map ``2 -> 2/P`` and compare the images of 0 and 1."""
    two = FinSet(2)
    r = Relation.from_pairs(two, [(0, 1)] if p else [])
    q, c = quotient(Setoid(two, rst_closure(r)))
    section = FinMap(q, two, [c.table.index(k) for k in range(q.size)])
    return section(c(0)) == section(c(1))


def partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length n."""
    if n == 0:
        yield ()
        return

    def grow(prefix: list[int], top: int):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in range(top + 2):
            prefix.append(v)
            yield from grow(prefix, max(top, v))
            prefix.pop()

    yield from grow([0], 0)


def setoid_of_partition(blocks: tuple[int, ...]) -> Setoid:
    n = len(blocks)
    a = FinSet(n)
    return Setoid(a, Relation(a, tuple(tuple(blocks[i] == blocks[j] for j in range(n)) for i in range(n))))


def all_setoids(max_size: int) -> Iterator[Setoid]:
    for n in range(max_size + 1):
        for rgs in partitions(n):
            yield setoid_of_partition(rgs)
