"""Classes of small maps, covering squares and collection.

Square conventions follow :mod:`pretopos_lab.limits`; for a covering square
the corner is ``D``, ``top = q : D -> B``, ``left = g : D -> C``,
``right = f : B -> A`` and ``bottom = p : C -> A``.

Every finite surjection splits, so collection and multiple choice hold in
this model; certificates say so with the flag ``"finite-model fact"``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .colimits import sum_map
from .core import (
    Certificate,
    FinMap,
    FinSet,
    all_maps_up_to,
    compose,
    default_cap,
    hom_tables,
    identity,
    is_surjective,
)
from .errors import CapExceeded, NotSurjective
from .limits import Cospan, Square, comparison_map, identity_square, pullback

FINITE_FACT = "finite-model fact"


@dataclass(frozen=True)
class MapClass:
    name: str
    predicate: Callable[[FinMap], bool]

    def __call__(self, f: FinMap) -> bool:
        return bool(self.predicate(f))


def fiber_bound_class(k: int) -> MapClass:
    return MapClass(f"fibers<={k}", lambda f: all(len(fib) <= k for fib in f.fibers()))


def all_maps_class() -> MapClass:
    return MapClass("all", lambda f: True)


def verify_stable(s: MapClass, max_size: int = 3) -> Certificate:
    """Pullback stability, descent and sums, exhaustively for carriers <= max_size."""
    inputs = {"class": s.name}
    caps = {"max_size": max_size}
    counts = {"squares": 0, "sums": 0}
    maps = list(all_maps_up_to(max_size))
    by_cod: dict[int, list[FinMap]] = {}
    for m in maps:
        by_cod.setdefault(m.cod.size, []).append(m)
    squares = []
    for into_b in by_cod.values():
        for f in into_b:
            for h in into_b:
                _, g, _ = pullback(Cospan(h, f))
                squares.append((f, h, g, s(f), s(g)))
    counts["squares"] = len(squares)
    for f, h, g, sf, sg in squares:
        if sf and not sg:
            return _fail(inputs, caps, counts, "pullback stability", {"f": f, "h": h, "g": g})
    for f, h, g, sf, sg in squares:
        if is_surjective(h) and sg and not sf:
            return _fail(inputs, caps, counts, "descent", {"f": f, "h": h, "g": g})
    small = [m for m in maps if s(m)]
    for f, g in itertools.product(small, repeat=2):
        counts["sums"] += 1
        if not s(sum_map(f, g)):
            return _fail(inputs, caps, counts, "sum", {"f": f, "g": g})
    return Certificate("stable-class", inputs, dict(counts, axioms=["pullback stability", "descent", "sum"]), True, caps)


def _fail(inputs, caps, counts, axiom, witness) -> Certificate:
    return Certificate(
        "stable-class", inputs, dict(counts, counterexample=dict(witness, axiom=axiom)), False, caps
    )


def verify_locally_full(s: MapClass, max_size: int = 3) -> Certificate:
    """For composable ``g, f`` with f small: g small iff ``f∘g`` small."""
    inputs = {"class": s.name}
    checked = 0
    maps = list(all_maps_up_to(max_size))
    by_dom: dict[int, list[FinMap]] = {}
    for m in maps:
        by_dom.setdefault(m.dom.size, []).append(m)
    for g in maps:
        for f in by_dom.get(g.cod.size, ()):
            if not s(f):
                continue
            checked += 1
            fg = compose(f, g)
            if s(g) != s(fg):
                return Certificate(
                    "locally-full",
                    inputs,
                    {
                        "pairs": checked,
                        "counterexample": {"g": g, "f": f, "g_small": s(g), "composite_small": s(fg)},
                    },
                    False,
                    {"max_size": max_size},
                )
    return Certificate("locally-full", inputs, {"pairs": checked}, True, {"max_size": max_size})


# --------------------------------------------------------- covering squares


def is_quasi_pullback(sq: Square) -> Certificate:
    sq.require_commutes()
    p, table = comparison_map(sq)
    hit = set(table)
    missed = next((i for i in range(p.size) if i not in hit), None)
    witnesses: dict = {"comparison": table, "pullback_size": p.size}
    if missed is not None:
        witnesses["counterexample"] = {"missed_pair": p.decoder[missed]}
    return Certificate("quasi-pullback", {"square": sq}, witnesses, missed is None)


def is_covering_square(sq: Square) -> Certificate:
    qp = is_quasi_pullback(sq)
    surj = is_surjective(sq.bottom)
    witnesses: dict = {"quasi_pullback": qp.passed, "bottom_surjective": surj}
    if not qp.passed:
        witnesses["counterexample"] = qp.witnesses["counterexample"]
    elif not surj:
        missed = next(a for a in range(sq.bottom.cod.size) if a not in set(sq.bottom.table))
        witnesses["counterexample"] = {"bottom_misses": missed}
    return Certificate("covering-square", {"square": sq}, witnesses, qp.passed and surj)


@dataclass(frozen=True)
class CoveringSquare:
    square: Square
    comparison_section: tuple
    bottom_section: tuple


def covering_square(sq: Square) -> CoveringSquare:
    """Package a square with sections witnessing its surjections."""
    cert = is_covering_square(sq)
    if not cert.passed:
        raise NotSurjective(f"not a covering square: {cert.witnesses['counterexample']}")
    pb, table = comparison_map(sq)
    comp = tuple(table.index(i) for i in range(pb.size))
    bottom = tuple(sq.bottom.table.index(a) for a in range(sq.bottom.cod.size))
    return CoveringSquare(sq, comp, bottom)


def _split(e: tuple, n: int) -> tuple:
    return tuple(e.index(x) for x in range(n))


def is_collection_square(cs: CoveringSquare, e_bound: int = 4, cap: Optional[int] = None) -> Certificate:
    """Lifting against every surjection ``E ->> fib_f(a)`` with ``|E| <= e_bound``.

    For each ``(a, E, e)`` a point ``c`` over a and a map ``t : fib_g(c) -> E``
    with ``e∘t = q_c`` are searched for exhaustively (per point of the fiber,
    which enumerates the whole function space).  The lift is compared with the
    one obtained from a section of e.
    """
    cap = default_cap() if cap is None else cap
    sq = cs.square
    q, g, f, p = sq.top, sq.left, sq.right, sq.bottom
    fib_f, fib_p, fib_g = f.fibers(), p.fibers(), g.fibers()
    checked = 0
    caps = {"e_bound": e_bound, "cap": cap}
    for a in range(f.cod.size):
        target = fib_f[a]
        pos = {b: i for i, b in enumerate(target)}
        for n in range(e_bound + 1):
            for e in hom_tables(n, len(target), cap):
                if len(set(e)) != len(target):
                    continue
                checked += 1
                section = _split(e, len(target))
                found = None
                for c in fib_p[a]:
                    options = [[x for x in range(n) if e[x] == pos[q(d)]] for d in fib_g[c]]
                    if all(options):
                        found = (c, tuple(opt[0] for opt in options))
                        split_lift = tuple(section[pos[q(d)]] for d in fib_g[c])
                        if any(e[x] != pos[q(d)] for x, d in zip(split_lift, fib_g[c])):
                            raise AssertionError("section-based lift is not a lift")
                        break
                if found is None:
                    return Certificate(
                        "collection-square",
                        {"square": sq},
                        {
                            "checked": checked,
                            "counterexample": {"a": a, "E": n, "e": list(e)},
                        },
                        False,
                        caps,
                    )
    return Certificate(
        "collection-square", {"square": sq}, {"checked": checked, "flags": [FINITE_FACT]}, True, caps
    )


def collection_axiom_witness(s: MapClass, f: FinMap, p: FinMap) -> tuple[Square, Certificate]:
    """Quasi-pullback for ``f : A -> X`` small and ``p : C ->> A`` by splitting p.

    The square has corner ``A``, top ``p∘σ``, left ``f`` and bottom ``id_X``;
    its top factors through p via the section σ.
    """
    if not is_surjective(p):
        raise NotSurjective(f"{p!r} is not surjective")
    sigma = FinMap(p.cod, p.dom, [p.table.index(a) for a in range(p.cod.size)])
    top = compose(p, sigma)
    sq = Square(top=top, right=f, bottom=identity(f.cod), left=f)
    qp = is_quasi_pullback(sq)
    small = s(f)
    bottom_surj = is_surjective(sq.bottom)
    passed = qp.passed and small and bottom_surj
    witnesses: dict = {
        "section": sigma,
        "left_small": small,
        "bottom_surjective": bottom_surj,
        "quasi_pullback": qp.passed,
        "flags": [FINITE_FACT],
    }
    if not passed:
        witnesses["counterexample"] = {"f": f, "p": p}
    return sq, Certificate("collection-axiom", {"class": s.name, "f": f, "p": p}, witnesses, passed)


def amc_witness(f: FinMap, e_bound: int = 4, cap: Optional[int] = None) -> tuple[CoveringSquare, Certificate]:
    cs = covering_square(identity_square(f))
    cert = is_collection_square(cs, e_bound, cap)
    cert.kind = "amc"
    return cs, cert


def covering_squares(max_size: int) -> Iterator[CoveringSquare]:
    """Every covering square with all four carriers of size <= max_size.

    A covering square is fixed by ``f``, a surjection ``p`` and a surjection
    ``D ->> C ×_A B``; the latter supplies ``g`` and ``q``.
    """
    for f in all_maps_up_to(max_size):
        a = f.cod.size
        for csize in range(max_size + 1):
            cset = FinSet(csize)
            for pt in itertools.product(range(a), repeat=csize):
                p = FinMap(cset, f.cod, pt)
                if not is_surjective(p):
                    continue
                pb, p1, p2 = pullback(Cospan(p, f))
                for dsize in range(pb.size, max_size + 1):
                    dset = FinSet(dsize)
                    for u in itertools.product(range(pb.size), repeat=dsize):
                        if len(set(u)) != pb.size:
                            continue
                        g = FinMap(dset, cset, [p1(i) for i in u])
                        q = FinMap(dset, f.dom, [p2(i) for i in u])
                        yield CoveringSquare(Square(top=q, right=f, bottom=p, left=g), tuple(u.index(i) for i in range(pb.size)), _split(pt, a))


def verify_slice_closure(s: MapClass, x: FinSet, max_total: int = 3) -> Certificate:
    """Small maps over X are closed under the slice constructions.

    Products over X, sums over X and quotients over X are built with the
    other modules and membership in the class is re-checked.
    """
    from .colimits import copair, image_factorization, sum_
    from .lcc import slice_objects

    objs = [o.proj for o in slice_objects(x, max_total) if s(o.proj)]
    inputs = {"class": s.name, "X": x}
    for u, v in itertools.product(objs, repeat=2):
        _, p1, _ = pullback(Cospan(u, v))
        prod = compose(u, p1)
        if not s(prod):
            return Certificate("slice-closure", inputs, {"counterexample": {"construction": "product over X", "u": u, "v": v}}, False)
        sm = copair(sum_(u.dom, v.dom), u, v)
        if not s(sm):
            return Certificate("slice-closure", inputs, {"counterexample": {"construction": "sum over X", "u": u, "v": v}}, False)
    for u in objs:
        _, _, inj = image_factorization(u)
        if not s(inj):
            return Certificate("slice-closure", inputs, {"counterexample": {"construction": "image over X", "u": u}}, False)
    return Certificate("slice-closure", inputs, {"objects": len(objs)}, True, {"max_total": max_total})
