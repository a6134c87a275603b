"""Finite limits and exact pullback recognition.

A :class:`Square` is drawn as::

    P --top--> B
    |          |
   left      right
    v          v
    A --bottom-> X

and commutes when ``right∘top = bottom∘left``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from . import faults
from .core import Certificate, FinMap, FinSet, compose, identity, is_iso, is_mono
from .errors import CompositionMismatch, NonCommuting, ParallelMismatch


@dataclass(frozen=True)
class Cospan:
    f: FinMap
    g: FinMap

    def __post_init__(self):
        if self.f.cod.size != self.g.cod.size:
            raise CompositionMismatch("cospan legs must share a codomain")


@dataclass(frozen=True)
class Square:
    top: FinMap
    right: FinMap
    bottom: FinMap
    left: FinMap

    def __post_init__(self):
        t, r, b, l = self.top, self.right, self.bottom, self.left
        if not (
            t.dom.size == l.dom.size
            and t.cod.size == r.dom.size
            and l.cod.size == b.dom.size
            and r.cod.size == b.cod.size
        ):
            raise CompositionMismatch("square boundary does not match")

    @property
    def corner(self) -> FinSet:
        return self.top.dom

    def defect(self) -> Optional[int]:
        """First corner element where the square fails to commute."""
        for p in range(self.corner.size):
            if self.right(self.top(p)) != self.bottom(self.left(p)):
                return p
        return None

    def require_commutes(self):
        p = self.defect()
        if p is not None:
            raise NonCommuting(p, self.right(self.top(p)), self.bottom(self.left(p)))

    def cospan(self) -> Cospan:
        return Cospan(self.bottom, self.right)

    def to_dict(self):
        from .core import ser

        return {k: ser(getattr(self, k)) for k in ("top", "right", "bottom", "left")}


def terminal() -> FinSet:
    return FinSet(1, "1")


def bang(a: FinSet) -> FinMap:
    return FinMap(a, terminal(), [0] * a.size)


def product(a: FinSet, b: FinSet) -> tuple[FinSet, FinMap, FinMap]:
    pairs = list(itertools.product(range(a.size), range(b.size)))
    p = FinSet(len(pairs), decoder=tuple(pairs))
    return p, FinMap(p, a, [x for x, _ in pairs]), FinMap(p, b, [y for _, y in pairs])


def pairing(u: FinMap, v: FinMap, p: FinSet) -> FinMap:
    """Mediating map ``C -> A×B`` into a carrier built by :func:`product`."""
    index = {pair: i for i, pair in enumerate(p.decoder)}
    return FinMap(u.dom, p, [index[(u(c), v(c))] for c in range(u.dom.size)])


def equalizer(f: FinMap, g: FinMap) -> tuple[FinSet, FinMap]:
    if f.dom.size != g.dom.size or f.cod.size != g.cod.size:
        raise ParallelMismatch("equalizer needs a parallel pair")
    elems = [a for a in range(f.dom.size) if f(a) == g(a)]
    e = FinSet(len(elems), decoder=tuple(elems))
    return e, FinMap(e, f.dom, elems)


def pullback(c: Cospan) -> tuple[FinSet, FinMap, FinMap]:
    """``{(a, b) : f(a) = g(b)}`` in lexicographic order with its projections."""
    f, g = c.f, c.g
    by_value: dict[int, list[int]] = {}
    for b, x in enumerate(g.table):
        by_value.setdefault(x, []).append(b)
    pairs = [(a, b) for a in range(f.dom.size) for b in by_value.get(f(a), ())]
    if faults.active("pullback_drop_last") and pairs:
        pairs.pop()
    p = FinSet(len(pairs), decoder=tuple(pairs))
    return p, FinMap(p, f.dom, [a for a, _ in pairs]), FinMap(p, g.dom, [b for _, b in pairs])


def kernel_pair(f: FinMap) -> tuple[FinSet, FinMap, FinMap]:
    if faults.active("kernel_pair_diagonal_only"):
        pairs = [(a, a) for a in range(f.dom.size)]
        k = FinSet(len(pairs), decoder=tuple(pairs))
        return k, FinMap(k, f.dom, [a for a, _ in pairs]), FinMap(k, f.dom, [b for _, b in pairs])
    return pullback(Cospan(f, f))


def pullback_square(c: Cospan) -> Square:
    p, p1, p2 = pullback(c)
    return Square(top=p2, right=c.g, bottom=c.f, left=p1)


def comparison_map(s: Square) -> tuple[FinSet, list[Optional[int]]]:
    """Pullback of the square's cospan and the corner's image in it.

    An entry is ``None`` when the corner element has no counterpart (only
    possible for a broken pullback construction).
    """
    p, _, _ = pullback(s.cospan())
    index = {pair: i for i, pair in enumerate(p.decoder)}
    return p, [index.get((s.left(x), s.top(x))) for x in range(s.corner.size)]


def iso_failure(table: list[Optional[int]], cod_size: int) -> Optional[dict]:
    """Why ``table`` is not a bijection onto ``[cod_size]``, or None."""
    seen: dict[int, int] = {}
    for x, v in enumerate(table):
        if v is None:
            return {"reason": "undefined", "element": x}
        if v in seen:
            return {"reason": "not injective", "elements": [seen[v], x], "image": v}
        seen[v] = x
    missed = [y for y in range(cod_size) if y not in seen]
    if missed:
        return {"reason": "not surjective", "missed": missed[0]}
    return None


def verify_pullback_square(s: Square) -> Certificate:
    s.require_commutes()
    p, table = comparison_map(s)
    failure = iso_failure(table, p.size)
    witnesses: dict = {"comparison": table, "pullback_size": p.size}
    if failure is not None:
        if failure.get("reason") == "not surjective":
            failure["missed_pair"] = p.decoder[failure["missed"]]
        witnesses["counterexample"] = failure
    return Certificate("pullback-square", {"square": s}, witnesses, failure is None)


def verify_pullback_universal(c: Cospan, max_cone: int = 3) -> Certificate:
    """Every cone from a carrier of size <= max_cone has exactly one mediating map.

    Cones are enumerated exhaustively; mediating maps are counted pointwise,
    which is exact because a map out of a finite carrier is a choice per point.
    """
    p, p1, p2 = pullback(c)
    f, g = c.f, c.g
    over: dict[tuple[int, int], int] = {}
    for i in range(p.size):
        key = (p1(i), p2(i))
        over[key] = over.get(key, 0) + 1
    cones = 0
    for n in range(max_cone + 1):
        for u in itertools.product(range(f.dom.size), repeat=n):
            for v in itertools.product(range(g.dom.size), repeat=n):
                if any(f(u[i]) != g(v[i]) for i in range(n)):
                    continue
                cones += 1
                counts = [over.get((u[i], v[i]), 0) for i in range(n)]
                bad = next((i for i, k in enumerate(counts) if k != 1), None)
                if bad is not None:
                    return Certificate(
                        "pullback-universal",
                        {"cospan": [f, g]},
                        {
                            "cones": cones,
                            "counterexample": {
                                "cone": {"u": list(u), "v": list(v)},
                                "point": bad,
                                "mediating_choices": counts[bad],
                            },
                        },
                        False,
                        {"max_cone": max_cone},
                    )
    return Certificate(
        "pullback-universal", {"cospan": [f, g]}, {"cones": cones}, True, {"max_cone": max_cone}
    )


def verify_product_universal(a: FinSet, b: FinSet, max_cone: int = 3) -> Certificate:
    x = FinSet(1)
    return verify_pullback_universal(
        Cospan(FinMap(a, x, [0] * a.size), FinMap(b, x, [0] * b.size)), max_cone
    )


def verify_equalizer_universal(f: FinMap, g: FinMap, max_cone: int = 3) -> Certificate:
    e, incl = equalizer(f, g)
    forks = 0
    for n in range(max_cone + 1):
        for u in itertools.product(range(f.dom.size), repeat=n):
            if any(f(x) != g(x) for x in u):
                continue
            forks += 1
            for i, x in enumerate(u):
                k = incl.table.count(x)
                if k != 1:
                    return Certificate(
                        "equalizer-universal",
                        {"f": f, "g": g},
                        {"counterexample": {"fork": list(u), "point": i, "mediating_choices": k}},
                        False,
                        {"max_cone": max_cone},
                    )
    return Certificate(
        "equalizer-universal", {"f": f, "g": g}, {"forks": forks}, True, {"max_cone": max_cone}
    )


def diagonal_injectivity_check(f: FinMap) -> Certificate:
    """f is injective iff its diagonal into the kernel pair is an iso."""
    k, _, _ = kernel_pair(f)
    index = {pair: i for i, pair in enumerate(k.decoder)}
    diag = [index.get((a, a)) for a in range(f.dom.size)]
    failure = iso_failure(diag, k.size)
    injective = is_mono(f)
    diag_iso = failure is None
    witnesses: dict = {
        "injective": injective,
        "diagonal_iso": diag_iso,
        "diagonal": diag,
        "kernel_pair_size": k.size,
    }
    if failure is not None:
        witnesses["diagonal_failure"] = failure
    if injective != diag_iso:
        witnesses["counterexample"] = {"f": f, "diagonal_failure": failure}
    return Certificate("diagonal-injectivity", {"f": f}, witnesses, injective == diag_iso)


def paste(left: Square, right: Square) -> Square:
    """Horizontal pasting; ``left.right`` must be ``right.left``."""
    if left.right != right.left:
        raise CompositionMismatch("inner edges of pasted squares differ")
    return Square(
        top=compose(right.top, left.top),
        right=right.right,
        bottom=compose(right.bottom, left.bottom),
        left=left.left,
    )


def identity_square(f: FinMap) -> Square:
    return Square(top=identity(f.dom), right=f, bottom=identity(f.cod), left=f)


def comparison_is_iso(s: Square) -> Optional[FinMap]:
    p, table = comparison_map(s)
    if any(v is None for v in table):
        return None
    return is_iso(FinMap(s.corner, p, table))
