"""Slices, base change, dependent sums and products, exponentials."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

from . import faults
from .core import Certificate, FinMap, FinSet, compose, default_cap, hom_tables, identity
from .errors import CapExceeded, CompositionMismatch
from .limits import Cospan, product, pullback


@dataclass(frozen=True)
class SliceObj:
    base: FinSet
    total: FinSet
    proj: FinMap

    def __post_init__(self):
        if self.proj.dom.size != self.total.size or self.proj.cod.size != self.base.size:
            raise CompositionMismatch("projection must run from total to base")

    @classmethod
    def of(cls, proj: FinMap) -> "SliceObj":
        return cls(proj.cod, proj.dom, proj)

    def fiber(self, b: int) -> list[int]:
        return self.proj.fiber(b)

    def to_dict(self):
        return {"base": self.base.size, "proj": list(self.proj.table)}


@dataclass(frozen=True)
class SliceMap:
    src: SliceObj
    dst: SliceObj
    m: FinMap

    def __post_init__(self):
        if compose(self.dst.proj, self.m) != self.src.proj:
            raise CompositionMismatch("slice map does not commute over the base")


def slice_objects(base: FinSet, max_total: int):
    """Every slice object over ``base`` with total of size <= max_total."""
    for n in range(max_total + 1):
        total = FinSet(n)
        for t in itertools.product(range(base.size), repeat=n):
            yield SliceObj(base, total, FinMap(total, base, t))


def slice_hom_tables(src: SliceObj, dst: SliceObj, cap: Optional[int] = None) -> list[tuple]:
    """All maps over the base, as tables; a choice in the matching fiber per point."""
    cap = default_cap() if cap is None else cap
    fibers = dst.proj.fibers()
    choices = [fibers[src.proj(e)] for e in range(src.total.size)]
    count = math.prod(len(c) for c in choices)
    if count > cap:
        raise CapExceeded(count, cap)
    return list(itertools.product(*choices))


def base_change(f: FinMap, g: SliceObj) -> SliceObj:
    """Pull ``g`` over Y back along ``f : X -> Y``; totals are pairs ``(x, t)``."""
    p, p1, _ = pullback(Cospan(f, g.proj))
    return SliceObj(f.dom, p, p1)


def sigma_f(f: FinMap, h: SliceObj) -> SliceObj:
    return SliceObj(f.cod, h.total, compose(f, h.proj))


def pi_f(f: FinMap, h: SliceObj, cap: Optional[int] = None) -> SliceObj:
    """Sections of h over each fiber of f, indexed by ``(y, section table)``."""
    cap = default_cap() if cap is None else cap
    fibers_f = f.fibers()
    fibers_h = h.proj.fibers()
    entries = []
    for y in range(f.cod.size):
        choices = [fibers_h[x] for x in fibers_f[y]]
        count = math.prod(len(c) for c in choices)
        if count > cap:
            raise CapExceeded(count, cap)
        sections = list(itertools.product(*choices))
        if faults.active("pi_section_off_by_one") and sections:
            sections.pop()
        entries.extend((y, s) for s in sections)
    total = FinSet(len(entries), decoder=tuple(entries))
    return SliceObj(f.cod, total, FinMap(total, f.cod, [y for y, _ in entries]))


def verify_pi_adjunction(f: FinMap, g: SliceObj, h: SliceObj, cap: Optional[int] = None) -> Certificate:
    """Transposes between ``Hom_X(f*g, h)`` and ``Hom_Y(g, Π_f h)``."""
    pb = base_change(f, g)
    pi = pi_f(f, h, cap)
    pos_in_fiber = {}
    for fib in f.fibers():
        for k, x in enumerate(fib):
            pos_in_fiber[x] = k
    pb_index = {pair: i for i, pair in enumerate(pb.total.decoder)}
    pi_index = {entry: i for i, entry in enumerate(pi.total.decoder)}
    fibers_f = f.fibers()

    def sharp(phi: tuple) -> Optional[tuple]:
        out = []
        for t in range(g.total.size):
            y = g.proj(t)
            key = (y, tuple(phi[pb_index[(x, t)]] for x in fibers_f[y]))
            if key not in pi_index:
                return None
            out.append(pi_index[key])
        return tuple(out)

    def flat(psi: tuple) -> tuple:
        return tuple(pi.total.decoder[psi[t]][1][pos_in_fiber[x]] for x, t in pb.total.decoder)

    left = slice_hom_tables(pb, h, cap)
    right = slice_hom_tables(g, pi, cap)
    inputs = {"f": f, "g": g, "h": h}
    witnesses: dict = {"hom_pullback": len(left), "hom_pi": len(right)}
    counterexample = None
    for phi in left:
        s = sharp(phi)
        if s is None or flat(s) != phi:
            counterexample = {"reason": "left round trip", "map": list(phi), "transpose": s}
            break
    if counterexample is None:
        for psi in right:
            if sharp(flat(psi)) != psi:
                counterexample = {"reason": "right round trip", "map": list(psi)}
                break
    if counterexample is None and len(left) != len(right):
        counterexample = {"reason": "hom sizes differ", "left": len(left), "right": len(right)}
    if counterexample is not None:
        witnesses["counterexample"] = counterexample
    return Certificate("pi-adjunction", inputs, witnesses, counterexample is None)


def exponential(a: FinSet, b: FinSet, cap: Optional[int] = None) -> tuple[FinSet, FinMap]:
    tables = list(hom_tables(a.size, b.size, cap))
    e = FinSet(len(tables), decoder=tuple(tables))
    ea, p1, p2 = product(e, a)
    return e, FinMap(ea, b, [tables[i][x] for i, x in ea.decoder])


def verify_currying(c: FinSet, a: FinSet, b: FinSet, cap: Optional[int] = None) -> Certificate:
    """``Hom(C×A, B) ≅ Hom(C, B^A)`` through explicit transposes."""
    e, ev = exponential(a, b, cap)
    ca, _, _ = product(c, a)
    index = {t: i for i, t in enumerate(e.decoder)}
    left = list(hom_tables(ca.size, b.size, cap))
    right = list(hom_tables(c.size, e.size, cap))
    ca_index = {pair: i for i, pair in enumerate(ca.decoder)}

    def curry(phi):
        return tuple(index[tuple(phi[ca_index[(z, x)]] for x in range(a.size))] for z in range(c.size))

    def uncurry(psi):
        return tuple(e.decoder[psi[z]][x] for z, x in ca.decoder)

    bad = next((list(p) for p in left if uncurry(curry(p)) != p), None)
    if bad is None:
        bad = next((list(p) for p in right if curry(uncurry(p)) != p), None)
    witnesses: dict = {"hom_product": len(left), "hom_exponential": len(right), "eval": ev}
    if bad is not None:
        witnesses["counterexample"] = {"map": bad}
    return Certificate("currying", {"C": c, "A": a, "B": b}, witnesses, bad is None)


def identity_slice(x: FinSet) -> SliceObj:
    return SliceObj(x, x, identity(x))
