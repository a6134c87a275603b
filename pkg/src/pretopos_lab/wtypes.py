"""Polynomial functors and W-types as initial algebras.

The W-type of a shape map ``f : X -> Y`` is computed as the colimit of the
chain ``∅ -> P(∅) -> P(P(∅)) -> ...``; the chain stops once its connecting
map is an isomorphism.  Every W built this way is a set by construction.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

from . import faults
from .core import Certificate, FinMap, FinSet, default_cap, hom_tables, is_iso
from .errors import CapExceeded, CompositionMismatch
from .lcc import SliceObj, pi_f
from .limits import product


def poly_size(f: FinMap, n: int) -> int:
    return sum(n ** len(fib) for fib in f.fibers())


def _poly_direct(f: FinMap, n: int) -> list[tuple]:
    return [
        (y, branch)
        for y, fib in enumerate(f.fibers())
        for branch in itertools.product(range(n), repeat=len(fib))
    ]


def poly_apply(f: FinMap, a: FinSet, cap: Optional[int] = None) -> FinSet:
    """``Σ_y A^{fib(y)}`` built as ``Σ_f ∘ Π_f ∘ (X × -)``.

    Elements decode as ``(y, branch)`` where ``branch`` lists the A-values on
    the fiber over y in ascending order.  The pipeline result is checked
    against the direct formula.
    """
    cap = default_cap() if cap is None else cap
    size = poly_size(f, a.size)
    if size > cap:
        raise CapExceeded(size, cap)
    xa, p1, _ = product(f.dom, a)
    pi = pi_f(f, SliceObj(f.dom, xa, p1), cap)
    entries = [(y, tuple(xa.decoder[i][1] for i in section)) for y, section in pi.total.decoder]
    if entries != _poly_direct(f, a.size):
        raise AssertionError(f"polynomial pipeline disagrees with direct formula for {f!r}")
    if faults.active("poly_drop_leaves"):
        entries = [e for e in entries if e[1]]
    return FinSet(len(entries), decoder=tuple(entries))


def poly_on_map(f: FinMap, m: FinMap, cap: Optional[int] = None) -> FinMap:
    """``(y, branch) ↦ (y, m∘branch)``."""
    src = poly_apply(f, m.dom, cap)
    dst = poly_apply(f, m.cod, cap)
    index = {e: i for i, e in enumerate(dst.decoder)}
    return FinMap(src, dst, [index[(y, tuple(m(b) for b in br))] for y, br in src.decoder])


@dataclass(frozen=True)
class Algebra:
    f: FinMap
    carrier: FinSet
    structure: FinMap

    def __post_init__(self):
        if self.structure.dom.size != poly_size(self.f, self.carrier.size):
            raise CompositionMismatch("structure map must start at P_f(carrier)")
        if self.structure.cod.size != self.carrier.size:
            raise CompositionMismatch("structure map must land in the carrier")


class WStatus(enum.Enum):
    FINITE = "Finite"
    DIVERGED = "DivergedAtCap"


class WShape(enum.Enum):
    EMPTY = "Empty"
    IS_Y = "IsY"
    INFINITE = "Infinite"


@dataclass
class WResult:
    f: FinMap
    status: WStatus
    stages: list[int]
    w: Optional[FinSet] = None
    sup: Optional[FinMap] = None
    caps: dict = field(default_factory=dict)

    def to_dict(self):
        from .core import ser

        out = {"status": self.status.value, "stages": self.stages, "caps": self.caps}
        if self.w is not None:
            out["w"] = ser(self.w)
            out["sup"] = ser(self.sup)
        return out


def _trees(decoders: list[tuple], k: int) -> list:
    """Decode stage k elements as nested ``(label, children)`` terms."""
    memo: dict[tuple[int, int], tuple] = {}

    def tree(stage: int, i: int):
        key = (stage, i)
        if key not in memo:
            y, branch = decoders[stage][i]
            memo[key] = (y, tuple(tree(stage - 1, c) for c in branch))
        return memo[key]

    return [tree(k, i) for i in range(len(decoders[k]))]


def w_type(f: FinMap, size_cap: int = 5000, stage_cap: int = 50) -> WResult:
    caps = {"size_cap": size_cap, "stage_cap": stage_cap}
    stage = FinSet(0)
    stages = [0]
    decoders: list[tuple] = [()]
    connecting = FinMap(stage, poly_apply(f, stage), ())
    while True:
        if is_iso(connecting) is not None:
            k = len(stages) - 1
            trees = _trees(decoders, k) if k > 0 else []
            w = FinSet(stage.size, decoder=tuple(trees))
            pw = poly_apply(f, w)
            sup = FinMap(pw, w, is_iso(connecting).table)
            stages.append(connecting.cod.size)
            return WResult(f, WStatus.FINITE, stages, w, sup, caps)
        nxt = connecting.cod
        if len(stages) >= stage_cap or poly_size(f, nxt.size) > size_cap:
            stages.append(nxt.size)
            return WResult(f, WStatus.DIVERGED, stages, caps=caps)
        stages.append(nxt.size)
        decoders.append(nxt.decoder)
        connecting = poly_on_map(f, connecting)
        stage = nxt


def w_finiteness_criterion(f: FinMap) -> WShape:
    sizes = [len(fib) for fib in f.fibers()]
    if all(s > 0 for s in sizes):
        return WShape.EMPTY
    if all(s == 0 for s in sizes):
        return WShape.IS_Y
    return WShape.INFINITE


def deep_tree(f: FinMap, depth: int):
    """A tree of the given depth, showing W is infinite for mixed shapes."""
    fibers = f.fibers()
    leaf = next(y for y, fib in enumerate(fibers) if not fib)
    node = next(y for y, fib in enumerate(fibers) if fib)
    t = (leaf, ())
    for _ in range(depth):
        t = (node, (t,) * len(fibers[node]))
    return t


def tree_depth(t) -> int:
    return 0 if not t[1] else 1 + max(tree_depth(c) for c in t[1])


def _check_finite(w: WResult):
    if w.status is not WStatus.FINITE:
        raise ValueError("initial algebra is only available for a stabilized chain")


def fold(w: WResult, alg: Algebra) -> FinMap:
    """The algebra morphism out of W, by recursion on tree depth."""
    _check_finite(w)
    pc = poly_apply(alg.f, alg.carrier)
    index = {e: i for i, e in enumerate(pc.decoder)}
    pw = w.sup.dom
    unsup = is_iso(w.sup)
    memo: dict[int, int] = {}

    def go(t: int) -> int:
        if t not in memo:
            y, children = pw.decoder[unsup(t)]
            memo[t] = alg.structure(index[(y, tuple(go(c) for c in children))])
        return memo[t]

    return FinMap(w.w, alg.carrier, [go(t) for t in range(w.w.size)])


def verify_initiality(
    w: WResult, max_carrier: int = 4, cap: Optional[int] = None, restrict: bool = True
) -> Certificate:
    """Exactly one algebra morphism from W into every algebra on a small carrier.

    With ``restrict`` the structure maps are enumerated only on the part of
    ``P(C)`` that some ``P(k)`` reaches; values elsewhere cannot influence any
    commuting square, so each enumerated restriction stands for all of its
    extensions.  ``restrict=False`` enumerates every structure map.
    """
    _check_finite(w)
    cap = default_cap() if cap is None else cap
    f, pw, sup = w.f, w.sup.dom, w.sup
    inputs = {"f": f}
    lambek = is_iso(sup) is not None
    witnesses: dict = {"lambek": lambek, "w_size": w.w.size}
    if not lambek:
        witnesses["counterexample"] = {"reason": "structure map of W is not an iso", "sup": sup}
        return Certificate("w-initiality", inputs, witnesses, False, {"max_carrier": max_carrier, "cap": cap})
    algebras_covered = 0
    enumerated = 0
    for n in range(max_carrier + 1):
        carrier = FinSet(n)
        pc = poly_apply(f, carrier, cap)
        if n == 0 and pc.size > 0:
            continue  # no structure map into the empty carrier
        index = {e: i for i, e in enumerate(pc.decoder)}
        ks = list(hom_tables(w.w.size, n, cap))
        images = {
            k: [index[(y, tuple(k[b] for b in br))] for y, br in pw.decoder] for k in ks
        }
        relevant = sorted({p for img in images.values() for p in img}) if restrict else list(range(pc.size))
        slot = {p: i for i, p in enumerate(relevant)}
        free = pc.size - len(relevant)
        count = n ** len(relevant)
        if count > cap:
            raise CapExceeded(count, cap)
        for partial in itertools.product(range(n), repeat=len(relevant)):
            enumerated += 1
            algebras_covered += n**free
            morphisms = [
                k
                for k in ks
                if all(k[sup(p)] == partial[slot[images[k][p]]] for p in range(pw.size))
            ]
            if len(morphisms) != 1:
                table = [partial[slot[p]] if p in slot else 0 for p in range(pc.size)]
                witnesses["counterexample"] = {
                    "carrier": n,
                    "structure": FinMap(pc, carrier, table),
                    "morphisms": [list(k) for k in morphisms[:2]],
                }
                return Certificate("w-initiality", inputs, witnesses, False, {"max_carrier": max_carrier, "cap": cap})
            table = [partial[slot[p]] if p in slot else 0 for p in range(pc.size)]
            folded = fold(w, Algebra(f, carrier, FinMap(pc, carrier, table)))
            if folded.table != morphisms[0]:
                witnesses["counterexample"] = {"carrier": n, "reason": "fold disagrees", "fold": folded}
                return Certificate("w-initiality", inputs, witnesses, False, {"max_carrier": max_carrier, "cap": cap})
    witnesses.update(algebras_covered=algebras_covered, structure_maps_enumerated=enumerated, restricted=restrict)
    return Certificate("w-initiality", inputs, witnesses, True, {"max_carrier": max_carrier, "cap": cap})


def verify_w_type(f: FinMap, max_carrier: int = 4, size_cap: int = 5000, stage_cap: int = 50) -> Certificate:
    """Chain status against the analytic criterion, plus initiality when finite."""
    res = w_type(f, size_cap, stage_cap)
    shape = w_finiteness_criterion(f)
    expected = WStatus.DIVERGED if shape is WShape.INFINITE else WStatus.FINITE
    witnesses: dict = {"status": res.status.value, "criterion": shape.value, "stages": res.stages}
    caps = {"size_cap": size_cap, "stage_cap": stage_cap, "max_carrier": max_carrier}
    if res.status is not expected:
        witnesses["counterexample"] = {"f": f, "status": res.status.value, "criterion": shape.value}
        return Certificate("w-type", {"f": f}, witnesses, False, caps)
    if res.status is WStatus.FINITE:
        if res.w.size != (0 if shape is WShape.EMPTY else f.cod.size):
            witnesses["counterexample"] = {"f": f, "w_size": res.w.size, "criterion": shape.value}
            return Certificate("w-type", {"f": f}, witnesses, False, caps)
        init = verify_initiality(res, max_carrier)
        witnesses["initiality"] = init
        if not init.passed:
            witnesses["counterexample"] = init.witnesses["counterexample"]
            return Certificate("w-type", {"f": f}, witnesses, False, caps)
    return Certificate("w-type", {"f": f}, witnesses, True, caps)
