"""Subobject classifier and a cardinality-bounded object classifier.

The bounded classifier ``π : E -> U`` is skeletal: the point ``k`` of U
stands for *the* k-element set, so the classifier is a set rather than a
groupoid.  Certificates carry the flag ``"skeletal model"``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import Certificate, FinMap, FinSet, compose, default_cap, hom_tables, is_mono
from .errors import CapExceeded, FiberBoundExceeded, NotMono
from .limits import Square, bang, comparison_map, iso_failure, terminal, verify_pullback_square

SKELETAL = "skeletal model"


@dataclass(frozen=True)
class Subobject:
    ambient: FinSet
    mono: FinMap

    def __post_init__(self):
        if not is_mono(self.mono):
            raise NotMono(f"{self.mono!r} is not injective")
        if self.mono.cod.size != self.ambient.size:
            raise NotMono("mono does not land in the ambient carrier")

    @classmethod
    def of_subset(cls, ambient: FinSet, subset: Sequence[int]) -> "Subobject":
        hit = sorted(set(subset))
        return cls(ambient, FinMap(FinSet(len(hit), decoder=tuple(hit)), ambient, hit))

    @property
    def canonical(self) -> tuple:
        return tuple(sorted(self.mono.table))

    def __eq__(self, other):
        if not isinstance(other, Subobject):
            return NotImplemented
        return self.ambient.size == other.ambient.size and self.canonical == other.canonical

    def __hash__(self):
        return hash((self.ambient.size, self.canonical))


def omega() -> tuple[FinSet, FinMap]:
    om = FinSet(2, "Ω", decoder=(False, True))
    return om, FinMap(terminal(), om, (1,))


def char_of_mono(m: Subobject) -> FinMap:
    om, _ = omega()
    hit = set(m.mono.table)
    return FinMap(m.ambient, om, [1 if b in hit else 0 for b in range(m.ambient.size)])


def sub_of_char(chi: FinMap) -> Subobject:
    return Subobject.of_subset(chi.dom, [b for b in range(chi.dom.size) if chi(b) == 1])


def classifying_square(m: Subobject) -> Square:
    _, true = omega()
    return Square(top=bang(m.mono.dom), right=true, bottom=char_of_mono(m), left=m.mono)


def verify_subobject_classifier(b: FinSet, cap: Optional[int] = None) -> Certificate:
    """``Sub(B) ≅ Hom(B, Ω)`` with every classifying square a pullback."""
    subs = [Subobject.of_subset(b, s) for r in range(b.size + 1) for s in itertools.combinations(range(b.size), r)]
    om, _ = omega()
    chars = {char_of_mono(s).table for s in subs}
    homs = set(hom_tables(b.size, om.size, cap))
    witnesses: dict = {"subobjects": len(subs), "characteristic_maps": len(homs)}
    counterexample = None
    for s in subs:
        if sub_of_char(char_of_mono(s)) != s:
            counterexample = {"reason": "round trip on subobject", "subset": list(s.canonical)}
            break
        sq = verify_pullback_square(classifying_square(s))
        if not sq.passed:
            counterexample = {"reason": "classifying square", "subset": list(s.canonical), "detail": sq.witnesses["counterexample"]}
            break
    if counterexample is None:
        for t in homs:
            chi = FinMap(b, om, t)
            if char_of_mono(sub_of_char(chi)) != chi:
                counterexample = {"reason": "round trip on map", "chi": chi}
                break
    if counterexample is None and (chars != homs or len(subs) != len(homs)):
        counterexample = {"reason": "not a bijection", "subobjects": len(subs), "maps": len(homs)}
    if counterexample is not None:
        witnesses["counterexample"] = counterexample
    return Certificate("subobject-classifier", {"B": b}, witnesses, counterexample is None)


def pointed_prop_check(props: Sequence[int] = (0, 1)) -> Certificate:
    """``Σ_{P : Prop} P`` over the listed propositions (given as sizes 0 or 1)."""
    elements = [(p, x) for p in props for x in range(p)]
    carrier = FinSet(len(elements), decoder=tuple(elements))
    passed = carrier.size == 1
    witnesses: dict = {"size": carrier.size, "elements": list(elements)}
    if not passed:
        witnesses["counterexample"] = {"size": carrier.size}
    return Certificate("pointed-prop", {"props": list(props)}, witnesses, passed)


@dataclass(frozen=True)
class ObjectClassifier:
    bound: int
    U: FinSet
    E: FinSet
    proj: FinMap


def object_classifier(bound: int) -> ObjectClassifier:
    u = FinSet(bound + 1, "U", decoder=tuple(range(bound + 1)))
    pairs = [(k, i) for k in range(bound + 1) for i in range(k)]
    e = FinSet(len(pairs), "E", decoder=tuple(pairs))
    return ObjectClassifier(bound, u, e, FinMap(e, u, [k for k, _ in pairs]))


def _check_bound(f: FinMap, oc: ObjectClassifier) -> list[list[int]]:
    fibers = f.fibers()
    for b, fib in enumerate(fibers):
        if len(fib) > oc.bound:
            raise FiberBoundExceeded(b, len(fib), oc.bound)
    return fibers


def classify(f: FinMap, oc: ObjectClassifier) -> tuple[FinMap, FinMap]:
    """``χ_f(b) = |fib(b)|`` and ``θ_f(a) = (|fib(f a)|, rank of a in its fiber)``."""
    fibers = _check_bound(f, oc)
    index = {pair: i for i, pair in enumerate(oc.E.decoder)}
    chi = FinMap(f.cod, oc.U, [len(fib) for fib in fibers])
    theta = [0] * f.dom.size
    for fib in fibers:
        for rank, a in enumerate(fib):
            theta[a] = index[(len(fib), rank)]
    return chi, FinMap(f.dom, oc.E, theta)


def verify_object_classifier_pullback(f: FinMap, oc: ObjectClassifier) -> Certificate:
    chi, theta = classify(f, oc)
    sq = Square(top=theta, right=oc.proj, bottom=chi, left=f)
    cert = verify_pullback_square(sq)
    witnesses = dict(cert.witnesses, chi=chi, theta=theta, flags=[SKELETAL])
    return Certificate("object-classifier-pullback", {"f": f, "bound": oc.bound}, witnesses, cert.passed)


def psi(family: FinMap) -> FinMap:
    """The display map ``Σ_b P(b) -> B`` of a family ``P : B -> U``."""
    pairs = [(b, i) for b in range(family.dom.size) for i in range(family(b))]
    total = FinSet(len(pairs), decoder=tuple(pairs))
    return FinMap(total, family.dom, [b for b, _ in pairs])


def slice_iso(f: FinMap, g: FinMap) -> Optional[FinMap]:
    """Canonical iso ``dom f -> dom g`` over the base, matching fibers by rank."""
    ff, gf = f.fibers(), g.fibers()
    if [len(x) for x in ff] != [len(x) for x in gf]:
        return None
    table = [0] * f.dom.size
    for src, dst in zip(ff, gf):
        for a, c in zip(src, dst):
            table[a] = c
    return FinMap(f.dom, g.dom, table)


def representatives(b: FinSet, bound: int):
    """One map into B per isomorphism class over B with fibers <= bound."""
    for sizes in itertools.product(range(bound + 1), repeat=b.size):
        table = [y for y, k in enumerate(sizes) for _ in range(k)]
        yield FinMap(FinSet(len(table)), b, table)


def verify_family_equivalence(b: FinSet, oc: ObjectClassifier, cap: Optional[int] = None) -> Certificate:
    cap = default_cap() if cap is None else cap
    count = oc.U.size**b.size
    if count > cap:
        raise CapExceeded(count, cap)
    families = [FinMap(b, oc.U, t) for t in hom_tables(b.size, oc.U.size, cap)]
    reps = list(representatives(b, oc.bound))
    witnesses: dict = {"families": len(families), "iso_classes": len(reps), "flags": [SKELETAL]}
    counterexample = None
    for p in families:
        chi, _ = classify(psi(p), oc)
        if chi != p:
            counterexample = {"reason": "χ(ψ(P)) != P", "P": p, "got": chi}
            break
    if counterexample is None:
        for f in reps:
            chi, _ = classify(f, oc)
            back = psi(chi)
            iso = slice_iso(f, back)
            if iso is None or iso_failure(list(iso.table), back.dom.size) is not None or compose(back, iso) != f:
                counterexample = {"reason": "ψ(χ(f)) not isomorphic to f", "f": f}
                break
    if counterexample is None:
        seen = {tuple(len(x) for x in f.fibers()) for f in reps}
        if len(seen) != len(reps) or len(reps) != len(families):
            counterexample = {"reason": "counts differ", "families": len(families), "iso_classes": len(seen)}
    if counterexample is not None:
        witnesses["counterexample"] = counterexample
    return Certificate("family-equivalence", {"B": b, "bound": oc.bound}, witnesses, counterexample is None)
