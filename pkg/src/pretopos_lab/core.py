"""Finite carriers, index-table maps and the certificates every check emits.

Elements of a carrier of size ``n`` are the integers ``0..n-1``.  Constructed
carriers keep a *decoder*: a tuple describing what each index stands for
(a pair, a tagged injection, a class representative, a tree...).  All
constructions enumerate lexicographically so results are reproducible.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from typing import Any, Iterator, Optional, Sequence

from .errors import CapExceeded, CompositionMismatch, LengthMismatch, OutOfRange

DEFAULT_CAP = 10**6
SCHEMA = "pretopos-lab/certificate/v1"


def default_cap() -> int:
    """Enumeration cap, overridable through ``PRETOPOS_CAP``."""
    raw = os.environ.get("PRETOPOS_CAP")
    return int(raw) if raw else DEFAULT_CAP


def _freeze(value):
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    if isinstance(value, tuple):
        return tuple(_freeze(v) for v in value)
    return value


@dataclass(frozen=True)
class FinSet:
    size: int
    name: Optional[str] = field(default=None, compare=False)
    decoder: Optional[tuple] = None

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("carrier size must be nonnegative")
        if self.decoder is not None:
            object.__setattr__(self, "decoder", _freeze(self.decoder))
            if len(self.decoder) != self.size:
                raise LengthMismatch(len(self.decoder), self.size)

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(range(self.size))

    def decode(self, i: int):
        return self.decoder[i] if self.decoder is not None else i

    def index_of(self, description) -> int:
        """Inverse of :meth:`decode` (linear scan, fine at desk scale)."""
        if self.decoder is None:
            return description
        return self.decoder.index(_freeze(description))

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"[{self.size}{label}]"


class FinMap:
    """A total function ``dom -> cod`` stored as a table of codomain indices."""

    __slots__ = ("dom", "cod", "table")

    def __init__(self, dom: FinSet, cod: FinSet, table: Sequence[int]):
        table = tuple(table)
        if len(table) != dom.size:
            raise LengthMismatch(len(table), dom.size)
        for i, v in enumerate(table):
            if not 0 <= v < cod.size:
                raise OutOfRange(i, v, cod.size)
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "table", table)

    def __setattr__(self, key, value):
        raise AttributeError("FinMap is immutable")

    def __call__(self, i: int) -> int:
        return self.table[i]

    def __eq__(self, other):
        if not isinstance(other, FinMap):
            return NotImplemented
        return (
            self.dom.size == other.dom.size
            and self.cod.size == other.cod.size
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.dom.size, self.cod.size, self.table))

    def __repr__(self):
        return f"FinMap({self.dom!r} -> {self.cod!r}, {self.table})"

    def image(self) -> list[int]:
        return sorted(set(self.table))

    def fibers(self) -> list[list[int]]:
        """``fibers()[b]`` lists the preimage of ``b`` in ascending order."""
        out: list[list[int]] = [[] for _ in range(self.cod.size)]
        for i, v in enumerate(self.table):
            out[v].append(i)
        return out

    def fiber(self, b: int) -> list[int]:
        return [i for i, v in enumerate(self.table) if v == b]


def mk_finset(n: int, name: Optional[str] = None) -> FinSet:
    return FinSet(n, name)


def mk_map(dom: FinSet, cod: FinSet, table: Sequence[int]) -> FinMap:
    return FinMap(dom, cod, table)


def identity(a: FinSet) -> FinMap:
    return FinMap(a, a, range(a.size))


def compose(g: FinMap, f: FinMap) -> FinMap:
    """``g ∘ f``."""
    if f.cod != g.dom:
        raise CompositionMismatch(f"cannot compose {g!r} after {f!r}")
    gt = g.table
    return FinMap(f.dom, g.cod, [gt[v] for v in f.table])


def constant(a: FinSet, b: FinSet, value: int) -> FinMap:
    return FinMap(a, b, [value] * a.size)


def hom_count(a: FinSet, b: FinSet) -> int:
    return b.size**a.size


def hom_tables(a: int, b: int, cap: Optional[int] = None) -> Iterator[tuple]:
    """All tables of maps ``[a] -> [b]`` in lexicographic order."""
    cap = default_cap() if cap is None else cap
    count = b**a
    if count > cap:
        raise CapExceeded(count, cap)
    return itertools.product(range(b), repeat=a)


def hom_enumerate(a: FinSet, b: FinSet, cap: Optional[int] = None) -> list[FinMap]:
    return [FinMap(a, b, t) for t in hom_tables(a.size, b.size, cap)]


def is_mono(f: FinMap) -> bool:
    return len(set(f.table)) == len(f.table)


def is_epi_fast(f: FinMap) -> bool:
    return len(set(f.table)) == f.cod.size


is_surjective = is_epi_fast


def is_iso(f: FinMap) -> Optional[FinMap]:
    if f.dom.size != f.cod.size or not is_mono(f):
        return None
    inv = [0] * f.cod.size
    for i, v in enumerate(f.table):
        inv[v] = i
    return FinMap(f.cod, f.dom, inv)


# ---------------------------------------------------------------- certificates


def ser(value: Any) -> Any:
    """JSON-ready rendering of carriers, maps and nested containers."""
    if isinstance(value, FinMap):
        return {"dom": value.dom.size, "cod": value.cod.size, "table": list(value.table)}
    if isinstance(value, FinSet):
        out: dict[str, Any] = {"size": value.size}
        if value.name:
            out["name"] = value.name
        if value.decoder is not None:
            out["decoder"] = ser(value.decoder)
        return out
    if isinstance(value, Certificate):
        return value.to_dict()
    if isinstance(value, dict):
        return {str(k): ser(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [ser(v) for v in value]
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return value


@dataclass
class Certificate:
    kind: str
    inputs: dict
    witnesses: dict
    passed: bool
    caps: dict = field(default_factory=dict)
    seed: Optional[int] = None

    def __post_init__(self):
        if not self.passed and "counterexample" not in self.witnesses:
            raise ValueError(f"failed certificate {self.kind!r} carries no counterexample")

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": self.kind,
            "inputs": ser(self.inputs),
            "witnesses": ser(self.witnesses),
            "passed": self.passed,
            "caps": ser(self.caps),
            "seed": self.seed,
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)


def is_epi_bruteforce(f: FinMap, cap: Optional[int] = None) -> Certificate:
    """Epi test by quantifying over parallel pairs into carriers of size <= 2."""
    from . import faults

    b = f.cod.size
    sizes = (0, 1) if faults.active("epi_small_test_codomain") else (0, 1, 2)
    checked = 0
    for c in sizes:
        tables = list(hom_tables(b, c, cap))
        for g in tables:
            gf = tuple(g[v] for v in f.table)
            for h in tables:
                checked += 1
                if g != h and gf == tuple(h[v] for v in f.table):
                    return Certificate(
                        "epi-bruteforce",
                        {"f": f},
                        {
                            "epi": False,
                            "checked_pairs": checked,
                            "counterexample": {
                                "g": FinMap(f.cod, FinSet(c), g),
                                "h": FinMap(f.cod, FinSet(c), h),
                                "differ_at": [i for i in range(b) if g[i] != h[i]],
                            },
                        },
                        False,
                        {"test_codomain_max": max(sizes), "cap": cap or default_cap()},
                    )
    return Certificate(
        "epi-bruteforce",
        {"f": f},
        {"epi": True, "checked_pairs": checked},
        True,
        {"test_codomain_max": max(sizes), "cap": cap or default_cap()},
    )


def all_maps_up_to(max_size: int, min_size: int = 0) -> Iterator[FinMap]:
    """Every map between carriers of sizes in ``[min_size, max_size]``."""
    for a in range(min_size, max_size + 1):
        for b in range(min_size, max_size + 1):
            A, B = FinSet(a), FinSet(b)
            for t in itertools.product(range(b), repeat=a):
                yield FinMap(A, B, t)
