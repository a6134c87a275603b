"""Test hooks for deliberate mutations of the constructions.

The verification suites are expected to catch every mutation listed in
``MUTATIONS`` with a concrete counterexample.  Nothing is active unless a
caller enters :func:`inject`.
"""

from __future__ import annotations

from contextlib import contextmanager

MUTATIONS = {
    "coeq_skip_union": "coequalizer skips the last identification",
    "closure_drop_transitivity": "equivalence closure stops after reflexive/symmetric closure",
    "pi_section_off_by_one": "dependent product drops the last section over each point",
    "pullback_drop_last": "pullback omits its last matching pair",
    "sum_overlap": "right injection of a sum is shifted onto the last left element",
    "poly_drop_leaves": "polynomial functor forgets constructors with empty arity",
    "kernel_pair_diagonal_only": "kernel pair keeps only the diagonal",
    "epi_small_test_codomain": "epi brute force only tests codomains of size <= 1",
}

_active: set[str] = set()


def active(name: str) -> bool:
    return name in _active


@contextmanager
def inject(name: str):
    if name not in MUTATIONS:
        raise KeyError(name)
    _active.add(name)
    try:
        yield
    finally:
        _active.discard(name)
