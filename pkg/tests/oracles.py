"""Naive reference implementations used to freeze expected values.

Nothing here imports the library; every function works on plain tuples
and loops directly over definitions.
"""

from __future__ import annotations


def functions(a: int, b: int) -> list[tuple]:
    """All tables [a] -> [b], built recursively."""
    if a == 0:
        return [()]
    return [t + (v,) for t in functions(a - 1, b) for v in range(b)]


def pullback_pairs(f: tuple, g: tuple) -> list[tuple[int, int]]:
    out = []
    for a, fa in enumerate(f):
        for b, gb in enumerate(g):
            if fa == gb:
                out.append((a, b))
    return out


def injective(t: tuple) -> bool:
    return all(t[i] != t[j] for i in range(len(t)) for j in range(i))


def surjective(t: tuple, cod: int) -> bool:
    return all(any(v == y for v in t) for y in range(cod))


def epi_by_definition(t: tuple, cod: int, max_test: int = 3) -> bool:
    """g∘f = h∘f implies g = h, for all g, h into carriers <= max_test."""
    for c in range(max_test + 1):
        maps = functions(cod, c)
        for g in maps:
            for h in maps:
                if g != h and all(g[v] == h[v] for v in t):
                    return False
    return True


def classes(n: int, pairs) -> list[frozenset]:
    """Equivalence classes generated by pairs, by repeated merging."""
    blocks = [{i} for i in range(n)]
    changed = True
    while changed:
        changed = False
        for x, y in pairs:
            bx = next(b for b in blocks if x in b)
            by = next(b for b in blocks if y in b)
            if bx is not by:
                bx |= by
                blocks.remove(by)
                changed = True
    return sorted((frozenset(b) for b in blocks), key=min)


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def fiber_sizes(t: tuple, cod: int) -> list[int]:
    return [sum(1 for v in t if v == y) for y in range(cod)]


def poly_size(t: tuple, cod: int, n: int) -> int:
    return sum(n**k for k in fiber_sizes(t, cod))


def trees_up_to_depth(t: tuple, cod: int, depth: int) -> set:
    """Well-founded trees of the shape map t of height <= depth."""
    arity = fiber_sizes(t, cod)
    level: set = set()
    for _ in range(depth + 1):
        new = set(level)
        for y in range(cod):
            for kids in _tuples(sorted(level, key=repr), arity[y]):
                new.add((y, kids))
        level = new
    return level


def _tuples(items: list, k: int):
    if k == 0:
        yield ()
        return
    for head in items:
        for rest in _tuples(items, k - 1):
            yield (head,) + rest


def sections_count(f: tuple, f_cod: int, h: tuple) -> int:
    """Size of Π_f h: product over y of the number of sections on fib_f(y)."""
    total = 0
    for y in range(f_cod):
        count = 1
        for x, fx in enumerate(f):
            if fx == y:
                count *= sum(1 for v in h if v == x)
        total += count
    return total
