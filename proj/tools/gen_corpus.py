#!/usr/bin/env python3
"""Regenerates the Cayley-table corpus.

Each group is built from a concrete model (integers mod n, permutations,
quaternion units, unitriangular matrices). Elements are listed by breadth-first
closure from the generators, so the identity is always element 0.

Usage: gen_corpus.py [OUTDIR]   (defaults to ../corpus next to this script)
"""

import itertools
import pathlib
import sys


def closure(identity, gens, mul):
    elems = [identity]
    seen = {identity}
    i = 0
    while i < len(elems):
        for g in gens:
            y = mul(elems[i], g)
            if y not in seen:
                seen.add(y)
                elems.append(y)
        i += 1
    return elems


def table(elems, mul):
    index = {e: k for k, e in enumerate(elems)}
    return [[index[mul(a, b)] for b in elems] for a in elems]


def cyclic(n):
    mul = lambda a, b: (a + b) % n
    return table(closure(0, [1 % n], mul), mul)


def perm_group(degree, gens):
    # Composition (a*b)(i) = b(a(i)): apply a first.
    mul = lambda a, b: tuple(b[a[i]] for i in range(degree))
    return table(closure(tuple(range(degree)), gens, mul), mul)


def quaternion():
    # Units +-1, +-i, +-j, +-k as (sign, letter).
    prod = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }

    def mul(a, b):
        s, l = prod[(a[1], b[1])]
        return (a[0] * b[0] * s, l)

    return table(closure((1, "1"), [(1, "i"), (1, "j")], mul), mul)


def heisenberg(p):
    # Upper unitriangular 3x3 matrices over F_p as (a, b, c) = [[1,a,c],[0,1,b],[0,0,1]].
    mul = lambda x, y: ((x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p)
    return table(closure((0, 0, 0), [(1, 0, 0), (0, 1, 0)], mul), mul)


def direct_product(t1, t2):
    m1, m2 = len(t1), len(t2)
    elems = list(itertools.product(range(m1), range(m2)))
    mul = lambda a, b: (t1[a[0]][b[0]], t2[a[1]][b[1]])
    return table(elems, mul)


def dihedral(n):
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return perm_group(n, [rot, ref])


CORPUS = {
    "trivial": lambda: [[0]],
    "c2": lambda: cyclic(2),
    "c3": lambda: cyclic(3),
    "c4": lambda: cyclic(4),
    "c5": lambda: cyclic(5),
    "c6": lambda: cyclic(6),
    "c7": lambda: cyclic(7),
    "c8": lambda: cyclic(8),
    "v4": lambda: direct_product(cyclic(2), cyclic(2)),
    "s3": lambda: perm_group(3, [(1, 0, 2), (1, 2, 0)]),
    "d4": lambda: dihedral(4),
    "q8": quaternion,
    "d5": lambda: dihedral(5),
    "a4": lambda: perm_group(4, [(1, 2, 0, 3), (1, 0, 3, 2)]),
    "c2xs3": lambda: direct_product(cyclic(2), perm_group(3, [(1, 0, 2), (1, 2, 0)])),
    "s4": lambda: perm_group(4, [(1, 0, 2, 3), (1, 2, 3, 0)]),
    "heis27": lambda: heisenberg(3),
}


def main():
    out = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "corpus"
    out.mkdir(parents=True, exist_ok=True)
    for name, build in CORPUS.items():
        t = build()
        assert t[0] == list(range(len(t))), name
        lines = [str(len(t))] + [" ".join(map(str, row)) for row in t]
        (out / f"{name}.tbl").write_text("\n".join(lines) + "\n")
        print(f"{name}: order {len(t)}")


if __name__ == "__main__":
    main()
