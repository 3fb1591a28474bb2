"""Built-in example categories."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..core.category import FinCategory
from ..core.shapes import terminal, two


def concrete_category(objects, homs, compose, name) -> FinCategory:
    """Category of concrete arrows.

    ``homs[(a, b)]`` lists ``(id, value)`` pairs; ``compose(gv, fv)`` returns
    the value of the composite, which must name an arrow of the right hom-set.
    """
    objects = list(objects)
    oi = {o: i for i, o in enumerate(objects)}
    names, dom, cod, vals = [], [], [], []
    lookup = {}
    for a in objects:
        for b in objects:
            for mid, v in homs.get((a, b), ()):
                lookup[(a, b, v)] = len(names)
                names.append(mid)
                dom.append(oi[a])
                cod.append(oi[b])
                vals.append(v)
    ident = []
    for a in objects:
        ids = [m for m in range(len(names)) if dom[m] == oi[a] and cod[m] == oi[a]
               and all(compose(vals[m], vals[f]) == vals[f] for f in range(len(names)) if cod[f] == oi[a])]
        ident.append(ids[0])
    comp = {}
    for f in range(len(names)):
        for g in range(len(names)):
            if dom[g] == cod[f]:
                v = compose(vals[g], vals[f])
                comp[(g, f)] = lookup[(objects[dom[f]], objects[cod[g]], v)]
    c = FinCategory(objects, names, dom, cod, ident, comp, name=name)
    c.values = vals
    return c


_PT_NAMES = {1: "star", 2: "X", 3: "Y"}


def finptset(k: int) -> FinCategory:
    """Skeleton of pointed sets with at most ``k`` elements (basepoint included).

    The object of size s is ``{0, ..., s-1}`` with basepoint 0; an arrow is
    recorded by the images of the non-base elements.
    """
    objs = [_PT_NAMES[s] for s in range(1, k + 1)]
    size = {_PT_NAMES[s]: s for s in range(1, k + 1)}
    homs = {}
    for a in objs:
        for b in objs:
            lst = []
            for imgs in itertools.product(range(size[b]), repeat=size[a] - 1):
                v = (0,) + imgs
                lst.append((f"{a}>{b}[{''.join(map(str, imgs))}]", (size[b], v)))
            homs[(a, b)] = lst

    def compose(gv, fv):
        return (gv[0], tuple(gv[1][x] for x in fv[1]))

    return concrete_category(objs, homs, compose, name=f"FinPtSet{k}")


def finvect2() -> FinCategory:
    """Skeleton of F2-vector spaces of dimension 0, 1, 2; arrows are matrices."""
    objs = ["V0", "V1", "V2"]
    homs = {}
    for m in range(3):
        for n in range(3):
            lst = []
            for bits in itertools.product((0, 1), repeat=m * n):
                rows = tuple(tuple(bits[r * m:(r + 1) * m]) for r in range(n))
                label = ".".join("".join(map(str, r)) for r in rows) if m else ""
                lst.append((f"V{m}>V{n}[{label}]", (m, n, rows)))
            homs[(f"V{m}", f"V{n}")] = lst

    def compose(gv, fv):
        m, _, F = fv
        _, n, G = gv
        k = fv[1]
        rows = tuple(tuple(sum(G[r][t] * F[t][c] for t in range(k)) % 2 for c in range(m)) for r in range(n))
        return (m, n, rows)

    return concrete_category(objs, homs, compose, name="FinVect2")


def no_kernel_category() -> FinCategory:
    """Pointed category with a morphism that has no kernel.

    Start from the poset ``c1, c2 < a < b``, adjoin a zero object ``z`` and
    declare the composites ``c1 -> b`` and ``c2 -> b`` to be zero. The arrow
    ``a>b`` then has two maximal "kernel candidates" ``c1`` and ``c2`` and no
    universal one.
    """
    objs = ["z", "c1", "c2", "a", "b"]
    leq = {("c1", "a"), ("c2", "a"), ("a", "b"), ("c1", "b"), ("c2", "b")}
    null = {("c1", "b"), ("c2", "b")}
    homs = {}
    for x in objs:
        for y in objs:
            if x == "z" or y == "z":
                homs[(x, y)] = [(f"{x}>{y}", ("0", x, y))]
                continue
            lst = [(f"0[{x}>{y}]", ("0", x, y))]
            if x == y or ((x, y) in leq and (x, y) not in null):
                lst.append((f"{x}>{y}", ("1", x, y)))
            homs[(x, y)] = lst

    def compose(gv, fv):
        kind = "1" if gv[0] == "1" and fv[0] == "1" and (fv[1], gv[2]) not in null else "0"
        return (kind, fv[1], gv[2])

    return concrete_category(objs, homs, compose, name="NoKernel")


@dataclass
class CorpusEntry:
    name: str
    category: FinCategory
    zero: str | None
    expectation: str  # "has_kernels" | "missing_kernel" | "not_pointed"
    witness: str | None = None


_BUILDERS = {
    "terminal": lambda: terminal(),
    "finptset2": lambda: finptset(2),
    "finptset3": lambda: finptset(3),
    "finvect2": finvect2,
    "nokernel": no_kernel_category,
    "two": lambda: two(),
}

_CACHE = {}


def build(name: str) -> FinCategory:
    if name not in _CACHE:
        _CACHE[name] = _BUILDERS[name]()
    return _CACHE[name]


def corpus():
    """The built-in entries, in a fixed order."""
    return [
        CorpusEntry("terminal", build("terminal"), "0", "has_kernels"),
        CorpusEntry("finptset2", build("finptset2"), "star", "has_kernels"),
        CorpusEntry("finptset3", build("finptset3"), "star", "has_kernels"),
        CorpusEntry("finvect2", build("finvect2"), "V0", "has_kernels"),
        CorpusEntry("nokernel", build("nokernel"), "z", "missing_kernel", witness="a>b"),
        CorpusEntry("two", build("two"), None, "not_pointed"),
    ]


def entry(name: str) -> CorpusEntry:
    for e in corpus():
        if e.name == name:
            return e
    raise KeyError(name)
