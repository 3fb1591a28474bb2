"""The small fixed categories: 1, 2, 2x2, cubes, ordinals, plus products and
functor categories out of them."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .category import PRODUCT_CAP, FinCategory, ResourceLimit
from .diagrams import DiagramCategory, Poset, chain, cube
from .functor import Functor


def _vertex_name(v) -> str:
    if isinstance(v, tuple):
        return "".join(str(b) for b in v)
    return str(v)


def poset_category(P: Poset, name=None) -> FinCategory:
    """Thin category of a poset: one morphism ``v->w`` per comparable pair."""
    objs = [_vertex_name(v) for v in P.vertices]
    mors = [f"{objs[i]}->{objs[j]}" for i, j in P.pairs]
    dom = [i for i, _ in P.pairs]
    cod = [j for _, j in P.pairs]
    ident = [P.pair_index[(i, i)] for i in range(len(P))]
    comp = {}
    for (j, k), g in P.pair_index.items():
        for (i, j2), f in P.pair_index.items():
            if j2 == j:
                comp[(g, f)] = P.pair_index[(i, k)]
    c = FinCategory(objs, mors, dom, cod, ident, comp, name=name or P.name)
    c.poset = P
    return c


@lru_cache(maxsize=None)
def terminal() -> FinCategory:
    """The terminal category; a single shared instance."""
    c = FinCategory(["0"], ["0"], [0], [0], [0], {(0, 0): 0}, name="1")
    c.poset = chain(0)
    return c


@lru_cache(maxsize=None)
def two() -> FinCategory:
    """The walking arrow ``a: 0 -> 1``; identities are named after their objects."""
    c = FinCategory(["0", "1"], ["0", "1", "a"], [0, 1, 0], [0, 1, 1], [0, 1],
                    {(0, 0): 0, (1, 1): 1, (2, 0): 2, (1, 2): 2}, name="2")
    c.poset = chain(1)
    return c


def ordinal(n: int) -> FinCategory:
    """The ordinal category ``0 -> 1 -> ... -> n``."""
    return poset_category(chain(n), name=f"[{n}]")


def cube_category(n: int) -> FinCategory:
    """The poset category ``2^n`` (thin)."""
    return poset_category(cube(n), name=f"2^{n}")


def product_category(c: FinCategory, d: FinCategory, cap=None) -> FinCategory:
    cap = PRODUCT_CAP if cap is None else cap
    size = c.n_mor * d.n_mor
    if size > cap:
        raise ResourceLimit(f"product {c.name} x {d.name}", size, cap)
    objs = [f"({a},{b})" for a in c.objects for b in d.objects]
    mors = [f"({f},{g})" for f in c.morphisms for g in d.morphisms]
    nd, md = d.n_obj, d.n_mor
    dom = [c.dom[f] * nd + d.dom[g] for f in range(c.n_mor) for g in range(md)]
    cod = [c.cod[f] * nd + d.cod[g] for f in range(c.n_mor) for g in range(md)]
    ident = [c.identity[a] * md + d.identity[b] for a in range(c.n_obj) for b in range(nd)]
    comp = {}
    for (f2, f1), f in c.composition.items():
        for (g2, g1), g in d.composition.items():
            comp[(f2 * md + g2, f1 * md + g1)] = f * md + g
    out = FinCategory(objs, mors, dom, cod, ident, comp, name=f"{c.name}x{d.name}")
    out.factors = (c, d)
    return out


def product_functor(F: Functor, G: Functor, source=None, target=None) -> Functor:
    """``F x G`` between the product categories."""
    S = source or product_category(F.source, G.source)
    T = target or product_category(F.target, G.target)
    n2, m2 = G.target.n_obj, G.target.n_mor
    om = [F.obj_map[a] * n2 + G.obj_map[b] for a in range(F.source.n_obj) for b in range(G.source.n_obj)]
    mm = [F.mor_map[f] * m2 + G.mor_map[g] for f in range(F.source.n_mor) for g in range(G.source.n_mor)]
    return Functor(S, T, om, mm, check=False)


def functor_category(shape: FinCategory, target: FinCategory, cap=None) -> FinCategory:
    """``[shape, target]`` with every functor and transformation enumerated.

    ``shape`` must be one of the built-in poset shapes (it carries ``.poset``).
    """
    P = getattr(shape, "poset", None)
    if P is None:
        raise ValueError(f"{shape.name} is not a built-in shape")
    return DiagramCategory(P, target, cap).materialize(name=f"[{shape.name},{target.name}]")


@dataclass
class IntervalMonoid:
    """The monoid ``(2, max, 0)`` with its symmetry."""

    two: FinCategory
    square: FinCategory
    m: Functor
    e: Functor
    tau: Functor

    def check(self):
        """Names of failed monoid laws (empty when all hold)."""
        bad = []
        two, sq = self.two, self.square
        m = self.m
        # associativity and unit, evaluated on all triples / pairs of morphisms
        md = two.n_mor
        for x in range(md):
            for y in range(md):
                for z in range(md):
                    left = m(m(x * md + y) * md + z)
                    right = m(x * md + m(y * md + z))
                    if left != right:
                        bad.append(("associativity", two.morphisms[x], two.morphisms[y], two.morphisms[z]))
        unit = self.e(0)
        for x in range(md):
            if m(unit * md + x) != x or m(x * md + unit) != x:
                bad.append(("unit", two.morphisms[x]))
        for f in range(sq.n_mor):
            if m(self.tau(f)) != m(f):
                bad.append(("symmetry", sq.morphisms[f]))
        return bad


def interval_monoid() -> IntervalMonoid:
    t = two()
    sq = product_category(t, t)
    # max on objects; on morphisms the unique arrow between the max'es (2 is thin)
    om = [max(i, j) for i in range(2) for j in range(2)]
    mm = []
    for f in range(sq.n_mor):
        a, b = om[sq.dom[f]], om[sq.cod[f]]
        mm.append(t.hom(a, b)[0])
    m = Functor(sq, t, om, mm, name="m")
    e = Functor(terminal(), t, [0], [0], name="e")
    tau_o = [j * 2 + i for i in range(2) for j in range(2)]
    tau_m = [g * 3 + f for f in range(3) for g in range(3)]
    tau = Functor(sq, sq, tau_o, tau_m, name="tau")
    return IntervalMonoid(t, sq, m, e, tau)
