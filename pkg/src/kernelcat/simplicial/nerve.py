"""Nerves of finite categories, the categorical décalage and the transformation J."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core.category import FinCategory, LazyComposition
from ..core.diagrams import (RowIndex, arrow_shape, assemble_morphisms, chain, components, faces, lift,
                             reindex_cols)
from ..core.functor import Functor, compose_functors, functor_violation
from ..report import LawReport
from .levels import DiagramLevel, Op

FLAVORS = ("full", "wide", "tilde-wide")


class NerveLevel(DiagramLevel):
    """``N_n(C) = [n, C]``: chains of ``n`` composable arrows and ladders.

    ``wide`` keeps the ladders whose components are identities except at
    vertex 0; ``tilde-wide`` those whose last component is an identity.
    """

    def __init__(self, base: FinCategory, n: int, flavor="full", cap=None):
        if flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {flavor!r}")
        if n < -1:
            raise ValueError("level must be >= -1")
        suffix = {"full": "", "wide": "w", "tilde-wide": "~w"}[flavor]
        super().__init__(chain(n), base, name=f"N{suffix}_{n}({base.name})", cap=cap)
        self.base = base
        self.n = n
        self.flavor = flavor

    def _free_vertices(self):
        if self.flavor == "wide":
            return [0] if self.n >= 0 else []
        if self.flavor == "tilde-wide":
            return list(range(self.n))
        return list(range(self.n + 1))

    def generators(self, X=None):
        from ..core.diagrams import single_vertex_morphisms
        X = self.objects() if X is None else X
        return single_vertex_morphisms(self.P, self.C, X, vertices=self._free_vertices())[2]

    def morphism_mask(self, M):
        """Which morphism rows belong to this flavor."""
        comps = components(self.P, M)
        ok = np.ones(len(M), dtype=bool)
        ident = self.C.identity[self.C.dom[comps]]
        for v in range(self.n + 1):
            if v not in self._free_vertices():
                ok &= comps[:, v] == ident[:, v]
        return ok

    def morphisms(self):
        M = super().morphisms()
        return M[self.morphism_mask(M)]

    def as_category(self) -> FinCategory:
        if self._cat is None:
            full = DiagramLevel(self.P, self.C, cap=self.cap).as_category()
            if self.flavor == "full":
                full.name = self.name
                self._cat = full
            else:
                self._cat = subcategory(full, self.morphism_mask(full.morphism_rows), self.name)
        return self._cat

    def chain_names(self, X):
        return [self.obj_name(x) for x in X]


def subcategory(c: FinCategory, keep, name) -> FinCategory:
    """The wide subcategory on the morphisms selected by ``keep``."""
    keep = np.asarray(keep, dtype=bool)
    if not np.all(keep[c.identity]):
        raise ValueError("a wide subcategory must contain the identities")
    old = np.nonzero(keep)[0]
    new_of = np.full(c.n_mor, -1, dtype=np.int64)
    new_of[old] = np.arange(len(old))
    comp = {}
    for (g, f), gf in c.composition.items():
        if keep[g] and keep[f]:
            if not keep[gf]:
                raise ValueError(f"{c.morphisms[gf]} = {c.morphisms[g]} . {c.morphisms[f]} leaves the subcategory")
            comp[(int(new_of[g]), int(new_of[f]))] = int(new_of[gf])
    sub = FinCategory(c.objects, [c.morphisms[m] for m in old], c.dom[old], c.cod[old], new_of[c.identity], comp,
                      name=name)
    for attr in ("rows", "shape", "base"):
        if hasattr(c, attr):
            setattr(sub, attr, getattr(c, attr))
    if hasattr(c, "morphism_rows"):
        sub.morphism_rows = c.morphism_rows[old]
    return sub


def nerve(c: FinCategory, n: int, flavor="full", cap=None) -> NerveLevel:
    if n > 4 and flavor == "full":
        raise ValueError("nerve levels above 4 are not supported")
    return NerveLevel(c, n, flavor, cap)


# -- standard simplicial operators ------------------------------------

def coface_map(n: int, i: int):
    """``[n-1] -> [n]`` skipping ``i``."""
    return lambda k: k if k < i else k + 1


def codegeneracy_map(n: int, j: int):
    """``[n+1] -> [n]`` hitting ``j`` twice."""
    return lambda k: k if k <= j else k - 1


def _check_level(level):
    if not isinstance(level, DiagramLevel) or level.P.kind != "chain":
        raise TypeError("expected a nerve level")
    return level.P.n


def nerve_face(level: DiagramLevel, i: int, target=None) -> Op:
    """``d_i: N_n -> N_(n-1)``: drop vertex ``i`` (composing at inner vertices)."""
    n = _check_level(level)
    if n < 1 or not 0 <= i <= n:
        raise IndexError(f"face d_{i} does not exist on level {n}")
    tgt = target or DiagramLevel(chain(n - 1), level.C, cap=level.cap)
    return Op.reindex(level, tgt, coface_map(n, i), name=f"d{i}")


def nerve_degeneracy(level: DiagramLevel, j: int, target=None) -> Op:
    """``s_j: N_n -> N_(n+1)``: insert an identity at vertex ``j``."""
    n = _check_level(level)
    if not 0 <= j <= n:
        raise IndexError(f"degeneracy s_{j} does not exist on level {n}")
    tgt = target or DiagramLevel(chain(n + 1), level.C, cap=level.cap)
    return Op.reindex(level, tgt, codegeneracy_map(n, j), name=f"s{j}")


def nerve_structure(c: FinCategory, N: int, cap=None):
    """The nerve truncated at level ``N`` as a strict simplicial object."""
    from .levels import TruncatedSimplicialCat
    levels = [DiagramLevel(chain(n), c, name=f"N_{n}({c.name})", cap=cap) for n in range(N + 1)]
    fcs, dgs = {}, {}
    for n in range(N + 1):
        for i in range(n + 1):
            if n >= 1:
                fcs[(n, i)] = nerve_face(levels[n], i, levels[n - 1])
            if n < N:
                dgs[(n, i)] = nerve_degeneracy(levels[n], i, levels[n + 1])
    return TruncatedSimplicialCat(levels, fcs, dgs, relaxed=False, name=f"N({c.name})")


# -- categorical décalage ----------------------------------------------

class DecalageCategory:
    """``D(C)``: the coproduct of the slices ``C/c``.

    Objects are the morphisms of C (the slice is the codomain); a morphism
    ``x -> y`` is ``u`` with ``y u = x``, named ``u:x->y``.
    """

    def __init__(self, base: FinCategory):
        self.base = C = base
        T = C.table()
        mors, dom, cod, trip = [], [], [], []
        for x in range(C.n_mor):
            for y in range(C.n_mor):
                if C.cod[x] != C.cod[y]:
                    continue
                for u in C.hom(int(C.dom[x]), int(C.dom[y])):
                    if T[y, u] == x:
                        trip.append((u, x, y))
        key = {}
        for t, (u, x, y) in enumerate(trip):
            key[(u, x, y)] = t
            mors.append(f"{C.morphisms[u]}:{C.morphisms[x]}->{C.morphisms[y]}")
            dom.append(x)
            cod.append(y)
        self.triangles = np.array(trip, dtype=np.int64).reshape(-1, 3)
        self._key = key
        ident = [key[(int(C.identity[C.dom[x]]), x, x)] for x in range(C.n_mor)]

        def comp(g, f):
            v, _, z = trip[g]
            u, x, _ = trip[f]
            return key[(int(T[v, u]), x, z)]

        self.category = FinCategory(C.morphisms, mors, dom, cod, ident, LazyComposition(dom, cod, comp),
                                    name=f"D({C.name})")
        self.category.decalage = self

    @property
    def as_category(self) -> FinCategory:
        return self.category

    def slice_of(self, x: int) -> int:
        return int(self.base.cod[x])

    def triangle(self, u, x, y) -> int:
        return self._key[(u, x, y)]


_DEC_CACHE = {}


def decalage_category(c: FinCategory) -> DecalageCategory:
    hit = _DEC_CACHE.get(id(c))
    if hit is None or hit[0] is not c:
        hit = (c, DecalageCategory(c))
        _DEC_CACHE[id(c)] = hit
    return hit[1]


def decalage_on_functor(F: Functor) -> Functor:
    """``D(F)``: slices are sent to slices along F."""
    S, T = decalage_category(F.source), decalage_category(F.target)
    mm = [T.triangle(int(F.mor_map[u]), int(F.mor_map[x]), int(F.mor_map[y])) for u, x, y in S.triangles]
    return Functor(S.category, T.category, F.mor_map, mm, name=f"D{F.name}", check=False)


def _dense(c: FinCategory) -> FinCategory:
    """Copy of ``c`` with an explicit composition dict (for iterating D)."""
    if isinstance(c.composition, LazyComposition):
        comp = {k: c.composition[k] for k in c.composition}
        d = FinCategory(c.objects, c.morphisms, c.dom, c.cod, c.identity, comp, name=c.name)
        for attr in ("decalage", "rows", "morphism_rows"):
            if hasattr(c, attr):
                setattr(d, attr, getattr(c, attr))
        return d
    return c


def iterated_decalage(c: FinCategory, n: int) -> FinCategory:
    out = c
    for _ in range(n):
        out = _dense(decalage_category(out).category)
    return out


# -- N^w_n(C) = D^n(C) ---------------------------------------------------

@dataclass
class Isomorphism:
    functor: Functor
    report: LawReport

    @property
    def ok(self):
        return self.report.ok


def _nerve_to_base(c: FinCategory, cap=None) -> Functor:
    """``N_0(C) -> C``, reading off the single vertex."""
    N0 = nerve(c, 0, cap=cap).as_category()
    return Functor(N0, c, c.dom[N0.rows[:, 0]], components(chain(0), N0.morphism_rows)[:, 0],
                   name="ev0", check=False)


def wide_shift(c: FinCategory, n: int, cap=None):
    """``N^w_n(C) -> D(N^w_(n-1)(C))``: a chain ``[f1, .., fn]`` goes to the
    ladder ``(f1, 1, .., 1): [f2 f1, f3, ..] -> [f2, f3, ..]``."""
    W = nerve(c, n, "wide", cap=cap).as_category()
    Wm = nerve(c, n - 1, "wide", cap=cap).as_category()
    D = decalage_category(_dense(Wm))
    P, Q = chain(n), chain(n - 1)
    X = W.rows
    src = X[:, reindex_cols(Q, P, coface_map(n, 1))]
    tgt = X[:, reindex_cols(Q, P, coface_map(n, 0))]
    comps = c.identity[c.dom[src[:, Q.id_cols]]]
    comps[:, 0] = X[:, P.pair_index[(0, 1)]]
    L = assemble_morphisms(Q, c, src, tgt, comps)
    midx = RowIndex(Wm.morphism_rows)
    obj = midx.lookup(L)
    # a wide ladder (phi0, 1, ..): X -> X' goes to its d_1-face (phi0, 1, ..)
    A, B = arrow_shape(P), arrow_shape(Q)
    u = midx.lookup(W.morphism_rows[:, reindex_cols(B, A, lift(Q, P, coface_map(n, 1)))])
    mor = [D.triangle(int(u[m]), int(obj[W.dom[m]]), int(obj[W.cod[m]])) for m in range(W.n_mor)]
    return Functor(W, D.category, obj, mor, name=f"shift{n}", check=False)


def wide_nerve_iso(c: FinCategory, n: int, cap=None) -> Isomorphism:
    """The isomorphism ``N^w_n(C) = D^n(C)``, built by induction on ``n`` and
    checked to be a bijective functor."""
    if n > 3:
        raise ValueError("wide_nerve_iso is provided for n <= 3")
    F = _nerve_to_base(c, cap)
    for k in range(1, n + 1):
        # D(F_(k-1)) . shift_k
        sh = wide_shift(c, k, cap)
        DF = decalage_on_functor(F)
        F = Functor(sh.source, _dense(DF.target), DF.obj_map[sh.obj_map], DF.mor_map[sh.mor_map],
                    name=f"iso{k}", check=False)
    rep = LawReport(f"N^w_{n}({c.name}) = D^{n}({c.name})")
    D = F.target
    rep.record("bijective on objects", None if np.array_equal(np.sort(F.obj_map), np.arange(D.n_obj)) and
               F.source.n_obj == D.n_obj else (F.source.n_obj, D.n_obj))
    rep.record("bijective on morphisms", None if np.array_equal(np.sort(F.mor_map), np.arange(D.n_mor)) and
               F.source.n_mor == D.n_mor else (F.source.n_mor, D.n_mor))
    v = functor_violation(F)
    rep.record("functor laws", v)
    return Isomorphism(F, rep)


def J_transformation(c: FinCategory) -> Functor:
    """``J_C: D(C) -> A(C)``: identity on objects, a triangle ``u: x -> y`` over
    ``c`` goes to the square ``(u, 1_c): x -> y``."""
    from ..arrow.arrow import build_arrow_category
    D = decalage_category(c)
    A = build_arrow_category(c)
    t = D.triangles
    sq = A.square_id(t[:, 1], t[:, 2], t[:, 0], c.identity[c.cod[t[:, 1]]])
    return Functor(D.category, A.category, np.arange(c.n_mor), sq, name="J", check=False)


def J_naturality(F: Functor):
    """``A(F) . J = J . D(F)``; returns the first offending triangle or None."""
    from ..arrow.arrow import arrow_on_functor
    lhs = compose_functors(arrow_on_functor(F), J_transformation(F.source))
    rhs_D = decalage_on_functor(F)
    JT = J_transformation(F.target)
    rhs = JT.mor_map[rhs_D.mor_map]
    bad = np.nonzero(lhs.mor_map != rhs)[0]
    return None if len(bad) == 0 else lhs.source.morphisms[int(bad[0])]


__all__ = ["NerveLevel", "nerve", "nerve_face", "nerve_degeneracy", "nerve_structure", "coface_map",
           "codegeneracy_map", "DecalageCategory", "decalage_category", "decalage_on_functor",
           "iterated_decalage", "wide_shift", "wide_nerve_iso", "Isomorphism", "J_transformation",
           "J_naturality", "subcategory", "faces"]
