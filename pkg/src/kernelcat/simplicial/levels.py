"""Levels of truncated simplicial objects in categories, and functors between
them that are evaluated on batches of objects and morphisms.

A level is either a category of diagrams ``[P, C]`` (elements are diagram
rows) or an explicit :class:`FinCategory` (elements are ids, stored as rows of
width one so both kinds share one calling convention). Operators only need to
be evaluated, never tabulated, so levels far above the materialization cap
still support pointwise law checks.
"""
from __future__ import annotations

import numpy as np

from ..core.category import FinCategory, default_cap
from ..core.diagrams import (DiagramCategory, Poset, RowIndex, arrow_shape, compose_morphisms, components,
                             diagram_name, enumerate_diagrams, faces, identity_morphisms, is_diagram, lift,
                             reindex_cols, single_vertex_morphisms)
from ..core.shapes import terminal


def isomorphism_mask(C: FinCategory) -> np.ndarray:
    T = C.table()
    out = np.zeros(C.n_mor, dtype=bool)
    for m in range(C.n_mor):
        a, b = int(C.dom[m]), int(C.cod[m])
        for n in C.hom(b, a):
            if T[n, m] == C.identity[a] and T[m, n] == C.identity[b]:
                out[m] = True
                break
    return out


class DiagramLevel:
    """The category ``[P, C]``."""

    def __init__(self, P: Poset, C: FinCategory, name=None, cap=None):
        self.P = P
        self.C = C
        self.name = name or f"[{P.name},{C.name}]"
        self.cap = cap
        self._objects = None
        self._iso = None
        self._cat = None

    def same_as(self, other) -> bool:
        return isinstance(other, DiagramLevel) and other.P is self.P and other.C is self.C

    def objects(self) -> np.ndarray:
        if self._objects is None:
            self._objects = enumerate_diagrams(self.P, self.C, self.cap, what=f"objects of {self.name}")
        return self._objects

    @property
    def n_objects(self):
        return len(self.objects())

    def generators(self, X=None):
        """Single-vertex morphisms out of ``X`` (default: all objects)."""
        X = self.objects() if X is None else X
        return single_vertex_morphisms(self.P, self.C, X)[2]

    def morphisms(self) -> np.ndarray:
        return enumerate_diagrams(arrow_shape(self.P), self.C, self.cap, what=f"morphisms of {self.name}")

    def src(self, M):
        return faces(self.P, M)[0]

    def tgt(self, M):
        return faces(self.P, M)[1]

    def identity(self, X):
        return identity_morphisms(self.P, X)

    def compose(self, G, F):
        return compose_morphisms(self.P, self.C, G, F)

    def is_object(self, X):
        return is_diagram(self.P, self.C, X)

    def is_morphism(self, M):
        return is_diagram(arrow_shape(self.P), self.C, M)

    def is_iso(self, M):
        if self._iso is None:
            self._iso = isomorphism_mask(self.C)
        return np.all(self._iso[components(self.P, M)], axis=1)

    def obj_name(self, x) -> str:
        return diagram_name(self.P, self.C, np.asarray(x).ravel())

    def mor_name(self, m) -> str:
        m = np.asarray(m)[None, :]
        comps = components(self.P, m)[0]
        s, t = self.src(m)[0], self.tgt(m)[0]
        return "(" + ",".join(self.C.morphisms[int(c)] for c in comps) + "):" + self.obj_name(s) + "->" + \
            self.obj_name(t)

    def as_category(self) -> FinCategory:
        if self._cat is None:
            self._cat = DiagramCategory(self.P, self.C, self.cap).materialize(name=self.name)
        return self._cat

    def __repr__(self):
        return f"DiagramLevel({self.name})"


class TableLevel:
    """An explicit finite category as a level."""

    def __init__(self, C: FinCategory, name=None):
        self.C = C
        self.name = name or C.name
        self._iso = None

    def same_as(self, other) -> bool:
        return isinstance(other, TableLevel) and other.C == self.C

    def objects(self):
        return np.arange(self.C.n_obj)[:, None]

    @property
    def n_objects(self):
        return self.C.n_obj

    def generators(self, X=None):
        ms = np.arange(self.C.n_mor)
        if X is not None:
            ms = ms[np.isin(self.C.dom[ms], X[:, 0])]
        return ms[:, None]

    def morphisms(self):
        return np.arange(self.C.n_mor)[:, None]

    def src(self, M):
        return self.C.dom[M[:, 0]][:, None]

    def tgt(self, M):
        return self.C.cod[M[:, 0]][:, None]

    def identity(self, X):
        return self.C.identity[X[:, 0]][:, None]

    def compose(self, G, F):
        T = self.C.table()
        return T[G[:, 0], F[:, 0]][:, None]

    def is_object(self, X):
        return (X.shape[1] == 1) & (X[:, 0] >= 0) & (X[:, 0] < self.C.n_obj)

    def is_morphism(self, M):
        return (M.shape[1] == 1) & (M[:, 0] >= 0) & (M[:, 0] < self.C.n_mor)

    def is_iso(self, M):
        if self._iso is None:
            self._iso = isomorphism_mask(self.C)
        return self._iso[M[:, 0]]

    def obj_name(self, x) -> str:
        return self.C.objects[int(np.asarray(x).ravel()[0])]

    def mor_name(self, m) -> str:
        return self.C.morphisms[int(np.asarray(m).ravel()[0])]

    def as_category(self):
        return self.C

    def __repr__(self):
        return f"TableLevel({self.name})"


def is_terminal_level(L) -> bool:
    if isinstance(L, DiagramLevel):
        return len(L.P) == 0 or (L.C.n_obj == 1 and L.C.n_mor == 1)
    return L.C.n_obj == 1 and L.C.n_mor == 1


def terminal_level() -> TableLevel:
    return TableLevel(terminal(), name="1")


class Op:
    """A functor between levels, given by its action on batches."""

    def __init__(self, src, tgt, obj, mor, name=""):
        self.src = src
        self.tgt = tgt
        self._obj = obj
        self._mor = mor
        self.name = name

    def obj(self, X):
        return self._obj(np.asarray(X))

    def mor(self, M):
        return self._mor(np.asarray(M))

    @classmethod
    def reindex(cls, src: DiagramLevel, tgt: DiagramLevel, r, name=""):
        """Precomposition with the monotone map ``r: tgt.P -> src.P``."""
        oc = reindex_cols(tgt.P, src.P, r)
        mc = reindex_cols(arrow_shape(tgt.P), arrow_shape(src.P), lift(tgt.P, src.P, r))
        return cls(src, tgt, lambda X: X[:, oc], lambda M: M[:, mc], name)

    @classmethod
    def from_functor(cls, F, src: TableLevel, tgt: TableLevel, name=""):
        om, mm = F.obj_map, F.mor_map
        return cls(src, tgt, lambda X: om[X[:, 0]][:, None], lambda M: mm[M[:, 0]][:, None], name or F.name)

    def then(self, other: "Op") -> "Op":
        """``other . self``."""
        return Op(self.src, other.tgt, lambda X: other.obj(self.obj(X)), lambda M: other.mor(self.mor(M)),
                  f"{other.name}{self.name}")

    def patched(self, which, index, value, name=None):
        """A copy whose output at the ``index``-th element (in the source's
        enumeration order) is replaced by ``value``; used for mutation tests."""
        base = self.src.objects() if which == "obj" else self.src.generators()
        key = np.asarray(base[index])
        value = np.asarray(value)

        def wrap(fn):
            def g(A):
                out = np.array(fn(A), copy=True)
                if A.shape[1] == key.shape[0]:
                    hit = np.all(A == key[None, :], axis=1)
                    out[hit] = value
                return out
            return g

        if which == "obj":
            return Op(self.src, self.tgt, wrap(self._obj), self._mor, name or self.name)
        return Op(self.src, self.tgt, self._obj, wrap(self._mor), name or self.name)

    def as_functor(self):
        """Tabulate as a :class:`Functor` between the materialized levels."""
        from ..core.functor import Functor
        S, T = self.src.as_category(), self.tgt.as_category()
        om = _lookup(self.tgt, T, self.obj(_obj_rows(self.src, S)), objects=True)
        mm = _lookup(self.tgt, T, self.mor(_mor_rows(self.src, S)), objects=False)
        return Functor(S, T, om, mm, name=self.name, check=False)


def _obj_rows(level, cat):
    return cat.rows if isinstance(level, DiagramLevel) else np.arange(cat.n_obj)[:, None]


def _mor_rows(level, cat):
    return cat.morphism_rows if isinstance(level, DiagramLevel) else np.arange(cat.n_mor)[:, None]


def _lookup(level, cat, rows, objects):
    if isinstance(level, TableLevel):
        return rows[:, 0]
    idx = RowIndex(cat.rows if objects else cat.morphism_rows)
    return idx.lookup(rows)


class Transformation:
    """A natural transformation between two functors ``X_n -> X_m``, given by
    its components (morphism rows of ``X_m``) at objects of ``X_n``."""

    def __init__(self, src, tgt, comp, name=""):
        self.src = src
        self.tgt = tgt
        self._comp = comp
        self.name = name

    def at(self, X):
        return self._comp(np.asarray(X))

    def patched(self, index, value):
        key = np.asarray(self.src.objects()[index])
        value = np.asarray(value)
        fn = self._comp

        def g(X):
            out = np.array(fn(X), copy=True)
            out[np.all(X == key[None, :], axis=1)] = value
            return out

        return Transformation(self.src, self.tgt, g, self.name)


class TruncatedSimplicialCat:
    """Levels ``X_0 .. X_N`` with faces ``d_i: X_n -> X_(n-1)``, degeneracies
    ``s_j: X_n -> X_(n+1)`` and optional constraints ``alpha_n``.

    ``relaxed`` marks structures in which the top face relation
    ``d_(n-1) d_n = d_(n-1) d_(n-1)`` is only required up to ``alpha_n``.
    """

    def __init__(self, levels, faces, degeneracies, alpha=None, relaxed=True, name=""):
        self.levels = list(levels)
        self.faces = dict(faces)
        self.degeneracies = dict(degeneracies)
        self.alpha = dict(alpha or {})
        self.relaxed = relaxed
        self.name = name

    @property
    def N(self):
        return len(self.levels) - 1

    def d(self, n, i) -> Op:
        return self.faces[(n, i)]

    def s(self, n, j) -> Op:
        return self.degeneracies[(n, j)]

    def replace(self, **kw):
        args = dict(levels=self.levels, faces=self.faces, degeneracies=self.degeneracies, alpha=self.alpha,
                    relaxed=self.relaxed, name=self.name)
        args.update(kw)
        return TruncatedSimplicialCat(**args)


__all__ = ["DiagramLevel", "TableLevel", "Op", "Transformation", "TruncatedSimplicialCat", "is_terminal_level",
           "terminal_level", "isomorphism_mask", "default_cap", "tabulate"]


def tabulate(x: TruncatedSimplicialCat, name=None) -> TruncatedSimplicialCat:
    """The same structure with every level materialized as an explicit
    category and every operator as a table."""
    cats = [L.as_category() for L in x.levels]
    tl = [TableLevel(c, name=L.name) for c, L in zip(cats, x.levels)]

    def conv(key, op, shift):
        F = op.as_functor()
        return Op.from_functor(F, tl[key[0]], tl[key[0] + shift], name=op.name)

    fcs = {k: conv(k, op, -1) for k, op in x.faces.items()}
    dgs = {k: conv(k, op, 1) for k, op in x.degeneracies.items()}
    alpha = {}
    for n, a in x.alpha.items():
        S, T = x.levels[n], x.levels[n - 2]
        comps = _lookup(T, cats[n - 2], a.at(_obj_rows(S, cats[n])), objects=False)
        if np.any(comps < 0):
            raise ValueError(f"alpha{n} has components outside level {n - 2}")
        alpha[n] = Transformation(tl[n], tl[n - 2], lambda X, c=comps: c[X[:, 0]][:, None], a.name)
    return TruncatedSimplicialCat(tl, fcs, dgs, alpha=alpha, relaxed=x.relaxed, name=name or x.name)
