"""The arrow category A(C) = [2, C] and the arrow comonad (A, delta, eps)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core.category import FinCategory, LazyComposition, default_cap
from ..core.diagrams import cube, enumerate_diagrams
from ..core.functor import Functor, NatTransformation
from . import cubes

# columns of f, g, h0, h1 in a square row (a diagram over 2^2, coordinate 0 = morphism direction)
_Q = cube(2)
SQ_F = _Q.col((0, 0), (0, 1))
SQ_G = _Q.col((1, 0), (1, 1))
SQ_H0 = _Q.col((0, 0), (1, 0))
SQ_H1 = _Q.col((0, 1), (1, 1))
SQ_DIAG = _Q.col((0, 0), (1, 1))


def square_rows(C: FinCategory, f, g, h0, h1) -> np.ndarray:
    """Square rows from their four edges (the diagonal is computed)."""
    T = C.table()
    f, g, h0, h1 = (np.asarray(x, dtype=np.int64) for x in (f, g, h0, h1))
    out = np.empty((f.size, _Q.n_pairs), dtype=np.int64)
    a, b, c, d = C.dom[f], C.cod[f], C.dom[g], C.cod[g]
    for t, (i, j) in enumerate(_Q.pairs):
        if i == j:
            out[:, t] = C.identity[(a, b, c, d)[i]]
    out[:, SQ_F], out[:, SQ_G], out[:, SQ_H0], out[:, SQ_H1] = f, g, h0, h1
    out[:, SQ_DIAG] = T[g, h0]
    return out


def arrow_rows(C: FinCategory, fs) -> np.ndarray:
    """Arrows as diagrams over 2^1: ``(1_a, f, 1_b)``."""
    fs = np.asarray(fs, dtype=np.int64)
    return np.stack([C.identity[C.dom[fs]], fs, C.identity[C.cod[fs]]], axis=1)


class ArrowCategory:
    """``A(C)``: objects are the morphisms of C (same ids, same order) and
    morphisms are commuting squares ``(h0, h1): f -> g``, ordered by
    ``(f, g, h0, h1)``."""

    def __init__(self, base: FinCategory, cap=None):
        self.base = C = base
        cap = default_cap() if cap is None else cap
        rows = enumerate_diagrams(_Q, C, cap=cap, what=f"squares of {C.name}")
        M = C.n_mor
        self._radix = M
        keys = self._key(rows[:, SQ_F], rows[:, SQ_G], rows[:, SQ_H0], rows[:, SQ_H1])
        order = np.argsort(keys, kind="stable")
        self.rows = rows[order]
        self.keys = keys[order]
        self.f = self.rows[:, SQ_F]
        self.g = self.rows[:, SQ_G]
        self.h0 = self.rows[:, SQ_H0]
        self.h1 = self.rows[:, SQ_H1]
        ms = np.arange(M)
        self.identity_square = self.square_id(ms, ms, C.identity[C.dom[ms]], C.identity[C.cod[ms]])
        mn = C.morphisms
        names = [f"({mn[a]},{mn[b]}):{mn[x]}->{mn[y]}" for a, b, x, y in zip(self.h0, self.h1, self.f, self.g)]
        self.category = FinCategory(mn, names, self.f, self.g, self.identity_square,
                                    LazyComposition(self.f, self.g, self._compose_one), name=f"A({C.name})")
        self.category.arrow = self

    def _key(self, f, g, h0, h1):
        M = self._radix
        return ((np.asarray(f, dtype=np.int64) * M + g) * M + h0) * M + h1

    @property
    def n_squares(self) -> int:
        return len(self.rows)

    def square_id(self, f, g, h0, h1) -> np.ndarray:
        """Ids of the squares with the given edges (-1 where no such square)."""
        shape = np.shape(f)
        k = self._key(f, g, h0, h1).ravel()
        pos = np.searchsorted(self.keys, k)
        pos = np.minimum(pos, len(self.keys) - 1)
        hit = self.keys[pos] == k
        bad = (np.asarray(f).ravel() < 0) | (np.asarray(g).ravel() < 0) | (np.asarray(h0).ravel() < 0) \
            | (np.asarray(h1).ravel() < 0)
        out = np.where(hit & ~bad, pos, -1)
        return out.reshape(shape)

    def ids_of_rows(self, rows) -> np.ndarray:
        rows = np.atleast_2d(rows)
        return self.square_id(rows[:, SQ_F], rows[:, SQ_G], rows[:, SQ_H0], rows[:, SQ_H1])

    def compose(self, t, s) -> np.ndarray:
        """Vectorized ``t . s`` of squares (cod s = dom t)."""
        T = self.base.table()
        t, s = np.asarray(t), np.asarray(s)
        return self.square_id(self.f[s], self.g[t], T[self.h0[t], self.h0[s]], T[self.h1[t], self.h1[s]])

    def _compose_one(self, t, s):
        return int(self.compose(np.array([t]), np.array([s]))[0])

    def composable_pairs(self):
        """All ``(s, t)`` with cod s = dom t, as two aligned arrays."""
        by_cod = np.argsort(self.g, kind="stable")
        by_dom = np.argsort(self.f, kind="stable")
        M = self.base.n_mor
        cod_start = np.searchsorted(self.g[by_cod], np.arange(M + 1))
        dom_start = np.searchsorted(self.f[by_dom], np.arange(M + 1))
        ss, ts = [], []
        for v in range(M):
            ins = by_cod[cod_start[v]:cod_start[v + 1]]
            outs = by_dom[dom_start[v]:dom_start[v + 1]]
            if len(ins) and len(outs):
                ss.append(np.repeat(ins, len(outs)))
                ts.append(np.tile(outs, len(ins)))
        if not ss:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        return np.concatenate(ss), np.concatenate(ts)


_ARROWS = {}


def build_arrow_category(c: FinCategory, cap=None) -> ArrowCategory:
    """``A(C)``; cached per category instance."""
    hit = _ARROWS.get(id(c))
    if hit is not None and hit[0] is c:
        return hit[1]
    a = ArrowCategory(c, cap)
    _ARROWS[id(c)] = (c, a)
    return a


def arrow_on_functor(F: Functor) -> Functor:
    """``A(F)``: post-composition with F."""
    AC, AD = build_arrow_category(F.source), build_arrow_category(F.target)
    mm = F.mor_map
    sq = AD.square_id(mm[AC.f], mm[AC.g], mm[AC.h0], mm[AC.h1])
    return Functor(AC.category, AD.category, mm, sq, name=f"A{F.name}", check=False)


def arrow_on_nat(w: NatTransformation) -> NatTransformation:
    """``A(w)_f = (w_a, w_b): F f -> G f``."""
    F, G = w.source, w.target
    C = F.source
    AD = build_arrow_category(F.target)
    ms = np.arange(C.n_mor)
    comps = AD.square_id(F.mor_map[ms], G.mor_map[ms], w.components[C.dom[ms]], w.components[C.cod[ms]])
    return NatTransformation(arrow_on_functor(F), arrow_on_functor(G), comps, name=f"A{w.name}", check=False)


@dataclass
class ComonadData:
    """delta and eps of the arrow comonad at C, as evaluation maps.

    Objects of ``A(C)`` are arrow ids; their images under delta are square rows
    (objects of ``A^2(C)``). Squares map under delta to cube rows over ``2^3``.
    """

    arrow: ArrowCategory

    def delta_obj(self, fs):
        return cubes.diag(arrow_rows(self.arrow.base, fs), 1, 0)

    def delta_mor(self, sq):
        return cubes.diag(self.arrow.rows[np.asarray(sq)], 2, 1)

    def epsilon_obj(self, fs):
        return self.arrow.base.dom[np.asarray(fs)]

    def epsilon_mor(self, sq):
        return self.arrow.h0[np.asarray(sq)]

    def delta_functor(self) -> Functor:
        """delta as an explicit functor into the nested ``A(A(C))``."""
        A = self.arrow
        AA = build_arrow_category(A.category)
        objs = A.ids_of_rows(self.delta_obj(np.arange(A.base.n_mor)))
        mors = nest_cube3(A, AA, self.delta_mor(np.arange(A.n_squares)))
        return Functor(A.category, AA.category, objs, mors, name="delta", check=False)

    def epsilon_functor(self) -> Functor:
        A = self.arrow
        return Functor(A.category, A.base, A.base.dom, A.h0, name="eps", check=False)


def comonad_structure(c: FinCategory) -> ComonadData:
    return ComonadData(build_arrow_category(c))


def nest_cube3(A: ArrowCategory, AA: ArrowCategory, rows3) -> np.ndarray:
    """Ids in ``A(A(C))`` of 3-cube rows (currying the outer coordinate)."""
    Q3 = cube(3)

    def sub(fix):
        cols = []
        for i, j in _Q.pairs:
            v, w = _Q.vertices[i], _Q.vertices[j]
            cols.append(Q3.col(fix(v), fix(w)))
        return A.ids_of_rows(rows3[:, cols])

    f = sub(lambda v: (0,) + v)
    g = sub(lambda v: (1,) + v)
    h0 = sub(lambda v: (v[0], 0, v[1]))
    h1 = sub(lambda v: (v[0], 1, v[1]))
    return AA.square_id(f, g, h0, h1)


def check_comonad_laws(c: FinCategory):
    """Evaluate counit and coassociativity on every object and morphism of A(C).

    Returns a list of ``(law, witness id)`` failures.
    """
    cd = comonad_structure(c)
    A = cd.arrow
    fails = []
    X1 = arrow_rows(c, np.arange(c.n_mor))
    X2 = A.rows
    for rows, n, label, names in ((X1, 1, "object", A.category.objects), (X2, 2, "morphism", A.category.morphisms)):
        s = n - 1  # shift: 0 on objects, 1 on morphisms
        d = cubes.diag(rows, n, s)
        for law, got in (("counit-left", cubes.face(d, n + 1, s, 0)), ("counit-right", cubes.face(d, n + 1, s + 1, 0))):
            bad = np.nonzero(np.any(got != rows, axis=1))[0]
            if len(bad):
                fails.append((f"{law} ({label})", names[bad[0]]))
        lhs = cubes.diag(d, n + 1, s + 1)
        rhs = cubes.diag(d, n + 1, s)
        bad = np.nonzero(np.any(lhs != rhs, axis=1))[0]
        if len(bad):
            fails.append((f"coassociativity ({label})", names[bad[0]]))
    # eps sends f to its domain and squares to h0
    if not np.array_equal(cd.epsilon_obj(np.arange(c.n_mor)), cubes.face(X1, 1, 0, 0)[:, 0] * 0 + c.dom):
        fails.append(("eps-objects", ""))
    return fails
