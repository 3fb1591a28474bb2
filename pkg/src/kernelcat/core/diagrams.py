"""Diagrams over finite posets, stored as integer rows.

A diagram ``X: P -> C`` is a row holding one morphism index of ``C`` per
comparable pair ``v <= w`` of ``P`` (identities on the diagonal, composites
everywhere else). Batches of diagrams are 2-D arrays, so reindexing along a
monotone map is a column gather and most functors used by the package act on
thousands of diagrams per numpy call.

A morphism of ``[P, C]`` is a diagram over ``2 x P`` whose first coordinate is
the direction of the morphism; for cubes ``2 x 2^n`` is identified with
``2^(n+1)``, so morphisms of the n-fold arrow category are objects of the
(n+1)-fold one.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .category import FinCategory, ResourceLimit, default_cap


class Poset:
    """Finite poset whose vertex list is a linear extension of the order."""

    def __init__(self, vertices, leq, name, kind="poset", base=None, n=None):
        self.vertices = list(vertices)
        self.name = name
        self.kind = kind
        self.base = base
        self.n = n
        k = len(self.vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        L = np.array([[bool(leq(v, w)) for w in self.vertices] for v in self.vertices], dtype=bool).reshape(k, k)
        for i in range(k):
            for j in range(i):
                if L[i, j]:
                    raise ValueError(f"vertex order of {name} is not a linear extension")
        self.leq = L
        self.pairs = [(i, j) for i in range(k) for j in range(k) if L[i, j]]
        self.pair_index = {p: t for t, p in enumerate(self.pairs)}
        self.id_cols = np.array([self.pair_index[(i, i)] for i in range(k)], dtype=np.int64)
        below = [[i for i in range(k) if L[i, j] and i != j] for j in range(k)]
        self.below = below
        self.lower_covers = [
            [i for i in below[j] if not any(L[i, m] and L[m, j] and m not in (i, j) for m in range(k))]
            for j in range(k)
        ]
        self.covers = [(i, j) for j in range(k) for i in self.lower_covers[j]]
        self.cover_cols = np.array([self.pair_index[c] for c in self.covers], dtype=np.int64)

    def __len__(self):
        return len(self.vertices)

    @property
    def n_pairs(self):
        return len(self.pairs)

    def __repr__(self):
        return f"Poset({self.name})"

    # -- morphism shape ------------------------------------------------
    def arrow_vertex(self, b, v):
        if self.kind == "cube":
            return (b,) + tuple(v)
        return (b, v)

    def arrow_split(self, w):
        if self.kind == "cube":
            return w[0], tuple(w[1:])
        return w

    def col(self, v, w):
        return self.pair_index[(self.index[v], self.index[w])]


@lru_cache(maxsize=None)
def cube(n: int) -> Poset:
    verts = list(itertools.product((0, 1), repeat=n))
    return Poset(verts, lambda v, w: all(a <= b for a, b in zip(v, w)), f"2^{n}", kind="cube", n=n)


@lru_cache(maxsize=None)
def chain(n: int) -> Poset:
    """The ordinal ``[n] = {0 < 1 < ... < n}``; ``chain(-1)`` is empty."""
    return Poset(list(range(n + 1)), lambda v, w: v <= w, f"[{n}]", kind="chain", n=n)


def product_poset(P: Poset, Q: Poset, name=None) -> Poset:
    verts = [(p, q) for p in P.vertices for q in Q.vertices]

    def leq(x, y):
        return P.leq[P.index[x[0]], P.index[y[0]]] and Q.leq[Q.index[x[1]], Q.index[y[1]]]

    return Poset(verts, leq, name or f"{P.name}x{Q.name}", kind="product", base=(P, Q))


@lru_cache(maxsize=None)
def arrow_shape(P: Poset) -> Poset:
    """``2 x P`` with the new coordinate first (flattened for cubes)."""
    if P.kind == "cube":
        return cube(P.n + 1)
    verts = [(b, v) for b in (0, 1) for v in P.vertices]

    def leq(x, y):
        return x[0] <= y[0] and P.leq[P.index[x[1]], P.index[y[1]]]

    return Poset(verts, leq, f"2x{P.name}", kind="arrow", base=P)


@lru_cache(maxsize=None)
def composable_shape(P: Poset) -> Poset:
    """``[2] x P``: a composable pair of morphisms of ``[P, C]``."""
    verts = [(t, v) for t in (0, 1, 2) for v in P.vertices]

    def leq(x, y):
        return x[0] <= y[0] and P.leq[P.index[x[1]], P.index[y[1]]]

    return Poset(verts, leq, f"[2]x{P.name}", kind="composable", base=P)


def reindex_cols(P: Poset, Q: Poset, r) -> np.ndarray:
    """Column gather realizing ``X |-> X . r`` for monotone ``r: P -> Q``."""
    out = []
    for i, j in P.pairs:
        a, b = Q.index[r(P.vertices[i])], Q.index[r(P.vertices[j])]
        if (a, b) not in Q.pair_index:
            raise ValueError(f"map {P.name} -> {Q.name} is not monotone")
        out.append(Q.pair_index[(a, b)])
    return np.array(out, dtype=np.int64)


def lift(P: Poset, Q: Poset, r):
    """``id_2 x r``, as a vertex map ``arrow_shape(P) -> arrow_shape(Q)``."""

    def rr(w):
        b, v = P.arrow_split(w)
        return Q.arrow_vertex(b, r(v))

    return rr


@lru_cache(maxsize=None)
def morphism_layout(P: Poset):
    """Index arrays describing how a morphism row of ``[P, C]`` is laid out.

    Returns ``(src, tgt, kind, pcol, diag)``: source/target face columns (per
    pair of P), and for every pair of the arrow shape its kind (0 inside the
    source, 1 inside the target, 2 crossing), the pair of P it lies over and,
    for crossing pairs, the column of the component at the upper vertex.
    """
    A = arrow_shape(P)
    src = np.array([A.col(P.arrow_vertex(0, P.vertices[i]), P.arrow_vertex(0, P.vertices[j])) for i, j in P.pairs])
    tgt = np.array([A.col(P.arrow_vertex(1, P.vertices[i]), P.arrow_vertex(1, P.vertices[j])) for i, j in P.pairs])
    kind, pcol, diag = [], [], []
    for x, y in A.pairs:
        b1, v = P.arrow_split(A.vertices[x])
        b2, w = P.arrow_split(A.vertices[y])
        kind.append(0 if b2 == 0 else (1 if b1 == 1 else 2))
        pcol.append(P.col(v, w))
        diag.append(A.col(P.arrow_vertex(0, w), P.arrow_vertex(1, w)))
    comp_cols = np.array([A.col(P.arrow_vertex(0, v), P.arrow_vertex(1, v)) for v in P.vertices], dtype=np.int64)
    return (src.astype(np.int64), tgt.astype(np.int64), np.array(kind), np.array(pcol, dtype=np.int64),
            np.array(diag, dtype=np.int64), comp_cols)


# -- vectorized diagram operations --------------------------------------

def vertex_objects(P: Poset, C: FinCategory, rows: np.ndarray) -> np.ndarray:
    return C.dom[rows[:, P.id_cols]]


def is_diagram(P: Poset, C: FinCategory, rows: np.ndarray) -> np.ndarray:
    """Boolean mask of rows that are genuine functors ``P -> C``."""
    rows = np.atleast_2d(rows)
    T = C.table()
    ok = np.ones(len(rows), dtype=bool)
    if rows.shape[1] != P.n_pairs:
        return np.zeros(len(rows), dtype=bool)
    if np.any(rows < 0) or np.any(rows >= C.n_mor):
        inside = np.all((rows >= 0) & (rows < C.n_mor), axis=1)
        ok &= inside
        rows = np.where(inside[:, None], rows, 0)
    idm = rows[:, P.id_cols]
    objs = C.dom[idm]
    ok &= np.all(C.identity[objs] == idm, axis=1)
    for t, (i, j) in enumerate(P.pairs):
        ok &= (C.dom[rows[:, t]] == objs[:, i]) & (C.cod[rows[:, t]] == objs[:, j])
    for j in range(len(P)):
        for w in P.lower_covers[j]:
            for u in P.below[w]:
                ok &= T[rows[:, P.pair_index[(w, j)]], rows[:, P.pair_index[(u, w)]]] == rows[:, P.pair_index[(u, j)]]
    return ok


def identity_morphisms(P: Poset, rows: np.ndarray) -> np.ndarray:
    A = arrow_shape(P)
    cols = reindex_cols(A, P, lambda w: P.arrow_split(w)[1])
    return rows[:, cols]


def faces(P: Poset, mrows: np.ndarray):
    src, tgt, *_ = morphism_layout(P)
    return mrows[:, src], mrows[:, tgt]


def components(P: Poset, mrows: np.ndarray) -> np.ndarray:
    return mrows[:, morphism_layout(P)[5]]


def assemble_morphisms(P: Poset, C: FinCategory, X: np.ndarray, Y: np.ndarray, comps: np.ndarray) -> np.ndarray:
    """Morphism rows from source rows, target rows and per-vertex components."""
    _, _, kind, pcol, _, _ = morphism_layout(P)
    T = C.table()
    A = arrow_shape(P)
    out = np.empty((len(X), A.n_pairs), dtype=np.int64)
    for t in range(A.n_pairs):
        k = kind[t]
        if k == 0:
            out[:, t] = X[:, pcol[t]]
        elif k == 1:
            out[:, t] = Y[:, pcol[t]]
        else:
            i, _ = P.pairs[pcol[t]]
            out[:, t] = T[Y[:, pcol[t]], comps[:, i]]
    return out


def compose_morphisms(P: Poset, C: FinCategory, G: np.ndarray, F: np.ndarray) -> np.ndarray:
    """Vertical composite ``G . F`` of morphism rows (target of F = source of G)."""
    _, _, kind, _, diag, _ = morphism_layout(P)
    T = C.table()
    out = np.empty_like(F)
    for t in range(F.shape[1]):
        k = kind[t]
        if k == 0:
            out[:, t] = F[:, t]
        elif k == 1:
            out[:, t] = G[:, t]
        else:
            out[:, t] = T[G[:, diag[t]], F[:, t]]
    return out


class _Padded:
    """Hom-sets of a category as padded arrays for vectorized expansion."""

    def __init__(self, C: FinCategory):
        n = C.n_obj
        homs = C.homs()
        width = max([len(v) for v in homs.values()] + [1])
        self.hom = np.full((n, n, width), -1, dtype=np.int64)
        self.hom_n = np.zeros((n, n), dtype=np.int64)
        for (a, b), ms in homs.items():
            self.hom[a, b, :len(ms)] = ms
            self.hom_n[a, b] = len(ms)
        outs = [[m for m in range(C.n_mor) if C.dom[m] == a] for a in range(n)]
        w2 = max([len(o) for o in outs] + [1])
        self.out = np.full((n, w2), -1, dtype=np.int64)
        self.out_n = np.array([len(o) for o in outs], dtype=np.int64)
        for a, o in enumerate(outs):
            self.out[a, :len(o)] = o


_PADDED = {}


def padded(C: FinCategory) -> _Padded:
    key = id(C)
    hit = _PADDED.get(key)
    if hit is None or hit[0] is not C:
        hit = (C, _Padded(C))
        _PADDED[key] = hit
    return hit[1]


def _expand(rows, table, keys, counts, limit=None, what=""):
    """Repeat each row once per valid choice; return (rows, chosen values).

    The choices for row r are ``table[keys[0][r], ..., keys[-1][r], :counts[r]]``.
    """
    counts = np.asarray(counts)
    if limit is not None and counts.sum() > limit:
        raise ResourceLimit(what, f">{int(counts.sum())}", limit)
    rep = np.repeat(np.arange(len(rows)), counts)
    offs = np.arange(len(rep)) - np.repeat(np.cumsum(counts) - counts, counts)
    return rows[rep], table[tuple(k[rep] for k in keys) + (offs,)]


def enumerate_diagrams(P: Poset, C: FinCategory, cap=None, what=None) -> np.ndarray:
    """All functors ``P -> C`` as rows, in a deterministic order."""
    cap = default_cap() if cap is None else cap
    T = C.table()
    pad = padded(C)
    label = what or f"diagrams {P.name} -> {C.name}"
    limit = max(50 * max(cap, 1), 10**6)
    rows = np.zeros((1, P.n_pairs), dtype=np.int64)
    for v in range(len(P)):
        lc = P.lower_covers[v]
        vv = P.pair_index[(v, v)]
        if not lc:
            nb = len(rows)
            rows = np.repeat(rows, C.n_obj, axis=0)
            rows[:, vv] = np.tile(C.identity, nb)
        else:
            u1 = lc[0]
            a = C.dom[rows[:, P.pair_index[(u1, u1)]]]
            rows, m = _expand(rows, pad.out, (a,), pad.out_n[a], limit, label)
            rows[:, P.pair_index[(u1, v)]] = m
            o = C.cod[m]
            rows[:, vv] = C.identity[o]
            for u in lc[1:]:
                a = C.dom[rows[:, P.pair_index[(u, u)]]]
                o = C.cod[rows[:, vv]]
                rows, m = _expand(rows, pad.hom, (a, o), pad.hom_n[a, o], limit, label)
                rows[:, P.pair_index[(u, v)]] = m
            ok = np.ones(len(rows), dtype=bool)
            done = set(lc)
            for u in sorted(P.below[v], reverse=True):
                if u in lc:
                    continue
                for w in lc:
                    if not P.leq[u, w]:
                        continue
                    val = T[rows[:, P.pair_index[(w, v)]], rows[:, P.pair_index[(u, w)]]]
                    if u in done:
                        ok &= rows[:, P.pair_index[(u, v)]] == val
                    else:
                        rows[:, P.pair_index[(u, v)]] = val
                        done.add(u)
            rows = rows[ok]
        if len(rows) > 50 * max(cap, 1) and len(rows) > 10**6:
            raise ResourceLimit(what or f"diagrams {P.name} -> {C.name}", f">{len(rows)}", cap)
    if len(rows) > cap:
        raise ResourceLimit(what or f"diagrams {P.name} -> {C.name}", len(rows), cap)
    return rows


def enumerate_homs(P: Poset, C: FinCategory, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Components (one column per vertex) of all natural transformations X => Y."""
    T = C.table()
    pad = padded(C)
    xo = C.dom[X[P.id_cols]]
    yo = C.dom[Y[P.id_cols]]
    comps = np.zeros((1, len(P)), dtype=np.int64)
    for v in range(len(P)):
        hs = pad.hom[xo[v], yo[v], :pad.hom_n[xo[v], yo[v]]]
        nb = len(comps)
        comps = np.repeat(comps, len(hs), axis=0)
        comps[:, v] = np.tile(hs, nb)
        ok = np.ones(len(comps), dtype=bool)
        for u in P.lower_covers[v]:
            c = P.pair_index[(u, v)]
            ok &= T[Y[c], comps[:, u]] == T[comps[:, v], X[c]]
        comps = comps[ok]
    return comps


class RowIndex:
    """Exact lookup of integer rows (``-1`` for rows not in the index)."""

    def __init__(self, rows: np.ndarray):
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        self.width = rows.shape[1]
        self._dt = np.dtype((np.void, 8 * max(self.width, 1)))
        keys = self._keys(rows)
        self.order = np.argsort(keys, kind="stable")
        self.sorted = keys[self.order]
        if len(keys) > 1 and np.any(self.sorted[1:] == self.sorted[:-1]):
            raise ValueError("duplicate rows in index")

    def _keys(self, rows):
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        if self.width == 0:
            rows = np.zeros((len(rows), 1), dtype=np.int64)
        return rows.view(self._dt).ravel()

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(rows)
        if len(self.sorted) == 0:
            return np.full(len(rows), -1, dtype=np.int64)
        keys = self._keys(rows)
        pos = np.searchsorted(self.sorted, keys)
        pos = np.minimum(pos, len(self.sorted) - 1)
        hit = self.sorted[pos] == keys
        return np.where(hit, self.order[pos], -1)

    def __len__(self):
        return len(self.sorted)


def diagram_name(P: Poset, C: FinCategory, row) -> str:
    if len(P) == 0:
        return "*"
    if len(P) == 1:
        return C.objects[int(C.dom[row[0]])]
    edges = [C.morphisms[int(row[c])] for c in P.cover_cols]
    if len(edges) == 1:
        return edges[0]
    return "[" + ",".join(edges) + "]"


class DiagramCategory:
    """The functor category ``[P, C]`` with enumerated objects and morphisms."""

    def __init__(self, P: Poset, C: FinCategory, cap=None):
        self.P = P
        self.C = C
        self.cap = default_cap() if cap is None else cap
        self._obj = None
        self._mor = None

    def object_rows(self):
        if self._obj is None:
            self._obj = enumerate_diagrams(self.P, self.C, self.cap, what=f"objects of [{self.P.name}, {self.C.name}]")
        return self._obj

    def morphism_rows(self):
        if self._mor is None:
            self._mor = enumerate_diagrams(arrow_shape(self.P), self.C, self.cap,
                                           what=f"morphisms of [{self.P.name}, {self.C.name}]")
        return self._mor

    def materialize(self, name=None, obj_names=None) -> FinCategory:
        P, C = self.P, self.C
        X = self.object_rows()
        Mr = self.morphism_rows()
        oidx = RowIndex(X)
        src, tgt = faces(P, Mr)
        dom = oidx.lookup(src)
        cod = oidx.lookup(tgt)
        midx = RowIndex(Mr)
        ident = midx.lookup(identity_morphisms(P, X))
        onames = obj_names or [diagram_name(P, C, r) for r in X]
        comps = components(P, Mr)
        mnames = ["(" + ",".join(C.morphisms[int(c)] for c in comp) + "):" + onames[d] + "->" + onames[e]
                  for comp, d, e in zip(comps, dom, cod)]
        comp = {}
        by_dom = {}
        for m in range(len(Mr)):
            by_dom.setdefault(int(dom[m]), []).append(m)
        fs, gs = [], []
        for f in range(len(Mr)):
            for g in by_dom.get(int(cod[f]), ()):
                fs.append(f)
                gs.append(g)
        if fs:
            fs_a, gs_a = np.array(fs), np.array(gs)
            gf = midx.lookup(compose_morphisms(P, C, Mr[gs_a], Mr[fs_a]))
            comp = dict(zip(zip(gs, fs), gf.tolist()))
        cat = FinCategory(onames, mnames, dom, cod, ident, comp, name=name or f"[{P.name},{C.name}]")
        cat.rows = X
        cat.morphism_rows = Mr
        cat.shape = P
        cat.base = C
        return cat


def single_vertex_morphisms(P: Poset, C: FinCategory, X: np.ndarray, vertices=None):
    """Morphisms out of the diagrams ``X`` that are identities at every vertex but one.

    Every morphism of ``[P, C]`` is a composite of such morphisms (change the
    vertices one at a time, from the top of the linear extension down), so they
    generate ``[P, C]`` and suffice for checking equalities of functors and
    naturality. Returns ``(source index, vertex, morphism rows)``.
    """
    T = C.table()
    pad = padded(C)
    k = len(P)
    upper = [[w for w in range(k) if v in P.lower_covers[w]] for v in range(k)]
    src_all, vert_all, rows_all = [], [], []
    base = np.arange(len(X))
    for v in (range(k) if vertices is None else vertices):
        a = C.dom[X[:, P.id_cols[v]]]
        idx, m = _expand(base, pad.out, (a,), pad.out_n[a])
        Y = X[idx].copy()
        Y[:, P.id_cols[v]] = C.identity[C.cod[m]]
        for u in P.below[v]:
            c = P.pair_index[(u, v)]
            Y[:, c] = T[m, X[idx, c]]
        ok = np.ones(len(Y), dtype=bool)
        todo = sorted(w for w in range(k) if P.leq[v, w] and w != v)
        for w in todo:
            c = P.pair_index[(v, w)]
            if w in upper[v]:
                # choose y: cod m -> X(w) with y m = X(v -> w)
                o = C.cod[m]
                tw = C.dom[X[idx, P.id_cols[w]]]
                Yi = np.arange(len(Y))
                Yi, y = _expand(Yi, pad.hom, (o, tw), pad.hom_n[o, tw])
                idx, m, Y, ok = idx[Yi], m[Yi], Y[Yi], ok[Yi]
                Y[:, c] = y
                ok &= T[y, m] == X[idx, c]
            else:
                w1 = next(x for x in upper[v] if P.leq[x, w])
                Y[:, c] = T[X[idx, P.pair_index[(w1, w)]], Y[:, P.pair_index[(v, w1)]]]
                for w2 in upper[v]:
                    if P.leq[w2, w]:
                        ok &= T[X[idx, P.pair_index[(w2, w)]], Y[:, P.pair_index[(v, w2)]]] == Y[:, c]
        idx, m, Y = idx[ok], m[ok], Y[ok]
        comps = C.identity[C.dom[X[idx][:, P.id_cols]]]
        comps[:, v] = m
        src_all.append(idx)
        vert_all.append(np.full(len(idx), v))
        rows_all.append(assemble_morphisms(P, C, X[idx], Y, comps))
    width = arrow_shape(P).n_pairs
    if not rows_all:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros((0, width), dtype=np.int64)
    return np.concatenate(src_all), np.concatenate(vert_all), np.concatenate(rows_all)
