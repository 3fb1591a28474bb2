"""The spindle embedding of chains into cubes, the spine restriction, and the
bar-construction operators of a lax algebra on cube decorations."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..arrow import cubes
from ..core.category import FinCategory
from ..core.diagrams import (arrow_shape, chain, cube, enumerate_homs, is_diagram, lift, reindex_cols)
from ..core.category import ResourceLimit
from ..report import SKIPPED, LawReport
from .levels import DiagramLevel, Op

# objects per batch when generating morphisms; a cube of FinVect2 has
# thousands of single-vertex morphisms out of it
OBJECT_BATCH = 256
from .nerve import nerve_degeneracy, nerve_face


def p_of(v) -> int:
    """Largest 1-based position holding a 1 (0 for the bottom vertex)."""
    ones = [i + 1 for i, e in enumerate(v) if e == 1]
    return max(ones) if ones else 0


def iota(n: int, k: int):
    """The spine vertex ``1^k 0^(n-k)``."""
    return (1,) * k + (0,) * (n - k)


@lru_cache(maxsize=None)
def spindle_cols(n: int):
    return reindex_cols(cube(n), chain(n), p_of)


@lru_cache(maxsize=None)
def spine_cols(n: int):
    return reindex_cols(chain(n), cube(n), lambda k: iota(n, k))


@lru_cache(maxsize=None)
def _spindle_mor_cols(n: int):
    return reindex_cols(arrow_shape(cube(n)), arrow_shape(chain(n)), lift(cube(n), chain(n), p_of))


@lru_cache(maxsize=None)
def _spine_mor_cols(n: int):
    return reindex_cols(arrow_shape(chain(n)), arrow_shape(cube(n)), lift(chain(n), cube(n), lambda k: iota(n, k)))


def spindle_rows(rows, n):
    return np.asarray(rows)[:, spindle_cols(n)]


def spine_rows(rows, n):
    return np.asarray(rows)[:, spine_cols(n)]


@dataclass
class SpindleData:
    """A chain together with its decorated cube."""

    n: int
    category: FinCategory
    chain: np.ndarray
    cube: np.ndarray
    p_map: dict = field(default_factory=dict)

    def decoration(self) -> dict:
        """Vertex -> object id."""
        C, P = self.category, cube(self.n)
        return {v: C.objects[int(C.dom[self.cube[P.col(v, v)]])] for v in P.vertices}

    def edge(self, v, w) -> str:
        return self.category.morphisms[int(self.cube[cube(self.n).col(tuple(v), tuple(w))])]


def chain_row(c: FinCategory, arrows) -> np.ndarray:
    """A row of ``N_n(C)`` from a list of composable morphism ids, or an object id."""
    if isinstance(arrows, str):
        return np.array([c.identity[c.obj(arrows)]], dtype=np.int64)
    ms = [c.mor(a) if isinstance(a, str) else int(a) for a in arrows]
    for f, g in zip(ms, ms[1:]):
        if c.cod[f] != c.dom[g]:
            raise ValueError(f"{c.morphisms[f]} and {c.morphisms[g]} are not composable")
    n = len(ms)
    P = chain(n)
    T = c.table()
    objs = [int(c.dom[ms[0]])] + [int(c.cod[m]) for m in ms]
    row = np.empty(P.n_pairs, dtype=np.int64)
    for t, (i, j) in enumerate(P.pairs):
        m = int(c.identity[objs[i]])
        for k in range(i, j):
            m = int(T[ms[k], m])
        row[t] = m
    return row


def spindle(c: FinCategory, chain_data, n=None) -> SpindleData:
    """``spindle_n`` of a chain (a row, a list of arrow ids, or an object id)."""
    row = np.asarray(chain_data) if isinstance(chain_data, np.ndarray) else chain_row(c, chain_data)
    if n is None:
        n = next(k for k in range(8) if chain(k).n_pairs == len(row))
    if not is_diagram(chain(n), c, row[None, :])[0]:
        raise ValueError("not a chain of composable arrows")
    cb = spindle_rows(row[None, :], n)[0]
    return SpindleData(n, c, row, cb, {v: p_of(v) for v in cube(n).vertices})


def spine(c: FinCategory, cube_row, n: int) -> np.ndarray:
    """``R_n``: restriction of a cube decoration to its spine."""
    cube_row = np.asarray(cube_row)
    if not is_diagram(cube(n), c, cube_row[None, :])[0]:
        raise ValueError("cube decoration does not commute")
    return spine_rows(cube_row[None, :], n)[0]


def spindle_op(c: FinCategory, n: int, cap=None) -> Op:
    return Op.reindex(DiagramLevel(chain(n), c, cap=cap), DiagramLevel(cube(n), c, cap=cap), p_of,
                      name=f"spindle{n}")


def spine_op(c: FinCategory, n: int, cap=None) -> Op:
    return Op.reindex(DiagramLevel(cube(n), c, cap=cap), DiagramLevel(chain(n), c, cap=cap),
                      lambda k: iota(n, k), name=f"R{n}")


def spindle_hom_iso_check(c: FinCategory, X, Y, n: int):
    """``[X, spindle(Y)] = [R(X), Y]`` via restriction to the spine.

    ``X`` is a cube decoration over ``2^n``, ``Y`` a chain row. Returns
    ``(ok, |left|, |right|)``.
    """
    if n > 2:
        raise ValueError("hom-set enumeration is limited to n <= 2")
    X, Y = np.asarray(X), np.asarray(Y)
    left = enumerate_homs(cube(n), c, X, spindle_rows(Y[None, :], n)[0])
    right = enumerate_homs(chain(n), c, spine_rows(X[None, :], n)[0], Y)
    # components are per vertex; restriction picks the spine vertices
    P = cube(n)
    idx = [P.index[iota(n, k)] for k in range(n + 1)]
    restricted = left[:, idx]
    as_set = {tuple(r) for r in restricted.tolist()}
    ok = len(as_set) == len(restricted) and as_set == {tuple(r) for r in right.tolist()}
    return ok, len(left), len(right)


# -- bar operators ------------------------------------------------------

class BarOperators:
    """The operators of the bar construction on ``A^n(C)`` for one ``n``.

    ``d[i]`` for ``0 <= i <= n`` and ``s[j]`` for ``0 <= j <= n`` act on
    objects (cube rows over ``2^n``) and morphisms (rows over ``2^(n+1)``);
    ``d_aux``/``s_aux`` are the target and identity operators.
    """

    def __init__(self, lax, n: int, cap=None):
        self.lax = lax
        self.n = n
        C = lax.category
        self.levels = {k: DiagramLevel(cube(k), C, name=f"A^{k}({C.name})", cap=cap) for k in
                       range(max(n - 1, 0), n + 2)}
        self.d = {i: self._face(i) for i in range(n + 1)} if n >= 1 else {}
        self.s = {j: self._degeneracy(j) for j in range(n + 1)}
        self.d_aux = self._target() if n >= 1 else None
        self.s_aux = Op(self.levels[n], self.levels[n + 1], lambda X: cubes.degen(X, n, 0),
                        lambda M: cubes.degen(M, n + 1, 1), name="s-1")

    def _face(self, i):
        n, lax = self.n, self.lax
        src, tgt = self.levels[n], self.levels[n - 1]
        if i < n:
            return Op(src, tgt, lambda X: cubes.face(X, n, i, 0), lambda M: cubes.face(M, n + 1, i + 1, 0),
                      name=f"dA{i}")
        return Op(src, tgt, lambda X: cubes.kernel_inner(lax, X, n), lambda M: cubes.kernel_inner(lax, M, n + 1),
                  name=f"dA{n}")

    def _degeneracy(self, j):
        n, p = self.n, self.lax.pointed
        src, tgt = self.levels[n], self.levels[n + 1]
        if j < n:
            return Op(src, tgt, lambda X: cubes.diag(X, n, j), lambda M: cubes.diag(M, n + 1, j + 1),
                      name=f"sA{j}")
        return Op(src, tgt, lambda X: cubes.beta_inner(p, X, n), lambda M: cubes.beta_inner(p, M, n + 1),
                  name=f"sA{n}")

    def _target(self):
        n = self.n
        return Op(self.levels[n], self.levels[n - 1], lambda X: cubes.face(X, n, 0, 1),
                  lambda M: cubes.face(M, n + 1, 1, 1), name="d-1")

    def alpha(self, X):
        """``alpha^A_n = A^(n-2) phi`` at cube rows over ``2^n`` (n >= 2)."""
        return cubes.phi_inner(self.lax, X, self.n - 2)


def bar_operators(lax, n: int, cap=None) -> BarOperators:
    return BarOperators(lax, n, cap)


def _first_diff(a, b):
    bad = np.nonzero(np.any(a != b, axis=1))[0] if a.shape == b.shape else np.arange(len(a))
    return None if len(bad) == 0 else int(bad[0])


def _apply(ops, A, what):
    for op in ops:
        A = op.obj(A) if what == "objects" else op.mor(A)
    return A


def _compare(rep, law, level, Xs, lhs, rhs, batch=OBJECT_BATCH):
    """Record ``lhs = rhs`` (lists of operators, applied left to right) on
    objects and generating morphisms of ``level``. Generators are built a
    chunk of objects at a time to bound memory."""
    k = _first_diff(_apply(lhs, Xs, "objects"), _apply(rhs, Xs, "objects"))
    rep.record(f"{law} objects", None if k is None else _name(level, Xs[k], "objects"))
    fail = None
    for start in range(0, len(Xs), batch):
        Ms = level.generators(Xs[start:start + batch])
        k = _first_diff(_apply(lhs, Ms, "morphisms"), _apply(rhs, Ms, "morphisms"))
        if k is not None:
            fail = _name(level, Ms[k], "morphisms")
            break
    rep.record(f"{law} morphisms", fail)


def check_bar_relations(lax, n_max: int = 3, cap=None) -> LawReport:
    """The relations of the target/identity operators with the bar operators,
    and the restrictions ``d_i = R d^A_(i-1) spindle``, ``s_i = R s^A_(i-1)
    spindle`` (``1 <= i <= n``) together with ``d_0``, ``s_0`` from the
    auxiliary operators."""
    C = lax.category
    rep = LawReport(f"bar operators on {C.name}")
    bars = {n: bar_operators(lax, n, cap) for n in range(0, n_max + 2)}
    for n in range(0, n_max + 1):
        B, Bp = bars[n], bars[n + 1]
        L = B.levels[n]
        try:
            Xc = L.objects()
        except ResourceLimit:
            # A^n itself is too large; use the cubes coming from chains
            Xc = spindle_op(C, n, cap).obj(DiagramLevel(chain(n), C, cap=cap).objects())
            rep.add(f"A^{n} enumeration", SKIPPED, note="relations checked on spindle images only")
        if n >= 2:
            _compare(rep, f"dA{n - 1} d-1 = d-1 dA{n} on A^{n}", L, Xc,
                     [B.d_aux, bars[n - 1].d[n - 1]], [B.d[n], bars[n - 1].d_aux])
        if n >= 1:
            _compare(rep, f"dA{n + 1} s-1 = s-1 dA{n} on A^{n}", L, Xc,
                     [B.s_aux, Bp.d[n + 1]], [B.d[n], bars[n - 1].s_aux])
        _compare(rep, f"sA{n + 1} s-1 = s-1 sA{n} on A^{n}", L, Xc,
                 [B.s_aux, Bp.s[n + 1]], [B.s[n], Bp.s_aux])
    for n in range(0, n_max + 1):
        L = DiagramLevel(chain(n), C, cap=cap)
        Y = L.objects()
        sp = spindle_op(C, n, cap)
        for i in range(0, n + 1):
            if n >= 1:
                op = bars[n].d[i - 1] if i >= 1 else bars[n].d_aux
                label = f"d{i} = R dA{i - 1} spindle" if i >= 1 else "d0 = R d-1 spindle"
                _compare(rep, f"{label} on N_{n}", L, Y, [nerve_face(L, i)], [sp, op, spine_op(C, n - 1, cap)])
            op = bars[n].s[i - 1] if i >= 1 else bars[n].s_aux
            label = f"s{i} = R sA{i - 1} spindle" if i >= 1 else "s0 = R s-1 spindle"
            _compare(rep, f"{label} on N_{n}", L, Y, [nerve_degeneracy(L, i)], [sp, op, spine_op(C, n + 1, cap)])
    return rep


def _name(level, row, what):
    return level.obj_name(row) if what == "objects" else level.mor_name(row)


__all__ = ["p_of", "iota", "SpindleData", "spindle", "spine", "spindle_rows", "spine_rows", "spindle_op",
           "spine_op", "chain_row", "spindle_hom_iso_check", "BarOperators", "bar_operators",
           "check_bar_relations"]
