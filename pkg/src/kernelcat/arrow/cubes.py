"""Operators on cube decorations (objects of the iterated arrow category).

An object of ``A^n(C)`` is a diagram over the cube ``2^n``; coordinate 0 is the
outermost one. The comonad structure acts by reindexing:

* ``face(n, i, b)`` restricts coordinate ``i`` to ``b``; with ``b = 0`` this
  is ``A^i eps A^(n-i-1)``, with ``b = 1`` (and ``i = 0``) it is the target
  operator used by the bar construction.
* ``diag(n, i)`` doubles coordinate ``i`` through ``max``: ``A^i delta A^(n-i-1)``.
* ``degen(n, i)`` adds a coordinate along which nothing changes.

``beta_inner``, ``kernel_inner`` and ``phi_inner`` involve the pointed
structure or the algebra and only ever act on the innermost coordinates.

A morphism of ``A^n(C)`` is an object of ``A^(n+1)(C)``; applying an operator
to morphisms means applying it with every outer position shifted by one.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..core.diagrams import assemble_morphisms, cube, reindex_cols


@lru_cache(maxsize=None)
def face_cols(n: int, i: int, b: int) -> np.ndarray:
    return reindex_cols(cube(n - 1), cube(n), lambda v: v[:i] + (b,) + v[i:])


@lru_cache(maxsize=None)
def diag_cols(n: int, i: int) -> np.ndarray:
    return reindex_cols(cube(n + 1), cube(n), lambda w: w[:i] + (max(w[i], w[i + 1]),) + w[i + 2:])


@lru_cache(maxsize=None)
def degen_cols(n: int, i: int) -> np.ndarray:
    return reindex_cols(cube(n + 1), cube(n), lambda w: w[:i] + w[i + 1:])


def face(rows, n, i, b=0):
    return rows[:, face_cols(n, i, b)]


def diag(rows, n, i):
    return rows[:, diag_cols(n, i)]


def degen(rows, n, i):
    return rows[:, degen_cols(n, i)]


@lru_cache(maxsize=None)
def _beta_layout(n: int):
    P, Q = cube(n), cube(n + 1)
    kind, src = [], []
    for x, y in Q.pairs:
        v, w = Q.vertices[x], Q.vertices[y]
        kind.append((v[-1], w[-1]))
        src.append(P.col(v[:-1], w[:-1]))
    return kind, np.array(src, dtype=np.int64)


def beta_inner(pointed, rows, n):
    """``A^n beta``: append a coordinate along which everything goes to zero."""
    C = pointed.category
    kind, src = _beta_layout(n)
    out = np.empty((len(rows), len(kind)), dtype=np.int64)
    zid = C.identity[pointed.zero]
    for t, k in enumerate(kind):
        x = rows[:, src[t]]
        if k == (0, 0):
            out[:, t] = x
        elif k == (1, 1):
            out[:, t] = zid
        else:
            out[:, t] = pointed.bang[C.dom[x]]
    return out


@lru_cache(maxsize=None)
def _square_layout(n: int):
    """For each pair ``u <= u'`` of ``2^(n-1)``: columns of f, g, h0, h1 of the
    square formed by the innermost arrows at u and u'."""
    P, Q = cube(n - 1), cube(n)
    cols = []
    for i, j in P.pairs:
        u, w = P.vertices[i], P.vertices[j]
        cols.append((Q.col(u + (0,), u + (1,)), Q.col(w + (0,), w + (1,)),
                     Q.col(u + (0,), w + (0,)), Q.col(u + (1,), w + (1,))))
    return np.array(cols, dtype=np.int64).reshape(-1, 4)


def inner_squares(arrow, rows, n):
    """Square ids (in ``A(C)``) of the innermost squares, one column per pair of
    ``2^(n-1)``."""
    lay = _square_layout(n)
    return arrow.square_id(rows[:, lay[:, 0]], rows[:, lay[:, 1]], rows[:, lay[:, 2]], rows[:, lay[:, 3]])


def kernel_inner(lax, rows, n):
    """``A^(n-1) K``: apply the algebra map along the innermost coordinate."""
    sq = inner_squares(lax.arrow, rows, n)
    if np.any(sq < 0):
        raise ValueError("input rows are not cube decorations")
    return lax.K_mor[sq]


@lru_cache(maxsize=None)
def _phi_layout(k: int):
    """Columns f, g, h0, h1 of the innermost 2-dimensional face at each vertex
    of ``2^k`` inside ``2^(k+2)``."""
    P, Q = cube(k), cube(k + 2)
    cols = []
    for u in P.vertices:
        cols.append((Q.col(u + (0, 0), u + (0, 1)), Q.col(u + (1, 0), u + (1, 1)),
                     Q.col(u + (0, 0), u + (1, 0)), Q.col(u + (0, 1), u + (1, 1))))
    return np.array(cols, dtype=np.int64).reshape(-1, 4)


def phi_inner(lax, rows, k):
    """Components of ``A^k phi`` at objects of ``A^(k+2)(C)``.

    Returns morphism rows of ``A^k(C)`` (diagrams over ``2^(k+1)``) from
    ``A^k(K . AK)`` to ``A^k(K . A eps)``.
    """
    C = lax.category
    src = kernel_inner(lax, kernel_inner(lax, rows, k + 2), k + 1)
    tgt = kernel_inner(lax, face(rows, k + 2, k + 1, 0), k + 1)
    lay = _phi_layout(k)
    sq = lax.arrow.square_id(rows[:, lay[:, 0]], rows[:, lay[:, 1]], rows[:, lay[:, 2]], rows[:, lay[:, 3]])
    comps = lax.phi[sq]
    return assemble_morphisms(cube(k), C, src, tgt, comps)


@lru_cache(maxsize=None)
def _nu_layout(n: int):
    P, Q = cube(n), cube(n + 1)
    kind, src = [], []
    for x, y in Q.pairs:
        v, w = Q.vertices[x], Q.vertices[y]
        zv, zw = v[0] == 1 and v[-1] == 1, w[0] == 1 and w[-1] == 1
        kind.append(2 if zv else (1 if zw else 0))
        src.append(P.col(v[1:], w[1:]) if not zw else P.col(v[1:], v[1:]))
    return kind, np.array(src, dtype=np.int64)


def nu_inner(pointed, rows, n):
    """``(A^(n-1) nu)_X`` as a morphism row of ``A^n(C)``: from X to the
    decoration with every innermost target replaced by zero."""
    C = pointed.category
    kind, src = _nu_layout(n)
    out = np.empty((len(rows), len(kind)), dtype=np.int64)
    zid = C.identity[pointed.zero]
    for t, k in enumerate(kind):
        x = rows[:, src[t]]
        if k == 0:
            out[:, t] = x
        elif k == 2:
            out[:, t] = zid
        else:
            out[:, t] = pointed.bang[C.dom[x]]
    return out
