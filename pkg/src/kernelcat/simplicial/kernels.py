"""Recovering kernels from a supercoherent structure whose décalage is the
extended nerve."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..arrow.kernels import KernelSystem, UniversalPropertyFailure, find_kernels
from ..arrow.lax import PseudoIso, compare_kernel_systems
from ..arrow.pointed import PointedCategory
from ..core.category import FinCategory
from ..core.diagrams import RowIndex, assemble_morphisms, chain, components
from ..report import FAIL, PASS, SKIPPED, LawReport
from .levels import DiagramLevel, Op, TableLevel, Transformation, TruncatedSimplicialCat, is_terminal_level
from .supercoherent import (_append_bang, _apply, _chunks, _elements, _first_mismatch, _name, check_supercoherence,
                            compare_levelwise, extended_nerve_ops, nu_component, simplicial_decalage)


class PreconditionFailure(ValueError):
    """The pair of top faces does not satisfy the hypothesis of the
    reconstruction."""

    def __init__(self, law, witness):
        super().__init__(f"{law}: {witness}")
        self.law = law
        self.witness = witness


class NoIsomorphism(ValueError):
    """The décalage is not isomorphic to the extended nerve."""


# -- rows in N_0, N_1, N_2 -----------------------------------------------

def arrow_row(C: FinCategory, f):
    """Objects of ``N_1``: ``[1_a, f, 1_b]``."""
    f = np.atleast_1d(np.asarray(f, dtype=np.int64))
    return np.stack([C.identity[C.dom[f]], f, C.identity[C.cod[f]]], axis=1)


def pair_row(C: FinCategory, g, f):
    """Objects of ``N_2``: the chain ``g`` then ``f``."""
    T = C.table()
    g, f = np.atleast_1d(g), np.atleast_1d(f)
    P = chain(2)
    out = np.empty((len(g), P.n_pairs), dtype=np.int64)
    vals = {(0, 0): C.identity[C.dom[g]], (0, 1): g, (0, 2): T[f, g], (1, 1): C.identity[C.dom[f]], (1, 2): f,
            (2, 2): C.identity[C.cod[f]]}
    for t, pr in enumerate(P.pairs):
        out[:, t] = vals[pr]
    return out


def square_row(C: FinCategory, f, g, u, v):
    """Morphisms of ``N_1``: ``(u, v): f -> g``."""
    X, Y = arrow_row(C, f), arrow_row(C, g)
    return assemble_morphisms(chain(1), C, X, Y, np.stack([np.atleast_1d(u), np.atleast_1d(v)], axis=1))


def _point(M):
    """The single component of a morphism of ``N_0``."""
    return components(chain(0), M)[:, 0]


# -- reconstruction -------------------------------------------------------

def compatibility(p: PointedCategory, d2: Op, d3: Op) -> LawReport:
    """Simplicial identities of the extended nerve with ``d2, d3`` added as
    top faces; the top pair itself is left free."""
    E = extended_nerve_ops(p, 3)
    fcs = dict(E.faces)
    fcs[(2, 2)] = Op(E.levels[2], E.levels[1], d2.obj, d2.mor, "d2")
    fcs[(3, 3)] = Op(E.levels[3], E.levels[2], d3.obj, d3.mor, "d3")
    x = E.replace(faces=fcs, relaxed=True, name="extended nerve with top faces")
    return check_supercoherence(x, need_alpha=False)


def kernels_from_simplicial(p: PointedCategory, d2: Op, d3: Op, check=True) -> KernelSystem:
    """Kernels from top faces ``d2: N_1 -> N_0`` and ``d3: N_2 -> N_1``.

    ``kappa_f`` is the component of ``d2(nu_f)``; the factorization of ``g``
    through ``kappa_f`` is ``d3[g, f]`` after the retraction
    ``r = d2(1_a, !^b)``. Every step is checked and the outcome recorded on
    ``.report`` of the returned system.
    """
    C = p.category
    T = C.table()
    rep = LawReport("kernels from simplicial data")
    if check:
        comp = compatibility(p, d2, d3)
        rep.extend(comp, prefix="compatibility: ")
        if not comp.ok:
            c = comp.failures()[0]
            raise PreconditionFailure(c.law, c.witness)
    fs = np.arange(C.n_mor)
    a, b = C.dom[fs], C.cod[fs]
    # precondition: d2 d3 nu_[f, 1_b] = 1
    chains = pair_row(C, fs, C.identity[b])
    nu = nu_component(p, chains, 3)
    lhs = d2.mor(d3.mor(nu))
    rhs = DiagramLevel(chain(0), C).identity(d2.obj(arrow_row(C, fs)))
    bad = np.nonzero(np.any(lhs != rhs, axis=1))[0]
    if len(bad):
        raise PreconditionFailure("d2 d3 nu = 1", C.morphisms[int(bad[0])])
    rep.add("d2 d3 nu = 1", PASS)
    # normalizations
    ids, bangs = C.identity, p.bang
    objs = np.arange(C.n_obj)
    k_id = d2.obj(arrow_row(C, ids))[:, 0]
    rep.record("d2(1_a) = 0", None if np.all(k_id == ids[p.zero]) else
               C.objects[int(np.argmax(k_id != ids[p.zero]))])
    k_bang = d2.obj(arrow_row(C, bangs))[:, 0]
    rep.record("d2(!_a) = a", None if np.all(k_bang == ids[objs]) else
               C.objects[int(np.argmax(k_bang != ids[objs]))])
    # kappa
    nu_f = nu_component(p, arrow_row(C, fs), 2)
    kappa = _point(d2.mor(nu_f))
    ker = C.dom[kappa]
    typed = (C.cod[kappa] == a) & (C.identity[ker] == d2.obj(arrow_row(C, fs))[:, 0])
    if not np.all(typed):
        f = int(np.argmin(typed))
        raise UniversalPropertyFailure(C.morphisms[f], C.morphisms[int(kappa[f])], "(kappa badly typed)")
    zero = T[fs, kappa] == p.zero_mor[ker, b]
    if not np.all(zero):
        f = int(np.argmin(zero))
        raise UniversalPropertyFailure(C.morphisms[f], C.morphisms[int(kappa[f])], "(f kappa is not zero)")
    # retraction r_(a,b): a -> ker(0_(a,b))
    zm = p.zero_mor
    A_, B_ = np.meshgrid(objs, objs, indexing="ij")
    A_, B_ = A_.ravel(), B_.ravel()
    Pm = square_row(C, bangs[A_], zm[A_, B_], ids[A_], p.cobang[B_])
    r = _point(d2.mor(Pm)).reshape(C.n_obj, C.n_obj)
    kz = kappa[zm]
    ret = T[kz, r] == ids[objs][:, None]
    if not np.all(ret):
        i, j = np.argwhere(~ret)[0]
        rep.record("kappa_0 r = 1", C.morphisms[int(zm[i, j])])
        raise UniversalPropertyFailure(C.morphisms[int(zm[i, j])], C.morphisms[int(r[i, j])], "(kappa_0 r != 1)")
    rep.add("kappa_0 r = 1", PASS, note=f"{C.n_obj ** 2} zero morphisms")
    # universal property via d3
    n_pairs = 0
    for f in fs:
        gs = np.array([g for g in range(C.n_mor) if C.cod[g] == a[f] and T[f, g] == zm[C.dom[g], b[f]]],
                      dtype=np.int64)
        if not len(gs):
            continue
        n_pairs += len(gs)
        d3g = d3.obj(pair_row(C, gs, np.full(len(gs), f)))[:, 1]
        h = T[d3g, r[C.dom[gs], b[f]]]
        for g, hh in zip(gs, h):
            hs = [x for x in C.hom(int(C.dom[g]), int(ker[f])) if T[kappa[f], x] == g]
            if hs != [int(hh)]:
                raise UniversalPropertyFailure(C.morphisms[f], C.morphisms[int(g)],
                                               f"({len(hs)} factorizations, d3 gives {C.morphisms[int(hh)]})")
    rep.add("universal property", PASS, note=f"{n_pairs} zero composites")
    ks = KernelSystem(p, kappa)
    ks.report = rep
    return ks


# -- matching a décalage against the extended nerve -------------------------

class _Theta:
    """``theta_k: X_k -> E_k`` as element tables, with inverse lookups."""

    def __init__(self, level, target, obj=None, mor=None):
        self.level, self.target = level, target
        self.identity = obj is None
        if not self.identity:
            self.obj_rows, self.mor_rows = obj, mor
            self._oi, self._mi = RowIndex(obj), RowIndex(mor)

    def obj(self, X):
        return X if self.identity else self.obj_rows[X[:, 0]]

    def mor(self, M):
        return M if self.identity else self.mor_rows[M[:, 0]]

    def obj_inv(self, Y):
        return Y if self.identity else self._oi.lookup(Y)[:, None]

    def mor_inv(self, M):
        return M if self.identity else self._mi.lookup(M)[:, None]


def _transport(op: Op, ts: _Theta, tt: _Theta) -> Op:
    def guard(i):
        if np.any(i < 0):
            raise NoIsomorphism(f"{op.name}: element outside the image of theta")
        return i
    return Op(ts.target, tt.target, lambda X: tt.obj(op.obj(guard(ts.obj_inv(X)))),
              lambda M: tt.mor(op.mor(guard(ts.mor_inv(M)))), op.name)


def _transport_alpha(a: Transformation, ts: _Theta, tt: _Theta) -> Transformation:
    return Transformation(ts.target, tt.target, lambda X: tt.mor(a.at(ts.obj_inv(X))), a.name)


def find_isomorphism(X: FinCategory, C: FinCategory, limit=200, by_name=True, search=True):
    """An isomorphism ``X -> C`` as ``(obj_map, mor_map)``, or None.

    Name matching is tried first; otherwise objects are matched by hom-set
    sizes and morphisms by backtracking against the composition tables.
    """
    if X.n_obj != C.n_obj or X.n_mor != C.n_mor:
        return None
    if X.n_obj > limit:
        raise NoIsomorphism(f"isomorphism search limited to {limit} objects")
    TX, TC = X.table(), C.table()

    def is_functor(om, mm):
        if np.any(om[X.dom] != C.dom[mm]) or np.any(om[X.cod] != C.cod[mm]):
            return False
        if np.any(mm[X.identity] != C.identity[om]):
            return False
        ok = TX >= 0
        return np.array_equal(mm[TX[ok]], TC[mm[np.nonzero(ok)[0]], mm[np.nonzero(ok)[1]]]) and \
            len(set(mm.tolist())) == C.n_mor

    if by_name and set(X.objects) == set(C.objects) and set(X.morphisms) == set(C.morphisms):
        om = np.array([C.obj(o) for o in X.objects], dtype=np.int64)
        mm = np.array([C.mor(m) for m in X.morphisms], dtype=np.int64)
        if is_functor(om, mm):
            return om, mm
    if not search:
        return None
    hx = np.array([[len(X.hom(i, j)) for j in range(X.n_obj)] for i in range(X.n_obj)])
    hc = np.array([[len(C.hom(i, j)) for j in range(C.n_obj)] for i in range(C.n_obj)])
    order = list(range(X.n_mor))

    def objects(om, i):
        if i == X.n_obj:
            yield om.copy()
            return
        for c in range(C.n_obj):
            if c in om[:i]:
                continue
            om[i] = c
            if all(hx[i, j] == hc[c, om[j]] and hx[j, i] == hc[om[j], c] for j in range(i + 1)):
                yield from objects(om, i + 1)

    def morphisms(om, mm, k):
        if k == len(order):
            return mm.copy()
        m = order[k]
        if mm[m] >= 0:
            return morphisms(om, mm, k + 1)
        used = set(mm[mm >= 0].tolist())
        for c in C.hom(int(om[X.dom[m]]), int(om[X.cod[m]])):
            if c in used:
                continue
            mm[m] = c
            assigned = np.nonzero(mm >= 0)[0]
            ok = True
            for u in assigned:
                for g, f in ((u, m), (m, u)):
                    gf = TX[g, f]
                    if gf >= 0 and mm[gf] >= 0 and mm[gf] != TC[mm[g], mm[f]]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                res = morphisms(om, mm, k + 1)
                if res is not None:
                    return res
            mm[m] = -1
        return None

    for om in objects(np.zeros(X.n_obj, dtype=np.int64), 0):
        mm = np.full(X.n_mor, -1, dtype=np.int64)
        mm[X.identity] = C.identity[om]
        res = morphisms(om, mm, 0)
        if res is not None and is_functor(om, res):
            return om, res
    return None


def _thetas(x: TruncatedSimplicialCat, E: TruncatedSimplicialCat):
    C = E.levels[1].C
    th = [_Theta(x.levels[0], E.levels[0], np.zeros((1, 0), dtype=np.int64), np.zeros((1, 0), dtype=np.int64))
          if isinstance(x.levels[0], TableLevel) else _Theta(x.levels[0], E.levels[0])]
    for k in range(1, x.N + 1):
        L, M = x.levels[k], E.levels[k]
        if isinstance(L, DiagramLevel):
            if not (L.C is C and L.P.pairs == M.P.pairs):
                raise NoIsomorphism(f"level {k} is a diagram category of another shape")
            th.append(_Theta(L, M))
            continue
        X = L.C
        if k == 1:
            # ids as emitted from the diagram level, then the category's own ids, then a search
            E1 = M.as_category()
            iso = find_isomorphism(X, E1, search=False)
            if iso is not None:
                obj, mor = E1.rows[iso[0]], E1.morphism_rows[iso[1]]
            else:
                iso = find_isomorphism(X, C)
                if iso is None:
                    raise NoIsomorphism("level 1 is not isomorphic to the category")
                om, mm = iso
                obj = C.identity[om][:, None]
                mor = np.stack([C.identity[C.dom[mm]], mm, C.identity[C.cod[mm]]], axis=1)
            th.append(_Theta(L, M, obj, mor))
            continue
        t1 = th[1]
        if k == 2:
            # theta_2(x) = theta_1(d0 m) for the unique m: s0 d1 x -> x with d1 m = 1
            d1, d0, s0 = x.faces[(2, 1)], x.faces[(2, 0)], x.degeneracies[(1, 0)]
            X1 = x.levels[1].C
            objs = np.arange(X.n_obj)
            src = s0.obj(d1.obj(objs[:, None]))[:, 0]
            arrows = np.full(X.n_obj, -1, dtype=np.int64)
            for o in objs:
                ms = [m for m in X.hom(int(src[o]), int(o))
                      if d1.mor(np.array([[m]]))[0, 0] == X1.identity[d1.obj(np.array([[o]]))[0, 0]]]
                if len(ms) != 1:
                    raise NoIsomorphism(f"level 2: {len(ms)} morphisms s0 d1 x -> x over the identity "
                                        f"at {X.objects[o]}")
                arrows[o] = _point(t1.mor(d0.mor(np.array([[ms[0]]]))))[0]
            obj = arrow_row(C, arrows)
        else:
            prev = th[k - 1]
            dl, d0 = x.faces[(k, k - 1)], x.faces[(k, 0)]
            objs = np.arange(X.n_obj)[:, None]
            head = prev.obj(dl.obj(objs))
            tail = prev.obj(d0.obj(objs))
            obj = _glue(head, tail, k - 1, C)
        # morphisms from vertex components
        ms = np.arange(X.n_mor)[:, None]
        if k == 2:
            cl, c0 = t1.mor(x.faces[(2, 1)].mor(ms)), t1.mor(x.faces[(2, 0)].mor(ms))
            comps = np.stack([_point(cl), _point(c0)], axis=1)
        else:
            prev = th[k - 1]
            Pp = chain(k - 2)
            cl = components(Pp, prev.mor(x.faces[(k, k - 1)].mor(ms)))
            c0 = components(Pp, prev.mor(x.faces[(k, 0)].mor(ms)))
            comps = np.concatenate([cl, c0[:, -1:]], axis=1)
        mor = assemble_morphisms(M.P, C, obj[X.dom], obj[X.cod], comps)
        th.append(_Theta(L, M, obj, mor))
    return th


def _glue(head, tail, m, C):
    """Chains of length ``m`` from their first ``m - 1`` and last ``m - 1``
    arrows."""
    T = C.table()
    Pp, P = chain(m - 1), chain(m)
    arrows = [head[:, Pp.pair_index[(i, i + 1)]] for i in range(m - 1)] + [tail[:, Pp.pair_index[(m - 2, m - 1)]]]
    out = np.empty((len(head), P.n_pairs), dtype=np.int64)
    for t, (i, j) in enumerate(P.pairs):
        if i == j:
            v = C.dom[arrows[i]] if i < m else C.cod[arrows[m - 1]]
            out[:, t] = C.identity[v]
        else:
            acc = arrows[i]
            for s in range(i + 1, j):
                acc = T[arrows[s], acc]
            out[:, t] = acc
    return out


@dataclass
class DecalageMatch:
    report: LawReport
    transported: TruncatedSimplicialCat
    kernels: KernelSystem
    pseudoiso: PseudoIso


def decalage_match(p: PointedCategory, x: TruncatedSimplicialCat, chunk=20_000) -> DecalageMatch:
    """Identify ``dec(x)`` with the extended nerve of ``p``, transport the top
    faces, and rebuild the kernels from them."""
    C = p.category
    rep = LawReport(f"décalage match of {x.name}")
    if x.N < 3:
        raise NoIsomorphism("need levels up to 3")
    if not is_terminal_level(x.levels[0]):
        raise NoIsomorphism("X0 is not terminal")
    E = extended_nerve_ops(p, x.N)
    th = _thetas(x, E)
    # theta is bijective
    for k in range(1, x.N + 1):
        t = th[k]
        if t.identity:
            rep.add(f"theta{k} bijective", PASS, note="identity")
            continue
        no, nm = E.levels[k].n_objects, len(E.levels[k].morphisms())
        inj = len(np.unique(t.obj_rows, axis=0)) == len(t.obj_rows) == no and \
            len(np.unique(t.mor_rows, axis=0)) == len(t.mor_rows) == nm
        okv = np.all(E.levels[k].is_object(t.obj_rows)) and np.all(E.levels[k].is_morphism(t.mor_rows))
        rep.record(f"theta{k} bijective", None if inj and okv else (x.levels[k].name,))
    if not rep.ok:
        raise NoIsomorphism(rep.failures()[0].line())
    fcs = {key: _transport(op, th[key[0]], th[key[0] - 1]) for key, op in x.faces.items()}
    dgs = {key: _transport(op, th[key[0]], th[key[0] + 1]) for key, op in x.degeneracies.items()}
    alpha = {n: _transport_alpha(a, th[n], th[n - 2]) for n, a in x.alpha.items()}
    y = TruncatedSimplicialCat(E.levels, fcs, dgs, alpha=alpha, relaxed=True, name=f"{x.name} (transported)")
    # theta commutes with the operators of dec
    cmp = compare_levelwise(simplicial_decalage(y), E, shift=1, chunk=chunk)
    rep.extend(cmp, prefix="theta commutes: ")
    if not cmp.ok:
        raise NoIsomorphism(cmp.failures()[0].line())
    # forced degeneracies: the top s is "append !" at every level
    U = y.degeneracies[(0, 0)].obj(np.zeros((1, 0), dtype=np.int64))[0, 0]
    u = int(C.dom[U])
    zero_ok = all(len(C.hom(a, u)) == 1 and len(C.hom(u, a)) == 1 for a in range(C.n_obj))
    rep.record("s0(*) is a zero object", None if zero_ok else C.objects[u])
    for n in range(1, x.N):
        s = y.degeneracies.get((n, n))
        if s is None:
            rep.add(f"top s{n} forced", SKIPPED, note="not supplied")
            continue
        ref = E.degeneracies[(n, n)]
        fail = None
        for what, A in _elements(E.levels[n], chunk):
            k = _first_mismatch(_apply([s], A, what), _apply([ref], A, what))
            if k is not None:
                fail = _name(E.levels[n], A[k], what)
                break
        rep.record(f"top s{n} = append !", fail)
    # psi = d_(n-1) d_n nu equals alpha
    for n in range(3, x.N + 1):
        if n not in y.alpha:
            rep.add(f"psi{n} = alpha{n}", SKIPPED, note="no alpha supplied")
            continue
        L = E.levels[n]
        fail = None
        for Tn in _chunks(L.objects(), chunk):
            nu = nu_component(p, Tn, n)
            psi = _apply([y.faces[(n, n)], y.faces[(n - 1, n - 1)]], nu, "morphisms")
            k = _first_mismatch(psi, y.alpha[n].at(Tn))
            if k is not None:
                fail = L.obj_name(Tn[k])
                break
        rep.record(f"psi{n} = alpha{n}", fail)
    ks = kernels_from_simplicial(p, y.faces[(2, 2)], y.faces[(3, 3)])
    rep.extend(ks.report, prefix="kernels: ")
    pi = compare_kernel_systems(ks, find_kernels(p))
    rep.extend(pi.report, prefix="against find_kernels: ")
    return DecalageMatch(rep, y, ks, pi)


__all__ = ["PreconditionFailure", "NoIsomorphism", "kernels_from_simplicial", "compatibility", "decalage_match",
           "DecalageMatch", "find_isomorphism", "arrow_row", "pair_row", "square_row"]
