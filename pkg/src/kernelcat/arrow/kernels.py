"""Algebraic kernels in a pointed category, found by exhaustive search."""
from __future__ import annotations

import numpy as np

from .pointed import PointedCategory


class MissingKernel(Exception):
    """A morphism has no kernel."""

    def __init__(self, morphism):
        super().__init__(f"no kernel for {morphism}")
        self.morphism = morphism


class UniversalPropertyFailure(Exception):
    def __init__(self, f, g, reason=""):
        super().__init__(f"universal property fails for ({f}, {g}) {reason}".rstrip())
        self.f = f
        self.g = g


def zero_sources(p: PointedCategory, f: int):
    """For each object c, the morphisms ``g: c -> dom f`` with ``f g = 0``."""
    C = p.category
    T = C.table()
    a, b = int(C.dom[f]), int(C.cod[f])
    return {c: [g for g in C.hom(c, a) if T[f, g] == p.zero_mor[c, b]] for c in range(C.n_obj)}


def is_universal(p: PointedCategory, f: int, kappa: int, zs=None) -> bool:
    """``kappa`` is a kernel of ``f``: ``h -> kappa h`` is a bijection onto the
    zero-composing maps, at every object."""
    C = p.category
    T = C.table()
    if C.cod[kappa] != C.dom[f]:
        return False
    k = int(C.dom[kappa])
    if T[f, kappa] != p.zero_mor[k, C.cod[f]]:
        return False
    zs = zero_sources(p, f) if zs is None else zs
    for c in range(C.n_obj):
        imgs = [int(T[kappa, h]) for h in C.hom(c, k)]
        if len(set(imgs)) != len(imgs) or sorted(imgs) != sorted(zs[c]):
            return False
    return True


def universal_kernels(p: PointedCategory, f: int):
    """All kernel maps of ``f``, in id order."""
    C = p.category
    zs = zero_sources(p, f)
    a = int(C.dom[f])
    return [kap for c in range(C.n_obj) for kap in zs[c] if C.cod[kap] == a and is_universal(p, f, kap, zs)]


class KernelSystem:
    """A choice ``f -> (ker f, kappa_f)`` for every morphism."""

    def __init__(self, pointed: PointedCategory, kappa):
        self.pointed = pointed
        C = pointed.category
        self.kappa = np.asarray(kappa, dtype=np.int64)
        self.ker = C.dom[self.kappa]

    @property
    def category(self):
        return self.pointed.category

    @property
    def assignment(self):
        C = self.category
        return {C.morphisms[f]: (C.objects[int(self.ker[f])], C.morphisms[int(self.kappa[f])])
                for f in range(C.n_mor)}

    def factor(self, f: int, g: int) -> int:
        """The unique ``h`` with ``kappa_f h = g``."""
        C = self.category
        T = C.table()
        hs = [h for h in C.hom(int(C.dom[g]), int(self.ker[f])) if T[self.kappa[f], h] == g]
        if len(hs) != 1:
            raise UniversalPropertyFailure(C.morphisms[f], C.morphisms[g], f"({len(hs)} factorizations)")
        return hs[0]

    def violations(self):
        """``(law, witness...)`` tuples for every failed clause of the definition."""
        p, C = self.pointed, self.category
        T = C.table()
        out = []
        for f in range(C.n_mor):
            kap = int(self.kappa[f])
            name = C.morphisms[f]
            if C.cod[kap] != C.dom[f]:
                out.append(("kappa-type", name))
                continue
            if T[f, kap] != p.zero_mor[C.dom[kap], C.cod[f]]:
                out.append(("zero-composite", name))
            zs = zero_sources(p, f)
            for c in range(C.n_obj):
                for g in zs[c]:
                    n = sum(1 for h in C.hom(c, int(self.ker[f])) if T[kap, h] == g)
                    if n != 1:
                        out.append(("universal-property", name, C.morphisms[g]))
        for a in range(C.n_obj):
            i, b = int(C.identity[a]), int(p.bang[a])
            if self.kappa[i] != p.cobang[a]:
                out.append(("normalization-identity", C.morphisms[i]))
            if self.kappa[b] != C.identity[a]:
                out.append(("normalization-bang", C.morphisms[b]))
        return out

    def __eq__(self, other):
        if not isinstance(other, KernelSystem):
            return NotImplemented
        return self.pointed.category is other.pointed.category and np.array_equal(self.kappa, other.kappa)

    __hash__ = object.__hash__


def find_kernels(p: PointedCategory, order=None) -> KernelSystem:
    """Choose a kernel for every morphism.

    Among the universal candidates the one earliest in ``order`` (default: id
    order) wins; identities and the maps ``!_a`` are then normalized to
    ``!^a`` and ``1_a``.
    """
    C = p.category
    rank = np.arange(C.n_mor) if order is None else np.argsort(np.asarray(order))
    kappa = np.empty(C.n_mor, dtype=np.int64)
    for f in range(C.n_mor):
        cands = universal_kernels(p, f)
        if not cands:
            raise MissingKernel(C.morphisms[f])
        kappa[f] = min(cands, key=lambda m: rank[m])
    for a in range(C.n_obj):
        kappa[C.identity[a]] = p.cobang[a]
        kappa[p.bang[a]] = C.identity[a]
    return KernelSystem(p, kappa)
