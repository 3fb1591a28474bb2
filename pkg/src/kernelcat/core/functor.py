"""Functors, natural transformations and their 2-categorical composites."""
from __future__ import annotations

import numpy as np

from .category import FinCategory


class FunctorError(ValueError):
    """Raw functor data violates a functor law."""

    def __init__(self, law, *witness):
        super().__init__(f"{law}: {' '.join(map(str, witness))}")
        self.law = law
        self.witness = witness


class NaturalityError(ValueError):
    def __init__(self, law, *witness):
        super().__init__(f"{law}: {' '.join(map(str, witness))}")
        self.law = law
        self.witness = witness


class BoundaryError(ValueError):
    """Composites requested across mismatched sources or targets."""


def _as_indices(mapping, keys_index, vals_index, size, what):
    if isinstance(mapping, dict):
        out = [None] * size
        for k, v in mapping.items():
            if k not in keys_index:
                raise FunctorError(f"{what}-unknown-key", k)
            if v not in vals_index:
                raise FunctorError(f"{what}-unknown-value", v)
            out[keys_index[k]] = vals_index[v]
        missing = [i for i, x in enumerate(out) if x is None]
        if missing:
            raise FunctorError(f"{what}-partial", missing[0])
        return np.asarray(out, dtype=np.int64)
    arr = np.asarray(mapping, dtype=np.int64)
    if arr.shape != (size,):
        raise FunctorError(f"{what}-size", arr.shape)
    return arr


class Functor:
    """A functor between explicit finite categories.

    Maps may be dicts of ids or index sequences. ``check=False`` skips the law
    check for internally constructed functors that are correct by construction.
    """

    def __init__(self, source: FinCategory, target: FinCategory, obj_map, mor_map, name="", check=True):
        self.source = source
        self.target = target
        self.name = name
        self.obj_map = _as_indices(obj_map, source.obj_index, target.obj_index, source.n_obj, "obj_map")
        self.mor_map = _as_indices(mor_map, source.mor_index, target.mor_index, source.n_mor, "mor_map")
        if check:
            violation = functor_violation(self)
            if violation is not None:
                raise FunctorError(*violation)

    def __call__(self, m: int) -> int:
        return int(self.mor_map[m])

    def on_obj(self, a: int) -> int:
        return int(self.obj_map[a])

    def __eq__(self, other):
        if not isinstance(other, Functor):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and np.array_equal(self.obj_map, other.obj_map)
            and np.array_equal(self.mor_map, other.mor_map)
        )

    __hash__ = object.__hash__

    def __repr__(self):
        return f"Functor({self.name or '?'}: {self.source.name} -> {self.target.name})"


def functor_violation(F: Functor):
    """First violated functor law as ``(law, ids...)`` or None."""
    C, D = F.source, F.target
    om, mm = F.obj_map, F.mor_map
    if np.any(om < 0) or np.any(om >= D.n_obj):
        return ("obj_map-range",)
    if np.any(mm < 0) or np.any(mm >= D.n_mor):
        return ("mor_map-range",)
    for f in range(C.n_mor):
        if D.dom[mm[f]] != om[C.dom[f]]:
            return ("preserves-dom", C.morphisms[f])
        if D.cod[mm[f]] != om[C.cod[f]]:
            return ("preserves-cod", C.morphisms[f])
    for a in range(C.n_obj):
        if mm[C.identity[a]] != D.identity[om[a]]:
            return ("preserves-identity", C.objects[a])
    for (g, f), gf in C.composition.items():
        if mm[gf] != D.composition[(int(mm[g]), int(mm[f]))]:
            return ("preserves-composition", C.morphisms[g], C.morphisms[f])
    return None


def identity_functor(C: FinCategory) -> Functor:
    return Functor(C, C, np.arange(C.n_obj), np.arange(C.n_mor), name=f"1_{C.name}", check=False)


def compose_functors(G: Functor, F: Functor) -> Functor:
    """``G . F``."""
    if F.target != G.source:
        raise BoundaryError(f"cannot compose {G!r} after {F!r}")
    return Functor(F.source, G.target, G.obj_map[F.obj_map], G.mor_map[F.mor_map],
                   name=f"{G.name}{F.name}", check=False)


class NatTransformation:
    """A natural transformation ``alpha: F => G`` with one component per object."""

    def __init__(self, source: Functor, target: Functor, components, name="", check=True):
        if source.source != target.source or source.target != target.target:
            raise BoundaryError("natural transformation between functors with different boundaries")
        self.source = source
        self.target = target
        self.name = name
        C, D = source.source, source.target
        self.components = _as_indices(components, C.obj_index, D.mor_index, C.n_obj, "components")
        if check:
            violation = naturality_violation(self)
            if violation is not None:
                raise NaturalityError(*violation)

    def __getitem__(self, a: int) -> int:
        return int(self.components[a])

    @property
    def domain(self) -> FinCategory:
        return self.source.source

    @property
    def codomain(self) -> FinCategory:
        return self.source.target

    def __eq__(self, other):
        if not isinstance(other, NatTransformation):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and np.array_equal(self.components, other.components))

    __hash__ = object.__hash__

    def __repr__(self):
        return f"NatTransformation({self.name or '?'})"


def naturality_violation(alpha: NatTransformation):
    F, G = alpha.source, alpha.target
    C, D = F.source, F.target
    comp = alpha.components
    if np.any(comp < 0) or np.any(comp >= D.n_mor):
        return ("components-range",)
    for a in range(C.n_obj):
        c = comp[a]
        if D.dom[c] != F.obj_map[a] or D.cod[c] != G.obj_map[a]:
            return ("component-type", C.objects[a])
    for f in range(C.n_mor):
        lhs = D.composition[(int(G.mor_map[f]), int(comp[C.dom[f]]))]
        rhs = D.composition[(int(comp[C.cod[f]]), int(F.mor_map[f]))]
        if lhs != rhs:
            return ("naturality", C.morphisms[f])
    return None


def identity_nat(F: Functor) -> NatTransformation:
    D = F.target
    return NatTransformation(F, F, D.identity[F.obj_map], name=f"1_{F.name}", check=False)


def vert_compose(beta: NatTransformation, alpha: NatTransformation) -> NatTransformation:
    """``beta [] alpha``: first alpha, then beta."""
    if alpha.target != beta.source:
        raise BoundaryError("vertical composite of non-matching transformations")
    D = alpha.codomain
    comps = [D.composition[(int(b), int(a))] for b, a in zip(beta.components, alpha.components)]
    return NatTransformation(alpha.source, beta.target, comps, check=False)


def whisker(left, right):
    """Whiskering, written ``.``, for one functor and one transformation.

    ``whisker(G, alpha)`` has components ``G(alpha_x)``; ``whisker(alpha, F)``
    has components ``alpha_{F x}``.
    """
    if isinstance(left, Functor) and isinstance(right, NatTransformation):
        G, alpha = left, right
        if alpha.codomain != G.source:
            raise BoundaryError("whisker: target of transformation is not source of functor")
        return NatTransformation(compose_functors(G, alpha.source), compose_functors(G, alpha.target),
                                 G.mor_map[alpha.components], check=False)
    if isinstance(left, NatTransformation) and isinstance(right, Functor):
        alpha, F = left, right
        if F.target != alpha.domain:
            raise BoundaryError("whisker: functor does not land in the transformation's domain")
        return NatTransformation(compose_functors(alpha.source, F), compose_functors(alpha.target, F),
                                 alpha.components[F.obj_map], check=False)
    raise BoundaryError("whisker needs one functor and one transformation")


def horiz_compose(beta: NatTransformation, alpha: NatTransformation) -> NatTransformation:
    """Godement product: for ``alpha: F => G`` and ``beta: H => K``,
    component ``beta_{G x} . H(alpha_x)``."""
    if alpha.codomain != beta.domain:
        raise BoundaryError("horizontal composite of non-matching transformations")
    H, K = beta.source, beta.target
    F, G = alpha.source, alpha.target
    E = H.target
    comps = [E.composition[(int(beta.components[G.obj_map[x]]), int(H.mor_map[alpha.components[x]]))]
             for x in range(F.source.n_obj)]
    return NatTransformation(compose_functors(H, F), compose_functors(K, G), comps, check=False)
