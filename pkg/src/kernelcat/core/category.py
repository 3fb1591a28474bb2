"""Explicit finite categories backed by integer tables.

Objects and morphisms carry string ids at the boundary; internally every
object and morphism is its position in the declared order, and that order is
what "smallest id" means wherever a deterministic choice is needed.
"""
from __future__ import annotations

import os
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

DEFAULT_CAP = 100_000
PRODUCT_CAP = 10_000


def default_cap() -> int:
    """Morphism cap for materialized constructions (``KERNELCAT_CAP`` overrides)."""
    env = os.environ.get("KERNELCAT_CAP")
    if env:
        return int(env)
    return DEFAULT_CAP


class ResourceLimit(Exception):
    """A construction would exceed the configured size cap."""

    def __init__(self, what: str, size, cap):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class CategoryError(ValueError):
    """Structurally malformed category data (dangling ids, missing identities)."""


@dataclass
class Violation:
    law: str
    witness: tuple

    def __str__(self):
        return f"{self.law}: {' '.join(map(str, self.witness))}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, law, *witness):
        self.violations.append(Violation(law, tuple(witness)))

    def __bool__(self):
        return self.ok

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)


class LazyComposition(Mapping):
    """Read-only composition table computed on demand.

    Used for constructed categories (arrow categories) whose composable pairs
    are too many to store but whose composite is cheap to compute.
    """

    def __init__(self, dom, cod, fn):
        self._dom = np.asarray(dom)
        self._cod = np.asarray(cod)
        self._fn = fn
        order = np.argsort(self._dom, kind="stable")
        self._by_dom = {}
        for m in order:
            self._by_dom.setdefault(int(self._dom[m]), []).append(int(m))

    def __getitem__(self, key):
        g, f = key
        if not (0 <= g < len(self._dom) and 0 <= f < len(self._dom)) or self._dom[g] != self._cod[f]:
            raise KeyError(key)
        return self._fn(g, f)

    def __contains__(self, key):
        g, f = key
        return 0 <= g < len(self._dom) and 0 <= f < len(self._dom) and self._dom[g] == self._cod[f]

    def __iter__(self):
        for f in range(len(self._dom)):
            for g in self._by_dom.get(int(self._cod[f]), ()):
                yield (g, f)

    def __len__(self):
        ins = np.bincount(self._cod, minlength=1)
        outs = np.bincount(self._dom, minlength=len(ins))
        k = min(len(ins), len(outs))
        return int(np.dot(ins[:k], outs[:k]))


class FinCategory:
    """A finite category given by a total composition table.

    ``composition`` maps ``(g, f)`` index pairs to the index of ``g . f``.
    """

    def __init__(self, objects, morphisms, dom, cod, identity, composition, name=""):
        self.name = name
        self.objects = tuple(objects)
        self.morphisms = tuple(morphisms)
        self.obj_index = {o: i for i, o in enumerate(self.objects)}
        self.mor_index = {m: i for i, m in enumerate(self.morphisms)}
        if len(self.obj_index) != len(self.objects):
            raise CategoryError("duplicate object id")
        if len(self.mor_index) != len(self.morphisms):
            raise CategoryError("duplicate morphism id")
        self.dom = np.asarray(dom, dtype=np.int64)
        self.cod = np.asarray(cod, dtype=np.int64)
        self.identity = np.asarray(identity, dtype=np.int64)
        self.composition = composition if isinstance(composition, LazyComposition) else dict(composition)
        self._table = None
        self._homs = None

    @classmethod
    def from_names(cls, objects, morphisms, identities, composition, name=""):
        """Build from id-level data.

        ``morphisms`` is a list of ``(id, dom, cod)``; ``identities`` maps
        object ids to morphism ids; ``composition`` is an iterable of
        ``(g, f, gf)`` triples of morphism ids.
        """
        objects = list(objects)
        oi = {o: i for i, o in enumerate(objects)}
        names, dom, cod = [], [], []
        for mid, d, c in morphisms:
            if d not in oi:
                raise CategoryError(f"morphism {mid}: unknown dom {d}")
            if c not in oi:
                raise CategoryError(f"morphism {mid}: unknown cod {c}")
            names.append(mid)
            dom.append(oi[d])
            cod.append(oi[c])
        mi = {m: i for i, m in enumerate(names)}
        ident = []
        for o in objects:
            if o not in identities:
                raise CategoryError(f"object {o} has no identity")
            if identities[o] not in mi:
                raise CategoryError(f"identity of {o}: unknown morphism {identities[o]}")
            ident.append(mi[identities[o]])
        extra = set(identities) - set(oi)
        if extra:
            raise CategoryError(f"identity given for unknown object {sorted(extra)[0]}")
        comp = {}
        for g, f, gf in composition:
            for x in (g, f, gf):
                if x not in mi:
                    raise CategoryError(f"composition ({g}, {f}): unknown morphism {x}")
            key = (mi[g], mi[f])
            if key in comp and comp[key] != mi[gf]:
                raise CategoryError(f"composition ({g}, {f}) given twice")
            comp[key] = mi[gf]
        return cls(objects, names, dom, cod, ident, comp, name=name)

    # -- basic queries -------------------------------------------------
    @property
    def n_obj(self) -> int:
        return len(self.objects)

    @property
    def n_mor(self) -> int:
        return len(self.morphisms)

    def compose(self, g: int, f: int) -> int:
        return self.composition[(g, f)]

    def homs(self):
        """Dict (a, b) -> tuple of morphism indices a -> b, in id order."""
        if self._homs is None:
            h = {(a, b): [] for a in range(self.n_obj) for b in range(self.n_obj)}
            for m in range(self.n_mor):
                h[(int(self.dom[m]), int(self.cod[m]))].append(m)
            self._homs = {k: tuple(v) for k, v in h.items()}
        return self._homs

    def hom(self, a: int, b: int):
        return self.homs()[(a, b)]

    def table(self) -> np.ndarray:
        """Dense composition table ``T[g, f]`` with -1 off the composable pairs."""
        if self._table is None:
            m = self.n_mor
            if m > 4096:
                raise ResourceLimit(f"dense composition table of {self.name or 'category'}", m, 4096)
            t = np.full((m, m), -1, dtype=np.int64)
            if self.composition:
                keys = np.array(list(self.composition.keys()), dtype=np.int64)
                vals = np.array(list(self.composition.values()), dtype=np.int64)
                t[keys[:, 0], keys[:, 1]] = vals
            self._table = t
        return self._table

    def is_identity(self, m: int) -> bool:
        return int(self.identity[self.dom[m]]) == m

    def obj(self, name) -> int:
        return self.obj_index[name]

    def mor(self, name) -> int:
        return self.mor_index[name]

    def __repr__(self):
        return f"FinCategory({self.name or '?'}: {self.n_obj} objects, {self.n_mor} morphisms)"

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.morphisms == other.morphisms
            and np.array_equal(self.dom, other.dom)
            and np.array_equal(self.cod, other.cod)
            and np.array_equal(self.identity, other.identity)
            and self.composition == other.composition
        )

    __hash__ = object.__hash__


def validate_category(c: FinCategory) -> ValidationReport:
    """Check the category laws; the report lists every violated law instance."""
    rep = ValidationReport()
    M = c.n_mor
    on, mn = c.objects, c.morphisms
    for a in range(c.n_obj):
        i = int(c.identity[a])
        if c.dom[i] != a or c.cod[i] != a:
            rep.add("identity-type", on[a], mn[i])
    # totality and typing of composition
    for (g, f), gf in c.composition.items():
        if c.dom[g] != c.cod[f]:
            rep.add("composition-domain", mn[g], mn[f])
            continue
        if c.dom[gf] != c.dom[f] or c.cod[gf] != c.cod[g]:
            rep.add("composite-type", mn[g], mn[f], mn[gf])
    by_dom = {}
    for m in range(M):
        by_dom.setdefault(int(c.dom[m]), []).append(m)
    for f in range(M):
        for g in by_dom.get(int(c.cod[f]), ()):
            if (g, f) not in c.composition:
                rep.add("composition-missing", mn[g], mn[f])
    if not rep.ok:
        return rep
    comp = c.composition
    for f in range(M):
        if comp[(int(c.identity[c.cod[f]]), f)] != f:
            rep.add("left-unit", mn[f])
        if comp[(f, int(c.identity[c.dom[f]]))] != f:
            rep.add("right-unit", mn[f])
    for f in range(M):
        for g in by_dom.get(int(c.cod[f]), ()):
            gf = comp[(g, f)]
            for h in by_dom.get(int(c.cod[g]), ()):
                if comp[(h, gf)] != comp[(comp[(h, g)], f)]:
                    rep.add("associativity", mn[h], mn[g], mn[f])
    return rep
