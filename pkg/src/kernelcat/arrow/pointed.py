"""Pointed categories as coalgebras for the arrow comonad."""
from __future__ import annotations

import numpy as np

from ..core.category import FinCategory
from . import cubes
from .arrow import arrow_rows, build_arrow_category, comonad_structure


class NotPointed(ValueError):
    """The designated object is not a zero object."""

    def __init__(self, obj, reason):
        super().__init__(reason if obj is None else f"object {obj} {reason}")
        self.obj = obj
        self.reason = reason


class CoalgebraLawViolation(ValueError):
    def __init__(self, law, witness):
        super().__init__(f"{law}: {witness}")
        self.law = law
        self.witness = witness


class PointedCategory:
    """A category with a designated zero object.

    ``bang[a]`` is the unique ``!_a: a -> 0``, ``cobang[a]`` the unique
    ``!^a: 0 -> a``; ``zero_mor[a, b]`` the zero morphism ``!^b . !_a``.
    ``beta`` maps ``f`` to the square ``(f, 1_0): !_a -> !_b`` (as a square id of
    ``A(C)``); on objects it sends ``a`` to ``!_a``.
    """

    def __init__(self, category: FinCategory, zero: int, bang, cobang):
        self.category = C = category
        self.zero = int(zero)
        self.bang = np.asarray(bang, dtype=np.int64)
        self.cobang = np.asarray(cobang, dtype=np.int64)
        T = C.table()
        self.zero_mor = T[self.cobang[None, :], self.bang[:, None]]
        self._beta = None

    @property
    def zero_name(self):
        return self.category.objects[self.zero]

    def is_zero(self, m) -> np.ndarray:
        """Mask of zero morphisms."""
        C = self.category
        m = np.asarray(m)
        return self.zero_mor[C.dom[m], C.cod[m]] == m

    @property
    def arrow(self):
        return build_arrow_category(self.category)

    @property
    def beta(self) -> np.ndarray:
        """Square ids ``beta(f)`` for every morphism f."""
        if self._beta is None:
            C = self.category
            fs = np.arange(C.n_mor)
            sq = self.arrow.ids_of_rows(cubes.beta_inner(self, arrow_rows(C, fs), 1))
            if np.any(sq < 0):
                bad = int(np.nonzero(sq < 0)[0][0])
                raise CoalgebraLawViolation("beta-square", C.morphisms[bad])
            self._beta = sq
        return self._beta

    def beta_obj(self, a):
        return self.bang[np.asarray(a)]

    def beta_functor(self):
        from ..core.functor import Functor
        return Functor(self.category, self.arrow.category, self.bang, self.beta, name="beta", check=False)

    def check_coalgebra(self):
        """Evaluate ``eps . beta = 1`` and ``A(beta) . beta = delta . beta``.

        Returns a list of ``(law, witness)`` failures.
        """
        C = self.category
        A = self.arrow
        fails = []
        objs = np.arange(C.n_obj)
        fs = np.arange(C.n_mor)
        # eps . beta = 1
        if not np.array_equal(C.dom[self.bang], objs):
            bad = int(np.nonzero(C.dom[self.bang] != objs)[0][0])
            fails.append(("counit-objects", C.objects[bad]))
        got = A.h0[self.beta]
        if not np.array_equal(got, fs):
            bad = int(np.nonzero(got != fs)[0][0])
            fails.append(("counit-morphisms", C.morphisms[bad]))
        # A(beta) . beta = delta . beta; on objects: beta applied to the arrow !_a
        cd = comonad_structure(C)
        lhs_o = cubes.beta_inner(self, arrow_rows(C, self.bang), 1)
        rhs_o = cd.delta_obj(self.bang)
        bad = np.nonzero(np.any(lhs_o != rhs_o, axis=1))[0]
        if len(bad):
            fails.append(("coassociativity-objects", C.objects[int(bad[0])]))
        lhs_m = cubes.beta_inner(self, A.rows[self.beta], 2)
        rhs_m = cd.delta_mor(self.beta)
        bad = np.nonzero(np.any(lhs_m != rhs_m, axis=1))[0]
        if len(bad):
            fails.append(("coassociativity-morphisms", C.morphisms[int(bad[0])]))
        return fails


def make_pointed(c: FinCategory, zero) -> PointedCategory:
    """Check that ``zero`` (an object id or index) is initial and terminal.

    With ``zero=None`` the first zero object in declaration order is used.
    """
    if zero is None:
        zs = [a for a in range(c.n_obj)
              if all(len(c.hom(b, a)) == 1 and len(c.hom(a, b)) == 1 for b in range(c.n_obj))]
        if not zs:
            raise NotPointed(None, f"{c.name} has no zero object")
        zero = zs[0]
    z = c.obj(zero) if isinstance(zero, str) else int(zero)
    if not 0 <= z < c.n_obj:
        raise NotPointed(zero, "is not an object")
    bang, cobang = [], []
    for a in range(c.n_obj):
        to, fro = c.hom(a, z), c.hom(z, a)
        if len(to) != 1:
            raise NotPointed(c.objects[a], f"has {len(to)} morphisms to {c.objects[z]}")
        if len(fro) != 1:
            raise NotPointed(c.objects[a], f"has {len(fro)} morphisms from {c.objects[z]}")
        bang.append(to[0])
        cobang.append(fro[0])
    p = PointedCategory(c, z, bang, cobang)
    fails = p.check_coalgebra()
    if fails:
        raise CoalgebraLawViolation(*fails[0])
    return p
