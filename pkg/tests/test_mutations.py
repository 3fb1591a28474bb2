"""Mutation tests: every deliberately broken structure must be rejected with a
named FAIL that carries a witness."""
import numpy as np
import pytest

from kernelcat.arrow import check_lax_algebra
from kernelcat.core import FinCategory, validate_category
from kernelcat.io.corpus import build
from kernelcat.report import FAIL, LawReport
from kernelcat.simplicial import check_supercoherence, supercoherent_nerve

from helpers import lax


def _spread(items, k):
    """k items spread evenly over the list, in order."""
    if len(items) <= k:
        return list(items)
    return [items[int(i)] for i in np.linspace(0, len(items) - 1, k)]


# -- phi components -----------------------------------------------------------

def _phi_mutants(name, k):
    d = lax(name)
    C = d.category
    out = []
    for S in _spread(range(len(d.phi)), k):
        cur = int(d.phi[S])
        same = [m for m in C.hom(int(C.dom[cur]), int(C.cod[cur])) if m != cur]
        new = same[0] if same else (cur + 1) % C.n_mor

        def run(S=S, new=new):
            m = d.copy()
            m.phi[S] = new
            return check_lax_algebra(m)
        out.append((f"phi-{name}-{S}", run))
    return out


# -- composition table cells ----------------------------------------------------

def _composition_mutants(name, k):
    C = build(name)
    ids = set(int(i) for i in C.identity)
    cells = []
    for (g, f), gf in sorted(C.composition.items()):
        alts = [m for m in C.hom(int(C.dom[f]), int(C.cod[g])) if m != gf]
        if alts:
            cells.append((g, f, alts[0], g in ids or f in ids))
    picked = _spread([c for c in cells if not c[3]], k) + _spread([c for c in cells if c[3]], 2)
    out = []
    for g, f, new, _ in picked:
        def run(g=g, f=f, new=new):
            comp = dict(C.composition)
            comp[(g, f)] = new
            D = FinCategory(C.objects, C.morphisms, C.dom, C.cod, C.identity, comp, name=C.name)
            rep = LawReport(f"validate {C.name}")
            for v in validate_category(D).violations:
                rep.add(v.law, FAIL, v.witness)
            return rep
        out.append((f"comp-{name}-{C.morphisms[g]}.{C.morphisms[f]}", run))
    return out


# -- degeneracies -----------------------------------------------------------------

_NERVES = {}


def _nerve(name):
    if name not in _NERVES:
        _NERVES[name] = supercoherent_nerve(lax(name), 3)
    return _NERVES[name]


def _degeneracy_mutants(name):
    x = _nerve(name)
    out = []
    for (n, j), op in sorted(x.degeneracies.items()):
        src, tgt = op.src.objects(), op.tgt.objects()
        for i in sorted({0, len(src) - 1}):
            cur = op.obj(src[i:i + 1])[0]
            other = next(r for r in tgt if not np.array_equal(r, cur))

            def run(n=n, j=j, i=i, other=other):
                op = x.degeneracies[(n, j)]
                return check_supercoherence(x.replace(degeneracies={**x.degeneracies,
                                                                    (n, j): op.patched("obj", i, other)}))
            out.append((f"s{j}-X{n}-{name}-obj{i}", run))
        gens = op.src.generators()
        other = None
        if len(gens) > 1:
            # another morphism of the target level: the image of a different generator
            imgs = op.mor(gens)
            other = next((r for r in imgs if not np.array_equal(r, imgs[0])), None)
        if other is not None:
            def run(n=n, j=j, other=other):
                op = x.degeneracies[(n, j)]
                return check_supercoherence(x.replace(degeneracies={**x.degeneracies,
                                                                    (n, j): op.patched("mor", 0, other)}))
            out.append((f"s{j}-X{n}-{name}-mor0", run))
    return out


MUTANTS = (_phi_mutants("finptset2", 8) + _phi_mutants("finptset3", 4)
           + _composition_mutants("finptset3", 8) + _composition_mutants("finvect2", 4)
           + _degeneracy_mutants("finptset2") + _degeneracy_mutants("finptset3"))


def _killed(rep):
    fails = rep.failures()
    return bool(fails) and all(c.status == FAIL and c.law for c in fails) and bool(fails[0].witness)


@pytest.mark.parametrize("label,run", MUTANTS, ids=[m[0] for m in MUTANTS])
def test_mutant_is_killed(label, run):
    rep = run()
    assert _killed(rep), rep.to_text()


def test_mutant_census():
    kinds = {"phi": 0, "comp": 0, "s": 0}
    for label, _ in MUTANTS:
        kinds["s" if label.startswith("s") else label.split("-")[0]] += 1
    assert len(MUTANTS) >= 30
    assert len({m[0] for m in MUTANTS}) == len(MUTANTS)
    assert all(v >= 6 for v in kinds.values()), kinds
