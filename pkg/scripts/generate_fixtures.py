"""Write the checked-in fixtures under tests/fixtures.

Every fixture is derived from the built-in corpus, so rerunning this script
reproduces the files byte for byte (tests/test_fixtures.py checks that).

    python3 scripts/generate_fixtures.py [--out DIR]
"""
import argparse
from pathlib import Path

import numpy as np

from kernelcat.arrow import find_kernels, kernel_functor, make_pointed
from kernelcat.arrow.arrow import arrow_rows
from kernelcat.arrow import cubes
from kernelcat.io.corpus import build, entry
from kernelcat.io.formats import emit_category, emit_lax, emit_simplicial
from kernelcat.simplicial import supercoherent_nerve, tabulate

CATEGORIES = ["terminal", "two", "finptset2", "finptset3", "finvect2", "nokernel"]


def lax_for(name):
    e = entry(name)
    return kernel_functor(find_kernels(make_pointed(e.category, e.zero)))


def mutate_phi_at_beta(d):
    """Change phi at one square A(beta)(f) to another map with the same
    domain and codomain, so that only the unit condition can notice."""
    C, p = d.category, d.pointed
    fs = np.arange(C.n_mor)
    Ab = d.arrow.ids_of_rows(cubes.beta_inner(p, arrow_rows(C, fs), 1))
    for f in fs:
        s = int(Ab[f])
        cur = int(d.phi[s])
        others = [m for m in C.hom(int(C.dom[cur]), int(C.cod[cur])) if m != cur]
        if others:
            m = d.copy()
            m.phi[s] = others[0]
            return m, C.morphisms[int(f)]
    raise RuntimeError("no phi component at A(beta) can be changed")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "tests" / "fixtures"))
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    for name in CATEGORIES:
        e = entry(name)
        files[f"{name}.json"] = emit_category(build(name), zero=e.zero)
    d = lax_for("finptset2")
    files["lax_finptset2.json"] = emit_lax(d)
    bad, f = mutate_phi_at_beta(d)
    files["lax_finptset2_mutated_phi.json"] = emit_lax(bad)
    x = tabulate(supercoherent_nerve(d, 3), name="supercoherent nerve of FinPtSet2")
    files["supercoherent_finptset2.json"] = emit_simplicial(x)
    for fname, text in files.items():
        (out / fname).write_text(text)
        print(f"wrote {out / fname} ({len(text)} bytes)")
    print(f"mutated phi at A(beta)({f})")


if __name__ == "__main__":
    main()
