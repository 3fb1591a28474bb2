"""Brute-force reference implementations.

These work on the composition dictionary with plain loops and share no code
with the package beyond reading a FinCategory's fields, so agreement with the
vectorized routines is evidence for both.
"""
import itertools


def compose(c, g, f):
    return c.composition[(g, f)]


def hom(c, a, b):
    return [m for m in range(c.n_mor) if c.dom[m] == a and c.cod[m] == b]


def zero_objects(c):
    return [z for z in range(c.n_obj)
            if all(len(hom(c, a, z)) == 1 and len(hom(c, z, a)) == 1 for a in range(c.n_obj))]


def zero_map(c, z, a, b):
    """``a -> z -> b``."""
    return compose(c, hom(c, z, b)[0], hom(c, a, z)[0])


def universal_kernels(c, z, f):
    """Every ``kappa: k -> a`` satisfying the definition of a kernel of f."""
    a, b = int(c.dom[f]), int(c.cod[f])
    out = []
    for k in range(c.n_obj):
        for kap in hom(c, k, a):
            if compose(c, f, kap) != zero_map(c, z, k, b):
                continue
            ok = True
            for x in range(c.n_obj):
                for g in hom(c, x, a):
                    if compose(c, f, g) != zero_map(c, z, x, b):
                        continue
                    n = sum(1 for h in hom(c, x, k) if compose(c, kap, h) == g)
                    if n != 1:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append(kap)
    return out


def kernel_choice(c, z):
    """The deterministic choice: smallest universal kernel, with identities
    sent to ``!^a`` and the maps ``!_a`` to ``1_a``."""
    kappa = {}
    for f in range(c.n_mor):
        ks = universal_kernels(c, z, f)
        if not ks:
            return None, f
        kappa[f] = min(ks)
    for a in range(c.n_obj):
        kappa[int(c.identity[a])] = hom(c, z, a)[0]
        kappa[hom(c, a, z)[0]] = int(c.identity[a])
    return [kappa[f] for f in range(c.n_mor)], None


def commuting_squares(c):
    """``(f, g, h0, h1)`` with ``g h0 = h1 f``."""
    out = []
    for f in range(c.n_mor):
        for g in range(c.n_mor):
            for h0 in hom(c, int(c.dom[f]), int(c.dom[g])):
                for h1 in hom(c, int(c.cod[f]), int(c.cod[g])):
                    if compose(c, g, h0) == compose(c, h1, f):
                        out.append((f, g, h0, h1))
    return out


def chains(c, n):
    """Composable strings ``f1 .. fn`` (objects when n = 0)."""
    if n == 0:
        return [(a,) for a in range(c.n_obj)]
    out = []
    for ms in itertools.product(range(c.n_mor), repeat=n):
        if all(c.cod[ms[i]] == c.dom[ms[i + 1]] for i in range(n - 1)):
            out.append(ms)
    return out


def chain_morphism_count(c, n):
    """Natural transformations between n-chains, counted vertex by vertex."""
    total = 0
    cs = chains(c, n)
    for X in cs:
        for Y in cs:
            total += _count_maps(c, X, Y, n)
    return total


def _objs(c, X, n):
    if n == 0:
        return [X[0]]
    return [int(c.dom[X[0]])] + [int(c.cod[m]) for m in X]


def _count_maps(c, X, Y, n):
    ox, oy = _objs(c, X, n), _objs(c, Y, n)
    count = 0
    for comps in itertools.product(*[hom(c, ox[i], oy[i]) for i in range(n + 1)]):
        if all(compose(c, Y[i], comps[i]) == compose(c, comps[i + 1], X[i]) for i in range(n)):
            count += 1
    return count


def is_functor(F, S, T):
    for m in range(S.n_mor):
        if T.dom[F[1][m]] != F[0][S.dom[m]] or T.cod[F[1][m]] != F[0][S.cod[m]]:
            return False
    for a in range(S.n_obj):
        if F[1][S.identity[a]] != T.identity[F[0][a]]:
            return False
    for (g, f), gf in S.composition.items():
        if F[1][gf] != T.composition[(F[1][g], F[1][f])]:
            return False
    return True
