"""Shared, cached constructions for the test modules."""
from functools import lru_cache

from kernelcat.arrow import find_kernels, kernel_functor, make_pointed
from kernelcat.io.corpus import build, entry

KERNEL_BEARING = ["finptset2", "finptset3", "finvect2"]
ALL_POINTED = ["terminal"] + KERNEL_BEARING
CORPUS = ["terminal", "two", "finptset2", "finptset3", "finvect2", "nokernel"]


@lru_cache(maxsize=None)
def pointed(name):
    return make_pointed(build(name), entry(name).zero)


@lru_cache(maxsize=None)
def kernels(name):
    return find_kernels(pointed(name))


@lru_cache(maxsize=None)
def lax(name):
    return kernel_functor(kernels(name))


@lru_cache(maxsize=None)
def lax_report(name):
    from kernelcat.arrow import check_lax_algebra
    return check_lax_algebra(lax(name))


def alternative_kernels(name):
    """The system choosing the last universal candidate instead of the first."""
    p = pointed(name)
    return find_kernels(p, order=list(range(p.category.n_mor))[::-1])
