# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernel for GF(2) term-set multiplication.

Same packed-key convention as the pure fallback (16 bits per exponent).
For up to 4 variables a packed term fits a uint64, so the multiply runs
entirely in C++ (hash-set parity toggling). Wider polynomials delegate
to the pure kernel; every hot caller in this package has nvars <= 4.
"""

from libc.stdint cimport uint64_t
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

from equibox import _gf2fallback as _pure

BACKEND = "cython"

# carries into bits 16/32/48 flag an exponent-field overflow
cdef uint64_t _INNER_MASK = (<uint64_t>1 << 16) | (<uint64_t>1 << 32) | (<uint64_t>1 << 48)


def mul_terms(a_keys, b_keys, int nvars):
    """Multiply two GF(2) polynomials given as sets of packed term keys."""
    if nvars > 4:
        return _pure.mul_terms(a_keys, b_keys, nvars)
    if len(a_keys) > len(b_keys):
        a_keys, b_keys = b_keys, a_keys

    cdef vector[uint64_t] av, bv
    av.reserve(len(a_keys))
    bv.reserve(len(b_keys))
    for k in a_keys:
        av.push_back(k)
    for k in b_keys:
        bv.push_back(k)

    cdef unordered_set[uint64_t] acc
    acc.reserve(bv.size() * 4)

    cdef size_t i, j
    cdef uint64_t ka, kb, s
    cdef bint overflow = False
    for i in range(av.size()):
        ka = av[i]
        for j in range(bv.size()):
            kb = bv[j]
            s = ka + kb
            if s < ka or (ka ^ kb ^ s) & _INNER_MASK:
                overflow = True
                break
            if acc.erase(s) == 0:
                acc.insert(s)
        if overflow:
            break
    if overflow:
        raise OverflowError(
            "exponent sum exceeds %d in term product" % _pure.EXP_MAX
        )

    out = set()
    for s in acc:
        out.add(s)
    return out
