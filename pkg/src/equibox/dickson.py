"""Dickson polynomials over GF(2) in two equivalent constructions.

P_m is the product of all 2^m - 1 nonzero GF(2) linear forms in
x1..xm; over GF(2) it equals the Moore determinant, i.e. the sum over
all permutations s of x_{s(1)}^{2^(m-1)} * x_{s(2)}^{2^(m-2)} * ... *
x_{s(m)}. Both are built here and tested for coincidence.
"""

from itertools import permutations

from equibox.gf2poly import PolyGF2

MAX_VARS = 6


def _check_m(m):
    if not 1 <= m <= MAX_VARS:
        raise ValueError("m must be in [1, %d], got %r" % (MAX_VARS, m))


def dickson_product(m):
    """Product of all nonzero linear forms in m variables."""
    _check_m(m)
    p = PolyGF2.one(m)
    for mask in range(1, 1 << m):
        p = p * PolyGF2.linear_form(m, [i for i in range(m) if mask >> i & 1])
    return p


def dickson_moore(m):
    """Permutation-sum (Moore determinant) form of the same polynomial."""
    _check_m(m)
    terms = []
    for sigma in permutations(range(m)):
        exps = [0] * m
        for j, i in enumerate(sigma):
            exps[i] = 1 << (m - 1 - j)
        terms.append(tuple(exps))
    # the m! permutation monomials are pairwise distinct: no cancellation
    return PolyGF2(m, terms)
