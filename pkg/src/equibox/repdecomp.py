"""Group action on the constrained box-mass deviation space.

The (Z/2)^m action: generator 0 reverses the order of the l+1 slabs,
generator j (1 <= j <= m-1) swaps the two sides of extra hyperplane j.
The deviation space is cut out of R^boxes by the slab equal-mass
constraints (one per slab) and the halving constraints (one per extra
hyperplane). Decomposing it into sign characters and multiplying the
characters' linear forms re-derives the certifier's criterion
polynomial by an independent route: the central cross-check of this
package.

All ranks are computed in exact rational arithmetic (Fraction); a
floating-point rank could silently shift a multiplicity by one and
poison the oracle.
"""

from dataclasses import dataclass
from fractions import Fraction

from equibox.gf2poly import PolyGF2

MAX_BOXES = 1 << 16


class TrivialCharacterError(Exception):
    """The trivial character occurs: an equivariant map exists and the
    index method certifies nothing for this action."""

    def __init__(self, multiplicity):
        self.multiplicity = multiplicity
        super().__init__(
            "trivial character has multiplicity %d; no index obstruction"
            % multiplicity
        )


@dataclass(frozen=True)
class ActionSpec:
    """Box permutation action plus the invariant constraint functionals.

    Boxes are indexed by id = slab * 2^(m-1) + bits, slab in [0, l],
    bits an (m-1)-bit side vector. generator_perms[i][b] is the image
    of box b under generator i; constraints are coefficient rows over
    box coordinates.
    """

    m: int
    l: int
    generator_perms: tuple
    constraints: tuple

    @property
    def box_count(self):
        return (self.l + 1) * 2 ** (self.m - 1)


@dataclass(frozen=True)
class CharacterTable:
    """Multiplicity of each sign character, keyed by the m-bit vector of
    generators acting by -1."""

    m: int
    multiplicities: dict
    total_dim: int


def character_name(chi):
    """Human name of a character: the GF(2) linear form, e.g. 'x1+x3'."""
    parts = ["x%d" % (i + 1) for i, bit in enumerate(chi) if bit]
    return "+".join(parts) if parts else "trivial"


def character_form(chi, m):
    """The character's linear form as a PolyGF2 (zero for trivial)."""
    return PolyGF2.linear_form(m, [i for i, bit in enumerate(chi) if bit])


def build_test_representation(m, l):
    """ActionSpec for l parallel hyperplanes and m-1 single ones."""
    if not 2 <= m <= 6:
        raise ValueError("m must be in [2, 6], got %r" % (m,))
    if l < 1:
        raise ValueError("l must be >= 1, got %r" % (l,))
    half = 2 ** (m - 1)
    nboxes = (l + 1) * half
    if nboxes > MAX_BOXES:
        raise ValueError("box count %d exceeds guard %d" % (nboxes, MAX_BOXES))

    def box(slab, bits):
        return slab * half + bits

    perms = []
    # generator 0: slab reversal
    perms.append(tuple(
        box(l - slab, bits) for slab in range(l + 1) for bits in range(half)
    ))
    # generator j: flip side bit j-1
    for j in range(1, m):
        bit = 1 << (j - 1)
        perms.append(tuple(
            box(slab, bits ^ bit) for slab in range(l + 1) for bits in range(half)
        ))

    constraints = []
    zero, one = Fraction(0), Fraction(1)
    for slab in range(l + 1):  # each slab holds exactly 1/(l+1): deviations sum to 0
        row = [zero] * nboxes
        for bits in range(half):
            row[box(slab, bits)] = one
        constraints.append(tuple(row))
    for j in range(1, m):  # each extra hyperplane halves the mass
        bit = 1 << (j - 1)
        row = [zero] * nboxes
        for slab in range(l + 1):
            for bits in range(half):
                if not bits & bit:
                    row[box(slab, bits)] = one
        constraints.append(tuple(row))

    return ActionSpec(m, l, tuple(perms), tuple(constraints))


# -- exact linear algebra over Q ---------------------------------------


def _rref(rows):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def _rank(rows):
    return len(_rref(rows)[0])


def _reduce_against(vec, rref_rows, pivots):
    """Residue of vec modulo the span of the given rref rows."""
    v = list(vec)
    for row, p in zip(rref_rows, pivots):
        if v[p] != 0:
            f = v[p]
            v = [a - f * b for a, b in zip(v, row)]
    return v


def _nullspace_basis(rows, ncols):
    rref_rows, pivots = _rref(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, p in zip(rref_rows, pivots):
            v[p] = -row[free]
        basis.append(v)
    return basis


# -- validation ---------------------------------------------------------


def validate_action_spec(spec):
    """Check involutivity, commutativity and constraint invariance.

    Raises ValueError on the first violated property.
    """
    n = spec.box_count
    ident = tuple(range(n))
    for i, p in enumerate(spec.generator_perms):
        if tuple(sorted(p)) != ident:
            raise ValueError("generator %d is not a permutation" % i)
        if tuple(p[p[b]] for b in range(n)) != ident:
            raise ValueError("generator %d is not an involution" % i)
    for i, p in enumerate(spec.generator_perms):
        for j, q in enumerate(spec.generator_perms[i + 1:], start=i + 1):
            if any(p[q[b]] != q[p[b]] for b in range(n)):
                raise ValueError("generators %d and %d do not commute" % (i, j))
    rref_rows, pivots = _rref(spec.constraints)
    for i, p in enumerate(spec.generator_perms):
        for c, row in enumerate(spec.constraints):
            image = [row[p[b]] for b in range(n)]
            if any(x != 0 for x in _reduce_against(image, rref_rows, pivots)):
                raise ValueError(
                    "constraint %d not invariant under generator %d" % (c, i)
                )


# -- character decomposition --------------------------------------------


def _group_perms(spec):
    """Permutation of every group element, indexed by generator subset mask."""
    n = spec.box_count
    perms = [tuple(range(n))]
    for mask in range(1, 1 << spec.m):
        low = mask & -mask
        prev = perms[mask ^ low]
        gen = spec.generator_perms[low.bit_length() - 1]
        perms.append(tuple(gen[prev[b]] for b in range(n)))
    return perms

def constraint_subspace_basis(spec):
    """Exact basis of the deviation space cut out by the constraints."""
    return _nullspace_basis(spec.constraints, spec.box_count)


def character_multiplicities(spec):
    """Decompose the constrained space into sign characters.

    For each character the group-averaged (sign-weighted) projector is
    applied to a basis of the constraint subspace and the multiplicity
    is the exact rank of the image.
    """
    basis = constraint_subspace_basis(spec)
    group = _group_perms(spec)
    n = spec.box_count
    scale = Fraction(1, 1 << spec.m)
    mult = {}
    for chi_mask in range(1 << spec.m):
        images = []
        for v in basis:
            acc = [Fraction(0)] * n
            for g_mask, perm in enumerate(group):
                if (g_mask & chi_mask).bit_count() & 1:
                    for b in range(n):
                        acc[b] -= v[perm[b]]
                else:
                    for b in range(n):
                        acc[b] += v[perm[b]]
            images.append([x * scale for x in acc])
        chi = tuple((chi_mask >> i) & 1 for i in range(spec.m))
        mult[chi] = _rank(images)
    return CharacterTable(spec.m, mult, len(basis))


def index_polynomial(spec, table=None):
    """Product over nontrivial characters of their linear form, raised to
    the multiplicity: the obstruction polynomial of the action.

    Raises TrivialCharacterError when the trivial character occurs (the
    action has nonzero fixed vectors, so no obstruction exists).
    """
    if table is None:
        table = character_multiplicities(spec)
    trivial = (0,) * spec.m
    if table.multiplicities.get(trivial, 0):
        raise TrivialCharacterError(table.multiplicities[trivial])
    poly = PolyGF2.one(spec.m)
    for chi, k in sorted(table.multiplicities.items()):
        if k and chi != trivial:
            poly = poly * character_form(chi, spec.m) ** k
    return poly
