"""Pure-Python kernel for GF(2) term-set multiplication.

Terms are packed integers: the exponent of variable i occupies bits
[16*i, 16*i + 16). Addition of two packed terms is plain integer addition,
and a carry crossing a field boundary is exactly a 16-bit exponent
overflow, detected with the XOR carry identity (a ^ b ^ (a+b) has bit k
set iff the addition carried into bit k).
"""

BACKEND = "pure"

EXP_BITS = 16
EXP_MAX = (1 << EXP_BITS) - 1


def carry_mask(nvars):
    """Bit mask of all field boundaries for an nvars-variable term."""
    mask = 0
    for j in range(1, nvars + 1):
        mask |= 1 << (EXP_BITS * j)
    return mask


def mul_terms(a_keys, b_keys, nvars):
    """Multiply two GF(2) polynomials given as sets of packed term keys.

    Returns the set of product keys with odd multiplicity. Raises
    OverflowError if any exponent sum exceeds EXP_MAX.
    """
    mask = carry_mask(nvars)
    out = set()
    # iterate over the smaller operand in the outer loop: fewer rebinds
    if len(a_keys) > len(b_keys):
        a_keys, b_keys = b_keys, a_keys
    for ka in a_keys:
        for kb in b_keys:
            s = ka + kb
            if (ka ^ kb ^ s) & mask:
                raise OverflowError(
                    "exponent sum exceeds %d in term product" % EXP_MAX
                )
            if s in out:
                out.remove(s)
            else:
                out.add(s)
    return out
