"""Vertex and wall sets as Python integers (bit ``i`` set means ``i`` is a member)."""


def from_iter(items):
    mask = 0
    for i in items:
        mask |= 1 << i
    return mask


def members(mask):
    out = []
    i = 0
    while mask:
        low = mask & -mask
        i = low.bit_length() - 1
        out.append(i)
        mask ^= low
    return out


def lowest(mask):
    if not mask:
        raise ValueError("empty set has no lowest member")
    return (mask & -mask).bit_length() - 1


def count(mask):
    return mask.bit_count()


def full(n):
    return (1 << n) - 1


def is_subset(a, b):
    return a & ~b == 0
