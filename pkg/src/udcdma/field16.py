"""Additive group of GF(2^4) and its isomorphism to 16 antipodal 4-vectors.

Field elements are plain ints 0..15 in polynomial basis: bit k holds the
coefficient of alpha^k, with primitive polynomial alpha^4 + alpha + 1 = 0.
The group side consists of the four order-4 Sylvester-Hadamard columns
h0..h3, the four near-identity vectors a0..a3 (all ones with a single -1),
and their negations; componentwise multiplication of group vectors maps to
field addition (XOR).
"""

from __future__ import annotations

import numpy as np

# Negating a group vector corresponds to XOR with the field image of -h0.
NEG_BIT = 0b0100

_H0 = (1, 1, 1, 1)
_H1 = (1, -1, 1, -1)
_H2 = (1, 1, -1, -1)
_H3 = (1, -1, -1, 1)
_A = {i: tuple(-1 if j == i else 1 for j in range(4)) for i in range(4)}


def _neg(v):
    return tuple(-x for x in v)


# Isomorphism table: group vector -> field element (polynomial basis bits).
_PHI = {
    _H0: 0b0000,        # 0
    _H2: 0b0001,        # 1
    _H1: 0b0010,        # alpha
    _neg(_H0): 0b0100,  # alpha^2
    _A[1]: 0b1000,      # alpha^3
    _H3: 0b0011,        # alpha^4  = alpha + 1
    _neg(_H1): 0b0110,  # alpha^5
    _neg(_A[1]): 0b1100,  # alpha^6
    _A[2]: 0b1011,      # alpha^7
    _neg(_H2): 0b0101,  # alpha^8
    _A[3]: 0b1010,      # alpha^9
    _neg(_H3): 0b0111,  # alpha^10
    _neg(_A[3]): 0b1110,  # alpha^11
    _neg(_A[2]): 0b1111,  # alpha^12
    _A[0]: 0b1101,      # alpha^13
    _neg(_A[0]): 0b1001,  # alpha^14
}

_PHI_INV = {e: v for v, e in _PHI.items()}
assert len(_PHI_INV) == 16

# Display names for debugging / reports: bits -> "0", "1", "a", "a^k".
POWER_OF_BITS = {0b0000: None, 0b0001: 0, 0b0010: 1, 0b0100: 2, 0b1000: 3,
                 0b0011: 4, 0b0110: 5, 0b1100: 6, 0b1011: 7, 0b0101: 8,
                 0b1010: 9, 0b0111: 10, 0b1110: 11, 0b1111: 12, 0b1101: 13,
                 0b1001: 14}
BITS_OF_POWER = {p: b for b, p in POWER_OF_BITS.items()}


def power_label(bits: int) -> str:
    p = POWER_OF_BITS[bits]
    if p is None:
        return "0"
    if p == 0:
        return "1"
    if p == 1:
        return "a"
    return f"a^{p}"


def field_add(a: int, b: int) -> int:
    """Sum in GF(2^4): bitwise XOR of the polynomial-basis patterns."""
    return a ^ b


def phi(v) -> int:
    """Map one of the 16 group vectors to its field image."""
    key = tuple(int(x) for x in v)
    try:
        return _PHI[key]
    except KeyError:
        raise ValueError(f"{key} is not one of the 16 group vectors")


def phi_inv(e: int):
    """Inverse of phi: field element 0..15 -> antipodal 4-vector."""
    if not 0 <= e <= 15:
        raise ValueError(f"field element out of range: {e}")
    return np.array(_PHI_INV[e], dtype=np.int8)


def elementwise_mul(u, v):
    """Componentwise product of two group vectors (stays in the group)."""
    phi(u), phi(v)  # membership check
    return np.asarray(u, dtype=np.int8) * np.asarray(v, dtype=np.int8)


def negate(e: int) -> int:
    """Field image of the negated group vector: XOR with alpha^2."""
    return e ^ NEG_BIT


# 16 x 4 lookup: row e is phi_inv(e); handy for vectorised expansion.
ANTIPODAL_TABLE = np.array([_PHI_INV[e] for e in range(16)], dtype=np.int8)
