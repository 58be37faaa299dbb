"""Construction of overloaded uniquely decodable antipodal code sets.

A code set C is [H_L | antipodal(V_L)] where H_L is the Sylvester-Hadamard
matrix and V_L is a symbol matrix over GF(2^4) built recursively from a
2x5 seed.  Symbols expand to antipodal 4-vectors through the group
isomorphism in :mod:`udcdma.field16`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import field16
from .field16 import BITS_OF_POWER, NEG_BIT

EQ10 = "eq10"
EQ14 = "eq14"
VARIANTS = (EQ10, EQ14)

ALPHA = BITS_OF_POWER[1]
ALPHA2 = BITS_OF_POWER[2]
ONE = BITS_OF_POWER[0]

# Leading symbol of each repeated (lead, 1, alpha) triple in the R block;
# also the (0,0) entry of the corresponding seed.
LEAD_SYMBOL = {EQ10: BITS_OF_POWER[13], EQ14: BITS_OF_POWER[14]}


@dataclass(frozen=True)
class CodeSet:
    """Antipodal L x K code matrix with unit chips."""

    L: int
    K: int
    entries: np.ndarray  # L x K, values in {-1, +1}
    variant: str

    def __post_init__(self):
        assert self.entries.shape == (self.L, self.K)
        assert np.all(np.abs(self.entries) == 1)


@dataclass(frozen=True)
class BinaryCodeSet:
    """0/1 image of a CodeSet under C_b = (C + J) / 2."""

    L: int
    K: int
    entries: np.ndarray  # L x K, values in {0, 1}


def _check_variant(variant: str) -> str:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    return variant


def sylvester_hadamard(p: int) -> np.ndarray:
    """H_{2^p} by the Sylvester doubling recursion, entries int8 +/-1."""
    if p < 0:
        raise ValueError("p must be non-negative")
    h = np.array([[1]], dtype=np.int8)
    for _ in range(p):
        h = np.block([[h, h], [h, -h]]).astype(np.int8)
    return h


def gamma(L: int) -> int:
    """Total popcount of 1..L-1; the max overload is gamma(L)+1 users."""
    if L < 1:
        raise ValueError("L must be positive")
    return sum(bin(n).count("1") for n in range(1, L))


def seed_v8(variant: str) -> np.ndarray:
    """The 2x5 seed symbol matrix for L=8 (entries are field ints)."""
    _check_variant(variant)
    a = BITS_OF_POWER
    if variant == EQ10:
        return np.array(
            [[a[13], ONE, ALPHA, a[13], a[3]],
             [0, 0, 0, a[13], a[6]]], dtype=np.uint8)
    return np.array(
        [[a[14], ONE, ALPHA, a[3], a[3]],
         [0, 0, 0, a[3], a[6]]], dtype=np.uint8)


def _negate_symbols(V: np.ndarray) -> np.ndarray:
    """Negate every symbol of a block (XOR with the negation bit)."""
    return V ^ NEG_BIT


def _r_block(M: int, variant: str) -> np.ndarray:
    """M block rows x (4M - 1) columns of repeated (lead, 1, alpha) triples.

    Block row i carries the triple at columns 4i..4i+2 and, for i >= 1, a
    negated-zero symbol (alpha^2) at column 4i-1 separating the triples.
    """
    lead = LEAD_SYMBOL[variant]
    R = np.zeros((M, 4 * M - 1), dtype=np.uint8)
    for i in range(M):
        R[i, 4 * i] = lead
        R[i, 4 * i + 1] = ONE
        R[i, 4 * i + 2] = ALPHA
        if i >= 1:
            R[i, 4 * i - 1] = ALPHA2
    return R


def recurse_v(L: int, variant: str) -> np.ndarray:
    """Symbol matrix V_L for L a power of two >= 16.

    V_L = [[V_{L/2}, V_{L/2}, R], [V_{L/2}, V_{L/2}^-, 0]] where the minus
    superscript negates every symbol and R holds the repeated triples.
    """
    _check_variant(variant)
    if L < 16 or L & (L - 1):
        raise ValueError("recurse_v needs L a power of two, L >= 16")
    V = seed_v8(variant)
    half = V if L == 16 else recurse_v(L // 2, variant)
    M = L // 8
    R = _r_block(M, variant)
    top = np.hstack([half, half, R])
    bottom = np.hstack([half, _negate_symbols(half),
                        np.zeros((half.shape[0], R.shape[1]), dtype=np.uint8)])
    out = np.vstack([top, bottom])
    assert out.shape == (L // 4, gamma(L) + 1 - L)
    return out


def extend_v(L_prime: int, variant: str) -> np.ndarray:
    """Symbol matrix for non-power-of-two lengths L' = L + 4m.

    Block-diagonal layout [[V_L, 0], [0, R']] where V_L belongs to the
    largest power of two L below L' and R' holds m rows of the
    (lead, 1, alpha) triple, one triple per extra 4-chip block.
    """
    _check_variant(variant)
    if L_prime % 4 or L_prime <= 8 or L_prime & (L_prime - 1) == 0:
        raise ValueError("extend_v needs L' = 0 mod 4, L' > 8, not a power of two")
    L = 1 << (L_prime.bit_length() - 1)
    m = (L_prime - L) // 4
    V = seed_v8(variant) if L == 8 else recurse_v(L, variant)
    lead = LEAD_SYMBOL[variant]
    Rp = np.zeros((m, 3 * m), dtype=np.uint8)
    for i in range(m):
        Rp[i, 3 * i:3 * i + 3] = (lead, ONE, ALPHA)
    top = np.hstack([V, np.zeros((V.shape[0], 3 * m), dtype=np.uint8)])
    bottom = np.hstack([np.zeros((m, V.shape[1]), dtype=np.uint8), Rp])
    return np.vstack([top, bottom])


def symbols_to_antipodal(S: np.ndarray) -> np.ndarray:
    """Expand each field symbol to its antipodal 4-vector, block-row-wise."""
    S = np.asarray(S, dtype=np.uint8)
    M, n = S.shape
    out = np.empty((4 * M, n), dtype=np.int8)
    for i in range(M):
        out[4 * i:4 * i + 4, :] = field16.ANTIPODAL_TABLE[S[i]].T
    return out


def build_code_set(L: int, variant: str) -> CodeSet:
    """Assemble the L x K antipodal code set for any L = 0 mod 4."""
    _check_variant(variant)
    if L % 4:
        raise ValueError("L must be a multiple of 4")
    if L == 4:
        extra = field16.ANTIPODAL_TABLE[BITS_OF_POWER[3]].reshape(4, 1)
        entries = np.hstack([sylvester_hadamard(2), extra])
        return CodeSet(4, 5, entries, variant)
    if L & (L - 1) == 0:
        p = L.bit_length() - 1
        V = seed_v8(variant) if L == 8 else recurse_v(L, variant)
        entries = np.hstack([sylvester_hadamard(p), symbols_to_antipodal(V)])
        return CodeSet(L, gamma(L) + 1, entries, variant)
    V = extend_v(L, variant)
    L_pow = 1 << (L.bit_length() - 1)
    H_big = sylvester_hadamard(L_pow.bit_length())  # H_{2L_pow}
    H = H_big[:L, :L]
    entries = np.hstack([H, symbols_to_antipodal(V)])
    return CodeSet(L, entries.shape[1], entries, variant)


def to_binary(C: CodeSet) -> BinaryCodeSet:
    """Map a code set with all-ones first row to its 0/1 image.

    Columns starting with -1 are negated first (a null-space-preserving
    normalization), then C_b = (C + J) / 2.
    """
    A = C.entries * C.entries[0:1, :]
    if not np.all(A[0] == 1):
        raise ValueError("cannot normalize first row to all ones")
    return BinaryCodeSet(C.L, C.K, ((A + 1) // 2).astype(np.int8))


def format_figure(entries: np.ndarray) -> str:
    """Rows of '+'/'-' glyphs, the style the figures use."""
    return "\n".join("".join("+" if x > 0 else "-" for x in row) for row in entries)


def format_csv(entries: np.ndarray) -> str:
    return "\n".join(",".join(str(int(x)) for x in row) for row in entries)


def parse_figure(text: str) -> np.ndarray:
    """Inverse of format_figure; ignores blank lines and whitespace."""
    rows = []
    for line in text.splitlines():
        line = "".join(line.split())
        if line:
            rows.append([1 if ch == "+" else -1 for ch in line])
    return np.array(rows, dtype=np.int8)


def load_fixture(name: str) -> np.ndarray:
    """Load a packaged +/- matrix fixture by file name."""
    from importlib.resources import files

    text = files("udcdma.fixtures").joinpath(name).read_text()
    return parse_figure(text)
