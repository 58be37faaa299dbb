"""Decoders for the constructed code sets.

Three decoders share this module:

* ``nda_decode`` -- exact noiseless decoding of r = C x' (x' in {0,1}^K)
  by modular linear functionals plus a halving recursion; linear work in K.
* ``fda_decode`` -- noisy fast decoder: per-row quantization onto the
  feasible level progressions, the exact solver as the consistency engine,
  and bounded backtracking over per-row retry counters.
* ``ml_decode`` -- exhaustive maximum-likelihood oracle (2^K enumeration).

The exact solver works on the affine image r = (y + C·1)/2.  Row-pair sums
across the two halves of the code cancel every Hadamard and seed column
modulo 4 and isolate the repeated-triple column bits, which are then
stripped so the two halves fold into two half-length problems.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import codebook
from .codebook import EQ10, EQ14, CodeSet


class InconsistencyError(ValueError):
    """The observation is not a valid noiseless lattice point."""


@dataclass
class DecodeResult:
    bits: np.ndarray          # K-vector over {-1, +1}
    iterations: int = 1       # outer-loop count (FDA)
    backtracks: int = 0       # row re-runs (FDA)
    exact: bool = False       # decoder certified y on the noiseless lattice


@dataclass
class FdaConfig:
    n_c_max: int = 32
    tie_rule: str = "smaller_magnitude"

    def __post_init__(self):
        if self.n_c_max < 1:
            raise ValueError("n_c_max must be >= 1")


# ---------------------------------------------------------------------------
# exact solver
# ---------------------------------------------------------------------------

# Coefficient of the first seed-column bit in the two mod-8 functionals
# (sum of cross-half differences, sum of cross-half sums); the remaining
# known-bit coefficients are 4 for both variants.
_MOD8_X8_COEF = {EQ10: (2, 6), EQ14: (6, 2)}


def _mod4_bit(value: int, strict: bool) -> int:
    m = int(value) % 4
    if strict and m not in (0, 2):
        raise InconsistencyError(f"mod-4 residue {m} outside {{0, 2}}")
    return 1 if m == 2 else 0


def _mod8_bit(value: int, strict: bool) -> int:
    m = int(value) % 8
    if strict and m not in (0, 4):
        raise InconsistencyError(f"mod-8 residue {m} outside {{0, 4}}")
    return 1 if m in (3, 4, 5) else 0


def _hadamard_bits(vec: np.ndarray, strict: bool) -> np.ndarray:
    """Solve H_L u = vec for u in {0,1}^L (H orthogonal: u = H^T vec / L)."""
    L = len(vec)
    H = codebook.sylvester_hadamard(L.bit_length() - 1)
    u = H.T.astype(np.int64) @ vec
    if strict:
        if np.any(u % L):
            raise InconsistencyError("non-integral Hadamard coordinates")
        u = u // L
        if np.any((u != 0) & (u != 1)):
            raise InconsistencyError("Hadamard coordinate outside {0, 1}")
        return u
    return np.clip(np.rint(u / L), 0, 1).astype(np.int64)


def _solve_base4(r: np.ndarray, strict: bool) -> np.ndarray:
    """C_{4x5} = [H_4 | a_1]: the appended-column bit from the row sum mod 4."""
    x4 = _mod4_bit(int(r.sum()), strict)
    extra = _code_entries(4, EQ14)[:, 4].astype(np.int64)
    u = _hadamard_bits(r - x4 * extra, strict)
    return np.concatenate([u, [x4]])


def _solve_base8(r: np.ndarray, variant: str, strict: bool) -> np.ndarray:
    """Resolve the five seed-column bits of C_{8x13}, then the Hadamard bits.

    Cross-half differences d_t = r[4+t] - r[t] cancel the [h; h] columns;
    pairwise sums d_a + d_b further cancel the [h; -h] columns mod 4 and
    isolate single seed bits.  The two seed columns invisible mod 4 fall out
    of the mod-8 functionals sum(d_t) and sum(r[4+t] + r[t]).
    """
    d = r[4:8] - r[0:4]
    s = r[4:8] + r[0:4]
    x9 = _mod4_bit(d[1] + d[3], strict)
    x10 = _mod4_bit(d[2] + d[3], strict)
    x8 = _mod4_bit(d[0] + d[1], strict) ^ x10
    if strict:
        for value, want in (
            (d[0] + d[2], x8 ^ x9),
            (d[0] + d[3], x8 ^ x9 ^ x10),
            (d[1] + d[2], x9 ^ x10),
        ):
            if _mod4_bit(value, strict) != want:
                raise InconsistencyError("redundant mod-4 functional mismatch")
    cd, cs = _MOD8_X8_COEF[variant]
    x12 = _mod8_bit(int(d.sum()) - cd * x8 - 4 * x9 - 4 * x10, strict)
    x11 = _mod8_bit(int(s.sum()) - cs * x8 - 4 * x9 - 4 * x10, strict)
    xv = np.array([x8, x9, x10, x11, x12], dtype=np.int64)
    C = _code_entries(8, variant)
    r1 = r - C[:, 8:13].astype(np.int64) @ xv
    top, bot = r1[:4], r1[4:]
    if strict and np.any((top + bot) % 2):
        raise InconsistencyError("half-fold parity violation")
    u = _hadamard_bits((top + bot) // 2, strict)
    w = _hadamard_bits((top - bot) // 2, strict)
    return np.concatenate([u, w, xv])


_CODE_CACHE: dict[tuple[int, str], np.ndarray] = {}
_EXTRACT_CACHE: dict[tuple[int, str], tuple] = {}


def _code_entries(L: int, variant: str) -> np.ndarray:
    key = (L, variant)
    if key not in _CODE_CACHE:
        _CODE_CACHE[key] = codebook.build_code_set(L, variant).entries
    return _CODE_CACHE[key]


def _extraction_plan(L: int, variant: str):
    """Per-level plan for the repeated-triple bits at length L >= 16.

    Functionals are signed row selections of r whose coefficient vectors
    (lambda^T C) vanish mod 4 on every column except the triple block;
    remaining coefficients lie in {0, 2}, giving a GF(2) linear system.
    """
    key = (L, variant)
    if key in _EXTRACT_CACHE:
        return _EXTRACT_CACHE[key]
    C = _code_entries(L, variant).astype(np.int64)
    K = C.shape[1]
    M = L // 8
    n_r = 4 * M - 1
    r_cols = np.arange(K - n_r, K)
    half = L // 2
    lambdas = []
    for i in range(M):
        for a in range(4):
            for b in range(a + 1, 4):
                lam = np.zeros(L, dtype=np.int64)
                lam[[half + 4 * i + a, half + 4 * i + b]] += 1
                lam[[4 * i + a, 4 * i + b]] -= 1
                lambdas.append(lam)
    for i in range(1, M):
        for t in range(4):
            lam = np.zeros(L, dtype=np.int64)
            lam[[half + 4 * i + t, t]] += 1
            lam[[4 * i + t, half + t]] -= 1
            lambdas.append(lam)
    lam_mat = np.array(lambdas)
    coefs = lam_mat @ C
    other = np.delete(coefs, r_cols, axis=1)
    assert not np.any(other % 4), "functional leaks outside the triple block"
    assert not np.any(coefs[:, r_cols] % 2), "odd coefficient in triple block"
    A2 = (coefs[:, r_cols] // 2) % 2
    plan = (lam_mat, A2.astype(np.uint8), r_cols)
    assert _gf2_rank(A2.copy()) == n_r, "triple-bit system not full rank"
    _EXTRACT_CACHE[key] = plan
    return plan


def _gf2_rank(A: np.ndarray) -> int:
    A = A % 2
    rank = 0
    rows, cols = A.shape
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if A[i, c]), None)
        if piv is None:
            continue
        A[[rank, piv]] = A[[piv, rank]]
        mask = A[:, c].astype(bool).copy()
        mask[rank] = False
        A[mask] ^= A[rank]
        rank += 1
    return rank


def _gf2_solve(A: np.ndarray, b: np.ndarray, strict: bool) -> np.ndarray:
    """Solve A x = b over GF(2); inconsistent rows raise (strict) or drop."""
    A = A.astype(np.uint8).copy()
    b = b.astype(np.uint8).copy()
    rows, cols = A.shape
    pivot_of = [-1] * cols
    rank = 0
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if A[i, c]), None)
        if piv is None:
            continue
        A[[rank, piv]] = A[[piv, rank]]
        b[rank], b[piv] = b[piv], b[rank]
        mask = A[:, c].astype(bool).copy()
        mask[rank] = False
        b[mask] ^= b[rank]
        A[mask] ^= A[rank]
        pivot_of[c] = rank
        rank += 1
    if strict:
        for i in range(rank, rows):
            if b[i]:
                raise InconsistencyError("inconsistent triple-bit equations")
    x = np.zeros(cols, dtype=np.int64)
    for c in range(cols):
        if pivot_of[c] >= 0:
            x[c] = b[pivot_of[c]]
    return x


def _solve(r: np.ndarray, L: int, variant: str, strict: bool) -> np.ndarray:
    """Recover x' in {0,1}^K from r = C_L x' (strict) or a best guess."""
    if L == 4:
        return _solve_base4(r, strict)
    if L == 8:
        return _solve_base8(r, variant, strict)
    lam_mat, A2, r_cols = _extraction_plan(L, variant)
    vals = lam_mat @ r
    if strict and np.any(vals % 2):
        raise InconsistencyError("odd cross-half functional value")
    rhs = ((vals % 4) >= 2).astype(np.uint8)  # residue 2 or 3 -> bit 1
    x_r = _gf2_solve(A2, rhs, strict)
    if strict:
        check = (A2 @ x_r) % 2
        if np.any(check != (((vals % 4) // 2) % 2)):
            raise InconsistencyError("redundant triple-bit equation mismatch")
    C = _code_entries(L, variant).astype(np.int64)
    r1 = r - C[:, r_cols] @ x_r
    top, bot = r1[: L // 2], r1[L // 2:]
    if strict and np.any((top + bot) % 2):
        raise InconsistencyError("half-fold parity violation")
    ua = _solve((top + bot) // 2, L // 2, variant, strict)
    wb = _solve((top - bot) // 2, L // 2, variant, strict)
    h = L // 2
    return np.concatenate([ua[:h], wb[:h], ua[h:], wb[h:], x_r])


# ---------------------------------------------------------------------------
# public decoders
# ---------------------------------------------------------------------------

def affine_receive(y: np.ndarray, C: CodeSet) -> np.ndarray:
    """r = (y + C·1)/2, the {0,1}-bit image of a noiseless observation."""
    shift = y + C.entries.astype(np.int64).sum(axis=1)
    if np.any(np.asarray(shift) % 2):
        raise InconsistencyError("observation is not a noiseless lattice point")
    return (np.asarray(shift, dtype=np.int64)) // 2


def _check_family(C: CodeSet, variant: str, name: str):
    if C.variant != variant:
        raise ValueError(f"{name} is defined for the {variant} family only")
    if C.L & (C.L - 1) or C.L < 4:
        raise ValueError(f"{name} supports power-of-two lengths only")


def nda_decode(r: np.ndarray, C: CodeSet) -> DecodeResult:
    """Exact noiseless decoder on the affine image r = C x'."""
    _check_family(C, EQ10, "nda_decode")
    x01 = _solve(np.asarray(r, dtype=np.int64), C.L, C.variant, strict=True)
    return DecodeResult(bits=(2 * x01 - 1).astype(np.int8), exact=True)


def ml_decode(y: np.ndarray, C: CodeSet, amplitude: float) -> DecodeResult:
    """Exhaustive minimum-distance decoder; ties -> lexicographically
    smallest x (enumeration index order with -1 before +1, user 0 as the
    most significant position)."""
    K = C.K
    if K > 25:
        raise ValueError("ml_decode enumeration budget is K <= 25")
    y = np.asarray(y, dtype=np.float64)
    best_idx, best_cost = -1, np.inf
    chunk = 1 << 16
    cols = np.arange(K)
    for start in range(0, 1 << K, chunk):
        idx = np.arange(start, min(start + chunk, 1 << K), dtype=np.int64)
        bits = ((idx[:, None] >> (K - 1 - cols)) & 1).astype(np.int8)
        x = 2 * bits - 1
        g = x @ C.entries.T.astype(np.float64)
        cost = ((y[None, :] - amplitude * g) ** 2).sum(axis=1)
        j = int(np.argmin(cost))
        if cost[j] < best_cost:
            best_cost, best_idx = float(cost[j]), start + j
    bits = ((best_idx >> (K - 1 - cols)) & 1).astype(np.int8)
    return DecodeResult(bits=(2 * bits - 1).astype(np.int8),
                        exact=(best_cost == 0.0))


def _sorted_levels(value: float, lo: int, hi: int, step: int) -> np.ndarray:
    levels = np.arange(lo, hi + 1, step)
    order = np.lexsort((levels, np.abs(levels), np.abs(levels - value)))
    return levels[order]


def quantize(value: float, lo: int, hi: int, step: int) -> int:
    """Nearest admissible level in {lo, lo+step, ..., hi}; ties toward the
    smaller magnitude (then the smaller value)."""
    if lo > hi or (hi - lo) % step:
        raise ValueError("invalid level progression")
    return int(_sorted_levels(value, lo, hi, step)[0])


def fda_decode(y: np.ndarray, C: CodeSet, amplitude: float,
               cfg: FdaConfig | None = None) -> DecodeResult:
    """Fast decoder for noisy observations.

    The first row of C is all ones, so its quantized level fixes the number
    of -1 bits and with it every other row's feasible level progression.
    Each outer iteration tries one hypothesis for that leading level (the
    retry counter walks next-nearest levels), re-quantizes all remaining
    rows to their nearest feasible level under the hypothesis, and runs the
    exact solver.  The cheapest consistent hypothesis (squared distance to
    the scaled observation) wins; iteration stops early once no remaining
    hypothesis can beat it.  Budget exhaustion returns the best candidate
    seen (minimum ||y - A C x||^2), using the rounding solver's output for
    hypotheses the exact solver rejected."""
    _check_family(C, EQ14, "fda_decode")
    cfg = cfg or FdaConfig()
    K, L = C.K, C.L
    Cm = C.entries.astype(np.int64)
    col_sum = Cm.sum(axis=1)
    row_plus = (Cm > 0).sum(axis=1)
    y = np.asarray(y, dtype=np.float64)
    ytil = y / amplitude

    lvl0 = _sorted_levels(ytil[0], -K, K, 2)
    if abs(lvl0[0]) == K:
        # the all-(+1)/all-(-1) shortcut: one comparison decides everything
        bits = np.full(K, 1 if lvl0[0] > 0 else -1, dtype=np.int8)
        exact = bool(np.all(y == amplitude * (Cm @ bits)))
        return DecodeResult(bits=bits, iterations=1, exact=exact)

    # all hypotheses at once: rows 1..L-1 quantized onto their feasible
    # progression (step 4) under each candidate leading level
    n_hyp = (K - lvl0) // 2                      # -1 bit count, (H,)
    P = row_plus[1:][None, :]                    # (1, L-1)
    N = K - P
    lo = P - N + 2 * n_hyp[:, None] - 4 * np.minimum(n_hyp[:, None], P)
    hi = P - N + 2 * n_hyp[:, None] - 4 * np.maximum(0, n_hyp[:, None] - N)
    below = lo + 4 * np.clip((ytil[1:][None, :] - lo) // 4, 0,
                             (hi - lo) // 4).astype(np.int64)
    above = np.minimum(below + 4, hi)
    # elementwise lexicographic tie rule: nearest, then smaller magnitude,
    # then smaller value
    d_b = np.abs(ytil[1:][None, :] - below)
    d_a = np.abs(ytil[1:][None, :] - above)
    pick_above = (d_a < d_b) | ((d_a == d_b) & (np.abs(above) < np.abs(below)))
    body = np.where(pick_above, above, below)
    candidates = np.concatenate([lvl0[:, None], body], axis=1)  # (H, L)
    costs = ((ytil[None, :] - candidates) ** 2).sum(axis=1)
    order = np.lexsort((np.arange(len(lvl0)), costs))

    good_bits, good_cost = None, np.inf   # consistent hypotheses
    back_bits, back_cost = None, np.inf   # rounded fallbacks
    its = 0
    for i in order:
        if its >= cfg.n_c_max or costs[i] >= good_cost:
            break
        its += 1
        z = candidates[i]
        r_aff = (z + col_sum) // 2
        try:
            x01 = _solve(r_aff, L, C.variant, strict=True)
            bits = (2 * x01 - 1).astype(np.int8)
            if costs[i] < good_cost:
                good_cost, good_bits = costs[i], bits
        except InconsistencyError:
            x01 = _solve(r_aff, L, C.variant, strict=False)
            bits = (2 * x01 - 1).astype(np.int8)
            cost = float(((ytil - Cm @ bits) ** 2).sum())
            if cost < back_cost:
                back_cost, back_bits = cost, bits

    if good_bits is not None and good_cost <= back_cost:
        bits = good_bits
    else:
        assert back_bits is not None
        bits = back_bits
    exact = bool(np.all(y == amplitude * (Cm @ bits)))
    return DecodeResult(bits=bits, iterations=its,
                        backtracks=its - 1, exact=exact)
