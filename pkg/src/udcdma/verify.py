"""Combinatorial verification of the code sets.

Unique decodability (UD) of an antipodal L x K matrix C is equivalent to:
no nonzero z in {0, +/-1}^K satisfies C z = 0.  This module provides an
exhaustive checker (3^K enumeration), a meet-in-the-middle checker for
K up to ~34, a randomized smoke test, the minimum-distance computation,
and the L = 8 appended-column combinatorics: canonical vector enumeration,
forbidden-pair counting, equivalence-class structure, and the maximality
of five appended columns.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import codebook, field16
from .codebook import CodeSet
from .field16 import BITS_OF_POWER

_EXHAUSTIVE_MAX_K = 16
_MITM_MAX_K = 34


@dataclass(frozen=True)
class NullSpaceWitness:
    z: np.ndarray      # K-vector over {-1, 0, +1}, nonzero
    value: np.ndarray  # C @ z (all zeros when reported as a UD violation)


@dataclass(frozen=True)
class GroupClass:
    label: str
    members: tuple  # tuple of antipodal 8-vectors (np arrays)


def _pack(rows: np.ndarray) -> np.ndarray:
    """Pack +/-1 rows (n x 8) into ints for set membership."""
    bits = (np.atleast_2d(rows) > 0).astype(np.int64)
    return bits @ (1 << np.arange(8, dtype=np.int64))


def _digits(idx: np.ndarray, K: int) -> np.ndarray:
    """Base-3 digits of counting indices; column K-1 is least significant."""
    pow3 = 3 ** np.arange(K - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] // pow3[None, :]) % 3).astype(np.int8)


def is_ud_exhaustive(C: CodeSet):
    """Enumerate every nonzero z in {0,+/-1}^K; K <= 16.

    Returns True on pass, otherwise the first NullSpaceWitness in base-3
    counting order (digits 0,1,2 standing for -1,0,+1).
    """
    K = C.K
    if K > _EXHAUSTIVE_MAX_K:
        raise ValueError(f"exhaustive budget is K <= {_EXHAUSTIVE_MAX_K}")
    Cf = C.entries.T.astype(np.float32)
    chunk = 1 << 17
    for start in range(0, 3 ** K, chunk):
        idx = np.arange(start, min(start + chunk, 3 ** K), dtype=np.int64)
        z = _digits(idx, K).astype(np.float32) - 1.0
        hit = np.flatnonzero(~np.any(z @ Cf, axis=1))
        for h in hit:
            if idx[h] == (3 ** K - 1) // 2:  # z = 0
                continue
            zi = (_digits(idx[h:h + 1], K)[0].astype(np.int64) - 1)
            return NullSpaceWitness(z=zi, value=C.entries.astype(np.int64) @ zi)
    return True


def min_distance(C: CodeSet) -> int:
    """min over nonzero z in {0,+/-1}^K of 2*||C z||_1; 0 iff C is not UD."""
    K = C.K
    if K > _EXHAUSTIVE_MAX_K:
        raise ValueError(f"exhaustive budget is K <= {_EXHAUSTIVE_MAX_K}")
    Cf = C.entries.T.astype(np.float32)
    zero_idx = (3 ** K - 1) // 2
    best = np.inf
    chunk = 1 << 17
    for start in range(0, 3 ** K, chunk):
        idx = np.arange(start, min(start + chunk, 3 ** K), dtype=np.int64)
        z = _digits(idx, K).astype(np.float32) - 1.0
        norms = np.abs(z @ Cf).sum(axis=1)
        if zero_idx in idx:
            norms[zero_idx - start] = np.inf
        best = min(best, float(norms.min()))
    return int(2 * best) if np.isfinite(best) else 0


def is_ud_mitm(C: CodeSet, max_left: int = 16):
    """Meet-in-the-middle UD check for 16 < K <= 34 (also valid below).

    Left half-sums are hashed with a random linear functional (wraparound
    int64 arithmetic, hence hash(-s) = -hash(s)); right half-sums probe for
    exact cancellation and every hash hit is rechecked exactly.
    """
    K = C.K
    if K > _MITM_MAX_K:
        raise ValueError(f"meet-in-the-middle budget is K <= {_MITM_MAX_K}")
    K1 = min(max_left, K // 2)
    K2 = K - K1
    left = C.entries[:, :K1].astype(np.int64)
    right = C.entries[:, K1:].astype(np.int64)
    rng = np.random.default_rng(0x5eed)
    hvec = rng.integers(-(2 ** 62), 2 ** 62, size=C.L, dtype=np.int64)
    hl = hvec @ left   # hash coefficients per left column
    hr = hvec @ right

    def hash_chunk(idx, K_side, hcols):
        z = _digits(idx, K_side).astype(np.int64) - 1
        return z @ hcols

    chunk = 1 << 19
    n_left = 3 ** K1
    left_h = np.empty(n_left, dtype=np.int64)
    for start in range(0, n_left, chunk):
        idx = np.arange(start, min(start + chunk, n_left), dtype=np.int64)
        left_h[start:start + len(idx)] = hash_chunk(idx, K1, hl)
    sorted_h = np.sort(left_h)

    def recheck(left_idx: int, right_idx: int):
        zl = _digits(np.array([left_idx]), K1)[0].astype(np.int64) - 1
        zr = _digits(np.array([right_idx]), K2)[0].astype(np.int64) - 1
        z = np.concatenate([zl, zr])
        if not np.any(z):
            return None
        value = C.entries.astype(np.int64) @ z
        if np.any(value):
            return None
        return NullSpaceWitness(z=z, value=value)

    n_right = 3 ** K2
    for start in range(0, n_right, chunk):
        idx = np.arange(start, min(start + chunk, n_right), dtype=np.int64)
        targets = -hash_chunk(idx, K2, hr)
        lo = np.searchsorted(sorted_h, targets, side="left")
        hi = np.searchsorted(sorted_h, targets, side="right")
        for pos in np.flatnonzero(hi > lo):
            left_hits = np.flatnonzero(left_h == targets[pos])
            for li in left_hits:
                w = recheck(int(li), int(idx[pos]))
                if w is not None:
                    return w
    return True


def is_ud_sampled(C: CodeSet, trials: int, seed: int):
    """Random-pair smoke test: fails iff some drawn x1 != x2 collide.

    Pairs that happen to draw x1 = x2 (probability 2^-K per trial) cannot
    fail and still count toward the trial budget.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    Cf = C.entries.T.astype(np.float32)
    chunk = 1 << 16
    done = 0
    while done < trials:
        n = min(chunk, trials - done)
        x1 = rng.integers(0, 2, size=(n, C.K), dtype=np.int8) * 2 - 1
        x2 = rng.integers(0, 2, size=(n, C.K), dtype=np.int8) * 2 - 1
        z = (x1 - x2) // 2
        collide = ~np.any(z.astype(np.float32) @ Cf, axis=1)
        collide &= np.any(z, axis=1)
        bad = np.flatnonzero(collide)
        if bad.size:
            zi = z[bad[0]].astype(np.int64)
            return NullSpaceWitness(z=zi, value=C.entries.astype(np.int64) @ zi)
        done += n
    return True


def one_element_witness(C: CodeSet):
    """First (1-based) pair of columns differing in exactly one row, if any.

    Pairs within the appended (non-Hadamard) columns are scanned first;
    the distance-4 claim is about those, and a Hadamard column can sit at
    distance 1 from an appended column without being the interesting case.
    """
    E = C.entries
    appended = list(range(C.L, C.K))
    hadamard = list(range(C.L))
    ordered = ([(i, j) for a, i in enumerate(appended) for j in appended[a + 1:]]
               + [(i, j) for i in hadamard for j in range(i + 1, C.K)])
    for i, j in ordered:
        if int((E[:, i] != E[:, j]).sum()) == 1:
            return (i + 1, j + 1)
    return None


# ---------------------------------------------------------------------------
# L = 8 appended-column combinatorics
# ---------------------------------------------------------------------------

def _h8() -> np.ndarray:
    return codebook.sylvester_hadamard(3)


def canonicalize(v: np.ndarray) -> np.ndarray:
    """Sign-canonical representative of {v, -v}: fewer -1 entries wins;
    at four -1s the one with +1 first entry wins."""
    neg = int((v < 0).sum())
    if neg > 4 or (neg == 4 and v[0] < 0):
        return -v
    return v


def enumerate_b8_plus() -> list[np.ndarray]:
    """The 120 canonical non-Hadamard antipodal 8-vectors (2^7 - 8)."""
    had = set(_pack(_h8().T).tolist())
    out = []
    for bits in range(256):
        v = np.array([1 if (bits >> i) & 1 else -1 for i in range(8)],
                     dtype=np.int8)
        if not np.array_equal(v, canonicalize(v)):
            continue
        if int(_pack(v)[0]) in had:
            continue
        out.append(v)
    assert len(out) == 120
    return out


def _h8_lattice_keys() -> np.ndarray:
    """Sorted encodings of all 3^8 points H8 z, z in {0,+/-1}^8."""
    idx = np.arange(3 ** 8, dtype=np.int64)
    z = _digits(idx, 8).astype(np.int64) - 1
    pts = z @ _h8().T.astype(np.int64)
    return np.sort(_encode_pts(pts))


def _encode_pts(pts: np.ndarray) -> np.ndarray:
    """Injective int64 encoding of integer 8-vectors with |entry| <= 13."""
    base = 27
    offs = pts.astype(np.int64) + 13
    return offs @ (base ** np.arange(8, dtype=np.int64))


def _in_sorted(keys: np.ndarray, table: np.ndarray) -> np.ndarray:
    pos = np.searchsorted(table, keys)
    pos = np.clip(pos, 0, len(table) - 1)
    return table[pos] == keys


def forbidden_pair_matrix(vectors: list[np.ndarray] | None = None):
    """Boolean matrix F where F[i, j] marks that appending v_i and v_j to
    H8 breaks unique decodability."""
    if vectors is None:
        vectors = enumerate_b8_plus()
    lat = _h8_lattice_keys()
    B = np.stack(vectors).astype(np.int64)
    singles = _in_sorted(_encode_pts(B), lat)
    assert not singles.any(), "a single appended vector already breaks UD"
    n = len(vectors)
    sums = _encode_pts(B[:, None, :] + B[None, :, :]).reshape(n * n)
    difs = _encode_pts(B[:, None, :] - B[None, :, :]).reshape(n * n)
    F = (_in_sorted(sums, lat) | _in_sorted(difs, lat)).reshape(n, n)
    np.fill_diagonal(F, False)
    return F, vectors


def count_forbidden_pairs() -> int:
    """Number of unordered forbidden pairs among the 120 canonical vectors."""
    F, _ = forbidden_pair_matrix()
    return int(np.triu(F, 1).sum())


# Equivalence-class listings transcribed as (first-block, second-block)
# powers of alpha; None marks the zero element.
_Z = None
_CLASS_LISTINGS = {
    "A1": ([13, 14, 3, 3, 7, 7, 9, 9], [_Z, _Z, 8, 0, 5, 1, 10, 4]),
    "A2": ([3, 6, 13, 13, 7, 7, 9, 9], [_Z, _Z, 8, 0, 10, 4, 1, 5]),
    "A3": ([7, 12, 13, 13, 3, 3, 9, 9], [_Z, _Z, 5, 1, 10, 4, 8, 0]),
    "A4": ([9, 11, 13, 13, 3, 3, 7, 7], [_Z, _Z, 10, 4, 1, 5, 8, 0]),
    "A5": ([_Z, _Z, 0, 8, 1, 5, 4, 10], [13, 14, 3, 3, 7, 7, 9, 9]),
    "A6": ([_Z, _Z, 0, 8, 1, 5, 4, 10], [3, 6, 13, 13, 9, 9, 7, 7]),
    "A7": ([_Z, _Z, 0, 8, 1, 5, 4, 10], [7, 12, 9, 9, 13, 13, 3, 3]),
    "A8": ([_Z, _Z, 0, 8, 1, 5, 4, 10], [9, 11, 7, 7, 3, 3, 13, 13]),
    "D1": ([_Z, _Z, 0, 8], [0, 8, _Z, _Z]),
    "D2": ([_Z, _Z, 1, 5], [1, 5, _Z, _Z]),
    "D3": ([_Z, _Z, 4, 10], [4, 10, _Z, _Z]),
    "D4": ([13, 3, 7, 9], [13, 3, 7, 9]),
    "D5": ([13, 3, 7, 9], [3, 13, 9, 7]),
    "D6": ([13, 3, 7, 9], [7, 9, 13, 3]),
    "D7": ([13, 3, 7, 9], [9, 7, 3, 13]),
    "G1": ([14, 3, 7, 9], [9, 12, 6, 14]),
    "G2": ([14, 3, 7, 9], [7, 11, 14, 6]),
    "G3": ([14, 3, 7, 9], [3, 14, 11, 12]),
    "G4": ([14, 3, 7, 9], [13, 6, 12, 11]),
    "G5": ([1, 1, 0, 0], [8, 0, 5, 1]),
    "G6": ([4, 4, 0, 0], [8, 0, 10, 4]),
    "G7": ([4, 4, 1, 1], [5, 1, 10, 4]),
}


def _listing_vectors(label: str) -> list[np.ndarray]:
    top, bot = _CLASS_LISTINGS[label]
    out = []
    for t, b in zip(top, bot):
        tb = 0 if t is None else BITS_OF_POWER[t]
        bb = 0 if b is None else BITS_OF_POWER[b]
        v = np.concatenate([field16.phi_inv(tb), field16.phi_inv(bb)])
        out.append(canonicalize(v))
    return out


class ClassificationError(RuntimeError):
    """The computed partition violates a stated closure or listing rule."""


def classify_groups(check_closure: bool = True) -> list[GroupClass]:
    """Partition the 120 canonical vectors into equivalence classes (two
    vectors are equivalent when appending both to H8 breaks UD), label the
    classes by the transcribed listings, and verify the closure rules
    A+A -> D_j or G_{8-j}, A+D -> A, D+D -> G, G+G -> G (componentwise
    products of members, canonicalized)."""
    F, vectors = forbidden_pair_matrix()
    n = len(vectors)
    comp = np.full(n, -1)
    n_comp = 0
    for s in range(n):
        if comp[s] >= 0:
            continue
        stack = [s]
        comp[s] = n_comp
        while stack:
            u = stack.pop()
            for w in np.flatnonzero(F[u]):
                if comp[w] < 0:
                    comp[w] = n_comp
                    stack.append(w)
        n_comp += 1
    packed = _pack(np.stack(vectors))
    comp_sets = [set(packed[comp == c].tolist()) for c in range(n_comp)]

    label_of_comp = {}
    for label in _CLASS_LISTINGS:
        want = set(int(_pack(v)[0]) for v in _listing_vectors(label))
        best = max(range(n_comp), key=lambda c: len(want & comp_sets[c]))
        if want != comp_sets[best]:
            raise ClassificationError(
                f"listing {label} does not match any computed class "
                f"(best overlap {len(want & comp_sets[best])}/{len(want)})")
        if best in label_of_comp:
            raise ClassificationError(
                f"listings {label_of_comp[best]} and {label} map to the "
                "same computed class")
        label_of_comp[best] = label

    if len(label_of_comp) != n_comp:
        raise ClassificationError("computed classes without a listing label")

    classes = []
    for c in range(n_comp):
        members = tuple(vectors[i] for i in np.flatnonzero(comp == c))
        classes.append(GroupClass(label=label_of_comp[c], members=members))
    classes.sort(key=lambda g: (g.label[0], int(g.label[1:])))

    if check_closure:
        _check_closure(classes)
    return classes


def _class_index(classes):
    idx = {}
    for g in classes:
        for v in g.members:
            idx[int(_pack(v)[0])] = g.label
    # products can also land on Hadamard columns
    for col in _h8().T:
        idx[int(_pack(canonicalize(col))[0])] = "H8"
    return idx


# Composition tables: for each target class, the unordered index pairs of
# same-shape classes whose member products land in it.
_G_FROM_A = {1: [(1, 8), (2, 7), (3, 6), (4, 5)],
             2: [(1, 7), (2, 8), (3, 5), (4, 6)],
             3: [(1, 6), (2, 5), (3, 8), (4, 7)],
             4: [(1, 5), (2, 6), (3, 7), (4, 8)],
             5: [(1, 4), (2, 3), (5, 8), (6, 7)],
             6: [(1, 3), (2, 4), (5, 7), (6, 8)],
             7: [(1, 2), (3, 4), (5, 6), (7, 8)]}
_G_FROM_D = {1: [(1, 6), (2, 5), (3, 4)],
             2: [(1, 7), (2, 4), (3, 5)],
             3: [(1, 4), (2, 7), (3, 6)],
             4: [(1, 5), (2, 6), (3, 7)],
             5: [(1, 2), (4, 7), (5, 6)],
             6: [(1, 3), (4, 6), (5, 7)],
             7: [(2, 3), (4, 5), (6, 7)]}
_A_FROM_AD = {1: [(2, 1), (3, 2), (4, 3), (5, 4), (6, 5), (7, 6), (8, 7)],
              2: [(1, 1), (3, 3), (4, 2), (5, 5), (6, 4), (7, 7), (8, 6)],
              3: [(1, 2), (2, 3), (4, 1), (5, 6), (6, 7), (7, 4), (8, 5)],
              4: [(1, 3), (2, 2), (3, 1), (5, 7), (6, 6), (7, 5), (8, 4)],
              5: [(1, 4), (2, 5), (3, 6), (4, 7), (6, 1), (7, 2), (8, 3)],
              6: [(1, 5), (2, 4), (3, 7), (4, 6), (5, 1), (7, 3), (8, 2)],
              7: [(1, 6), (2, 7), (3, 4), (4, 5), (5, 2), (6, 3), (8, 1)],
              8: [(1, 7), (2, 6), (3, 5), (4, 4), (5, 3), (6, 2), (7, 1)]}


def _check_closure(classes: list[GroupClass]):
    """Member products across classes must follow the composition tables:
    distinct same-shape classes multiply into exactly D_j union G_{8-j},
    an A with a D multiplies into a single A, and any class with itself
    lands on the Hadamard columns."""
    idx = _class_index(classes)
    by = {g.label: g for g in classes}

    def product_labels(l1: str, l2: str) -> set[str]:
        out = set()
        for u in by[l1].members:
            for v in by[l2].members:
                out.add(idx[int(_pack(canonicalize(u * v))[0])])
        return out

    def fail(rule, l1, l2, labels):
        raise ClassificationError(
            f"closure rule {rule} violated for {l1}+{l2}: "
            f"products land in {sorted(labels)}")

    expected: dict[frozenset, set[str]] = {}

    def expect(l1, l2, labels):
        expected.setdefault(frozenset((l1, l2)), set()).update(labels)

    for g, pairs in _G_FROM_A.items():
        for i, j in pairs:
            expect(f"A{i}", f"A{j}", {f"D{8 - g}", f"G{g}"})
    for g, pairs in _G_FROM_D.items():
        for i, j in pairs:
            expect(f"D{i}", f"D{j}", {f"D{8 - g}", f"G{g}"})
    for a, pairs in _A_FROM_AD.items():
        for i, j in pairs:
            expect(f"A{i}", f"D{j}", {f"A{a}"})
    for label in by:
        expect(label, label, {"H8"})

    for key, want in expected.items():
        l1, l2 = (list(key) * 2)[:2]
        got = product_labels(l1, l2)
        if got != want:
            fail(f"expected {sorted(want)}", l1, l2, got)

    # the G+G rule: distinct G classes must multiply into D_j union G_{8-j}
    for i in range(1, 8):
        for j in range(i + 1, 8):
            got = product_labels(f"G{i}", f"G{j}")
            ds = sorted(l for l in got if l[0] == "D")
            gs = sorted(l for l in got if l[0] == "G")
            ok = (len(got) == 2 and len(ds) == 1 and len(gs) == 1
                  and int(ds[0][1:]) + int(gs[0][1:]) == 8)
            if not ok:
                fail("G+G -> D_j or G_{8-j}", f"G{i}", f"G{j}", got)


def _load_example(name: str) -> np.ndarray:
    return codebook.load_fixture(name)


def verify_max_append() -> dict:
    """Check the two published five-column examples and the maximality of
    five appended columns (every sixth canonical vector breaks UD)."""
    t0 = time.time()
    report: dict = {}
    classes = classify_groups(check_closure=False)
    idx = _class_index(classes)
    h8 = _h8()

    examples = {}
    for key, fname in (("V1", "v1_example.txt"), ("V2", "v2_example.txt")):
        V = _load_example(fname)
        C = CodeSet(8, 13, np.hstack([h8, V.astype(np.int8)]), codebook.EQ10)
        examples[key] = (V, C)
        report[f"{key}_ud"] = is_ud_exhaustive(C) is True
        report[f"{key}_pattern"] = tuple(
            sorted(idx[int(_pack(canonicalize(V[:, j]))[0])]
                   for j in range(V.shape[1])))

    V1, C1 = examples["V1"]
    # all 3^13 lattice points of [H8 | V1]; a sixth column w breaks UD
    # exactly when w lies in that lattice (C1 itself being UD).
    idx3 = np.arange(3 ** 13, dtype=np.int64)
    lat = np.empty(3 ** 13, dtype=np.int64)
    chunk = 1 << 18
    Cm = C1.entries.astype(np.int64)
    for start in range(0, 3 ** 13, chunk):
        ii = idx3[start:start + chunk]
        z = _digits(ii, 13).astype(np.int64) - 1
        lat[start:start + len(ii)] = _encode_pts(z @ Cm.T)
    lat = np.sort(lat)

    used = set(int(_pack(canonicalize(V1[:, j]))[0]) for j in range(5))
    rest = [v for v in enumerate_b8_plus() if int(_pack(v)[0]) not in used]
    keys = _encode_pts(np.stack(rest).astype(np.int64))
    hits = _in_sorted(keys, lat)
    report["extensions_total"] = len(rest)
    report["extensions_failed"] = int(hits.sum())
    report["wall_seconds"] = time.time() - t0
    return report


def check_product_condition(V: np.ndarray):
    """Sufficient UD condition for appending antipodal(V) to a Hadamard
    matrix: no nonempty column subset may have an elementwise product equal
    to a column of H_{4M} or its negation (the all-ones cases included).
    Any null-space witness forces some subset product into that set, so
    a True verdict guarantees unique decodability; a counterexample does
    not prove the opposite.

    Returns True when the condition holds, else the offending subset
    (tuple of column indices)."""
    from . import codebook

    V = np.asarray(V, dtype=np.uint8)
    M, n = V.shape
    if n > 12:
        raise ValueError("subset enumeration budget is n <= 12 columns")
    if M & (M - 1):
        raise ValueError("block-row count must be a power of two")
    L = 4 * M
    H = codebook.sylvester_hadamard(L.bit_length() - 1)
    forbidden = {H[:, j].tobytes() for j in range(L)}
    forbidden |= {(-H[:, j]).astype(np.int8).tobytes() for j in range(L)}
    A = codebook.symbols_to_antipodal(V).astype(np.int8)
    for mask in range(1, 1 << n):
        cols = [j for j in range(n) if (mask >> j) & 1]
        prod = A[:, cols].prod(axis=1).astype(np.int8)
        if prod.tobytes() in forbidden:
            return tuple(cols)
    return True
