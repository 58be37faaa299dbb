"""Top-level acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line (visible with -v via the test
status, and on stdout when run with -s or on failure).
"""

import itertools
import math
import time

import numpy as np
import pytest

from udcdma import channel, codebook, decode, field16, verify


def _report(name: str, ok: bool):
    print(f"{name}: {'PASS' if ok else 'FAIL'}")
    assert ok, name


# ---------------------------------------------------------------------------
# 01 construction fidelity
# ---------------------------------------------------------------------------

def test_01_construction_fidelity():
    pairs = [
        ((4, "eq14"), "c4x5_eq14.txt"),
        ((8, "eq14"), "c8x13_eq14.txt"),
        ((16, "eq14"), "c16x33_eq14.txt"),
        ((8, "eq10"), "c8x13_eq10.txt"),
    ]
    mismatches = 0
    for (L, var), fixture in pairs:
        C = codebook.build_code_set(L, var)
        F = codebook.load_fixture(fixture)
        mismatches += int((C.entries != F).sum())
    _report("01 construction-fidelity (zero mismatched entries)",
            mismatches == 0)


# ---------------------------------------------------------------------------
# 02 unique decodability
# ---------------------------------------------------------------------------

def test_02_ud_exhaustive_and_sampled(c4_eq14, c8_eq10, c8_eq14, c16_eq14):
    ok = (verify.is_ud_exhaustive(c4_eq14) is True
          and verify.is_ud_exhaustive(c8_eq10) is True
          and verify.is_ud_exhaustive(c8_eq14) is True
          and verify.is_ud_sampled(c16_eq14, trials=10_000_000, seed=0)
          is True)
    _report("02 unique-decodability (exhaustive 3^5/3^13, sampled 1e7)", ok)


@pytest.mark.slow
def test_02_ud_meet_in_the_middle(c16_eq14):
    ok = verify.is_ud_mitm(c16_eq14) is True
    _report("02 unique-decodability (meet-in-the-middle, 16x33)", ok)


# ---------------------------------------------------------------------------
# 03 minimum distance
# ---------------------------------------------------------------------------

def test_03_min_distance(c8_eq10, c8_eq14):
    d10 = verify.min_distance(c8_eq10)
    d14 = verify.min_distance(c8_eq14)
    _report("03 minimum-distance (both 8x13 variants = 4)",
            d10 == 4 and d14 == 4)


# ---------------------------------------------------------------------------
# 04 appended-column combinatorics ledger
# ---------------------------------------------------------------------------

@pytest.mark.slow
def test_04_appended_column_ledger():
    b8 = verify.enumerate_b8_plus()
    forbidden = verify.count_forbidden_pairs()
    report = verify.verify_max_append()
    ok = (len(b8) == 120
          and forbidden == 308
          and len(b8) * (len(b8) - 1) // 2 == 7140
          and report["V1_ud"] and report["V2_ud"]
          and report["extensions_total"] == 115
          and report["extensions_failed"] == 115)
    _report("04 appended-column ledger (120 vectors, 308/7140 forbidden, "
            "115/115 extensions blocked)", ok)


# ---------------------------------------------------------------------------
# 05 exact noiseless decoder round trip
# ---------------------------------------------------------------------------

def test_05_exact_decoder_round_trip(c8_eq10, c16_eq10):
    Cm8 = c8_eq10.entries.astype(np.int64)
    failures = 0
    for bits in itertools.product((-1, 1), repeat=13):
        x = np.array(bits, dtype=np.int8)
        r = decode.affine_receive(Cm8 @ x, c8_eq10)
        if not np.array_equal(decode.nda_decode(r, c8_eq10).bits, x):
            failures += 1
    Cm16 = c16_eq10.entries.astype(np.int64)
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        x = rng.choice([-1, 1], size=33).astype(np.int8)
        r = decode.affine_receive(Cm16 @ x, c16_eq10)
        if not np.array_equal(decode.nda_decode(r, c16_eq10).bits, x):
            failures += 1
    _report("05 exact-decoder round trip (2^13 exhaustive + 1e4 random)",
            failures == 0)


# ---------------------------------------------------------------------------
# 06 fast decoder noiseless exactness
# ---------------------------------------------------------------------------

def test_06_fast_decoder_noiseless(c8_eq14, c16_eq14):
    Cm8 = c8_eq14.entries.astype(np.int64)
    failures = 0
    for bits in itertools.product((-1, 1), repeat=13):
        x = np.array(bits, dtype=np.int8)
        res = decode.fda_decode((Cm8 @ x).astype(float), c8_eq14, 1.0)
        if not (np.array_equal(res.bits, x) and res.iterations == 1
                and res.exact):
            failures += 1
    Cm16 = c16_eq14.entries.astype(np.int64)
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        x = rng.choice([-1, 1], size=33).astype(np.int8)
        res = decode.fda_decode((Cm16 @ x).astype(float), c16_eq14, 1.0)
        if not (np.array_equal(res.bits, x) and res.iterations == 1):
            failures += 1
    _report("06 fast-decoder noiseless exactness "
            "(2^13 exhaustive in 1 iteration + 1e4 random)", failures == 0)


# ---------------------------------------------------------------------------
# 07 fast-vs-ML BER gap
# ---------------------------------------------------------------------------

def _crossing(records, target=1e-3):
    """E_b/N0 where the log-linear interpolated BER curve hits target."""
    pts = sorted((r.ebn0_db, max(r.ber, 1e-12)) for r in records)
    for (x0, b0), (x1, b1) in zip(pts, pts[1:]):
        if b0 > target >= b1:
            return x0 + (x1 - x0) * (math.log(target / b0)
                                     / math.log(b1 / b0))
    return None


def _gap_at_1e3(L, grids):
    xs = {}
    for decoder, grid in grids.items():
        cfg = channel.SimConfig(L=L, variant="eq14", decoder=decoder,
                                ebn0_grid_db=grid, min_bits=2_000_000,
                                max_errors=None, seed=0)
        records = channel.run_ber(cfg)
        assert all(r.bits >= 2_000_000 for r in records)
        xs[decoder] = _crossing(records)
    assert xs["ml"] is not None and xs["fda"] is not None
    return xs["fda"] - xs["ml"]


@pytest.mark.slow
def test_07_ber_gap():
    grid = lambda a, b: [a + 0.5 * i for i in range(int((b - a) * 2) + 1)]
    gap4 = _gap_at_1e3(4, {"ml": grid(6.5, 8.5), "fda": grid(8.5, 10.5)})
    gap8 = _gap_at_1e3(8, {"ml": grid(8.5, 10.5), "fda": grid(9.5, 11.5)})
    ok = 0.5 <= gap4 <= 3.0 and 0.5 <= gap8 <= 3.0
    _report(f"07 fast-vs-ML BER gap at 1e-3 "
            f"(4x5: {gap4:.2f} dB, 8x13: {gap8:.2f} dB, band [0.5, 3.0])",
            ok)


# ---------------------------------------------------------------------------
# 08 complexity scaling
# ---------------------------------------------------------------------------

def _mean_decode_ms(C, ebn0_db, n=300, seed=3):
    Cm = C.entries.astype(np.int64)
    std = channel.noise_std(ebn0_db, 1.0, C.L, C.K)
    rng = np.random.default_rng(seed)
    ys = [Cm @ rng.choice([-1, 1], size=C.K) + rng.normal(0, std, C.L)
          for _ in range(n)]
    for y in ys[:20]:  # warm-up
        decode.fda_decode(y, C, 1.0)
    t0 = time.perf_counter()
    for y in ys:
        decode.fda_decode(y, C, 1.0)
    return (time.perf_counter() - t0) / n * 1e3


def test_08_complexity_scaling(c8_eq14, c16_eq14):
    # matched E_b/N0 in the operating region of both codes (above both
    # fast-decoder waterfalls)
    ebn0 = 14.0
    t13 = _mean_decode_ms(c8_eq14, ebn0)
    t33 = _mean_decode_ms(c16_eq14, ebn0)
    ratio = t33 / t13
    _report(f"08 complexity scaling (mean decode time K=33/K=13 = "
            f"{ratio:.2f}x < 8x at {ebn0:g} dB)", ratio < 8.0)


# ---------------------------------------------------------------------------
# 09 field isomorphism suite
# ---------------------------------------------------------------------------

def test_09_field_isomorphism():
    ok = True
    for a in range(16):
        va = field16.phi_inv(a)
        ok &= field16.phi(va) == a                      # 16 round trips
        ok &= field16.phi(-va) == field16.negate(a)     # 16 negation rules
        for b in range(16):                             # 256 pairs
            prod = field16.elementwise_mul(va, field16.phi_inv(b))
            ok &= field16.phi(prod) == field16.field_add(a, b)
    _report("09 field isomorphism (256 pairs, 16 round trips, "
            "16 negations)", bool(ok))


# ---------------------------------------------------------------------------
# 10 binary image unique decodability
# ---------------------------------------------------------------------------

def test_10_binary_image_ud(c4_eq14, c8_eq10, c8_eq14):
    ok = True
    for C in (c4_eq14, c8_eq10, c8_eq14):
        B = codebook.to_binary(C)
        ok &= verify.is_ud_exhaustive(B) is True
    _report("10 binary-image unique decodability (null-space exhaustive)",
            ok)
