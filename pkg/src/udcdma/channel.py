"""AWGN transmission and Monte-Carlo BER measurement.

The SNR axis is E_b/N0 with per-user bit energy E_b = amplitude^2 * L and
per-chip noise variance N0/2.  Trials are grouped into fixed-size chunks;
each chunk draws its own generator from (seed, point index, chunk index),
so results are bit-identical however the loop is scheduled or stopped.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import decode
from .codebook import CodeSet
from .decode import FdaConfig

DECODERS = ("nda", "fda", "ml")
_CHUNK_TRIALS = 1024


@dataclass
class SimConfig:
    L: int
    variant: str
    decoder: str
    ebn0_grid_db: list
    amplitude: float = 1.0
    min_bits: int = 2_000_000
    max_errors: int | None = 400
    seed: int = 0
    fda: FdaConfig = field(default_factory=FdaConfig)
    noiseless: bool = False

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise ValueError(f"decoder must be one of {DECODERS}")
        if not self.ebn0_grid_db:
            raise ValueError("E_b/N0 grid must be nonempty")
        if self.amplitude <= 0:
            raise ValueError("amplitude must be positive")
        if self.min_bits < 1:
            raise ValueError("min_bits must be positive")
        if self.decoder == "nda" and not self.noiseless:
            raise ValueError("the noiseless decoder requires noiseless=True")


@dataclass(frozen=True)
class BerRecord:
    decoder: str
    L: int
    K: int
    ebn0_db: float
    bits: int
    errors: int
    ber: float
    wall_seconds: float


def noise_std(ebn0_db: float, amplitude: float, L: int, K: int) -> float:
    """Per-chip AWGN standard deviation for a given E_b/N0 in dB.

    E_b = amplitude^2 * L per user bit (independent of the user count K,
    which is accepted for signature symmetry), N0 = E_b / 10^(dB/10).
    """
    e_b = amplitude ** 2 * L
    n0 = e_b / (10.0 ** (ebn0_db / 10.0))
    return float(np.sqrt(n0 / 2.0))


def transmit(x: np.ndarray, C: CodeSet, amplitude: float, std: float,
             rng: np.random.Generator) -> np.ndarray:
    """y = A C x + n with i.i.d. Gaussian noise of the given std."""
    y = amplitude * (C.entries.astype(np.float64) @ x)
    if std > 0:
        y = y + rng.normal(0.0, std, size=C.L)
    return y


def _ml_table(C: CodeSet) -> np.ndarray:
    """All 2^K noiseless chip vectors, row index = bit pattern (user 0 is
    the most significant bit, bit 0 standing for -1)."""
    K = C.K
    if K > 20:
        raise ValueError("ML table budget is K <= 20")
    idx = np.arange(1 << K, dtype=np.int64)
    bits = ((idx[:, None] >> (K - 1 - np.arange(K))) & 1).astype(np.int8)
    return (2 * bits - 1) @ C.entries.T.astype(np.int64)


def _decode_chunk(decoder: str, Y: np.ndarray, C: CodeSet, amplitude: float,
                  fda_cfg: FdaConfig, ml_g: np.ndarray | None) -> np.ndarray:
    """Decode a chunk of observations (rows of Y) to a bits matrix."""
    n = Y.shape[0]
    K = C.K
    if decoder == "ml":
        g = ml_g.astype(np.float32)
        cost = (amplitude ** 2) * (g ** 2).sum(axis=1)[None, :] \
            - 2.0 * amplitude * (Y.astype(np.float32) @ g.T)
        best = np.argmin(cost, axis=1)
        bits = ((best[:, None] >> (K - 1 - np.arange(K))) & 1).astype(np.int8)
        return 2 * bits - 1
    out = np.empty((n, K), dtype=np.int8)
    if decoder == "fda":
        for i in range(n):
            out[i] = decode.fda_decode(Y[i], C, amplitude, fda_cfg).bits
        return out
    for i in range(n):  # nda (noiseless only)
        r = decode.affine_receive(np.rint(Y[i] / amplitude).astype(np.int64), C)
        out[i] = decode.nda_decode(r, C).bits
    return out


def run_ber(config: SimConfig, C: CodeSet | None = None) -> list[BerRecord]:
    """Monte-Carlo BER per grid point; per-user bit errors averaged over
    all users.  Deterministic given config (chunk streams are derived from
    (seed, point, chunk), independent of stopping)."""
    from . import codebook

    if C is None:
        C = codebook.build_code_set(config.L, config.variant)
    K = C.K
    if config.decoder == "ml" and K > 25:
        raise ValueError("ML budget is K <= 25")
    ml_g = _ml_table(C) if config.decoder == "ml" else None
    records = []
    for point, ebn0 in enumerate(config.ebn0_grid_db):
        t0 = time.time()
        std = 0.0 if config.noiseless else noise_std(
            ebn0, config.amplitude, config.L, K)
        bits_done = 0
        errors = 0
        chunk_idx = 0
        while bits_done < config.min_bits:
            if config.max_errors is not None and errors >= config.max_errors:
                break
            rng = np.random.default_rng(
                np.random.SeedSequence(config.seed,
                                       spawn_key=(point, chunk_idx)))
            n = min(_CHUNK_TRIALS,
                    -(-(config.min_bits - bits_done) // K))
            X = rng.integers(0, 2, size=(n, K), dtype=np.int8) * 2 - 1
            Y = config.amplitude * (X @ C.entries.T.astype(np.float64))
            if std > 0:
                Y += rng.normal(0.0, std, size=Y.shape)
            Xh = _decode_chunk(config.decoder, Y, C, config.amplitude,
                               config.fda, ml_g)
            errors += int((Xh != X).sum())
            bits_done += n * K
            chunk_idx += 1
        records.append(BerRecord(
            decoder=config.decoder, L=config.L, K=K, ebn0_db=float(ebn0),
            bits=bits_done, errors=errors, ber=errors / bits_done,
            wall_seconds=time.time() - t0))
    return records
