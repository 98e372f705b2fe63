"""NumPy-vectorized twins of the scalar adder model.

Exhaustive sweeps and Monte Carlo sampling run through these kernels; the
scalar functions in :mod:`cesa.adder` remain the reference semantics and the
test suite pins the two implementations to each other pair-for-pair.

Widths are capped at 63 bits here so the (n+1)-bit extended value always
fits in uint64; the metrics layer falls back to the scalar model beyond that.
"""

from __future__ import annotations

import numpy as np

from .adder import AdderConfig, Variant

MAX_BATCH_WIDTH = 63

_ONE = np.uint64(1)


def _check_width(width: int) -> None:
    if width > MAX_BATCH_WIDTH:
        raise ValueError(
            f"batch kernels support widths up to {MAX_BATCH_WIDTH}, got {width}"
        )


def _as_u64(x: np.ndarray) -> np.ndarray:
    arr = np.asarray(x)
    if arr.dtype != np.uint64:
        arr = arr.astype(np.uint64)
    return arr


def _pair_bits(blk_a: np.ndarray, blk_b: np.ndarray, pos: int):
    sh = np.uint64(pos)
    return (blk_a >> sh) & _ONE, (blk_b >> sh) & _ONE


def block_estimates(a: np.ndarray, b: np.ndarray, config: AdderConfig) -> np.ndarray:
    """Estimated carry-out of every block, shape (n_blocks, len(a))."""
    if config.variant is Variant.EXACT:
        raise ValueError("the exact variant has no carry estimator")
    _check_width(config.width)
    a, b = _as_u64(a), _as_u64(b)
    k = config.block_size
    mask = np.uint64((1 << k) - 1)
    out = np.empty((config.n_blocks, a.shape[0]), dtype=np.uint64)
    for j in range(config.n_blocks):
        sh = np.uint64(j * k)
        blk_a, blk_b = (a >> sh) & mask, (b >> sh) & mask
        a_hi, b_hi = _pair_bits(blk_a, blk_b, k - 1)
        a_lo, b_lo = _pair_bits(blk_a, blk_b, k - 2)
        c_ceu = (a_hi & b_hi) | (a_lo & b_lo & (a_hi | b_hi))
        if config.variant is Variant.CESA:
            out[j] = c_ceu
            continue
        sel = (a_hi ^ b_hi) & (a_lo ^ b_lo)
        a3, b3 = _pair_bits(blk_a, blk_b, k - 3)
        a4, b4 = _pair_bits(blk_a, blk_b, k - 4)
        c_perl = (a3 & b3) | (a4 & b4 & (a3 | b3))
        out[j] = np.where(sel.astype(bool), c_perl, c_ceu)
    return out


def sel_flags(a: np.ndarray, b: np.ndarray, config: AdderConfig) -> np.ndarray:
    """SU output per block, shape (n_blocks, len(a)); defined for k >= 2."""
    _check_width(config.width)
    a, b = _as_u64(a), _as_u64(b)
    k = config.block_size
    mask = np.uint64((1 << k) - 1)
    out = np.empty((config.n_blocks, a.shape[0]), dtype=np.uint64)
    for j in range(config.n_blocks):
        sh = np.uint64(j * k)
        blk_a, blk_b = (a >> sh) & mask, (b >> sh) & mask
        a_hi, b_hi = _pair_bits(blk_a, blk_b, k - 1)
        a_lo, b_lo = _pair_bits(blk_a, blk_b, k - 2)
        out[j] = (a_hi ^ b_hi) & (a_lo ^ b_lo)
    return out


def exact_boundary_carries(a: np.ndarray, b: np.ndarray,
                           config: AdderConfig) -> np.ndarray:
    """True ripple carries at positions k, 2k, ..., n; shape (n_blocks, len(a))."""
    _check_width(config.width)
    a, b = _as_u64(a), _as_u64(b)
    out = np.empty((config.n_blocks, a.shape[0]), dtype=np.uint64)
    for j, pos in enumerate(config.boundary_positions):
        mask = np.uint64((1 << pos) - 1)
        out[j] = ((a & mask) + (b & mask)) >> np.uint64(pos)
    return out


def add_approx_extended(a: np.ndarray, b: np.ndarray,
                        config: AdderConfig) -> np.ndarray:
    """Extended (n+1)-bit result of the approximate addition, as uint64."""
    _check_width(config.width)
    a, b = _as_u64(a), _as_u64(b)
    if config.variant is Variant.EXACT:
        return a + b
    k = config.block_size
    mask = np.uint64((1 << k) - 1)
    estimates = block_estimates(a, b, config)
    value = np.zeros_like(a)
    carry_in = np.zeros_like(a)
    ripple = np.zeros_like(a)
    for j in range(config.n_blocks):
        sh = np.uint64(j * k)
        total = ((a >> sh) & mask) + ((b >> sh) & mask) + carry_in
        value |= (total & mask) << sh
        ripple = total >> np.uint64(k)
        carry_in = estimates[j]
    return value + (ripple << np.uint64(config.width))


def add_exact_extended(a: np.ndarray, b: np.ndarray, width: int) -> np.ndarray:
    """Extended exact sums (a + b, always fits uint64 for width <= 63)."""
    _check_width(width)
    return _as_u64(a) + _as_u64(b)
