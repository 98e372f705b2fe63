"""Error measurement for the approximate adders.

Reports ER (fraction of operand pairs with any error), MED (mean absolute
error distance), and MRED (mean relative error distance), plus per-boundary
carry mismatch rates against the exact ripple oracle.  Small widths are
enumerated exhaustively; larger ones use seeded Monte Carlo sampling whose
results are reproducible from (seed, run index) alone.

Error distances compare (n+1)-bit extended values (sum plus carry-out) so
operand pairs that overflow n bits are measured fairly.  Counts and distance
sums are accumulated as exact integers; floating-point means are formed once
at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import batch
from .adder import AddResult, AdderConfig, Variant, add_approx, exact_carry_at

DEFAULT_EXHAUSTIVE_WIDTH_CAP = 12
DEFAULT_RUNS = 12

_CHUNK = 1 << 20
# chunk sums of uint64 error distances stay exact below this width
_UINT64_SAFE_WIDTH = 42


class EvalMode(Enum):
    EXHAUSTIVE = "Exhaustive"
    MONTE_CARLO = "MonteCarlo"


@dataclass(frozen=True)
class ErrorReport:
    """ER/MED/MRED aggregates with sampling provenance."""

    config: AdderConfig
    er: float
    med: float
    mred: float
    sample_count: int
    run_count: int
    seed: int
    mode: EvalMode

    def to_json_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "er": self.er,
            "med": self.med,
            "mred": self.mred,
            "sample_count": self.sample_count,
            "run_count": self.run_count,
            "seed": self.seed,
            "mode": self.mode.value,
        }

    def flat_dict(self) -> dict:
        """Config fields inlined; suitable for a CSV row."""
        out = self.config.to_dict()
        out.update(er=self.er, med=self.med, mred=self.mred,
                   sample_count=self.sample_count, run_count=self.run_count,
                   seed=self.seed, mode=self.mode.value)
        return out


def error_report_from_json(data: dict) -> ErrorReport:
    return ErrorReport(
        config=AdderConfig.from_dict(data["config"]),
        er=float(data["er"]),
        med=float(data["med"]),
        mred=float(data["mred"]),
        sample_count=int(data["sample_count"]),
        run_count=int(data["run_count"]),
        seed=int(data["seed"]),
        mode=EvalMode(data["mode"]),
    )


@dataclass(frozen=True)
class BoundaryStats:
    """Mismatch rates of the boundary carry estimators against the exact carries.

    One entry per boundary position (k, 2k, ..., n).  sel_active_fraction is
    the share of sampled (pair, block) combinations whose SU flag was set.
    """

    config: AdderConfig
    per_boundary_mismatch: tuple[float, ...]
    overall_mismatch: float
    sel_active_fraction: float
    sample_count: int
    seed: int
    mode: EvalMode

    def to_json_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "per_boundary_mismatch": list(self.per_boundary_mismatch),
            "overall_mismatch": self.overall_mismatch,
            "sel_active_fraction": self.sel_active_fraction,
            "sample_count": self.sample_count,
            "seed": self.seed,
            "mode": self.mode.value,
        }


def error_distance(approx: AddResult, exact: AddResult) -> int:
    """Absolute difference of the extended values."""
    if approx.sum.width != exact.sum.width:
        raise ValueError("results have different widths")
    return abs(approx.extended_value - exact.extended_value)


def relative_error_distance(approx: AddResult, exact: AddResult) -> float:
    """error_distance normalised by the exact extended sum; 0 when that sum is 0
    (reachable only at 0 + 0, which has zero distance)."""
    exact_value = exact.extended_value
    if exact_value == 0:
        return 0.0
    return error_distance(approx, exact) / exact_value


def _exhaustive_chunks(width: int):
    operand_count = 1 << width
    total = operand_count * operand_count
    low_mask = np.uint64(operand_count - 1)
    shift = np.uint64(width)
    for start in range(0, total, _CHUNK):
        index = np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
        yield index >> shift, index & low_mask


def _exact_chunk_sum(values: np.ndarray, width: int) -> int:
    # distances are < 2^(width+1); with chunks of 2^20 a uint64 sum is exact
    # only for modest widths, so fall back to Python integers above that
    if width <= _UINT64_SAFE_WIDTH:
        return int(values.sum(dtype=np.uint64))
    return int(sum(int(v) for v in values))


def _distance_chunk(a: np.ndarray, b: np.ndarray, config: AdderConfig):
    approx = batch.add_approx_extended(a, b, config)
    exact = batch.add_exact_extended(a, b, config.width)
    ed = np.where(exact >= approx, exact - approx, approx - exact)
    errors = int(np.count_nonzero(ed))
    ed_sum = _exact_chunk_sum(ed, config.width)
    nonzero = exact > 0
    red_sum = float(np.sum(ed[nonzero] / exact[nonzero]))
    return errors, ed_sum, red_sum


def evaluate_exhaustive(config: AdderConfig, *,
                        width_cap: int = DEFAULT_EXHAUSTIVE_WIDTH_CAP,
                        allow_large: bool = False) -> ErrorReport:
    """Deterministic sweep over all 2^(2n) operand pairs."""
    if config.width > width_cap and not allow_large:
        raise ValueError(
            f"width {config.width} exceeds the exhaustive cap {width_cap}; "
            "pass allow_large=True to override"
        )
    errors = 0
    ed_total = 0
    red_parts: list[float] = []
    for a, b in _exhaustive_chunks(config.width):
        chunk_errors, chunk_ed, chunk_red = _distance_chunk(a, b, config)
        errors += chunk_errors
        ed_total += chunk_ed
        red_parts.append(chunk_red)
    total = 1 << (2 * config.width)
    return ErrorReport(
        config=config,
        er=errors / total,
        med=ed_total / total,
        mred=math.fsum(red_parts) / total,
        sample_count=total,
        run_count=1,
        seed=0,
        mode=EvalMode.EXHAUSTIVE,
    )


def _run_rng(seed: int, run: int) -> np.random.Generator:
    # sub-seed derived from (seed, run) so runs are order-independent
    return np.random.default_rng([seed, run])


def _draw_operands(rng: np.random.Generator, width: int, samples: int):
    if width <= batch.MAX_BATCH_WIDTH:
        high = 1 << width
        a = rng.integers(0, high, size=samples, dtype=np.uint64)
        b = rng.integers(0, high, size=samples, dtype=np.uint64)
        return a, b
    # width 64: compose from two 32-bit halves, keep Python ints
    halves = rng.integers(0, 1 << 32, size=(4, samples), dtype=np.uint64)
    a = [(int(hi) << 32) | int(lo) for hi, lo in zip(halves[0], halves[1])]
    b = [(int(hi) << 32) | int(lo) for hi, lo in zip(halves[2], halves[3])]
    return a, b


def _mc_run(config: AdderConfig, samples: int, rng: np.random.Generator):
    a, b = _draw_operands(rng, config.width, samples)
    if config.width <= batch.MAX_BATCH_WIDTH:
        errors = 0
        ed_total = 0
        red_parts: list[float] = []
        for start in range(0, samples, _CHUNK):
            stop = min(start + _CHUNK, samples)
            chunk_errors, chunk_ed, chunk_red = _distance_chunk(
                a[start:stop], b[start:stop], config)
            errors += chunk_errors
            ed_total += chunk_ed
            red_parts.append(chunk_red)
        red_total = math.fsum(red_parts)
    else:
        errors = 0
        ed_total = 0
        red_values: list[float] = []
        for av, bv in zip(a, b):
            approx = add_approx(av, bv, config).extended_value
            exact = av + bv
            ed = exact - approx
            if ed:
                errors += 1
                ed_total += ed
                red_values.append(ed / exact)
        red_total = math.fsum(red_values)
    return errors / samples, ed_total / samples, red_total / samples


def evaluate_monte_carlo(config: AdderConfig, samples: int,
                         runs: int = DEFAULT_RUNS, seed: int = 0) -> ErrorReport:
    """Uniform random operand pairs over [0, 2^n), averaged across runs.

    Run r draws from a generator seeded with (seed, r), so reports are
    bit-identical regardless of execution order.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    per_run = [_mc_run(config, samples, _run_rng(seed, r)) for r in range(runs)]
    return ErrorReport(
        config=config,
        er=math.fsum(r[0] for r in per_run) / runs,
        med=math.fsum(r[1] for r in per_run) / runs,
        mred=math.fsum(r[2] for r in per_run) / runs,
        sample_count=samples,
        run_count=runs,
        seed=seed,
        mode=EvalMode.MONTE_CARLO,
    )


def _boundary_chunk(a, b, config: AdderConfig, mismatch_counts, sel_total):
    estimates = batch.block_estimates(a, b, config)
    exact = batch.exact_boundary_carries(a, b, config)
    for j in range(config.n_blocks):
        mismatch_counts[j] += int(np.count_nonzero(estimates[j] != exact[j]))
    return sel_total + int(np.count_nonzero(batch.sel_flags(a, b, config)))


def boundary_mismatch_stats(config: AdderConfig, samples: int | None = None,
                            seed: int = 0, *,
                            width_cap: int = DEFAULT_EXHAUSTIVE_WIDTH_CAP,
                            allow_large: bool = False) -> BoundaryStats:
    """Estimator-vs-oracle mismatch rate at every block boundary.

    samples=None enumerates all operand pairs (subject to the width cap);
    otherwise draws that many uniform pairs from the seed.
    """
    if config.variant is Variant.EXACT:
        raise ValueError("boundary statistics require an estimating variant")
    mismatch_counts = [0] * config.n_blocks
    sel_total = 0
    if samples is None:
        if config.width > width_cap and not allow_large:
            raise ValueError(
                f"width {config.width} exceeds the exhaustive cap {width_cap}; "
                "pass allow_large=True or a sample count"
            )
        mode = EvalMode.EXHAUSTIVE
        pair_count = 1 << (2 * config.width)
        for a, b in _exhaustive_chunks(config.width):
            sel_total = _boundary_chunk(a, b, config, mismatch_counts, sel_total)
    else:
        if samples < 1:
            raise ValueError("samples must be >= 1")
        mode = EvalMode.MONTE_CARLO
        pair_count = samples
        rng = _run_rng(seed, 0)
        if config.width <= batch.MAX_BATCH_WIDTH:
            a, b = _draw_operands(rng, config.width, samples)
            for start in range(0, samples, _CHUNK):
                stop = min(start + _CHUNK, samples)
                sel_total = _boundary_chunk(a[start:stop], b[start:stop],
                                            config, mismatch_counts, sel_total)
        else:
            from .adder import BlockOperands, estimate_block_carry

            k = config.block_size
            mask = (1 << k) - 1
            a, b = _draw_operands(rng, config.width, samples)
            for av, bv in zip(a, b):
                for j, pos in enumerate(config.boundary_positions):
                    blk = BlockOperands((av >> (j * k)) & mask,
                                        (bv >> (j * k)) & mask, j)
                    signals = estimate_block_carry(blk, config)
                    if signals.c_out != exact_carry_at(av, bv, pos):
                        mismatch_counts[j] += 1
                    sel_total += signals.sel
    boundary_total = pair_count * config.n_blocks
    return BoundaryStats(
        config=config,
        per_boundary_mismatch=tuple(c / pair_count for c in mismatch_counts),
        overall_mismatch=sum(mismatch_counts) / boundary_total,
        sel_active_fraction=sel_total / boundary_total,
        sample_count=pair_count,
        seed=0 if samples is None else seed,
        mode=mode,
    )


def locally_determined_combo_count() -> int:
    """How many of the 16 top-two-bit-pair combinations force the boundary
    carry regardless of lower bits and carry-in (enumerated, not assumed)."""
    determined = 0
    for combo in range(16):
        a_hi, b_hi = (combo >> 3) & 1, (combo >> 2) & 1
        a_lo, b_lo = (combo >> 1) & 1, combo & 1
        predicted = (a_hi & b_hi) | (a_lo & b_lo & (a_hi | b_hi))
        always = True
        for low_a in range(4):
            for low_b in range(4):
                for carry_in in range(2):
                    a = (a_hi << 3) | (a_lo << 2) | low_a
                    b = (b_hi << 3) | (b_lo << 2) | low_b
                    if ((a + b + carry_in) >> 4) & 1 != predicted:
                        always = False
        determined += always
    return determined
