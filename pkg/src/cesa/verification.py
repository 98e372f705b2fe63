"""Exhaustive invariant suite for the adder model at a given width.

Backs the ``verify`` CLI command: every algebraic property of the adders and
their estimators is checked over all 2^(2n) operand pairs for every valid
configuration at that width, and each check reports how many cases it
covered plus a counterexample when it fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import batch
from .adder import AdderConfig, Variant, ceu, perl
from .metrics import (DEFAULT_EXHAUSTIVE_WIDTH_CAP, _exhaustive_chunks,
                      evaluate_exhaustive, locally_determined_combo_count)


@dataclass
class InvariantResult:
    name: str
    passed: bool
    checked: int
    detail: str = ""
    counterexample: tuple[int, int] | None = None

    def line(self) -> str:
        status = "ok  " if self.passed else "FAIL"
        extra = f"  [{self.detail}]" if self.detail else ""
        ce = ""
        if self.counterexample is not None:
            ce = f"  counterexample a={self.counterexample[0]} b={self.counterexample[1]}"
        return f"{status} {self.name}  (checked {self.checked}){extra}{ce}"


def _valid_configs(width: int) -> list[AdderConfig]:
    configs = []
    for variant in (Variant.CESA, Variant.CESA_PERL):
        for k in range(variant.min_block_size(), width + 1):
            if width % k == 0:
                configs.append(AdderConfig(width, k, variant))
    return configs


@dataclass
class _ConfigChecks:
    """Violation tallies for one configuration, over all operand pairs."""

    config: AdderConfig
    pairs: int = 0
    commutativity: int = 0
    under_estimation: int = 0
    local_determination: int = 0
    perl_precondition: int = 0
    error_shape: int = 0
    errors: int = 0
    sel_count: int = 0
    first_bad: dict = field(default_factory=dict)

    def _note(self, name: str, mask: np.ndarray, a: np.ndarray, b: np.ndarray) -> int:
        count = int(np.count_nonzero(mask))
        if count and name not in self.first_bad:
            idx = int(np.argmax(mask))
            self.first_bad[name] = (int(a[idx]), int(b[idx]))
        return count

    def scan(self) -> None:
        config = self.config
        k = config.block_size
        single_boundary = config.width == 2 * k
        for a, b in _exhaustive_chunks(config.width):
            self.pairs += a.shape[0]
            approx = batch.add_approx_extended(a, b, config)
            exact = batch.add_exact_extended(a, b, config.width)
            swapped = batch.add_approx_extended(b, a, config)
            estimates = batch.block_estimates(a, b, config)
            true_carries = batch.exact_boundary_carries(a, b, config)
            sel = batch.sel_flags(a, b, config)

            self.commutativity += self._note("commutativity", approx != swapped, a, b)
            self.under_estimation += self._note(
                "under-estimation",
                (approx > exact) | np.any(estimates > true_carries, axis=0), a, b)
            mismatch = estimates != true_carries
            self.local_determination += self._note(
                "local-determination", np.any(mismatch & (sel == 0), axis=0), a, b)
            if config.variant is Variant.CESA_PERL:
                all_prop = self._all_four_propagate(a, b, config)
                self.perl_precondition += self._note(
                    "perl-precondition", np.any(mismatch & ~all_prop, axis=0), a, b)
            if single_boundary:
                distance = exact - approx  # under-estimation keeps this >= 0
                bad_shape = (distance != 0) & (distance != (1 << k))
                self.error_shape += self._note("error-shape", bad_shape, a, b)
            self.errors += int(np.count_nonzero(approx != exact))
            self.sel_count += int(np.count_nonzero(sel))

    @staticmethod
    def _all_four_propagate(a: np.ndarray, b: np.ndarray,
                            config: AdderConfig) -> np.ndarray:
        k = config.block_size
        mask = np.uint64((1 << k) - 1)
        out = np.empty((config.n_blocks, a.shape[0]), dtype=bool)
        for j in range(config.n_blocks):
            sh = np.uint64(j * k)
            blk_x = ((a >> sh) & mask) ^ ((b >> sh) & mask)
            top4 = (blk_x >> np.uint64(k - 4)) & np.uint64(15)
            out[j] = top4 == np.uint64(15)
        return out


def run_invariant_suite(width: int, *,
                        width_cap: int = DEFAULT_EXHAUSTIVE_WIDTH_CAP
                        ) -> list[InvariantResult]:
    """Exhaustively verify every adder/metrics invariant at one width."""
    if not 2 <= width <= width_cap:
        raise ValueError(f"width must be in [2, {width_cap}] for exhaustive checks")
    results: list[InvariantResult] = []

    combos = [(x >> 3 & 1, x >> 2 & 1, x >> 1 & 1, x & 1) for x in range(16)]
    perl_matches = sum(perl(*c) == ceu(*c) for c in combos)
    results.append(InvariantResult("perl-equals-ceu", perl_matches == 16, 16))

    determined = locally_determined_combo_count()
    results.append(InvariantResult(
        "top-pair-local-determination", determined == 12, 16,
        detail=f"{determined}/16 combos determine the carry"))

    configs = _valid_configs(width)
    scans: dict[AdderConfig, _ConfigChecks] = {}
    for config in configs:
        checks = _ConfigChecks(config)
        checks.scan()
        scans[config] = checks

    def add_config_result(name: str, config: AdderConfig, violations: int,
                          checks: _ConfigChecks) -> None:
        results.append(InvariantResult(
            f"{name} {config.describe()}", violations == 0, checks.pairs,
            counterexample=checks.first_bad.get(name) if violations else None))

    for config, checks in scans.items():
        add_config_result("commutativity", config, checks.commutativity, checks)
        add_config_result("under-estimation", config, checks.under_estimation, checks)
        add_config_result("local-determination", config,
                          checks.local_determination, checks)
        if config.variant is Variant.CESA_PERL:
            add_config_result("perl-precondition", config,
                              checks.perl_precondition, checks)
        if config.width == 2 * config.block_size:
            add_config_result("error-shape", config, checks.error_shape, checks)
        if config.block_size == config.width:
            results.append(InvariantResult(
                f"single-block-exactness {config.describe()}",
                checks.errors == 0, checks.pairs))
        boundary_samples = checks.pairs * config.n_blocks
        sel_fraction = checks.sel_count / boundary_samples
        results.append(InvariantResult(
            f"sel-active-fraction {config.describe()}",
            sel_fraction == 0.25, boundary_samples,
            detail=f"sel_active_fraction = {sel_fraction}"))

    # additive identity: x + 0 and 0 + x reproduce x with no carries
    operands = np.arange(1 << width, dtype=np.uint64)
    zeros = np.zeros_like(operands)
    for config in configs:
        left = batch.add_approx_extended(operands, zeros, config)
        right = batch.add_approx_extended(zeros, operands, config)
        ok = bool(np.all(left == operands) and np.all(right == operands))
        results.append(InvariantResult(
            f"additive-identity {config.describe()}", ok, 2 * operands.shape[0]))

    # ER ordering across block sizes and variants
    for variant in (Variant.CESA, Variant.CESA_PERL):
        rates = [(c.block_size, scans[c].errors / scans[c].pairs)
                 for c in configs if c.variant is variant]
        rates.sort()
        monotone = all(rates[i][1] >= rates[i + 1][1] for i in range(len(rates) - 1))
        if rates:
            results.append(InvariantResult(
                f"er-monotone-in-block-size {variant.value}", monotone, len(rates),
                detail=", ".join(f"k={k}: {er:.6f}" for k, er in rates)))
    for config in configs:
        if config.variant is Variant.CESA_PERL:
            partner = AdderConfig(width, config.block_size, Variant.CESA)
            er_perl = scans[config].errors / scans[config].pairs
            er_cesa = scans[partner].errors / scans[partner].pairs
            results.append(InvariantResult(
                f"perl-not-worse {config.width}:{config.block_size}",
                er_perl <= er_cesa, scans[config].pairs,
                detail=f"cesa-perl {er_perl:.6f} <= cesa {er_cesa:.6f}"))

    exact_report = evaluate_exhaustive(AdderConfig(width, width, Variant.EXACT),
                                       width_cap=width_cap)
    results.append(InvariantResult(
        "exact-self-distance-zero",
        exact_report.er == 0.0 and exact_report.med == 0.0 and exact_report.mred == 0.0,
        exact_report.sample_count))

    return results
