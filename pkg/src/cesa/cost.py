"""First-order unit-gate cost model.

Every 2-input gate (XOR included) costs one delay level and one area unit.
A full-adder stage contributes 2 delay levels on the carry path and 5 gates
of area; the estimator units are costed from their Boolean operator trees:
CEU and PERL 4 gates each, SU 3, the selection mux 3.  Only relative
delay/area claims are meaningful here; no technology mapping is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass

from .adder import AdderConfig, Variant

FULL_ADDER_GATES = 5
CEU_GATES = 4
PERL_GATES = 4
SU_GATES = 3
MUX_GATES = 3

FULL_ADDER_CARRY_LEVELS = 2
ESTIMATE_LEVELS_CESA = 2       # CEU alone
ESTIMATE_LEVELS_CESA_PERL = 4  # CEU/PERL/SU in parallel, then the 2-level mux


@dataclass(frozen=True)
class CostEstimate:
    """Critical-path length in unit-gate levels and total 2-input gate count."""

    critical_path_levels: int
    gate_count: int
    config: AdderConfig

    def flat_dict(self) -> dict:
        out = self.config.to_dict()
        out.update(critical_path_levels=self.critical_path_levels,
                   gate_count=self.gate_count)
        return out


def _delay_levels(config: AdderConfig) -> int:
    n, k = config.width, config.block_size
    if config.variant is Variant.EXACT or config.n_blocks == 1:
        # a single block has no estimation on its critical path
        return FULL_ADDER_CARRY_LEVELS * n
    estimate = (ESTIMATE_LEVELS_CESA if config.variant is Variant.CESA
                else ESTIMATE_LEVELS_CESA_PERL)
    # estimation settles first, then every block ripples k stages in parallel
    return estimate + FULL_ADDER_CARRY_LEVELS * k


def _gate_count(config: AdderConfig) -> int:
    gates = FULL_ADDER_GATES * config.width
    boundaries = config.n_blocks - 1  # estimators sit between blocks only
    if config.variant is Variant.CESA:
        gates += boundaries * CEU_GATES
    elif config.variant is Variant.CESA_PERL:
        gates += boundaries * (CEU_GATES + PERL_GATES + SU_GATES + MUX_GATES)
    return gates


def delay_estimate(config: AdderConfig) -> CostEstimate:
    """Critical-path estimate (gate count included for convenience)."""
    return CostEstimate(_delay_levels(config), _gate_count(config), config)


def area_estimate(config: AdderConfig) -> CostEstimate:
    """Gate-count estimate (critical path included for convenience)."""
    return CostEstimate(_delay_levels(config), _gate_count(config), config)


def delay_reduction_vs_exact(config: AdderConfig) -> float:
    """Fractional critical-path saving against the same-width ripple adder."""
    exact = AdderConfig(config.width, config.width, Variant.EXACT)
    exact_levels = _delay_levels(exact)
    return (exact_levels - _delay_levels(config)) / exact_levels
