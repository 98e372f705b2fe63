"""Bit-exact model of the CESA and CESA-PERL carry-estimating approximate adders.

An n-bit operand pair is split into n/k independent k-bit ripple blocks.
Block 0 takes carry-in 0; every later block takes an *estimated* carry
produced from the previous block's most significant bit pairs, so no carry
chain ever crosses a block boundary:

* CEU (carry estimate unit) looks at a block's top two bit pairs and
  predicts the block's carry-out.  The prediction is exact unless both
  pairs propagate, in which case it guesses 0.
* PERL (propagating error rectification logic) is the same predictor wired
  to the next two bit pairs down (positions k-3 and k-4).
* SU (selection unit) detects the "both top pairs propagate" case; the
  CESA-PERL variant then substitutes the PERL prediction for the CEU one.

The estimates exist purely to decouple the blocks from one another: the
adder's own carry-out is the last block's internal ripple carry, and with a
single block the adder degenerates to an exact ripple-carry adder.

Everything here is a pure function of its inputs.  Operands are plain
unsigned integers of up to 64 bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

MIN_WIDTH = 2
MAX_WIDTH = 64


class Variant(Enum):
    """Adder flavour: exact ripple oracle or one of the two estimating designs."""

    EXACT = "exact"
    CESA = "cesa"
    CESA_PERL = "cesa-perl"

    @classmethod
    def from_string(cls, name: str) -> "Variant":
        normalized = name.strip().lower().replace("_", "-")
        for variant in cls:
            if variant.value == normalized:
                return variant
        raise ValueError(
            f"unknown variant {name!r}; expected one of "
            + ", ".join(v.value for v in cls)
        )

    def min_block_size(self) -> int:
        if self is Variant.CESA:
            return 2  # CEU needs the top two bit pairs
        if self is Variant.CESA_PERL:
            return 4  # CEU + PERL need the top four bit pairs
        return 1


@dataclass(frozen=True)
class AdderConfig:
    """Width n, block size k, and variant; governs every computation.

    k must divide n exactly.  The Exact variant ignores k for the sum itself
    and uses it only to decide where diagnostic boundary carries are sampled.
    """

    width: int
    block_size: int
    variant: Variant

    def __post_init__(self) -> None:
        if not isinstance(self.variant, Variant):
            object.__setattr__(self, "variant", Variant.from_string(str(self.variant)))
        if not MIN_WIDTH <= self.width <= MAX_WIDTH:
            raise ValueError(
                f"width {self.width} outside supported range "
                f"[{MIN_WIDTH}, {MAX_WIDTH}]"
            )
        if self.block_size < 1:
            raise ValueError(f"block size {self.block_size} must be positive")
        if self.width % self.block_size != 0:
            raise ValueError(
                f"block size {self.block_size} does not divide width {self.width}"
            )
        min_k = self.variant.min_block_size()
        if self.block_size < min_k:
            raise ValueError(
                f"block size {self.block_size} below minimum {min_k} "
                f"for variant {self.variant.value}"
            )

    @property
    def n_blocks(self) -> int:
        return self.width // self.block_size

    @property
    def boundary_positions(self) -> tuple[int, ...]:
        """Bit positions k, 2k, ..., n at which boundary carries are defined."""
        k = self.block_size
        return tuple(k * (i + 1) for i in range(self.n_blocks))

    def describe(self) -> str:
        return f"{self.width}:{self.block_size}:{self.variant.value}"

    def to_dict(self) -> dict:
        return {
            "width": self.width,
            "block_size": self.block_size,
            "variant": self.variant.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AdderConfig":
        return cls(
            width=int(data["width"]),
            block_size=int(data["block_size"]),
            variant=Variant.from_string(data["variant"]),
        )


@dataclass(frozen=True)
class Word:
    """Unsigned integer value constrained to a fixed bit width."""

    value: int
    width: int

    def __post_init__(self) -> None:
        if not MIN_WIDTH <= self.width <= MAX_WIDTH:
            raise ValueError(f"word width {self.width} outside [{MIN_WIDTH}, {MAX_WIDTH}]")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(
                f"value {self.value} does not fit in {self.width} unsigned bits"
            )

    def __int__(self) -> int:
        return self.value

    def bit(self, i: int) -> int:
        return (self.value >> i) & 1


@dataclass(frozen=True)
class BlockOperands:
    """One k-bit slice of each operand; block 0 is the least significant."""

    a: int
    b: int
    block_index: int


@dataclass(frozen=True)
class CarrySignals:
    """Estimator outputs for one block boundary.

    c_out is c_ceu for CESA; for CESA-PERL it is c_perl when sel is set and
    c_ceu otherwise.  c_perl is None for variants that have no PERL unit.
    """

    c_ceu: int
    c_perl: int | None
    sel: int
    c_out: int


@dataclass(frozen=True)
class AddResult:
    """Sum word, carry-out, and the carry seen at each block boundary.

    boundary_carries has one entry per boundary (positions k, 2k, ..., n).
    Interior entries are the carries actually injected into the next block
    (estimates, for approximate variants); the last entry is the adder's
    carry-out and always equals ``carry_out``.
    """

    sum: Word
    carry_out: int
    boundary_carries: tuple[int, ...]

    @property
    def extended_value(self) -> int:
        """The (n+1)-bit interpretation: sum plus carry_out * 2^n."""
        return self.sum.value + (self.carry_out << self.sum.width)


def ceu(a_hi: int, b_hi: int, a_lo: int, b_lo: int) -> int:
    """Carry estimate from two adjacent bit pairs, (a_hi, b_hi) above (a_lo, b_lo).

    Predicts 1 when the high pair generates, or the low pair generates into a
    high pair that propagates; otherwise 0.
    """
    return (a_hi & b_hi) | (a_lo & b_lo & (a_hi | b_hi))


def perl(a_hi: int, b_hi: int, a_lo: int, b_lo: int) -> int:
    """Rectification estimate: same Boolean function as ceu, fed the pairs at
    positions k-3 and k-4 of a block."""
    return ceu(a_hi, b_hi, a_lo, b_lo)


def su(a_hi: int, b_hi: int, a_lo: int, b_lo: int) -> int:
    """Selection flag: 1 when both top pairs propagate, i.e. the CEU cannot
    locally determine the carry and PERL should be consulted."""
    return (a_hi ^ b_hi) & (a_lo ^ b_lo)


def estimate_block_carry(block: BlockOperands, config: AdderConfig) -> CarrySignals:
    """Estimate a block's carry-out from its own bits only (never a carry-in).

    For CESA the result is the CEU output.  For CESA-PERL the SU flag picks
    between the CEU and PERL outputs.
    """
    if config.variant is Variant.EXACT:
        raise ValueError("the exact variant has no carry estimator")
    k = config.block_size
    if not (0 <= block.a < (1 << k) and 0 <= block.b < (1 << k)):
        raise ValueError(f"block operands must fit in {k} bits")

    def bit(x: int, i: int) -> int:
        return (x >> i) & 1

    a_hi, b_hi = bit(block.a, k - 1), bit(block.b, k - 1)
    a_lo, b_lo = bit(block.a, k - 2), bit(block.b, k - 2)
    c_ceu = ceu(a_hi, b_hi, a_lo, b_lo)
    sel = su(a_hi, b_hi, a_lo, b_lo)
    if config.variant is Variant.CESA:
        return CarrySignals(c_ceu=c_ceu, c_perl=None, sel=sel, c_out=c_ceu)
    c_perl = perl(bit(block.a, k - 3), bit(block.b, k - 3),
                  bit(block.a, k - 4), bit(block.b, k - 4))
    return CarrySignals(c_ceu=c_ceu, c_perl=c_perl, sel=sel,
                        c_out=c_perl if sel else c_ceu)


def block_sum(a: int, b: int, carry_in: int, k: int) -> tuple[int, int]:
    """Exact k-bit ripple addition of one block.

    Returns (sum mod 2^k, ripple carry-out).  In the approximate variants the
    ripple carry-out at interior boundaries is discarded in favour of the
    estimate; only the last block's ripple carry survives as the adder's
    carry-out.
    """
    if not (0 <= a < (1 << k) and 0 <= b < (1 << k)):
        raise ValueError(f"block operands must fit in {k} bits")
    if carry_in not in (0, 1):
        raise ValueError("carry_in must be 0 or 1")
    total = a + b + carry_in
    return total & ((1 << k) - 1), total >> k


def _operand_value(operand: int | Word, config_width: int, name: str) -> int:
    if isinstance(operand, Word):
        if operand.width != config_width:
            raise ValueError(
                f"operand {name} has width {operand.width}, config expects {config_width}"
            )
        return operand.value
    value = int(operand)
    if not 0 <= value < (1 << config_width):
        raise ValueError(f"operand {name}={value} does not fit in {config_width} bits")
    return value


def add_approx(a: int | Word, b: int | Word, config: AdderConfig) -> AddResult:
    """Approximate addition under the given configuration.

    Blocks are summed with exact k-bit ripples, but block i > 0 receives the
    *estimated* carry-out of block i-1 rather than the rippled one.  Block 0
    receives carry-in 0.  Deterministic and pure.
    """
    av = _operand_value(a, config.width, "a")
    bv = _operand_value(b, config.width, "b")
    if config.variant is Variant.EXACT:
        return add_exact(av, bv, config.width, config.block_size)

    k = config.block_size
    mask = (1 << k) - 1
    n_blocks = config.n_blocks
    estimates = [
        estimate_block_carry(
            BlockOperands((av >> (j * k)) & mask, (bv >> (j * k)) & mask, j), config
        ).c_out
        for j in range(n_blocks)
    ]

    value = 0
    carry_in = 0
    ripple = 0
    for j in range(n_blocks):
        digits, ripple = block_sum((av >> (j * k)) & mask, (bv >> (j * k)) & mask,
                                   carry_in, k)
        value |= digits << (j * k)
        carry_in = estimates[j]  # next block consumes the estimate
    carry_out = ripple
    boundary_carries = tuple(estimates[: n_blocks - 1]) + (carry_out,)
    return AddResult(Word(value, config.width), carry_out, boundary_carries)


def add_exact(a: int | Word, b: int | Word, width: int,
              block_size: int | None = None) -> AddResult:
    """Exact ripple-carry addition; the oracle against which mismatch is measured.

    boundary_carries holds the true carries at positions k, 2k, ..., n
    (block_size defaults to the full width, leaving just the carry-out).
    """
    if block_size is None:
        block_size = width
    if not MIN_WIDTH <= width <= MAX_WIDTH:
        raise ValueError(f"width {width} outside [{MIN_WIDTH}, {MAX_WIDTH}]")
    if block_size < 1 or width % block_size != 0:
        raise ValueError(f"block size {block_size} does not divide width {width}")
    av = _operand_value(a, width, "a")
    bv = _operand_value(b, width, "b")
    total = av + bv
    boundary_carries = tuple(
        exact_carry_at(av, bv, pos)
        for pos in (block_size * (i + 1) for i in range(width // block_size))
    )
    return AddResult(Word(total & ((1 << width) - 1), width), total >> width,
                     boundary_carries)


def exact_carry_at(a: int, b: int, position: int) -> int:
    """True ripple carry of a + b into the given bit position (carry-in 0)."""
    mask = (1 << position) - 1
    return ((a & mask) + (b & mask)) >> position
