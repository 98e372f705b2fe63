"""Gaussian smoothing benchmark: integer convolution with approximate
accumulation, scored by PSNR and SSIM against the exact-addition pipeline.

Images are 8-bit grayscale, stored row-major, read and written as binary
PGM (P5).  The convolution multiplies exactly and accumulates the partial
products with the configured adder, in ascending kernel-index order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import batch
from .adder import AdderConfig

PEAK = 255
SSIM_WINDOW = 8
SSIM_K1 = 0.01
SSIM_K2 = 0.03


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale image; pixels is a (height, width) uint8 array."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.pixels)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("pixels must be a non-empty 2-D array")
        if arr.dtype != np.uint8:
            if arr.min() < 0 or arr.max() > PEAK:
                raise ValueError("pixel intensities must lie in 0..255")
            arr = arr.astype(np.uint8)
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class QualityReport:
    """PSNR/SSIM of an approximate pipeline against the exact one."""

    psnr: float  # math.inf marks identical images
    ssim: float
    config: AdderConfig
    seed: int

    def to_json_dict(self) -> dict:
        return {
            # JSON null is the "infinite" marker for identical images
            "psnr": None if math.isinf(self.psnr) else self.psnr,
            "ssim": self.ssim,
            "config": self.config.to_dict(),
            "seed": self.seed,
        }


def quality_report_from_json(data: dict) -> QualityReport:
    psnr = data["psnr"]
    return QualityReport(
        psnr=math.inf if psnr is None else float(psnr),
        ssim=float(data["ssim"]),
        config=AdderConfig.from_dict(data["config"]),
        seed=int(data["seed"]),
    )


def read_pgm(path: str | Path) -> GrayImage:
    """Read a binary (P5) 8-bit PGM; parse errors name the byte offset."""
    path = Path(path)
    data = path.read_bytes()
    pos = 0

    def fail(offset: int, why: str) -> ValueError:
        return ValueError(f"{path}: malformed PGM at byte {offset}: {why}")

    def next_token() -> tuple[bytes, int]:
        nonlocal pos
        while pos < len(data):
            c = data[pos:pos + 1]
            if c == b"#":  # comment runs to end of line
                while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            elif c.isspace():
                pos += 1
            else:
                break
        if pos >= len(data):
            raise fail(pos, "unexpected end of header")
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        return data[start:pos], start

    magic, off = next_token()
    if magic != b"P5":
        raise fail(off, f"expected magic 'P5', found {magic[:8]!r}")
    dims = []
    for field in ("width", "height", "maxval"):
        token, off = next_token()
        if not token.isdigit():
            raise fail(off, f"{field} is not a decimal integer: {token[:8]!r}")
        dims.append(int(token))
    width, height, maxval = dims
    if width < 1 or height < 1:
        raise fail(off, f"degenerate dimensions {width}x{height}")
    if not 1 <= maxval <= PEAK:
        raise fail(off, f"maxval {maxval} unsupported (8-bit only)")
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise fail(pos, "missing whitespace after maxval")
    pos += 1
    raster = data[pos:pos + width * height]
    if len(raster) < width * height:
        raise fail(pos + len(raster),
                   f"truncated raster: expected {width * height} bytes, "
                   f"got {len(raster)}")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return GrayImage(pixels.copy())


def write_pgm(img: GrayImage, path: str | Path) -> None:
    header = f"P5\n{img.width} {img.height}\n{PEAK}\n".encode("ascii")
    Path(path).write_bytes(header + img.pixels.tobytes())


def gaussian_kernel_int(size: int = 5, sigma: float = 1.0,
                        scale_bits: int = 8) -> tuple[np.ndarray, int]:
    """Integer 2-D Gaussian kernel.

    Samples the unit-mass (normalised) Gaussian on the size x size grid,
    scales the fractional weights by 2^scale_bits and rounds to nearest, so
    the integer kernel sums to roughly 2^scale_bits.  Returns
    (kernel, scale_bits); at use time outputs are divided by the exact
    integer kernel sum.
    """
    if size < 1 or size % 2 == 0:
        raise ValueError("kernel size must be odd and positive")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if scale_bits < 1:
        raise ValueError("scale_bits must be >= 1")
    offsets = np.arange(size) - size // 2
    xx, yy = np.meshgrid(offsets, offsets)
    weights = np.exp(-(xx ** 2 + yy ** 2) / (2.0 * sigma ** 2))
    weights /= weights.sum()
    kernel = np.rint(weights * (1 << scale_bits)).astype(np.int64)
    return kernel, scale_bits


def add_noise(img: GrayImage, sigma: float, seed: int) -> GrayImage:
    """Additive zero-mean Gaussian noise, clamped to 0..255, seeded."""
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    rng = np.random.default_rng(seed)
    noisy = img.pixels.astype(np.float64) + rng.normal(0.0, sigma, img.pixels.shape)
    return GrayImage(np.clip(np.rint(noisy), 0, PEAK).astype(np.uint8))


def convolve_approx(img: GrayImage, kernel: np.ndarray,
                    config: AdderConfig) -> GrayImage:
    """Convolve with exact multiplies and approximate accumulation.

    Border handling is edge replication.  Partial products are accumulated in
    ascending kernel-index (row-major) order; the result is divided by the
    integer kernel sum (round-to-nearest) and clamped to 0..255.
    """
    kernel = np.asarray(kernel)
    if kernel.ndim != 2 or kernel.shape[0] != kernel.shape[1] or kernel.shape[0] % 2 == 0:
        raise ValueError("kernel must be square with odd side")
    if kernel.min() < 0:
        raise ValueError("kernel weights must be non-negative")
    kernel_sum = int(kernel.sum())
    if kernel_sum < 1:
        raise ValueError("kernel sum must be positive")
    max_acc = PEAK * kernel_sum
    if max_acc >= (1 << config.width):
        raise ValueError(
            f"accumulator can reach {max_acc}, which overflows "
            f"{config.width}-bit operands; widen the adder or shrink the kernel"
        )
    size = kernel.shape[0]
    pad = size // 2
    padded = np.pad(img.pixels, pad, mode="edge").astype(np.uint64)
    height, width = img.pixels.shape
    acc = np.zeros(height * width, dtype=np.uint64)
    for ky in range(size):
        for kx in range(size):
            weight = int(kernel[ky, kx])
            if weight == 0:
                continue  # adding zero is exact for every variant
            term = padded[ky:ky + height, kx:kx + width].reshape(-1) * np.uint64(weight)
            acc = batch.add_approx_extended(acc, term, config)
    out = (acc + np.uint64(kernel_sum // 2)) // np.uint64(kernel_sum)
    out = np.minimum(out, np.uint64(PEAK)).astype(np.uint8)
    return GrayImage(out.reshape(height, width))


def psnr(reference: GrayImage, test: GrayImage) -> float:
    """Peak signal-to-noise ratio in dB; math.inf for identical images."""
    if reference.pixels.shape != test.pixels.shape:
        raise ValueError("image dimensions differ")
    diff = reference.pixels.astype(np.float64) - test.pixels.astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(PEAK * PEAK / mse)


def _window_sums(arr: np.ndarray, size: int) -> np.ndarray:
    summed = np.cumsum(np.cumsum(arr, axis=0, dtype=np.int64), axis=1)
    summed = np.pad(summed, ((1, 0), (1, 0)))
    return (summed[size:, size:] - summed[:-size, size:]
            - summed[size:, :-size] + summed[:-size, :-size])


def ssim(reference: GrayImage, test: GrayImage) -> float:
    """Mean SSIM over 8x8 sliding windows (uniform weights, L = 255)."""
    if reference.pixels.shape != test.pixels.shape:
        raise ValueError("image dimensions differ")
    if reference.height < SSIM_WINDOW or reference.width < SSIM_WINDOW:
        raise ValueError(f"images must be at least {SSIM_WINDOW}x{SSIM_WINDOW}")
    x = reference.pixels.astype(np.int64)
    y = test.pixels.astype(np.int64)
    n = SSIM_WINDOW * SSIM_WINDOW
    sum_x = _window_sums(x, SSIM_WINDOW).astype(np.float64)
    sum_y = _window_sums(y, SSIM_WINDOW).astype(np.float64)
    sum_xx = _window_sums(x * x, SSIM_WINDOW).astype(np.float64)
    sum_yy = _window_sums(y * y, SSIM_WINDOW).astype(np.float64)
    sum_xy = _window_sums(x * y, SSIM_WINDOW).astype(np.float64)
    mu_x = sum_x / n
    mu_y = sum_y / n
    var_x = (sum_xx - n * mu_x * mu_x) / (n - 1)
    var_y = (sum_yy - n * mu_y * mu_y) / (n - 1)
    cov = (sum_xy - n * mu_x * mu_y) / (n - 1)
    c1 = (SSIM_K1 * PEAK) ** 2
    c2 = (SSIM_K2 * PEAK) ** 2
    score = ((2 * mu_x * mu_y + c1) * (2 * cov + c2)) / (
        (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2))
    return float(np.mean(score))


def default_test_image(size: int = 256) -> GrayImage:
    """Bundled synthetic benchmark image: radial gradient plus texture."""
    coords = np.arange(size, dtype=np.float64)
    xx, yy = np.meshgrid(coords, coords)
    center = (size - 1) / 2.0
    radius = np.hypot(xx - center, yy - center)
    base = 215.0 - radius * (150.0 / np.hypot(center, center))
    texture = (18.0 * np.sin(xx / 6.1) * np.cos(yy / 4.3)
               + 9.0 * np.sin((xx + yy) / 2.7))
    return GrayImage(np.clip(np.rint(base + texture), 0, PEAK).astype(np.uint8))
