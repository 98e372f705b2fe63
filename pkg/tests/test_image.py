"""Image pipeline tests: PGM I/O, kernel construction, noise, convolution,
and the PSNR/SSIM scoring."""

import math

import numpy as np
import pytest

from cesa.adder import AdderConfig, Variant
from cesa.image import (GrayImage, QualityReport, add_noise, convolve_approx,
                        default_test_image, gaussian_kernel_int, psnr,
                        quality_report_from_json, read_pgm, ssim, write_pgm)


def _checker(size=32):
    yy, xx = np.mgrid[0:size, 0:size]
    return GrayImage((((xx // 4 + yy // 4) % 2) * 180 + 40).astype(np.uint8))


def test_pgm_round_trip(tmp_path):
    img = default_test_image(64)
    path = tmp_path / "img.pgm"
    write_pgm(img, path)
    back = read_pgm(path)
    assert np.array_equal(back.pixels, img.pixels)


def test_pgm_accepts_comments(tmp_path):
    path = tmp_path / "commented.pgm"
    path.write_bytes(b"P5\n# a comment\n2 2\n255\n\x01\x02\x03\x04")
    img = read_pgm(path)
    assert img.pixels.tolist() == [[1, 2], [3, 4]]


def test_pgm_bad_magic_names_offset(tmp_path):
    path = tmp_path / "bad.pgm"
    path.write_bytes(b"P2\n2 2\n255\n....")
    with pytest.raises(ValueError, match=r"byte 0.*P5"):
        read_pgm(path)


def test_pgm_truncated_raster_names_offset(tmp_path):
    path = tmp_path / "short.pgm"
    path.write_bytes(b"P5\n4 4\n255\n\x00\x01\x02")
    with pytest.raises(ValueError, match=r"truncated raster"):
        read_pgm(path)


def test_pgm_16bit_rejected(tmp_path):
    path = tmp_path / "deep.pgm"
    path.write_bytes(b"P5\n1 1\n65535\n\x00\x00")
    with pytest.raises(ValueError, match="maxval"):
        read_pgm(path)


def test_kernel_center_is_maximum_and_symmetric():
    kernel, shift = gaussian_kernel_int(5, 1.0, 8)
    assert shift == 8
    assert kernel[2, 2] == kernel.max()
    assert np.array_equal(kernel, kernel[::-1, :])
    assert np.array_equal(kernel, kernel[:, ::-1])
    assert np.array_equal(kernel, kernel.T)


def test_kernel_sum_tracks_scaled_mass():
    # oracle: the sampled weights are normalised to unit mass before scaling,
    # so the integer sum must sit within 5% of 2^scale_bits
    kernel, _ = gaussian_kernel_int(5, 1.0, 8)
    total = int(kernel.sum())
    assert 0.95 * 256 <= total <= 1.05 * 256


def test_kernel_argument_validation():
    with pytest.raises(ValueError):
        gaussian_kernel_int(4, 1.0, 8)
    with pytest.raises(ValueError):
        gaussian_kernel_int(5, 0.0, 8)
    with pytest.raises(ValueError):
        gaussian_kernel_int(5, 1.0, 0)


def test_add_noise_sigma_zero_is_identity():
    img = _checker()
    assert np.array_equal(add_noise(img, 0.0, seed=4).pixels, img.pixels)


def test_add_noise_deterministic_per_seed():
    img = _checker()
    one = add_noise(img, 10.0, seed=42)
    two = add_noise(img, 10.0, seed=42)
    other = add_noise(img, 10.0, seed=43)
    assert np.array_equal(one.pixels, two.pixels)
    assert not np.array_equal(one.pixels, other.pixels)


def test_add_noise_sample_std_near_sigma():
    flat = GrayImage(np.full((256, 256), 128, dtype=np.uint8))
    noisy = add_noise(flat, 10.0, seed=9)
    diff = noisy.pixels.astype(np.float64) - 128.0
    assert 8.5 <= diff.std() <= 11.5


def _reference_convolve(img, kernel):
    # independent integer reference: plain numpy arithmetic, no adder model
    size = kernel.shape[0]
    pad = size // 2
    padded = np.pad(img.pixels, pad, mode="edge").astype(np.int64)
    height, width = img.pixels.shape
    acc = np.zeros((height, width), dtype=np.int64)
    for ky in range(size):
        for kx in range(size):
            acc += padded[ky:ky + height, kx:kx + width] * int(kernel[ky, kx])
    ksum = int(kernel.sum())
    out = (acc + ksum // 2) // ksum
    return np.clip(out, 0, 255).astype(np.uint8)


def test_exact_convolution_matches_reference():
    img = add_noise(default_test_image(64), 10.0, seed=2)
    kernel, _ = gaussian_kernel_int(5, 1.0, 8)
    smoothed = convolve_approx(img, kernel, AdderConfig(32, 8, Variant.EXACT))
    assert np.array_equal(smoothed.pixels, _reference_convolve(img, kernel))


def test_identity_kernel_is_lossless_for_approx_variants():
    img = _checker()
    kernel = np.zeros((3, 3), dtype=np.int64)
    kernel[1, 1] = 1
    for variant in (Variant.CESA, Variant.CESA_PERL):
        out = convolve_approx(img, kernel, AdderConfig(32, 8, variant))
        assert np.array_equal(out.pixels, img.pixels)


def test_convolution_overflow_detected_at_config_time():
    kernel, _ = gaussian_kernel_int(5, 1.0, 8)
    with pytest.raises(ValueError, match="overflow"):
        convolve_approx(_checker(), kernel, AdderConfig(15, 5, Variant.CESA))


def test_convolution_rejects_negative_weights():
    kernel = np.array([[0, -1, 0], [0, 1, 0], [0, 0, 0]], dtype=np.int64)
    with pytest.raises(ValueError, match="non-negative"):
        convolve_approx(_checker(), kernel, AdderConfig(32, 8, Variant.CESA))


def test_smoothing_order_perl_at_least_cesa_small():
    noisy = add_noise(default_test_image(64), 10.0, seed=1)
    kernel, _ = gaussian_kernel_int(5, 1.0, 8)
    reference = convolve_approx(noisy, kernel, AdderConfig(32, 8, Variant.EXACT))
    plain = convolve_approx(noisy, kernel, AdderConfig(32, 8, Variant.CESA))
    rectified = convolve_approx(noisy, kernel, AdderConfig(32, 8, Variant.CESA_PERL))
    assert psnr(reference, rectified) >= psnr(reference, plain)
    assert ssim(reference, rectified) >= ssim(reference, plain)


def test_psnr_monotone_in_block_size_on_standard_benchmark():
    noisy = add_noise(default_test_image(), 10.0, seed=1)
    kernel, _ = gaussian_kernel_int(5, 1.0, 8)
    reference = convolve_approx(noisy, kernel, AdderConfig(32, 8, Variant.EXACT))
    for variant in (Variant.CESA, Variant.CESA_PERL):
        blocks = (2, 4, 8, 16, 32) if variant is Variant.CESA else (4, 8, 16, 32)
        scores = [psnr(reference,
                       convolve_approx(noisy, kernel, AdderConfig(32, k, variant)))
                  for k in blocks]
        assert all(a <= b for a, b in zip(scores, scores[1:])), (variant, scores)


def test_psnr_identical_is_infinite():
    img = _checker()
    assert math.isinf(psnr(img, img))


def test_psnr_single_pixel_off_by_255():
    ref = GrayImage(np.zeros((256, 256), dtype=np.uint8))
    pixels = np.zeros((256, 256), dtype=np.uint8)
    pixels[0, 0] = 255
    value = psnr(ref, GrayImage(pixels))
    assert value == pytest.approx(10 * math.log10(65536), abs=1e-9)


def test_psnr_all_pixels_off_by_one():
    ref = GrayImage(np.full((64, 64), 100, dtype=np.uint8))
    test = GrayImage(np.full((64, 64), 101, dtype=np.uint8))
    assert psnr(ref, test) == pytest.approx(20 * math.log10(255), abs=1e-9)


def test_psnr_dimension_mismatch():
    with pytest.raises(ValueError):
        psnr(_checker(16), _checker(32))


def test_ssim_identical_is_one():
    img = default_test_image(64)
    assert ssim(img, img) == pytest.approx(1.0, abs=1e-12)


def test_ssim_inverted_is_below_one_and_symmetric():
    img = default_test_image(64)
    inverted = GrayImage((255 - img.pixels.astype(np.int64)).astype(np.uint8))
    forward = ssim(img, inverted)
    assert forward < 1.0
    assert forward == pytest.approx(ssim(inverted, img), abs=1e-12)


def test_ssim_requires_window_sized_images():
    tiny = GrayImage(np.zeros((4, 4), dtype=np.uint8))
    with pytest.raises(ValueError):
        ssim(tiny, tiny)


def test_default_test_image_shape_and_determinism():
    one = default_test_image()
    two = default_test_image()
    assert one.pixels.shape == (256, 256)
    assert np.array_equal(one.pixels, two.pixels)
    assert one.pixels.std() > 20  # has real structure to smooth


def test_quality_report_json_round_trip():
    config = AdderConfig(32, 8, Variant.CESA)
    finite = QualityReport(33.25, 0.91, config, seed=5)
    restored = quality_report_from_json(finite.to_json_dict())
    assert restored == finite
    infinite = QualityReport(math.inf, 1.0, config, seed=5)
    payload = infinite.to_json_dict()
    assert payload["psnr"] is None
    assert quality_report_from_json(payload) == infinite
