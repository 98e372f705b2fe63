"""Command-line surface: interactive probes, metric sweeps, invariant
verification, cost estimates, and the two application benchmarks.

Every command is deterministic given its flags and seed, and every report
embeds the configuration and seed that produced it.  The CESA_OUT_DIR
environment variable overrides the default output directory.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from .adder import (AdderConfig, BlockOperands, Variant, add_approx, add_exact,
                    estimate_block_carry, exact_carry_at)
from .clustering import default_dataset, kmeans, load_points_csv
from .cost import delay_estimate, delay_reduction_vs_exact
from .image import (GrayImage, QualityReport, add_noise, convolve_approx,
                    default_test_image, gaussian_kernel_int, psnr, read_pgm,
                    ssim, write_pgm)
from .metrics import (DEFAULT_EXHAUSTIVE_WIDTH_CAP, DEFAULT_RUNS, EvalMode,
                      evaluate_exhaustive, evaluate_monte_carlo)
from .verification import run_invariant_suite

ENV_OUT_DIR = "CESA_OUT_DIR"

SWEEP_CSV_FIELDS = [
    "width", "block_size", "variant", "mode", "status", "reason",
    "er", "med", "mred", "sample_count", "run_count", "seed",
    "critical_path_levels", "gate_count",
]


def _out_dir() -> Path:
    return Path(os.environ.get(ENV_OUT_DIR, "."))


def _resolve_out(name_or_path: str | None, default_name: str) -> Path:
    if name_or_path is None:
        return _out_dir() / default_name
    path = Path(name_or_path)
    return path if path.is_absolute() or path.parent != Path(".") else _out_dir() / path


def parse_config_triplet(text: str) -> AdderConfig:
    """Parse the compact width:block:variant form, e.g. 32:8:cesa-perl."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"config {text!r} must look like width:block:variant")
    try:
        width, block = int(parts[0]), int(parts[1])
    except ValueError:
        raise ValueError(f"config {text!r}: width and block must be integers") from None
    return AdderConfig(width, block, Variant.from_string(parts[2]))


def _config_from_flags(args: argparse.Namespace) -> AdderConfig:
    variant = Variant.from_string(args.variant)
    block = args.block if args.block is not None else args.width
    return AdderConfig(args.width, block, variant)


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def cmd_add(args: argparse.Namespace) -> int:
    config = _config_from_flags(args)
    result = add_approx(args.a, args.b, config)
    exact = add_exact(args.a, args.b, config.width, config.block_size)
    print(f"config      {config.describe()}")
    print(f"a           {args.a}")
    print(f"b           {args.b}")
    print(f"approx      {result.extended_value}")
    print(f"exact       {exact.extended_value}")
    print(f"ed          {abs(exact.extended_value - result.extended_value)}")
    print(f"carry_out   {result.carry_out}")
    k = config.block_size
    mask = (1 << k) - 1
    for j, pos in enumerate(config.boundary_positions):
        true_carry = exact_carry_at(args.a, args.b, pos)
        if config.variant is Variant.EXACT:
            print(f"boundary @{pos:<3d} carry={true_carry}")
            continue
        block = BlockOperands((args.a >> (j * k)) & mask,
                              (args.b >> (j * k)) & mask, j)
        estimate = estimate_block_carry(block, config).c_out
        marker = "" if estimate == true_carry else "  MISMATCH"
        print(f"boundary @{pos:<3d} est={estimate} exact={true_carry}{marker}")
    return 0


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def cmd_sweep(args: argparse.Namespace) -> int:
    mode = EvalMode.EXHAUSTIVE if args.mode == "exhaustive" else EvalMode.MONTE_CARLO
    variants = [Variant.from_string(v) for v in args.variants.split(",") if v]
    rows: list[dict] = []
    valid = 0
    for width in _int_list(args.widths):
        for block in _int_list(args.blocks):
            for variant in variants:
                base = {"width": width, "block_size": block,
                        "variant": variant.value, "mode": mode.value}
                try:
                    config = AdderConfig(width, block, variant)
                    if mode is EvalMode.EXHAUSTIVE:
                        report = evaluate_exhaustive(config)
                    else:
                        report = evaluate_monte_carlo(config, args.samples,
                                                      args.runs, args.seed)
                except ValueError as exc:
                    rows.append({**base, "status": "skipped", "reason": str(exc)})
                    continue
                cost = delay_estimate(config)
                row = {**base, "status": "ok", "reason": ""}
                row.update({k: v for k, v in report.flat_dict().items()
                            if k not in row})
                row["critical_path_levels"] = cost.critical_path_levels
                row["gate_count"] = cost.gate_count
                rows.append(row)
                valid += 1
    if valid == 0:
        print("error: no valid configuration in sweep", file=sys.stderr)
        return 1
    out_path = _resolve_out(args.out, f"sweep.{args.format}")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    if args.format == "json":
        payload = {
            "spec": {
                "widths": _int_list(args.widths),
                "block_sizes": _int_list(args.blocks),
                "variants": [v.value for v in variants],
                "mode": mode.value,
                "samples": args.samples,
                "runs": args.runs,
                "seed": args.seed,
            },
            "rows": rows,
        }
        _write_json(out_path, payload)
    else:
        with out_path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(handle, fieldnames=SWEEP_CSV_FIELDS,
                                    restval="", extrasaction="ignore")
            writer.writeheader()
            writer.writerows(rows)
    print(f"wrote {len(rows)} rows ({valid} evaluated) to {out_path}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_invariant_suite(args.width)
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} invariants hold "
          f"at width {args.width}")
    return 1 if failed else 0


def cmd_cost(args: argparse.Namespace) -> int:
    config = _config_from_flags(args)
    estimate = delay_estimate(config)
    if args.json:
        print(json.dumps(estimate.flat_dict(), indent=2))
        return 0
    print(f"config               {config.describe()}")
    print(f"critical_path_levels {estimate.critical_path_levels}")
    print(f"gate_count           {estimate.gate_count}")
    if config.variant is not Variant.EXACT:
        print(f"delay_reduction      {delay_reduction_vs_exact(config) * 100:.1f}% "
              f"vs {config.width}-bit ripple")
    return 0


def cmd_smooth(args: argparse.Namespace) -> int:
    configs = [parse_config_triplet(text) for text in args.config]
    image = read_pgm(args.image) if args.image else default_test_image()
    noisy = add_noise(image, args.noise_sigma, args.seed)
    kernel, _shift = gaussian_kernel_int(5, args.kernel_sigma, args.scale_bits)
    out_dir = _out_dir() if args.out_dir is None else Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_pgm(noisy, out_dir / "smooth_noisy.pgm")
    reports = []
    reference: GrayImage | None = None
    for config in configs:
        exact_config = AdderConfig(config.width, config.block_size, Variant.EXACT)
        if reference is None:
            reference = convolve_approx(noisy, kernel, exact_config)
            write_pgm(reference, out_dir / "smooth_reference.pgm")
        smoothed = convolve_approx(noisy, kernel, config)
        name = f"smooth_{config.width}-{config.block_size}-{config.variant.value}.pgm"
        write_pgm(smoothed, out_dir / name)
        report = QualityReport(psnr(reference, smoothed), ssim(reference, smoothed),
                               config, args.seed)
        reports.append(report)
        shown = "inf" if report.psnr == float("inf") else f"{report.psnr:.3f}"
        print(f"{config.describe()}: psnr={shown} dB  ssim={report.ssim:.4f}"
              f"  -> {name}")
    payload = {
        "seed": args.seed,
        "noise_sigma": args.noise_sigma,
        "kernel_sigma": args.kernel_sigma,
        "scale_bits": args.scale_bits,
        "image": args.image or "bundled",
        "reports": [r.to_json_dict() for r in reports],
    }
    report_path = _resolve_out(args.report, "smooth_report.json")
    _write_json(report_path, payload)
    print(f"report written to {report_path}")
    return 0


def cmd_kmeans(args: argparse.Namespace) -> int:
    config = parse_config_triplet(args.config)
    points = load_points_csv(args.data) if args.data else default_dataset()
    result = kmeans(points, args.clusters, config, args.max_iter, args.seed)
    payload = result.to_json_dict()
    payload["data"] = args.data or "bundled"
    report_path = _resolve_out(args.out, "kmeans_report.json")
    _write_json(report_path, payload)
    print(f"{config.describe()}: agreement={result.agreement:.4f} "
          f"iterations={result.iterations}")
    print(f"report written to {report_path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cesa",
        description="CESA / CESA-PERL approximate adder toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def config_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--width", type=int, required=True, help="operand width n")
        p.add_argument("--block", type=int, default=None,
                       help="block size k (defaults to the full width)")
        p.add_argument("--variant", default="cesa",
                       help="exact, cesa, or cesa-perl")

    p_add = sub.add_parser("add", help="add two operands and show the diagnostics")
    config_flags(p_add)
    p_add.add_argument("a", type=lambda s: int(s, 0))
    p_add.add_argument("b", type=lambda s: int(s, 0))
    p_add.set_defaults(func=cmd_add)

    p_sweep = sub.add_parser("sweep", help="error/cost table over configurations")
    p_sweep.add_argument("--widths", required=True, help="comma list, e.g. 8,16")
    p_sweep.add_argument("--blocks", required=True, help="comma list, e.g. 2,4,8")
    p_sweep.add_argument("--variants", default="cesa,cesa-perl")
    p_sweep.add_argument("--mode", choices=["exhaustive", "monte-carlo"],
                         default="exhaustive")
    p_sweep.add_argument("--samples", type=int, default=10 ** 6)
    p_sweep.add_argument("--runs", type=int, default=DEFAULT_RUNS)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--format", choices=["json", "csv"], default="json")
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="exhaustive invariant suite")
    p_verify.add_argument("--width", type=int, required=True)
    p_verify.set_defaults(func=cmd_verify)

    p_cost = sub.add_parser("cost", help="unit-gate delay and area estimate")
    config_flags(p_cost)
    p_cost.add_argument("--json", action="store_true")
    p_cost.set_defaults(func=cmd_cost)

    p_smooth = sub.add_parser("smooth", help="Gaussian smoothing benchmark")
    p_smooth.add_argument("--config", action="append", required=True,
                          help="width:block:variant (repeatable)")
    p_smooth.add_argument("--image", default=None, help="input PGM (P5)")
    p_smooth.add_argument("--noise-sigma", type=float, default=10.0)
    p_smooth.add_argument("--kernel-sigma", type=float, default=1.0)
    p_smooth.add_argument("--scale-bits", type=int, default=8)
    p_smooth.add_argument("--seed", type=int, default=1)
    p_smooth.add_argument("--out-dir", default=None)
    p_smooth.add_argument("--report", default=None)
    p_smooth.set_defaults(func=cmd_smooth)

    p_kmeans = sub.add_parser("kmeans", help="K-means clustering benchmark")
    p_kmeans.add_argument("--config", required=True, help="width:block:variant")
    p_kmeans.add_argument("--data", default=None, help="headerless CSV of points")
    p_kmeans.add_argument("--clusters", type=int, default=3)
    p_kmeans.add_argument("--max-iter", type=int, default=100)
    p_kmeans.add_argument("--seed", type=int, default=7)
    p_kmeans.add_argument("--out", default=None)
    p_kmeans.set_defaults(func=cmd_kmeans)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and not 2 <= args.width <= DEFAULT_EXHAUSTIVE_WIDTH_CAP:
        parser.error(f"verify width must be in [2, {DEFAULT_EXHAUSTIVE_WIDTH_CAP}]")
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
