"""K-means benchmark with approximate accumulation.

Lloyd's algorithm on fixed-point (integer) coordinates where the squared-
distance accumulation runs through the configured adder; multiplications,
divisions, and the centroid coordinate sums stay exact.  (Centroid sums
grow far past the first carry boundaries, where a single missed carry
displaces a centroid by thousands of fixed-point units and destroys the
clustering for every block size; the assignment distances are where the
approximate adder meaningfully participates.)  Each run is scored against
an exact-addition baseline started from the same seeded initialisation,
after optimal cluster-label matching.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from .adder import AdderConfig, Variant, add_approx

COORD_SCALE = 1000  # fixed-point scale for real-valued inputs
DEFAULT_DATASET_SEED = 19

# Gaussian cluster shapes for the bundled dataset: 150 points, 3 clusters,
# 4 dimensions, loosely iris-like means (original units, scaled later) with
# spreads tightened so the clusters are separable on purpose
_BUNDLED_MEANS = (
    (5.0, 3.4, 1.5, 0.2),
    (5.9, 2.8, 4.3, 1.3),
    (6.6, 3.0, 5.6, 2.0),
)
_BUNDLED_STDS = (
    (0.18, 0.19, 0.09, 0.05),
    (0.25, 0.16, 0.24, 0.10),
    (0.32, 0.16, 0.28, 0.14),
)
_BUNDLED_POINTS_PER_CLUSTER = 50


@dataclass(frozen=True)
class ClusteringResult:
    """Assignments plus agreement with the exact-addition baseline."""

    config: AdderConfig
    seed: int
    assignments: tuple[int, ...]
    centroids: tuple[tuple[int, ...], ...]
    iterations: int
    agreement: float

    def to_json_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "seed": self.seed,
            "assignments": list(self.assignments),
            "centroids": [list(c) for c in self.centroids],
            "iterations": self.iterations,
            "agreement": self.agreement,
        }


def default_dataset(seed: int = DEFAULT_DATASET_SEED) -> np.ndarray:
    """Bundled 150-point, 3-cluster, 4-dimensional fixed-point dataset."""
    rng = np.random.default_rng(seed)
    blocks = []
    for mean, std in zip(_BUNDLED_MEANS, _BUNDLED_STDS):
        raw = rng.normal(mean, std, size=(_BUNDLED_POINTS_PER_CLUSTER, len(mean)))
        blocks.append(raw)
    scaled = np.rint(np.concatenate(blocks) * COORD_SCALE)
    return np.maximum(scaled, 0).astype(np.int64)


def load_points_csv(path: str | Path, scale: int = COORD_SCALE) -> np.ndarray:
    """Headerless CSV of real-valued coordinates, one point per row.

    Values are scaled to integers; malformed input names the offending row.
    """
    path = Path(path)
    rows: list[list[int]] = []
    width = None
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            try:
                values = [float(f) for f in fields]
            except ValueError as exc:
                raise ValueError(f"{path}: row {line_no}: {exc}") from None
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise ValueError(
                    f"{path}: row {line_no}: expected {width} columns, "
                    f"got {len(values)}"
                )
            scaled = [int(round(v * scale)) for v in values]
            if any(v < 0 for v in scaled):
                raise ValueError(
                    f"{path}: row {line_no}: negative coordinate after scaling "
                    "(the adders are unsigned)"
                )
            rows.append(scaled)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return np.asarray(rows, dtype=np.int64)


def _validate(points: np.ndarray, clusters: int, config: AdderConfig) -> None:
    if points.ndim != 2 or points.shape[0] == 0:
        raise ValueError("points must be a non-empty 2-D integer array")
    if points.min() < 0:
        raise ValueError("coordinates must be non-negative integers")
    if clusters < 1:
        raise ValueError("clusters must be >= 1")
    if clusters > points.shape[0]:
        raise ValueError(
            f"clusters ({clusters}) exceeds point count ({points.shape[0]})"
        )
    top = int(points.max())
    dims = points.shape[1]
    limit = 1 << config.width
    if dims * top * top >= limit:
        raise ValueError(
            f"squared distances can reach {dims * top * top}, overflowing "
            f"{config.width}-bit operands"
        )


def _init_centroids(points: np.ndarray, clusters: int,
                    rng: np.random.Generator) -> list[tuple[int, ...]]:
    # k-means++ style: D^2-weighted seeding with exact arithmetic, so the
    # approximate run and its exact baseline start identically
    n_points = points.shape[0]
    chosen = [int(rng.integers(n_points))]
    while len(chosen) < clusters:
        diffs = points[:, None, :] - points[chosen][None, :, :]
        d2 = np.min(np.sum(diffs * diffs, axis=2), axis=1).astype(np.float64)
        total = d2.sum()
        if total == 0.0:
            idx = int(rng.integers(n_points))
        else:
            idx = int(rng.choice(n_points, p=d2 / total))
        chosen.append(idx)
    return [tuple(int(v) for v in points[i]) for i in chosen]


def _distance(point: np.ndarray, centroid: tuple[int, ...],
              config: AdderConfig) -> int:
    acc = 0
    for dim, coord in enumerate(centroid):
        diff = int(point[dim]) - coord
        acc = add_approx(acc, diff * diff, config).extended_value
    return acc


def _assign(points: np.ndarray, centroids: list[tuple[int, ...]],
            config: AdderConfig) -> list[int]:
    assignments = []
    for point in points:
        best_cluster = 0
        best_distance = None
        for ci, centroid in enumerate(centroids):
            d = _distance(point, centroid, config)
            if best_distance is None or d < best_distance:
                best_cluster, best_distance = ci, d
        assignments.append(best_cluster)
    return assignments


def _update(points: np.ndarray, assignments: list[int], clusters: int,
            previous: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    dims = points.shape[1]
    centroids = []
    for ci in range(clusters):
        members = [i for i, a in enumerate(assignments) if a == ci]
        if not members:
            centroids.append(previous[ci])  # empty cluster keeps its centroid
            continue
        coords = []
        for dim in range(dims):
            # ascending point index: deterministic reduction; summed exactly
            total = sum(int(points[i, dim]) for i in members)
            coords.append((total + len(members) // 2) // len(members))
        centroids.append(tuple(coords))
    return centroids


def _lloyd(points: np.ndarray, init: list[tuple[int, ...]], clusters: int,
           config: AdderConfig, max_iter: int):
    centroids = list(init)
    assignments: list[int] | None = None
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        new_assignments = _assign(points, centroids, config)
        if new_assignments == assignments:
            break
        assignments = new_assignments
        centroids = _update(points, assignments, clusters, centroids)
    assert assignments is not None
    return assignments, centroids, iterations


def _match_labels(approx: list[int], exact: list[int], clusters: int) -> float:
    contingency = np.zeros((clusters, clusters), dtype=np.int64)
    for a, e in zip(approx, exact):
        contingency[a, e] += 1
    rows, cols = linear_sum_assignment(contingency, maximize=True)
    return float(contingency[rows, cols].sum()) / len(approx)


def kmeans(points: np.ndarray, clusters: int, config: AdderConfig,
           max_iter: int = 100, seed: int = 0) -> ClusteringResult:
    """Lloyd's algorithm with approximate addition.

    agreement is the fraction of points assigned to the same cluster as an
    exact-addition baseline run from the same seeded initialisation, after
    optimal label matching.
    """
    points = np.asarray(points, dtype=np.int64)
    _validate(points, clusters, config)
    init = _init_centroids(points, clusters, np.random.default_rng(seed))
    assignments, centroids, iterations = _lloyd(points, init, clusters,
                                                config, max_iter)
    if config.variant is Variant.EXACT:
        agreement = 1.0
    else:
        exact_config = AdderConfig(config.width, config.block_size, Variant.EXACT)
        exact_assignments, _, _ = _lloyd(points, init, clusters,
                                         exact_config, max_iter)
        agreement = _match_labels(assignments, exact_assignments, clusters)
    return ClusteringResult(
        config=config,
        seed=seed,
        assignments=tuple(assignments),
        centroids=tuple(centroids),
        iterations=iterations,
        agreement=agreement,
    )
