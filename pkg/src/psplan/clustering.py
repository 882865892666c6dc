"""Representative-day reduction.

Each complete day becomes a 48-vector (24 hourly demands scaled by the dataset's
peak demand, then 24 wind capacity factors). Days are grouped by seeded k-means
with k-means++ starts; each cluster is represented by its member day nearest the
cluster mean and weighted by the cluster's size.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .sampling import Subsample
from .timeseries import WeightedTimeseries

HOURS_PER_DAY = 24
DEFAULT_RESTARTS = 20


@dataclass(frozen=True, eq=False)
class ClusterModel:
    k: int
    assignment: np.ndarray  # cluster id per day
    representatives: np.ndarray  # day index per cluster
    sizes: np.ndarray
    objective: float
    history: list = field(default_factory=list)  # within-cluster SS per iteration of the winning restart

    def to_json(self) -> str:
        return json.dumps(
            {
                "k": self.k,
                "assignment": self.assignment.tolist(),
                "representatives": self.representatives.tolist(),
                "sizes": self.sizes.tolist(),
                "objective": self.objective,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "ClusterModel":
        d = json.loads(text)
        return cls(d["k"], np.array(d["assignment"]), np.array(d["representatives"]), np.array(d["sizes"]), d["objective"])


def build_day_vectors(ts: WeightedTimeseries, demand_scale=None) -> np.ndarray:
    """Array of shape (days, 48): scaled hourly demand followed by hourly wind."""
    n = len(ts)
    if n % HOURS_PER_DAY:
        raise ValidationError(f"{n} timesteps do not divide into whole days")
    scale = float(np.max(ts.demand)) if demand_scale is None else float(demand_scale)
    if scale <= 0:
        scale = 1.0
    demand = ts.demand.reshape(-1, HOURS_PER_DAY) / scale
    wind = ts.wind_cf.reshape(-1, HOURS_PER_DAY)
    return np.hstack([demand, wind])


def _sq_dists(x, centers):
    d = (x * x).sum(1)[:, None] - 2.0 * x @ centers.T + (centers * centers).sum(1)[None, :]
    return np.maximum(d, 0.0)


def _kmeanspp(x, k, rng):
    n = x.shape[0]
    centers = [x[rng.integers(n)]]
    closest = _sq_dists(x, np.array(centers))[:, 0]
    for _ in range(1, k):
        total = closest.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = int(np.searchsorted(np.cumsum(closest), rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        centers.append(x[idx])
        closest = np.minimum(closest, _sq_dists(x, x[idx][None, :])[:, 0])
    return np.array(centers)


def _fill_empty(x, labels, k):
    # normally reached only when days are duplicated (ties in the assignment step)
    labels = labels.copy()
    for c in range(k):
        counts = np.bincount(labels, minlength=k)
        if counts[c]:
            continue
        movable = counts[labels] > 1
        means = np.array([x[labels == j].mean(0) if counts[j] else x[0] for j in range(k)])
        dist = np.where(movable, ((x - means[labels]) ** 2).sum(1), -1.0)
        labels[int(np.argmax(dist))] = c
    return labels


def _lloyd(x, centers, max_iter=300):
    k = centers.shape[0]
    history = []
    labels = None
    for _ in range(max_iter):
        d = _sq_dists(x, centers)
        new_labels = np.argmin(d, axis=1)
        sse = float(d[np.arange(x.shape[0]), new_labels].sum())
        history.append(sse)
        if labels is not None and np.array_equal(labels, new_labels):
            break
        labels = new_labels
        counts = np.bincount(labels, minlength=k)
        onehot = np.zeros((k, x.shape[0]))
        onehot[labels, np.arange(x.shape[0])] = 1.0
        centers = (onehot @ x) / np.maximum(counts, 1)[:, None]
        for c in np.flatnonzero(counts == 0):
            # reseed an empty cluster at the point farthest from its centre
            far = int(np.argmax(d[np.arange(x.shape[0]), labels]))
            centers[c] = x[far]
            labels = labels.copy()
            labels[far] = c
            d[far] = 0.0
    labels = _fill_empty(x, labels, k)
    means = np.array([x[labels == c].mean(0) for c in range(k)])
    sse = float(((x - means[labels]) ** 2).sum())
    if sse < history[-1]:
        history.append(sse)
    return labels, means, sse, history


def cluster_days(days: np.ndarray, k: int, seed, restarts: int = DEFAULT_RESTARTS, include_peak_day: bool = False) -> ClusterModel:
    """Seeded k-means over day vectors; the best of ``restarts`` runs is kept
    (ties go to the lowest restart index).

    ``include_peak_day`` makes the day holding the highest demand the
    representative of its own cluster (off by default).
    """
    days = np.asarray(days, dtype=float)
    n = days.shape[0]
    if not 1 <= k <= n:
        raise ValidationError(f"k={k} outside 1..{n}")
    best = None
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        labels, means, sse, history = _lloyd(days, _kmeanspp(days, k, rng))
        if best is None or sse < best[2]:
            best = (labels, means, sse, history)
    labels, means, sse, history = best

    reps = np.empty(k, dtype=np.int64)
    for c in range(k):
        members = np.flatnonzero(labels == c)
        dist = ((days[members] - means[c]) ** 2).sum(1)
        reps[c] = members[int(np.argmin(dist))]
    if include_peak_day:
        peak = int(np.argmax(days[:, :HOURS_PER_DAY].max(1)))
        reps[labels[peak]] = peak
    sizes = np.bincount(labels, minlength=k)
    return ClusterModel(k, labels, reps, sizes, sse, history)


def representative_subsample(ts: WeightedTimeseries, model: ClusterModel) -> Subsample:
    """Hours of every representative day, each weighted size / (24 * days)."""
    total_days = int(model.sizes.sum())
    if total_days * HOURS_PER_DAY != len(ts):
        raise ValidationError("cluster model was not built from this timeseries")
    hours = np.arange(HOURS_PER_DAY)
    indices = np.concatenate([rep * HOURS_PER_DAY + hours for rep in model.representatives])
    weights = np.repeat(model.sizes / (total_days * HOURS_PER_DAY), HOURS_PER_DAY)
    forced = np.zeros(indices.size, dtype=bool)
    return Subsample(indices, weights, forced, {"kind": "representative_days", "k": model.k})
