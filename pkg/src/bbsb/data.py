"""Synthetic Gaussian-mixture datasets and dataset persistence.

The three built-in databases are versioned JSON constants shipped with the
package (see ``bbsb/configs/``) rather than code literals, so they can be
inspected and overridden.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from importlib import resources

import numpy as np


@dataclass(frozen=True)
class GaussianMixtureSpec:
    """Ground-truth generator: (weight, mean, sd) per component."""

    components: tuple

    def __post_init__(self):
        if not self.components:
            raise ValueError("spec needs at least one component")
        weights = np.array([c[0] for c in self.components], dtype=float)
        sds = np.array([c[2] for c in self.components], dtype=float)
        if np.any(weights <= 0):
            raise ValueError("component weights must be positive")
        if abs(float(weights.sum()) - 1.0) > 1e-12:
            raise ValueError(
                f"component weights must sum to 1, got {weights.sum()!r}")
        if np.any(sds <= 0):
            raise ValueError("component sds must be positive")

    @property
    def weights(self) -> np.ndarray:
        return np.array([c[0] for c in self.components])

    @property
    def means(self) -> np.ndarray:
        return np.array([c[1] for c in self.components])

    @property
    def sds(self) -> np.ndarray:
        return np.array([c[2] for c in self.components])

    def pdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        z = (x[..., None] - self.means) / self.sds
        comp = np.exp(-0.5 * z * z) / (self.sds * np.sqrt(2.0 * np.pi))
        return comp @ self.weights

    @classmethod
    def from_dict(cls, payload: dict) -> "GaussianMixtureSpec":
        comps = tuple((float(c["weight"]), float(c["mean"]), float(c["sd"]))
                      for c in payload["components"])
        return cls(components=comps)

    def to_dict(self) -> dict:
        return {"components": [{"weight": w, "mean": m, "sd": s}
                               for w, m, s in self.components]}


@dataclass(frozen=True)
class Dataset:
    """Observed values plus generation provenance when synthetic."""

    values: np.ndarray
    spec: GaussianMixtureSpec | None = None
    seed: int | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.size == 0:
            raise ValueError("dataset must be non-empty")
        if not np.all(np.isfinite(values)):
            raise ValueError("dataset must contain only finite values")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.shape[0])


def generate(spec: GaussianMixtureSpec, n: int, seed: int) -> Dataset:
    """Draw n i.i.d. values: a component by its weight, then a Gaussian."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(spec.components), size=n, p=spec.weights)
    values = spec.means[idx] + rng.standard_normal(n) * spec.sds[idx]
    return Dataset(values=values, spec=spec, seed=seed)


def builtin_database(db_id: int):
    """Pinned generator spec of database 1, 2 or 3 (returns spec and its
    default sample size)."""
    if db_id not in (1, 2, 3):
        raise ValueError(f"unknown database id {db_id}; expected 1, 2 or 3")
    text = resources.files("bbsb.configs").joinpath(
        f"database{db_id}.json").read_text()
    payload = json.loads(text)
    return GaussianMixtureSpec.from_dict(payload), int(payload["n"])


def load_spec(path) -> GaussianMixtureSpec:
    with open(path) as fh:
        return GaussianMixtureSpec.from_dict(json.load(fh))


def save(dataset: Dataset, path, fmt: str = "csv") -> None:
    """Persist values at full precision (17 significant digits)."""
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["y"])
            for y in dataset.values:
                writer.writerow([f"{y:.17g}"])
    elif fmt == "json":
        payload = {"values": [f"{y:.17g}" for y in dataset.values]}
        if dataset.seed is not None:
            payload["seed"] = dataset.seed
        if dataset.spec is not None:
            payload["spec"] = dataset.spec.to_dict()
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def load(path, fmt: str = "csv") -> Dataset:
    if fmt == "csv":
        values = []
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or header[:1] != ["y"]:
                raise ValueError(f"{path}: expected a 'y' header row")
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                try:
                    value = float(row[0])
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: not a number: "
                                     f"{row[0]!r}") from exc
                if not np.isfinite(value):
                    raise ValueError(f"{path}:{lineno}: non-finite value "
                                     f"{row[0]!r}")
                values.append(value)
        if not values:
            raise ValueError(f"{path}: no data rows")
        return Dataset(values=np.array(values))
    if fmt == "json":
        with open(path) as fh:
            payload = json.load(fh)
        values = np.array([float(v) for v in payload["values"]])
        if values.size and not np.all(np.isfinite(values)):
            raise ValueError(f"{path}: non-finite value in 'values'")
        spec = (GaussianMixtureSpec.from_dict(payload["spec"])
                if "spec" in payload else None)
        return Dataset(values=values, spec=spec, seed=payload.get("seed"))
    raise ValueError(f"unknown format {fmt!r}")
