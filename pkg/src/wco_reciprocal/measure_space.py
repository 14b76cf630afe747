"""Finite discrete measure spaces and weighted-composition symbols.

Atoms keep the order in which they were supplied; every vector and matrix in
the package is indexed in that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class ValidationError(ValueError):
    """Raised when a space, symbol or function fails its invariants."""


@dataclass(frozen=True)
class DiscreteMeasureSpace:
    labels: tuple[str, ...]
    masses: np.ndarray

    def __post_init__(self):
        self.masses.setflags(write=False)

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def indicator(self, labels: Sequence[str]) -> np.ndarray:
        """0/1 vector of the atoms named in ``labels``."""
        out = np.zeros(self.size, dtype=complex)
        for lab in labels:
            out[self.index(lab)] = 1.0
        return out


@dataclass(frozen=True)
class WeightedSymbol:
    """A transformation ``phi`` (index map) and complex weight over a space."""

    space: DiscreteMeasureSpace
    phi: np.ndarray
    weight: np.ndarray

    def __post_init__(self):
        self.phi.setflags(write=False)
        self.weight.setflags(write=False)

    @property
    def size(self) -> int:
        return self.space.size

    @property
    def weighted_mass(self) -> np.ndarray:
        """Per-atom mass of mu_w, i.e. |w(x)|^2 mu(x)."""
        return np.abs(self.weight) ** 2 * self.space.masses

    def with_weight(self, weight) -> "WeightedSymbol":
        return build_symbol(self.space, self.phi, weight)

    def unweighted(self) -> "WeightedSymbol":
        """The plain composition symbol (same phi, weight identically 1)."""
        return build_symbol(self.space, self.phi, np.ones(self.size))


def build_space(labels: Sequence, masses: Sequence[float]) -> DiscreteMeasureSpace:
    labels = tuple(str(lab) for lab in labels)
    masses = [float(m) for m in masses]
    if len(labels) != len(masses):
        raise ValidationError(
            f"got {len(labels)} labels but {len(masses)} masses"
        )
    if not labels:
        raise ValidationError("a measure space needs at least one atom")
    seen = set()
    for lab in labels:
        if lab in seen:
            raise ValidationError(f"duplicate label {lab!r}")
        seen.add(lab)
    for lab, m in zip(labels, masses):
        if not math.isfinite(m):
            raise ValidationError(f"non-finite mass at {lab}")
        if m <= 0:
            raise ValidationError(f"non-positive mass at {lab}")
    return DiscreteMeasureSpace(labels, np.array(masses, dtype=float))


def build_symbol(space: DiscreteMeasureSpace, phi, weight) -> WeightedSymbol:
    n = space.size
    if isinstance(phi, dict):
        missing = [i for i in range(n) if i not in phi]
        if missing:
            raise ValidationError(f"phi is not defined at atom index {missing[0]}")
        phi = [phi[i] for i in range(n)]
    phi_arr = np.asarray(phi)
    if phi_arr.shape != (n,):
        raise ValidationError(f"phi must have one entry per atom ({n}), got shape {phi_arr.shape}")
    if phi_arr.dtype.kind == "f":
        if not np.all(np.isfinite(phi_arr)) or np.any(phi_arr != np.round(phi_arr)):
            raise ValidationError("phi entries must be integer atom indices")
    elif phi_arr.dtype.kind not in "iu":
        raise ValidationError("phi entries must be integer atom indices")
    phi_arr = phi_arr.astype(np.int64)
    bad = np.flatnonzero((phi_arr < 0) | (phi_arr >= n))
    if bad.size:
        i = int(bad[0])
        raise ValidationError(
            f"phi image out of range at {space.labels[i]}: {int(phi_arr[i])} not in [0, {n})"
        )

    w = np.asarray(weight, dtype=complex)
    if w.shape != (n,):
        raise ValidationError(f"weight must have one entry per atom ({n}), got shape {w.shape}")
    bad = np.flatnonzero(~np.isfinite(w))
    if bad.size:
        raise ValidationError(f"non-finite weight at {space.labels[int(bad[0])]}")
    return WeightedSymbol(space, phi_arr, w.copy())


def as_function(space: DiscreteMeasureSpace, values) -> np.ndarray:
    """Validate ``values`` as an element of L^2(mu) and return a complex vector."""
    f = np.asarray(values, dtype=complex)
    if f.shape != (space.size,):
        raise ValidationError(
            f"function has {f.size} values but the space has {space.size} atoms"
        )
    if not np.all(np.isfinite(f)):
        raise ValidationError("function values must be finite")
    return f


def inner_product(space: DiscreteMeasureSpace, f, g) -> complex:
    """<f, g> = sum_x f(x) conj(g(x)) mu(x)."""
    f = as_function(space, f)
    g = as_function(space, g)
    return complex(np.sum(f * np.conj(g) * space.masses))


def norm(space: DiscreteMeasureSpace, f) -> float:
    return math.sqrt(max(inner_product(space, f, f).real, 0.0))
