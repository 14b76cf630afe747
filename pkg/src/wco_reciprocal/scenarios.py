"""Deterministic scenario generators and the scenario file format.

Random symbols are drawn from SplitMix64 (Steele, Lea & Flood 2014), so any
implementation of that generator reproduces the same scenarios bit for bit.

Scenario files are JSON documents with four fields::

    {"labels": ["a", "b"], "masses": [1.0, 2.0], "phi": [1, 1],
     "weight": [[1.0, 0.0], [0.0, -2.0]]}

Complex weights are always ``[re, im]`` pairs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import report
from .measure_space import ValidationError, WeightedSymbol, build_space, build_symbol, norm
from .operator_core import radon_nikodym

MASK64 = (1 << 64) - 1
PROFILES = ("generic", "fiber_constant_weight", "nonzero_weight", "with_zero_weights")
KINDS = ("hiszpa", "hiszpa_plus", "hiszpa_minus", "random", "explicit")


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def below(self, n: int) -> int:
        """Integer in [0, n) by multiply-shift."""
        return (self.next_u64() * n) >> 64

    def split(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())


def _polar(modulus: float, angle: float) -> complex:
    return complex(modulus * math.cos(angle), modulus * math.sin(angle))


def gen_random(size: int, seed: int, fiber_profile: str = "generic") -> WeightedSymbol:
    """Seeded random symbol on ``size`` atoms.

    Masses are 2**u with u uniform in [-2, 2].  Nonzero weights have modulus
    in [1/4, 2] and a uniform phase, which keeps every positive h_{phi,w}
    well clear of the rank threshold.  ``fiber_profile`` picks the weights:

    * ``generic``: each weight is zero with probability 1/8
    * ``nonzero_weight``: no zeros
    * ``fiber_constant_weight``: no zeros, |w| constant on every phi-fiber
    * ``with_zero_weights``: zeros with probability 1/3, at least one planted
    """
    if not 1 <= size <= 64:
        raise ValueError("random scenarios have between 1 and 64 atoms")
    if fiber_profile not in PROFILES:
        raise ValueError(f"unknown fiber profile {fiber_profile!r}; expected one of {PROFILES}")
    rng = SplitMix64(seed)
    labels = [f"x{i}" for i in range(size)]
    masses = [2.0 ** rng.uniform(-2.0, 2.0) for _ in range(size)]
    phi = [rng.below(size) for _ in range(size)]
    fiber_modulus = [rng.uniform(0.25, 2.0) for _ in range(size)]
    weight = []
    for i in range(size):
        angle = rng.uniform(0.0, 2.0 * math.pi)
        mod = rng.uniform(0.25, 2.0)
        draw = rng.random()
        if fiber_profile == "fiber_constant_weight":
            mod = fiber_modulus[phi[i]]
        elif fiber_profile == "generic" and draw < 1 / 8:
            mod = 0.0
        elif fiber_profile == "with_zero_weights" and draw < 1 / 3:
            mod = 0.0
        weight.append(0j if mod == 0.0 else _polar(mod, angle))
    if fiber_profile == "with_zero_weights":
        weight[rng.below(size)] = 0j
    return build_symbol(build_space(labels, masses), phi, weight)


def _hiszpa_labels(n: int) -> list[str]:
    labels = [str(k) for k in range(n + 1)]
    for k in range(1, n + 1):
        labels += [f"-{k},1", f"-{k},2"]
    return labels


def gen_hiszpa(n: int, alpha: float = 0.5, weights: str = "unit") -> WeightedSymbol:
    """Truncation of the branching shift on Z_+ with two incoming tails.

    Atoms are ``0..n`` followed by ``-k,1`` and ``-k,2`` for ``1 <= k <= n``,
    all of mass 1.  phi(k) = k+1 on Z_+, the top atom ``n`` maps to itself,
    both ``-1,l`` map to 0 and ``-k,l`` map to ``-(k-1),l``.

    ``weights="unit"`` gives w = 1 (so alpha must be below 1).
    ``weights="varied"`` gives complex weights whose modulus depends only on
    the image atom, strictly above alpha, so |w| is fiber-constant.
    """
    if n < 2:
        raise ValueError("truncation must be at least 2")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    labels = _hiszpa_labels(n)
    idx = {lab: i for i, lab in enumerate(labels)}
    phi = [0] * len(labels)
    for k in range(n + 1):
        phi[idx[str(k)]] = idx[str(min(k + 1, n))]
    for l in (1, 2):
        phi[idx[f"-1,{l}"]] = idx["0"]
        for k in range(2, n + 1):
            phi[idx[f"-{k},{l}"]] = idx[f"-{k - 1},{l}"]

    if weights == "unit":
        if alpha >= 1:
            raise ValueError("unit weights need alpha < 1 so that |w| > alpha")
        weight = [1.0] * len(labels)
    elif weights == "varied":
        weight = []
        for i, lab in enumerate(labels):
            target = labels[phi[i]]
            depth = abs(int(target.split(",")[0]))
            mod = alpha * (1.0 + 1.0 / (1.0 + depth))
            weight.append(_polar(mod, 0.7 * (i + 1)))
    else:
        raise ValueError("weights must be 'unit' or 'varied'")
    return build_symbol(build_space(labels, [1.0] * len(labels)), phi, weight)


def _signed_shift(n: int, masses) -> WeightedSymbol:
    ks = list(range(-n, n + 1))
    labels = [str(k) for k in ks]
    phi = []
    for k in ks:
        if k == -n:
            target = -n
        elif k <= 0:
            target = k - 1
        else:
            target = 0
        phi.append(target + n)
    weight = [1.0 if k == 0 else 1.0 / k for k in ks]
    return build_symbol(build_space(labels, masses), phi, weight)


def gen_hiszpa_plus(n: int) -> WeightedSymbol:
    """Truncation of the shift on Z to {-n..n}, counting measure.

    phi(k) = k-1 for k <= 0 (with -n fixed), phi(k) = 0 for k >= 1,
    w(k) = 1/k off zero and w(0) = 1.  Sending k = 1 to 0 is a choice: the
    source map leaves phi(1) open, and this keeps the fiber over 0 as large
    as possible.
    """
    if n < 2:
        raise ValueError("truncation must be at least 2")
    return _signed_shift(n, [1.0] * (2 * n + 1))


def gen_hiszpa_minus(n: int, mass_ratio: float = 0.25) -> WeightedSymbol:
    """Same map and weight as :func:`gen_hiszpa_plus` with geometric masses.

    mu(k) = q**|k| for k <= 0 and mu(k) = 2**-k for k >= 1.
    """
    if n < 2:
        raise ValueError("truncation must be at least 2")
    if not 0 < mass_ratio < 1:
        raise ValueError("mass_ratio must lie in (0, 1)")
    masses = [mass_ratio ** abs(k) if k <= 0 else 2.0**-k for k in range(-n, n + 1)]
    return _signed_shift(n, masses)


def hiszpa_kernel_vector(symbol: WeightedSymbol) -> np.ndarray:
    """chi_{(-1,1)} - chi_{(-1,2)}, orthogonal to the range of C_phi."""
    return symbol.space.indicator(["-1,1"]) - symbol.space.indicator(["-1,2"])


def shift_diagnostics(symbol: WeightedSymbol) -> dict:
    """Truncation trends for the signed-shift examples; informational only.

    The infinite-space statements (C_phi not densely defined, M_w C_phi not
    closed) cannot be decided on a truncation.  We report how h_phi(0), the
    mass ratios and the norm ratios ||C_{phi,w} e|| / ||C_phi e|| behave.
    """
    space = symbol.space
    n = (space.size - 1) // 2
    plain = symbol.unweighted()
    h_phi = radon_nikodym(plain)
    mu = space.masses
    mass_ratio = [float(mu[n - k] / mu[n - k + 1]) for k in range(1, n + 1)]
    growth = []
    for k in range(0, n + 1):
        e = np.zeros(space.size, dtype=complex)
        e[n - k] = 1.0
        num = norm(space, symbol.weight * e[symbol.phi])
        den = norm(space, e[symbol.phi])
        growth.append(float(num / den) if den > 0 else float("nan"))
    return {
        "asserting": False,
        "h_phi_at_0": float(h_phi[n]),
        "mass_ratio_minus_k": mass_ratio,
        "norm_ratio_minus_k": growth,
    }


@dataclass(frozen=True)
class ScenarioSpec:
    kind: str
    n: int = 4
    seed: int = 0
    profile: str = "generic"
    alpha: float = 0.5
    mass_ratio: float = 0.25
    weights: str = "unit"
    path: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scenario kind {self.kind!r}; expected one of {KINDS}")
        if self.kind in ("hiszpa", "hiszpa_plus", "hiszpa_minus") and self.n < 2:
            raise ValueError("truncations need n >= 2")
        if self.kind == "explicit" and not self.path:
            raise ValueError("explicit scenarios need a file path")

    @property
    def scenario_id(self) -> str:
        if self.kind == "hiszpa":
            tail = "" if self.weights == "unit" else f"-{self.weights}"
            return f"hiszpa-n{self.n}-alpha{self.alpha:g}{tail}"
        if self.kind == "hiszpa_plus":
            return f"hiszpa_plus-n{self.n}"
        if self.kind == "hiszpa_minus":
            return f"hiszpa_minus-n{self.n}-q{self.mass_ratio:g}"
        if self.kind == "random":
            return f"random-size{self.n}-seed{self.seed}-{self.profile}"
        return Path(self.path).stem

    def build(self) -> WeightedSymbol:
        if self.kind == "hiszpa":
            return gen_hiszpa(self.n, self.alpha, self.weights)
        if self.kind == "hiszpa_plus":
            return gen_hiszpa_plus(self.n)
        if self.kind == "hiszpa_minus":
            return gen_hiszpa_minus(self.n, self.mass_ratio)
        if self.kind == "random":
            return gen_random(self.n, self.seed, self.profile)
        return load_scenario(self.path)


def symbol_to_dict(symbol: WeightedSymbol) -> dict:
    return {
        "labels": list(symbol.space.labels),
        "masses": [float(m) for m in symbol.space.masses],
        "phi": [int(i) for i in symbol.phi],
        "weight": [complex(w) for w in symbol.weight],
    }


def symbol_from_dict(data: dict) -> WeightedSymbol:
    for key in ("labels", "masses", "phi", "weight"):
        if key not in data:
            raise ValidationError(f"scenario is missing field {key!r}")
    weight = []
    for entry in data["weight"]:
        if not (isinstance(entry, (list, tuple)) and len(entry) == 2):
            raise ValidationError("weights must be [re, im] pairs")
        weight.append(complex(float(entry[0]), float(entry[1])))
    space = build_space(data["labels"], data["masses"])
    return build_symbol(space, data["phi"], weight)


def dumps_scenario(symbol: WeightedSymbol) -> str:
    return report.dumps(symbol_to_dict(symbol))


def load_scenario(path) -> WeightedSymbol:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValidationError("scenario file must hold a JSON object")
    return symbol_from_dict(data)


def save_scenario(symbol: WeightedSymbol, path) -> None:
    Path(path).write_text(dumps_scenario(symbol), encoding="utf-8")
