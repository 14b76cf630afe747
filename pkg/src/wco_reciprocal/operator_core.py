"""Matrices of C_{phi,w} and the fiber primitives: h_{phi,w}, E_{phi,w}, pushforwards.

Operator matrices are plain ``numpy`` arrays expressed in the orthonormal
ell^2 frame of L^2(mu), obtained by conjugating with ``f -> f * sqrt(mu)``.
In that frame the L^2(mu) adjoint is the conjugate transpose, and the
reciprocal of an operator is the Moore-Penrose inverse of its matrix.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .measure_space import DiscreteMeasureSpace, WeightedSymbol, as_function

FRAME = "ell2"
MAX_ATOMS = 4096
# h(x) <= ZERO_REL * max(1, max h) counts as h(x) = 0
ZERO_REL = 1e-12


def to_frame(space: DiscreteMeasureSpace, f) -> np.ndarray:
    return np.asarray(f, dtype=complex) * np.sqrt(space.masses)


def from_frame(space: DiscreteMeasureSpace, v) -> np.ndarray:
    return np.asarray(v, dtype=complex) / np.sqrt(space.masses)


def matrix_from_action(space: DiscreteMeasureSpace, action: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Frame matrix of a linear map on L^2(mu) given only by its action.

    Column j is the image of the j-th orthonormal basis vector
    ``e_j / sqrt(mu_j)``, re-expressed in the frame.
    """
    n = space.size
    out = np.zeros((n, n), dtype=complex)
    for j in range(n):
        e = np.zeros(n, dtype=complex)
        e[j] = 1.0
        out[:, j] = to_frame(space, action(from_frame(space, e)))
    return out


def fiber_sum(symbol: WeightedSymbol, values) -> np.ndarray:
    """Sum ``values`` over each fiber: out[x] = sum over phi(y) = x of values[y]."""
    values = np.asarray(values)
    out = np.zeros(symbol.size, dtype=values.dtype if values.dtype.kind == "c" else float)
    np.add.at(out, symbol.phi, values)
    return out


def is_zero_density(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    scale = max(1.0, float(h.max())) if h.size else 1.0
    return h <= ZERO_REL * scale


def matrix_of(symbol: WeightedSymbol) -> np.ndarray:
    """Frame matrix A with A[x, phi(x)] = w(x) sqrt(mu(x) / mu(phi(x)))."""
    if symbol.size > MAX_ATOMS:
        raise ValueError(f"spaces are capped at {MAX_ATOMS} atoms")
    n = symbol.size
    mu = symbol.space.masses
    rows = np.arange(n)
    out = np.zeros((n, n), dtype=complex)
    out[rows, symbol.phi] = symbol.weight * np.sqrt(mu / mu[symbol.phi])
    return out


def multiplication_matrix(weight) -> np.ndarray:
    """Frame matrix of M_w (multiplication operators are diagonal in any frame)."""
    return np.diag(np.asarray(weight, dtype=complex))


def radon_nikodym(symbol: WeightedSymbol) -> np.ndarray:
    """h_{phi,w}(x) = mu_w(phi^{-1}({x})) / mu(x)."""
    return fiber_sum(symbol, symbol.weighted_mass) / symbol.space.masses


def _fiber_average(symbol: WeightedSymbol, f) -> tuple[np.ndarray, np.ndarray]:
    """mu_w-weighted average of f over each fiber, indexed by the fiber's target.

    Returns (averages, fiber_mass); averages are 0 where the fiber carries no
    mu_w mass.
    """
    f = as_function(symbol.space, f)
    wm = symbol.weighted_mass
    mass = fiber_sum(symbol, wm)
    num = fiber_sum(symbol, f * wm)
    avg = np.zeros(symbol.size, dtype=complex)
    pos = mass > 0
    avg[pos] = num[pos] / mass[pos]
    return avg, mass


def conditional_expectation(symbol: WeightedSymbol, f) -> np.ndarray:
    """E_{phi,w}(f): the mu_w-weighted fiber average, read back on every atom.

    Atoms whose fiber has zero mu_w mass get 0; those atoms carry no mu_w mass
    themselves, so this only fixes a representative of the a.e. class.
    """
    avg, _ = _fiber_average(symbol, f)
    return avg[symbol.phi]


def expectation_pushforward(symbol: WeightedSymbol, f) -> np.ndarray:
    """E_{phi,w}(f) o phi^{-1}, set to 0 where h_{phi,w} vanishes."""
    avg, _ = _fiber_average(symbol, f)
    avg[is_zero_density(radon_nikodym(symbol))] = 0.0
    return avg


def kernel_projector(symbol: WeightedSymbol) -> np.ndarray:
    """Projector onto ker C_{phi,w} = chi_{h=0} L^2(mu); diagonal in the frame."""
    return np.diag(is_zero_density(radon_nikodym(symbol)).astype(complex))


def adjoint_matrix_by_duality(symbol: WeightedSymbol) -> np.ndarray:
    """Frame matrix of C* computed from <Cf, g> = <f, C*g> on the basis.

    Independent of ``matrix_of(...).conj().T``; used to check that the frame
    turns L^2(mu) adjoints into conjugate transposes.
    """
    space = symbol.space
    n = space.size
    mu = space.masses
    basis = np.eye(n, dtype=complex)

    def apply_c(f):
        return symbol.weight * f[symbol.phi]

    # (C*g)(x) mu(x) = <C*g, e_x> = <g, C e_x> = conj(<C e_x, g>)
    out = np.zeros((n, n), dtype=complex)
    for j in range(n):
        g = basis[j] / np.sqrt(mu[j])
        pairing = np.array([np.sum(apply_c(basis[x]) * np.conj(g) * mu) for x in range(n)])
        out[:, j] = to_frame(space, np.conj(pairing) / mu)
    return out
