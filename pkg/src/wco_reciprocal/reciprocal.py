"""Closed-form reciprocals of weighted composition operators and their adjoints.

Every matrix here is assembled column by column from a pointwise fiber
formula; no matrix factorization is involved, so the results can be checked
against :mod:`wco_reciprocal.mp_oracle` without sharing a code path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measure_space import ValidationError, WeightedSymbol, as_function, build_symbol
from .operator_core import (
    conditional_expectation,
    expectation_pushforward,
    fiber_sum,
    is_zero_density,
    kernel_projector,
    matrix_from_action,
    matrix_of,
    radon_nikodym,
)


@dataclass(frozen=True)
class ReciprocalPair:
    forward: np.ndarray
    reciprocal: np.ndarray
    kernel_proj: np.ndarray
    range_proj: np.ndarray


def _safe_divide(num: np.ndarray, den: np.ndarray, zero: np.ndarray) -> np.ndarray:
    out = np.zeros(num.shape, dtype=complex)
    keep = ~zero
    out[keep] = num[keep] / den[keep]
    return out


def wco_reciprocal(symbol: WeightedSymbol, f) -> np.ndarray:
    """C_{phi,w}^dag f, evaluated fiberwise.

    (C^dag f)(x) = sum_{phi(y)=x} f(y) conj(w(y)) mu(y) / mu_w(phi^{-1}({x})),
    and 0 on atoms whose fiber has no mu_w mass.
    """
    f = as_function(symbol.space, f)
    mu = symbol.space.masses
    num = fiber_sum(symbol, f * np.conj(symbol.weight) * mu)
    den = fiber_sum(symbol, symbol.weighted_mass)
    return _safe_divide(num, den, is_zero_density(radon_nikodym(symbol)))


def adjoint_reciprocal(symbol: WeightedSymbol, f) -> np.ndarray:
    """(C_{phi,w}^*)^dag f = w (f o phi) / (h_{phi,w} o phi), 0 where h o phi = 0."""
    f = as_function(symbol.space, f)
    h = radon_nikodym(symbol)
    zero = is_zero_density(h)[symbol.phi]
    return _safe_divide(symbol.weight * f[symbol.phi], h[symbol.phi].astype(complex), zero)


def hat_weight(symbol: WeightedSymbol) -> np.ndarray:
    h = radon_nikodym(symbol)
    zero = is_zero_density(h)[symbol.phi]
    return _safe_divide(symbol.weight.astype(complex), h[symbol.phi].astype(complex), zero)


def derived_symbol_hat(symbol: WeightedSymbol) -> WeightedSymbol:
    """Same space and phi with weight w / (h_{phi,w} o phi); C of it equals (C^*)^dag."""
    return build_symbol(symbol.space, symbol.phi, hat_weight(symbol))


def derived_symbol_one_hat(symbol: WeightedSymbol) -> WeightedSymbol:
    """The weight 1 / (h_phi o phi), i.e. the hat construction applied to w = 1."""
    return derived_symbol_hat(symbol.unweighted())


def multiplication_reciprocal(weight, f) -> np.ndarray:
    """M_w^dag f = f / w on {w != 0}, 0 elsewhere."""
    w = np.asarray(weight, dtype=complex)
    f = np.asarray(f, dtype=complex)
    if f.shape != w.shape:
        raise ValidationError(f"function has {f.size} values but the weight has {w.size}")
    return _safe_divide(f, w, w == 0)


def _require_unit_weight(symbol: WeightedSymbol) -> None:
    if not np.all(symbol.weight == 1):
        raise ValidationError("composition_reciprocal needs a symbol whose weight is identically 1")


def composition_reciprocal(symbol: WeightedSymbol, f) -> np.ndarray:
    """C_phi^dag f = E_phi(f) o phi^{-1}: the mu-average over each fiber, pushed forward."""
    _require_unit_weight(symbol)
    return expectation_pushforward(symbol, f)


def tilde_weight(symbol: WeightedSymbol) -> np.ndarray:
    h = radon_nikodym(symbol)
    zero = is_zero_density(h)[symbol.phi]
    return _safe_divide(symbol.weight.astype(complex), np.sqrt(h[symbol.phi]).astype(complex), zero)


def unitary_part(symbol: WeightedSymbol) -> np.ndarray:
    """Frame matrix of the partial isometry U in C_{phi,w} = U |C_{phi,w}|.

    U is itself a weighted composition operator, with weight
    w / sqrt(h_{phi,w} o phi).
    """
    return matrix_of(build_symbol(symbol.space, symbol.phi, tilde_weight(symbol)))


def reciprocal_matrix(symbol: WeightedSymbol) -> np.ndarray:
    return matrix_from_action(symbol.space, lambda f: wco_reciprocal(symbol, f))


def adjoint_reciprocal_matrix(symbol: WeightedSymbol) -> np.ndarray:
    return matrix_from_action(symbol.space, lambda f: adjoint_reciprocal(symbol, f))


def multiplication_reciprocal_matrix(symbol: WeightedSymbol) -> np.ndarray:
    return matrix_from_action(symbol.space, lambda f: multiplication_reciprocal(symbol.weight, f))


def composition_reciprocal_matrix(symbol: WeightedSymbol) -> np.ndarray:
    """Frame matrix of C_phi^dag for the unweighted version of ``symbol``."""
    plain = symbol.unweighted()
    return matrix_from_action(symbol.space, lambda f: composition_reciprocal(plain, f))


def reciprocal_pair(symbol: WeightedSymbol) -> ReciprocalPair:
    forward = matrix_of(symbol)
    recip = reciprocal_matrix(symbol)
    return ReciprocalPair(
        forward=forward,
        reciprocal=recip,
        kernel_proj=kernel_projector(symbol),
        range_proj=forward @ recip,
    )


def barcelona_reciprocal(symbol: WeightedSymbol, f) -> np.ndarray:
    """C_{phi,w}^dag f as E_phi(f conj(w)) o phi^{-1} / E_phi(|w|^2) o phi^{-1}.

    Both pushforwards live on {h_phi > 0} and the quotient is set to 0 on
    {h_phi = 0}; h_phi is nonnegative, so this is the only meaningful
    support.  Only valid for weights without zeros; raises ValidationError
    otherwise.
    """
    if np.any(symbol.weight == 0):
        bad = symbol.space.labels[int(np.flatnonzero(symbol.weight == 0)[0])]
        raise ValidationError(f"weight vanishes at {bad}; the quotient formula needs 0 < |w|")
    f = as_function(symbol.space, f)
    plain = symbol.unweighted()
    num = expectation_pushforward(plain, f * np.conj(symbol.weight))
    den = expectation_pushforward(plain, np.abs(symbol.weight) ** 2)
    return _safe_divide(num, den, is_zero_density(radon_nikodym(plain)))


def adjoint_reciprocal_via_composition(symbol: WeightedSymbol, f) -> tuple[np.ndarray, np.ndarray]:
    """(C_{phi,w}^*)^dag f as w (f o phi) / ((h_phi o phi) E_phi(|w|^2)).

    Returns (values, positive) where ``positive`` marks the atoms whose
    denominator is nonzero; values are 0 elsewhere.
    """
    f = as_function(symbol.space, f)
    plain = symbol.unweighted()
    h_phi = radon_nikodym(plain)
    e_w2 = conditional_expectation(plain, np.abs(symbol.weight) ** 2).real
    den = h_phi[symbol.phi] * e_w2
    zero = is_zero_density(den)
    return _safe_divide(symbol.weight * f[symbol.phi], den.astype(complex), zero), ~zero
