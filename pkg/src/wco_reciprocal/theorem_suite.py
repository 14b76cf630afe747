"""Executable checks of the reciprocal formulas against the SVD oracle.

Each ``check_*`` function takes a symbol and returns a
:class:`~wco_reciprocal.report.VerificationReport`.  Failures are report
entries, never exceptions; only violated preconditions raise.

All operators act on a finite space, so every domain is the whole of
L^2(mu).  Operator inclusions therefore collapse to matrix equalities, and
"for every f" quantifiers are checked on the orthonormal basis.  Reports say
so in their notes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from . import mp_oracle
from .measure_space import ValidationError, WeightedSymbol
from .operator_core import (
    conditional_expectation,
    expectation_pushforward,
    fiber_sum,
    is_zero_density,
    matrix_of,
    multiplication_matrix,
    radon_nikodym,
)
from .reciprocal import (
    adjoint_reciprocal,
    adjoint_reciprocal_matrix,
    adjoint_reciprocal_via_composition,
    barcelona_reciprocal,
    composition_reciprocal_matrix,
    derived_symbol_hat,
    derived_symbol_one_hat,
    multiplication_reciprocal,
    multiplication_reciprocal_matrix,
    reciprocal_pair,
    unitary_part,
    wco_reciprocal,
)
from .report import DEFAULT_TOL, VerificationReport, tolerance
from .scenarios import hiszpa_kernel_vector

Tolerances = Mapping[str, float] | None

EXACT_TOL = 1e-12
COLLAPSE_NOTE = "finite space: domains are all of L^2(mu), so inclusions collapse to equality"


def rel(diff, reference) -> float:
    return mp_oracle.relative_residual(np.asarray(diff), np.asarray(reference))


def _basis(symbol: WeightedSymbol) -> list[np.ndarray]:
    """Orthonormal basis e_x / sqrt(mu(x)) of L^2(mu)."""
    n = symbol.size
    out = []
    for j in range(n):
        e = np.zeros(n, dtype=complex)
        e[j] = 1.0 / np.sqrt(symbol.space.masses[j])
        out.append(e)
    return out


def _l2_norm(symbol: WeightedSymbol, f) -> float:
    return float(np.sqrt(np.sum(np.abs(f) ** 2 * symbol.space.masses)))


def _require_nonzero_weight(symbol: WeightedSymbol, what: str) -> None:
    zero = np.flatnonzero(symbol.weight == 0)
    if zero.size:
        lab = symbol.space.labels[int(zero[0])]
        raise ValidationError(f"{what} needs a weight without zeros; w vanishes at {lab}")


def fiber_constancy_residual(symbol: WeightedSymbol) -> float:
    """max over {w != 0} of | |w|^2 - E_phi(|w|^2) |, 0 when w vanishes identically."""
    w2 = np.abs(symbol.weight) ** 2
    avg = conditional_expectation(symbol.unweighted(), w2).real
    nz = symbol.weight != 0
    if not np.any(nz):
        return 0.0
    return float(np.max(np.abs(w2[nz] - avg[nz])))


def split_product_matrix(symbol: WeightedSymbol) -> np.ndarray:
    """Frame matrix of C_phi^dag M_w^dag from the two closed-form reciprocals."""
    return composition_reciprocal_matrix(symbol) @ multiplication_reciprocal_matrix(symbol)


def split_product_gap(symbol: WeightedSymbol, recip: np.ndarray | None = None) -> float:
    """Frobenius gap between C_{phi,w}^dag and C_phi^dag M_w^dag, relative to max(1, ||C^dag||)."""
    if recip is None:
        recip = reciprocal_pair(symbol).reciprocal
    gap = float(np.linalg.norm(recip - split_product_matrix(symbol)))
    return gap / max(1.0, float(np.linalg.norm(recip)))


# ---------------------------------------------------------------------------
# reciprocal of C_{phi,w}
# ---------------------------------------------------------------------------


def indicator_domain_bound(symbol: WeightedSymbol) -> float:
    """Largest violation of ||C^dag chi_D||^2 <= int_{D, w != 0} 1/(h o phi) <= K mu(D).

    D runs over singletons, fibers and the whole space; K is the largest
    1/(h o phi) on D (where w != 0).  Returns a relative violation (0 if the
    chain holds everywhere).
    """
    space = symbol.space
    n = symbol.size
    h = radon_nikodym(symbol)
    h_phi = h[symbol.phi]
    nz = symbol.weight != 0
    sets = [[i] for i in range(n)]
    sets += [list(np.flatnonzero(symbol.phi == x)) for x in range(n)]
    sets.append(list(range(n)))
    worst = 0.0
    for members in sets:
        if not members:
            continue
        chi = np.zeros(n, dtype=complex)
        chi[members] = 1.0
        lhs = _l2_norm(symbol, wco_reciprocal(symbol, chi)) ** 2
        active = chi.real.astype(bool) & nz
        middle = float(np.sum(space.masses[active] / h_phi[active]))
        k = float(np.max(1.0 / h_phi[active])) if np.any(active) else 0.0
        rhs = k * float(np.sum(space.masses[members]))
        scale = max(1.0, rhs)
        worst = max(worst, (lhs - middle) / scale, (middle - rhs) / scale)
    return max(worst, 0.0)


def check_reciprocal_theorem(symbol: WeightedSymbol, tol: Tolerances = None, scenario_id: str = "") -> VerificationReport:
    """Closed-form C_{phi,w}^dag against the oracle pseudoinverse and the Penrose equations."""
    rep = VerificationReport(scenario_id)
    pair = reciprocal_pair(symbol)
    c, r = pair.forward, pair.reciprocal
    oracle = mp_oracle.pseudoinverse(c)
    rep.add("reciprocal_vs_oracle", rel(r - oracle, oracle), tolerance(tol, "reciprocal_vs_oracle"))

    pen = mp_oracle.penrose_report(c, r, tol=DEFAULT_TOL, scenario_id=scenario_id)
    for chk in pen.checks:
        rep.add(chk.name, chk.residual, tolerance(tol, chk.name))

    n = symbol.size
    eye = np.eye(n)
    oracle_range = c @ oracle
    rep.add(
        "range_projection",
        rel(pair.range_proj - oracle_range, oracle_range),
        tolerance(tol, "range_projection"),
        "C C^dag against the oracle projector onto ran C",
    )
    p = pair.range_proj
    rep.add(
        "range_projection_orthogonal",
        max(rel(p @ p - p, p), rel(p.conj().T - p, p)),
        tolerance(tol, "range_projection_orthogonal"),
    )
    rep.add(
        "kernel_complement_projection",
        rel(r @ c - (eye - pair.kernel_proj), eye - pair.kernel_proj),
        tolerance(tol, "kernel_complement_projection"),
        "C^dag C against 1 - chi_{h=0}",
    )
    rep.add(
        "reciprocal_kernel_is_range_complement",
        max(rel(r @ p - r, r), rel(r @ (eye - p), r)),
        tolerance(tol, "reciprocal_kernel_is_range_complement"),
        "C^dag P_ran = C^dag and C^dag (1 - P_ran) = 0",
    )
    support = expectation_pushforward(symbol, (symbol.weight != 0).astype(complex))
    positive = (~is_zero_density(radon_nikodym(symbol))).astype(float)
    rep.add(
        "support_identity",
        float(np.max(np.abs(support - positive), initial=0.0)),
        tolerance(tol, "support_identity"),
        "E_{phi,w}(chi_{w!=0}) o phi^{-1} = chi_{h>0}",
    )
    rep.add(
        "indicator_domain_bound",
        indicator_domain_bound(symbol),
        tolerance(tol, "indicator_domain_bound"),
        "chain of inequalities for indicators of singletons, fibers and X",
    )
    return rep


def check_adjoint_results(symbol: WeightedSymbol, tol: Tolerances = None, scenario_id: str = "") -> VerificationReport:
    """(C^dag)* = (C*)^dag, the polar factorization and the hat-weight identity."""
    rep = VerificationReport(scenario_id)
    pair = reciprocal_pair(symbol)
    c, r = pair.forward, pair.reciprocal
    adj = adjoint_reciprocal_matrix(symbol)
    oracle_adj = mp_oracle.pseudoinverse(c.conj().T)
    rep.add("adjoint_interchange", rel(r.conj().T - oracle_adj, oracle_adj), tolerance(tol, "adjoint_interchange"))
    rep.add(
        "adjoint_reciprocal_formula",
        rel(adj - r.conj().T, adj),
        tolerance(tol, "adjoint_reciprocal_formula", EXACT_TOL),
        "pointwise formula against the conjugate transpose of the reciprocal",
    )

    u = unitary_part(symbol)
    rep.add("partial_isometry", rel(u @ u.conj().T @ u - u, u), tolerance(tol, "partial_isometry"))
    res = mp_oracle.svd(c)
    s = res.singular_values
    keep = s > mp_oracle.DEFAULT_RANK_TOL * s[0] if s.size and s[0] > 0 else np.zeros(s.size, dtype=bool)
    polar = res.left_vectors[:, : s.size][:, keep] @ res.right_vectors[:, : s.size][:, keep].conj().T
    rep.add(
        "polar_part_vs_oracle",
        rel(u - polar, polar),
        tolerance(tol, "polar_part_vs_oracle"),
        "U against sum of u_i v_i^* over nonzero singular values",
    )
    h_phi = radon_nikodym(symbol)[symbol.phi]
    pos = ~is_zero_density(radon_nikodym(symbol))[symbol.phi]
    scale = np.zeros(symbol.size)
    scale[pos] = h_phi[pos] ** -0.5
    factored = np.diag(scale) @ u
    rows = np.flatnonzero(pos)
    rep.add(
        "polar_factorization",
        rel(adj[rows] - factored[rows], adj[rows]),
        tolerance(tol, "polar_factorization"),
        "(C*)^dag = M_{h^{-1/2} o phi} U on {h o phi > 0}",
    )
    hat = matrix_of(derived_symbol_hat(symbol))
    rep.add(
        "hat_symbol_is_adjoint_reciprocal",
        float(np.max(np.abs(hat - adj), initial=0.0)),
        tolerance(tol, "hat_symbol_is_adjoint_reciprocal", EXACT_TOL),
        "entrywise",
    )
    return rep


def check_composition_adjoint(symbol: WeightedSymbol, tol: Tolerances = None, scenario_id: str = "") -> VerificationReport:
    """(C*)^dag through h_phi and E_phi(|w|^2) against the direct formula."""
    rep = VerificationReport(scenario_id)
    worst = 0.0
    for f in _basis(symbol):
        via, positive = adjoint_reciprocal_via_composition(symbol, f)
        direct = adjoint_reciprocal(symbol, f)
        if np.any(positive):
            diff = np.abs(via[positive] - direct[positive])
            worst = max(worst, float(diff.max()) / max(1.0, float(np.abs(direct).max())))
    rep.add(
        "composition_adjoint_formula",
        worst,
        tolerance(tol, "composition_adjoint_formula"),
        "compared on atoms with positive denominator, over the orthonormal basis",
    )
    plain = symbol.unweighted()
    h_w = radon_nikodym(symbol)
    h_phi = radon_nikodym(plain)
    e_w2 = expectation_pushforward(plain, np.abs(symbol.weight) ** 2).real
    rep.add(
        "density_factorization",
        float(np.max(np.abs(h_w - e_w2 * h_phi))) / max(1.0, float(h_w.max())),
        tolerance(tol, "density_factorization"),
        "h_{phi,w} = E_phi(|w|^2) o phi^{-1} h_phi",
    )
    return rep


def check_quotient_formula(symbol: WeightedSymbol, tol: Tolerances = None, scenario_id: str = "") -> VerificationReport:
    """C^dag via E_phi(f conj w) / E_phi(|w|^2) for weights without zeros."""
    _require_nonzero_weight(symbol, "the quotient formula")
    rep = VerificationReport(scenario_id)
    plain = symbol.unweighted()
    h_w = radon_nikodym(symbol)
    h_phi = radon_nikodym(plain)
    worst_formula = 0.0
    worst_density = 0.0
    for f in _basis(symbol):
        direct = wco_reciprocal(symbol, f)
        quotient = barcelona_reciprocal(symbol, f)
        worst_formula = max(worst_formula, _l2_norm(symbol, direct - quotient) / max(1.0, _l2_norm(symbol, direct)))
        lhs = expectation_pushforward(plain, f * np.conj(symbol.weight)) * h_phi
        rhs = expectation_pushforward(symbol, multiplication_reciprocal(symbol.weight, f)) * h_w
        worst_density = max(worst_density, float(np.max(np.abs(lhs - rhs))) / max(1.0, float(np.abs(lhs).max())))
    rep.add("quotient_formula", worst_formula, tolerance(tol, "quotient_formula"))
    rep.add(
        "weighted_expectation_identity",
        worst_density,
        tolerance(tol, "weighted_expectation_identity"),
        "E_phi(f conj w) o phi^{-1} h_phi = E_{phi,w}(f_w) o phi^{-1} h_{phi,w}",
    )
    return rep


# ---------------------------------------------------------------------------
# comparing C_{phi,w}^dag, (M_w C_phi)^dag and C_phi^dag M_w^dag
# ---------------------------------------------------------------------------


def check_product_reciprocal(symbol: WeightedSymbol, tol: Tolerances = None, scenario_id: str = "") -> VerificationReport:
    """(M_w C_phi)^dag against the closed-form C_{phi,w}^dag, with the restriction formula."""
    rep = VerificationReport(scenario_id)
    c = matrix_of(symbol)
    prod = multiplication_matrix(symbol.weight) @ matrix_of(symbol.unweighted())
    recip = reciprocal_pair(symbol).reciprocal
    rep.add(
        "product_equals_symbol",
        float(np.max(np.abs(prod - c), initial=0.0)),
        tolerance(tol, "product_equals_symbol", EXACT_TOL),
        "finite space: M_w C_phi and C_{phi,w} are the same matrix",
    )
    prod_pinv = mp_oracle.pseudoinverse(prod)
    rep.add("product_reciprocal", rel(prod_pinv - recip, prod_pinv), tolerance(tol, "product_reciprocal"))

    n = symbol.size
    eye = np.eye(n)
    ran_a = prod @ prod_pinv
    restricted = recip @ ran_a
    rep.add(
        "restricted_reciprocal",
        rel(restricted - prod_pinv, prod_pinv),
        tolerance(tol, "restricted_reciprocal"),
        "A^dag = B^dag on ran A, 0 on its complement, with A = M_w C_phi and B = C_{phi,w}",
    )
    ker_a = eye - prod_pinv @ prod
    ker_b = np.diag(is_zero_density(radon_nikodym(symbol)).astype(float))
    rep.add(
        "kernel_complement_inclusion",
        float(np.linalg.norm(ker_b @ (eye - ker_a))),
        tolerance(tol, "kernel_complement_inclusion"),
        "(ker A)^perp inside (ker B)^perp",
    )
    ran_b = c @ recip
    rep.add(
        "range_complements_agree",
        max(float(np.linalg.norm(ran_a - ran_b)), float(np.linalg.norm(recip @ (eye - ran_a)))),
        tolerance(tol, "range_complements_agree"),
        "ran(A)^perp = ran(B)^perp and C^dag vanishes there",
    )
    return rep


class Status(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class Condition:
    status: Status
    residual: float

    @property
    def holds(self) -> bool:
        # vacuous conditions do not constrain the chain
        return self.status is not Status.FAILS


@dataclass(frozen=True)
class DtConditionProfile:
    """Statuses of the six conditions comparing C_{phi,w}^dag with C_phi^dag M_w^dag."""

    a1: Condition
    a2: Condition
    a3: Condition
    b1: Condition
    b2: Condition
    c: Condition
    scenario_id: str = ""

    FIELDS = ("a1", "a2", "a3", "b1", "b2", "c")

    def to_dict(self) -> dict:
        out: dict = {"scenario_id": self.scenario_id}
        for name in self.FIELDS:
            cond = getattr(self, name)
            out[name] = {"status": cond.status.value, "residual": cond.residual}
        return out


def _status(residual: float, tol: float) -> Condition:
    return Condition(Status.HOLDS if residual <= tol else Status.FAILS, float(residual))


def expectation_gap(symbol: WeightedSymbol) -> float:
    """max over the basis of ||E_{phi,w}(f_w) o phi^{-1} - E_phi(f_w) o phi^{-1}||."""
    plain = symbol.unweighted()
    worst = 0.0
    for f in _basis(symbol):
        fw = multiplication_reciprocal(symbol.weight, f)
        diff = expectation_pushforward(symbol, fw) - expectation_pushforward(plain, fw)
        worst = max(worst, _l2_norm(symbol, diff))
    return worst


def evaluate_dt_conditions(symbol: WeightedSymbol, tol: Tolerances = None, scenario_id: str = "") -> DtConditionProfile:
    """Evaluate (a1), (a2), (a3), (b1), (b2) and (c) numerically.

    (a1)-(a3) share one residual (the matrix gap) and (b1)/(b2) share the
    basis-wise expectation gap, because every domain is the full space.
    (c) is not applicable when w vanishes identically.
    """
    t = tolerance(tol, "dt_conditions")
    a = split_product_gap(symbol)
    b = expectation_gap(symbol)
    if np.any(symbol.weight != 0):
        c = _status(fiber_constancy_residual(symbol), t)
    else:
        c = Condition(Status.NOT_APPLICABLE, 0.0)
    return DtConditionProfile(
        a1=_status(a, t), a2=_status(a, t), a3=_status(a, t),
        b1=_status(b, t), b2=_status(b, t), c=c,
        scenario_id=scenario_id,
    )


IMPLICATIONS = (
    ("a1_implies_a2", "a1", "a2", ""),
    ("a2_implies_a1", "a2", "a1", ""),
    ("a2_implies_b1", "a2", "b1", ""),
    ("b1_implies_a2", "b1", "a2", ""),
    ("b1_implies_c", "b1", "c", ""),
    ("c_implies_b2", "c", "b2", ""),
    ("b2_implies_a3", "b2", "a3", ""),
    ("a3_implies_a1", "a3", "a1", "finite-dimensional collapse, not a general claim"),
)


def check_dt_implications(profiles: Iterable[DtConditionProfile], scenario_id: str = "dt-chain") -> VerificationReport:
    """Count profiles violating each link of the implication chain."""
    profiles = list(profiles)
    rep = VerificationReport(scenario_id)
    for name, lhs, rhs, note in IMPLICATIONS:
        bad = [p.scenario_id for p in profiles if getattr(p, lhs).holds and not getattr(p, rhs).holds]
        notes = note
        if bad:
            notes = (notes + "; " if notes else "") + "violated by " + ", ".join(bad[:5])
        rep.add(name, float(len(bad)), 0.0, notes)
    counts = {}
    for field in DtConditionProfile.FIELDS:
        counts[field] = {s.value: sum(getattr(p, field).status is s for p in profiles) for s in Status}
    rep.quantities["profiles_checked"] = len(profiles)
    rep.quantities["status_counts"] = counts
    rep.quantities["note"] = COLLAPSE_NOTE
    return rep


def check_ssrk(symbol: WeightedSymbol, tol: Tolerances = None, scenario_id: str = "") -> VerificationReport:
    """Product rule (M_w C_phi)^dag = C_phi^dag M_w^dag under ker C_phi* = ker M_w.

    The kernel equality is only sufficient, so when it fails the conclusion
    is recorded but not asserted.
    """
    rep = VerificationReport(scenario_id)
    t_hyp = tolerance(tol, "ssrk_hypothesis")
    c_phi = matrix_of(symbol.unweighted())
    ker_cphi_adj = np.eye(symbol.size) - mp_oracle.range_projector(c_phi)
    ker_mw = np.diag((symbol.weight == 0).astype(float))
    hyp_residual = float(np.linalg.norm(ker_cphi_adj - ker_mw))
    hyp_holds = hyp_residual <= t_hyp

    prod = multiplication_matrix(symbol.weight) @ c_phi
    prod_pinv = mp_oracle.pseudoinverse(prod)
    split = split_product_matrix(symbol)
    concl_residual = rel(prod_pinv - split, prod_pinv)
    t_concl = tolerance(tol, "ssrk_product_rule")
    concl_holds = concl_residual <= t_concl
    if hyp_holds:
        rep.add("ssrk_product_rule", concl_residual, t_concl, "hypothesis holds; conclusion asserted")
    else:
        rep.add(
            "ssrk_product_rule",
            0.0,
            t_concl,
            f"hypothesis not met; conclusion not asserted (observed residual {concl_residual:.3e}, "
            f"{'holds' if concl_holds else 'fails'})",
        )
    rep.quantities["ssrk"] = {
        "hypothesis_holds": hyp_holds,
        "hypothesis_residual": hyp_residual,
        "conclusion_holds": concl_holds,
        "conclusion_residual": concl_residual,
    }
    return rep


def minimal_beta(h_hat: np.ndarray, h_one_hat: np.ndarray) -> float:
    """Smallest beta with h_hat <= beta * h_one_hat atomwise (inf if none exists)."""
    pos = ~is_zero_density(h_hat)
    if not np.any(pos):
        return 0.0
    if np.any(is_zero_density(h_one_hat)[pos]):
        return float("inf")
    return float(np.max(h_hat[pos] / h_one_hat[pos]))


def check_konopiste(symbol: WeightedSymbol, tol: Tolerances = None, scenario_id: str = "") -> VerificationReport:
    """[h_{phi,w-hat} <= beta h_{phi,1-hat} and (c)]  iff  C_phi^dag M_w^dag = C^dag.

    Requires a weight without zeros.
    """
    _require_nonzero_weight(symbol, "check_konopiste")
    rep = VerificationReport(scenario_id)
    t = tolerance(tol, "konopiste_biconditional", DEFAULT_TOL)
    h_hat = radon_nikodym(derived_symbol_hat(symbol))
    h_one = radon_nikodym(derived_symbol_one_hat(symbol))
    beta = minimal_beta(h_hat, h_one)
    c_res = fiber_constancy_residual(symbol)
    a_res = split_product_gap(symbol)
    lhs = np.isfinite(beta) and c_res <= t
    rhs = a_res <= t
    rep.add(
        "konopiste_biconditional",
        0.0 if lhs == rhs else 1.0,
        0.0,
        f"beta={beta:.6g}, (c) residual {c_res:.3e}, product gap {a_res:.3e}",
    )
    rep.add(
        "konopiste_factorization",
        float(np.max(np.abs(multiplication_matrix(symbol.weight) @ matrix_of(symbol.unweighted()) - matrix_of(symbol)))),
        tolerance(tol, "konopiste_factorization", EXACT_TOL),
        "C_{phi,w} = M_w C_phi",
    )
    rep.quantities["konopiste"] = {
        "beta": beta,
        "condition_c_residual": c_res,
        "product_gap": a_res,
        "domination_holds": bool(np.isfinite(beta)),
        "product_rule_holds": bool(rhs),
    }
    return rep


def hat_density_formula(symbol: WeightedSymbol) -> tuple[np.ndarray, np.ndarray]:
    """Explicit h_{phi,w-hat} and h_{phi,1-hat} for fiber-constant |w|.

    h_hat(x) = sum_{phi(y)=x} mu(y)/|w(y)|^2 / (mu(x) h_phi(x)^2), and the same
    without the 1/|w|^2 factor for the one-hat weight; 0 on empty fibers.
    """
    mu = symbol.space.masses
    h_phi = radon_nikodym(symbol.unweighted())
    s_w = fiber_sum(symbol, mu / np.abs(symbol.weight) ** 2)
    s_1 = fiber_sum(symbol, mu)
    den = mu * h_phi**2
    pos = h_phi > 0
    out_w = np.zeros(symbol.size)
    out_1 = np.zeros(symbol.size)
    out_w[pos] = s_w[pos] / den[pos]
    out_1[pos] = s_1[pos] / den[pos]
    return out_w, out_1


def check_wariat(symbol: WeightedSymbol, tol: Tolerances = None, scenario_id: str = "") -> VerificationReport:
    """Explicit hat densities and the min|w| <-> beta-domination equivalence.

    Requires a weight without zeros whose modulus is constant on fibers.
    """
    _require_nonzero_weight(symbol, "check_wariat")
    c_res = fiber_constancy_residual(symbol)
    if c_res > tolerance(tol, "wariat_precondition"):
        raise ValidationError(f"|w|^2 is not fiber-constant (residual {c_res:.3e})")
    rep = VerificationReport(scenario_id)
    h_hat = radon_nikodym(derived_symbol_hat(symbol))
    h_one = radon_nikodym(derived_symbol_one_hat(symbol))
    f_hat, f_one = hat_density_formula(symbol)
    rep.add(
        "wariat_hat_density",
        float(np.max(np.abs(f_hat - h_hat))) / max(1.0, float(h_hat.max())),
        tolerance(tol, "wariat_hat_density", EXACT_TOL),
    )
    rep.add(
        "wariat_one_hat_density",
        float(np.max(np.abs(f_one - h_one))) / max(1.0, float(h_one.max())),
        tolerance(tol, "wariat_one_hat_density", EXACT_TOL),
    )
    alpha = float(np.min(np.abs(symbol.weight)))
    beta = 1.0 / alpha**2
    excess = float(np.max(h_hat - beta * h_one, initial=0.0))
    t = tolerance(tol, "wariat_domination")
    rep.add(
        "wariat_domination",
        max(excess, 0.0) / max(1.0, float(h_hat.max())),
        t,
        f"beta = 1/min|w|^2 = {beta:.6g}",
    )
    beta_min = minimal_beta(h_hat, h_one)
    rep.add(
        "wariat_minimal_beta",
        abs(beta_min - beta) / beta,
        tolerance(tol, "wariat_minimal_beta"),
        "the smallest dominating beta is exactly 1/min|w|^2",
    )
    gap = split_product_gap(symbol)
    rep.add("wariat_product_rule", gap, tolerance(tol, "wariat_product_rule"), "C_phi^dag M_w^dag = C^dag")
    rep.quantities["wariat"] = {"alpha": alpha, "beta": beta, "minimal_beta": beta_min}
    return rep


def run_all(symbol: WeightedSymbol, tol: Tolerances = None, scenario_id: str = "") -> tuple[VerificationReport, DtConditionProfile]:
    """Every applicable checker on one symbol, merged into a single report."""
    rep = VerificationReport(scenario_id)
    for checker in (check_reciprocal_theorem, check_adjoint_results, check_composition_adjoint, check_product_reciprocal, check_ssrk):
        rep.extend(checker(symbol, tol, scenario_id))
    nonzero = bool(np.all(symbol.weight != 0))
    applicable = ["reciprocal", "adjoint", "composition_adjoint", "product", "ssrk"]
    if nonzero:
        rep.extend(check_quotient_formula(symbol, tol, scenario_id))
        rep.extend(check_konopiste(symbol, tol, scenario_id))
        applicable += ["quotient", "konopiste"]
        if fiber_constancy_residual(symbol) <= tolerance(tol, "wariat_precondition"):
            rep.extend(check_wariat(symbol, tol, scenario_id))
            applicable.append("wariat")
    profile = evaluate_dt_conditions(symbol, tol, scenario_id)
    chain = check_dt_implications([profile], scenario_id)
    for chk in chain.checks:
        rep.add("dt_" + chk.name, chk.residual, chk.tolerance, chk.notes)
    rep.quantities["dt_profile"] = profile.to_dict()
    rep.quantities["checkers"] = applicable
    rep.quantities["note"] = COLLAPSE_NOTE
    return rep, profile


def check_hiszpa(symbol: WeightedSymbol, tol: Tolerances = None, scenario_id: str = "") -> VerificationReport:
    """Claims about the branching-shift truncation: a kernel vector of C_phi* and |w|^2 = E_phi(|w|^2)."""
    rep = VerificationReport(scenario_id)
    f = hiszpa_kernel_vector(symbol)
    c_phi = matrix_of(symbol.unweighted())
    v = f * np.sqrt(symbol.space.masses)
    rep.add(
        "hiszpa_kernel_vector",
        float(np.linalg.norm(c_phi.conj().T @ v)) / float(np.linalg.norm(v)),
        tolerance(tol, "hiszpa_kernel_vector", EXACT_TOL),
        "chi_(-1,1) - chi_(-1,2) lies in ker C_phi*, so ran C_phi is not dense",
    )
    rep.add(
        "hiszpa_expectation_of_phi",
        float(np.max(np.abs(expectation_pushforward(symbol.unweighted(), f)))),
        tolerance(tol, "hiszpa_expectation_of_phi", EXACT_TOL),
        "E_phi(f) = 0",
    )
    w2 = np.abs(symbol.weight) ** 2
    rep.add(
        "hiszpa_fiber_constant_modulus",
        float(np.max(np.abs(w2 - conditional_expectation(symbol.unweighted(), w2).real))),
        tolerance(tol, "hiszpa_fiber_constant_modulus", EXACT_TOL),
        "|w|^2 = E_phi(|w|^2) everywhere",
    )
    return rep
