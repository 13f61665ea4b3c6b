"""Discrete-variable separability criteria.

All evaluators return a ``CriterionReport`` whose margin is the amount of
violation (positive means entanglement detected):

* ``eval_lur``: joint variance sum against the sum of local bounds,
  sum_k Var(A_k (x) 1 + 1 (x) B_k) >= U_A + U_B for separable states.
* ``eval_tlur``: same left-hand side against U_A + U_B + M^2, where
  M = sqrt(sum Var(A_k)_rhoA - U_A) - sqrt(sum Var(B_k)_rhoB - U_B).
* ``eval_tlur_dual``: the matching upper bound with (sqrt + sqrt)^2;
  separable states cannot exceed it.
* ``eval_lemma1``: sqrt of the product of local excesses plus/minus the
  cross-covariance sum must be nonnegative for separable states.
* ``eval_corollary1`` / ``eval_nonlinear_witness``: LOO-basis witnesses;
  corollary1 subtracts a purity-difference term and is never weaker.
* ``eval_ppt`` / ``eval_ccnr``: standard comparators.

Local variance sums may round off slightly below a tight bound; deficits in
[-1e-9, 0) are clipped to zero before square roots, anything worse is a hard
error (the supplied bound cannot be a true bound).
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, InvalidBoundError, ParameterRangeError
from .linops import (
    min_eigenvalue,
    partial_trace,
    partial_transpose,
    purity,
    realign,
    trace_norm,
    variance,
)
from .observables import LocalObservableSet, LooBasis
from .report import DETECTION_TOL, CriterionReport, make_report

__all__ = [
    "eval_lur", "eval_tlur", "eval_tlur_dual", "eval_lemma1",
    "eval_corollary1", "eval_nonlinear_witness", "eval_ppt", "eval_ccnr",
    "entanglement_measures", "joint_variance_sum", "loo_bases_from_set",
    "DETECTION_TOL",
]

_CLIP = 1e-9


def _check_dims(rho, obs: LocalObservableSet):
    if (obs.dim_a, obs.dim_b) != (rho.dim_a, rho.dim_b):
        raise DimensionMismatchError(
            f"observables act on ({obs.dim_a},{obs.dim_b}) but state has "
            f"({rho.dim_a},{rho.dim_b})")


def joint_variance_sum(rho, obs: LocalObservableSet) -> float:
    """sum_k Var(A_k (x) 1 + 1 (x) B_k) on the joint state."""
    _check_dims(rho, obs)
    ia, ib = np.eye(rho.dim_a), np.eye(rho.dim_b)
    total = 0.0
    for a, b in zip(obs.ops_a, obs.ops_b):
        joint = np.kron(np.asarray(a.matrix), ib) + np.kron(ia, np.asarray(b.matrix))
        total += variance(joint, rho)
    return total


def _local_sums(rho, obs: LocalObservableSet) -> tuple[float, float]:
    ra = partial_trace(rho, "B")
    rb = partial_trace(rho, "A")
    sum_a = sum(variance(op, ra) for op in obs.ops_a)
    sum_b = sum(variance(op, rb) for op in obs.ops_b)
    return sum_a, sum_b


def _excess(local_sum: float, bound: float, side: str) -> float:
    deficit = local_sum - bound
    if deficit < -_CLIP:
        raise InvalidBoundError(
            f"side {side}: local variance sum {local_sum} undercuts the declared "
            f"bound {bound} beyond round-off; bound is not valid")
    return max(deficit, 0.0)


def eval_lur(rho, obs: LocalObservableSet) -> CriterionReport:
    """Original variance criterion: violation iff lhs < U_A + U_B."""
    lhs = joint_variance_sum(rho, obs)
    rhs = obs.bound_a + obs.bound_b
    return make_report("lur", lhs, rhs, rhs - lhs,
                       {"variance_sum": lhs, "U_A": obs.bound_a, "U_B": obs.bound_b})


def _tlur_parts(rho, obs: LocalObservableSet) -> dict:
    lhs = joint_variance_sum(rho, obs)
    sum_a, sum_b = _local_sums(rho, obs)
    ea = _excess(sum_a, obs.bound_a, "A")
    eb = _excess(sum_b, obs.bound_b, "B")
    return {
        "variance_sum": lhs,
        "U_A": obs.bound_a,
        "U_B": obs.bound_b,
        "local_variance_sum_A": sum_a,
        "local_variance_sum_B": sum_b,
        "excess_A": ea,
        "excess_B": eb,
        "M": np.sqrt(ea) - np.sqrt(eb),
    }


def eval_tlur(rho, obs: LocalObservableSet) -> CriterionReport:
    """Tightened criterion: separable bound raised by M^2."""
    c = _tlur_parts(rho, obs)
    rhs = c["U_A"] + c["U_B"] + c["M"] ** 2
    return make_report("tlur", c["variance_sum"], rhs, rhs - c["variance_sum"], c)


def eval_tlur_dual(rho, obs: LocalObservableSet) -> CriterionReport:
    """Dual upper bound; violation iff lhs exceeds U_A + U_B + (sqrt+sqrt)^2."""
    c = _tlur_parts(rho, obs)
    rhs = c["U_A"] + c["U_B"] + (np.sqrt(c["excess_A"]) + np.sqrt(c["excess_B"])) ** 2
    return make_report("tlur_dual", c["variance_sum"], rhs, c["variance_sum"] - rhs, c)


def eval_lemma1(rho, obs: LocalObservableSet) -> CriterionReport:
    """sqrt(excess_A * excess_B) +/- cross-covariance sum >= 0, both signs."""
    _check_dims(rho, obs)
    sum_a, sum_b = _local_sums(rho, obs)
    ea = _excess(sum_a, obs.bound_a, "A")
    eb = _excess(sum_b, obs.bound_b, "B")
    ra = partial_trace(rho, "B")
    rb = partial_trace(rho, "A")
    m = np.asarray(rho.matrix)
    cov = 0.0
    for a, b in zip(obs.ops_a, obs.ops_b):
        am, bm = np.asarray(a.matrix), np.asarray(b.matrix)
        cov += (np.trace(m @ np.kron(am, bm)).real
                - np.trace(ra @ am).real * np.trace(rb @ bm).real)
    root = np.sqrt(ea * eb)
    value_plus, value_minus = root + cov, root - cov
    lhs = min(value_plus, value_minus)
    components = {
        "sqrt_term": root, "covariance_sum": cov,
        "value_plus": value_plus, "value_minus": value_minus,
        "excess_A": ea, "excess_B": eb,
        "product_lhs": ea * eb, "product_rhs": cov * cov,
    }
    return make_report("lemma1", lhs, 0.0, -lhs, components)


def _as_loo(basis) -> LooBasis:
    return basis if isinstance(basis, LooBasis) else LooBasis(tuple(basis))


def _loo_witness_parts(rho, loo_a, loo_b) -> dict:
    loo_a, loo_b = _as_loo(loo_a), _as_loo(loo_b)
    if (loo_a.dim, loo_b.dim) != (rho.dim_a, rho.dim_b):
        raise DimensionMismatchError(
            f"LOO bases act on ({loo_a.dim},{loo_b.dim}) but state has "
            f"({rho.dim_a},{rho.dim_b})")
    ra = partial_trace(rho, "B")
    rb = partial_trace(rho, "A")
    m = np.asarray(rho.matrix)
    n = max(len(loo_a.ops), len(loo_b.ops))
    cross = 0.0
    mean_diff_sq = 0.0
    for k in range(n):
        ga = np.asarray(loo_a.ops[k].matrix) if k < len(loo_a.ops) else None
        gb = np.asarray(loo_b.ops[k].matrix) if k < len(loo_b.ops) else None
        mean_a = np.trace(ra @ ga).real if ga is not None else 0.0
        mean_b = np.trace(rb @ gb).real if gb is not None else 0.0
        if ga is not None and gb is not None:
            cross += np.trace(m @ np.kron(ga, gb)).real
        mean_diff_sq += (mean_a - mean_b) ** 2
    pa, pb = purity(ra), purity(rb)
    purity_term = 0.5 * (np.sqrt(max(1.0 - pa, 0.0)) - np.sqrt(max(1.0 - pb, 0.0))) ** 2
    witness = 1.0 - cross - 0.5 * mean_diff_sq
    return {
        "cross_sum": cross, "mean_diff_sq_sum": mean_diff_sq,
        "purity_A": pa, "purity_B": pb, "purity_term": purity_term,
        "witness_value": witness, "corollary1_value": witness - purity_term,
    }


def eval_corollary1(rho, loo_a, loo_b) -> CriterionReport:
    """LOO witness tightened by the purity-difference term; separable => value >= 0."""
    c = _loo_witness_parts(rho, loo_a, loo_b)
    value = c["corollary1_value"]
    return make_report("corollary1", value, 0.0, -value, c)


def eval_nonlinear_witness(rho, loo_a, loo_b) -> CriterionReport:
    """The same witness without the purity term (the weaker comparator)."""
    c = _loo_witness_parts(rho, loo_a, loo_b)
    value = c["witness_value"]
    return make_report("nonlinear_witness", value, 0.0, -value, c)


def eval_ppt(rho, transposed: str = "B") -> CriterionReport:
    """Negative partial transpose test; margin is -min eigenvalue."""
    lam = min_eigenvalue(partial_transpose(rho, transposed))
    return make_report("ppt", lam, 0.0, -lam, {"min_eigenvalue": lam})


def eval_ccnr(rho) -> CriterionReport:
    """Realignment test; separable states keep trace norm <= 1."""
    tn = trace_norm(realign(rho))
    return make_report("ccnr", tn, 1.0, tn - 1.0, {"trace_norm": tn})


def entanglement_measures(rho, obs: LocalObservableSet) -> tuple[float, float]:
    """Violation-normalized estimates (C_LUR, C_TLUR).

    C_LUR = 1 - lhs/(U_A+U_B) and C_TLUR = 1 - (lhs - M^2)/(U_A+U_B), so
    C_TLUR - C_LUR = M^2/(U_A+U_B) identically and both are positive exactly
    when the corresponding criterion detects.
    """
    c = _tlur_parts(rho, obs)
    u_sum = c["U_A"] + c["U_B"]
    if u_sum <= 0.0:
        raise ParameterRangeError("measures need a positive bound sum U_A + U_B")
    c_lur = 1.0 - c["variance_sum"] / u_sum
    c_tlur = 1.0 - (c["variance_sum"] - c["M"] ** 2) / u_sum
    return c_lur, c_tlur


def loo_bases_from_set(obs: LocalObservableSet) -> tuple[LooBasis, LooBasis]:
    """Reinterpret a set built as A_k = G_k^A, B_k = -G_k^B as its LOO bases.

    Zero padding is dropped; orthonormality is validated, so sets that were
    not built from complete LOO bases are rejected.
    """
    from .linops import HermitianOperator

    ops_a = [op for op in obs.ops_a if np.linalg.norm(op.matrix) > 1e-12]
    ops_b = [HermitianOperator(-np.asarray(op.matrix)) for op in obs.ops_b
             if np.linalg.norm(op.matrix) > 1e-12]
    return LooBasis(tuple(ops_a)), LooBasis(tuple(ops_b))
