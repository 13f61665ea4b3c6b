"""Local observable sets and their certified sum-uncertainty bounds.

A ``LocalObservableSet`` pairs equal-length lists {A_k} on subsystem A and
{B_k} on subsystem B with lower bounds ``bound_a <= min_psi sum_k Var(A_k)``
and likewise for B, the minimum running over pure states (the variance sum
is concave in the state, so pure states attain the minimum).

Closed-form bounds used by the builders:

* a complete set of local orthogonal observables (LOO: d^2 Hermitian
  operators with Tr(G_k G_l) = delta_kl) has sum-variance d - Tr(rho^2),
  hence bound d - 1;
* the d^2-1 generators normalized to Tr(g_i g_j) = 2 delta_ij have constant
  sum <g_k^2> = 2(d^2-1)/d and sum <g_k>^2 = 2(Tr rho^2 - 1/d), hence
  bound 2(d-1).

Every constructed set is sanity-sampled against random pure states; a
declared bound beaten by a sample is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DegenerateDecompositionError,
    DimensionMismatchError,
    InvalidBoundError,
    NumericalFailureError,
    ParameterRangeError,
    SpecParseError,
    ValidationError,
)
from .linops import DensityMatrix, HermitianOperator, as_array, realign
from .states import parse_complex_matrix, random_pure_state

__all__ = [
    "BoundProvenance", "LocalObservableSet", "LooBasis",
    "su_generators", "loo_basis", "pauli_loo_pair", "loo_pair", "su_pair",
    "operator_schmidt", "schmidt_loo_pair", "uncertainty_bound",
    "observables_from_spec", "spec_requires_state", "OBS_BUILDERS",
]

SAFETY_MARGIN = 1e-6
ORTHONORMALITY_ATOL = 1e-10
SYMMETRIZATION_ATOL = 1e-8
_SANITY_SEED = 1905
_SANITY_SAMPLES = 64


def _hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    return complex(np.trace(a.conj().T @ b))


def _fro(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


@dataclass(frozen=True)
class BoundProvenance:
    """How a bound was obtained: closed form or seeded numeric minimization."""

    mode: str  # "analytic" | "numeric"
    seed: int | None = None
    restarts: int | None = None
    tolerance: float | None = None

    def to_dict(self) -> dict:
        out = {"mode": self.mode}
        if self.mode == "numeric":
            out.update(seed=self.seed, restarts=self.restarts, tolerance=self.tolerance)
        return out


def _variance_sum_pure(psi: np.ndarray, ops: list[np.ndarray], sq_sum: np.ndarray) -> float:
    val = (psi.conj() @ sq_sum @ psi).real
    for a in ops:
        val -= (psi.conj() @ a @ psi).real ** 2
    return float(val)


@dataclass(frozen=True)
class LocalObservableSet:
    """Paired local observables with certified sum-uncertainty bounds."""

    ops_a: tuple[HermitianOperator, ...]
    ops_b: tuple[HermitianOperator, ...]
    bound_a: float
    bound_b: float
    provenance: BoundProvenance

    def __post_init__(self):
        object.__setattr__(self, "ops_a", tuple(self.ops_a))
        object.__setattr__(self, "ops_b", tuple(self.ops_b))
        if len(self.ops_a) != len(self.ops_b) or not self.ops_a:
            raise ValidationError("ops_a and ops_b must be non-empty and of equal length")
        if len({op.dim for op in self.ops_a}) != 1 or len({op.dim for op in self.ops_b}) != 1:
            raise DimensionMismatchError("operators within one side must share a dimension")
        if not (np.isfinite(self.bound_a) and np.isfinite(self.bound_b)):
            raise ValidationError("bounds must be finite")
        if self.bound_a < 0 or self.bound_b < 0:
            raise ValidationError("bounds must be nonnegative")
        self._sanity_check()

    def _sanity_check(self):
        rng = np.random.default_rng(_SANITY_SEED)
        for side, ops, bound in (("A", self.ops_a, self.bound_a),
                                 ("B", self.ops_b, self.bound_b)):
            arrays = [np.asarray(op.matrix) for op in ops]
            sq = sum(a @ a for a in arrays)
            d = ops[0].dim
            best = min(_variance_sum_pure(random_pure_state(d, rng), arrays, sq)
                       for _ in range(_SANITY_SAMPLES))
            if bound > best + 1e-8:
                raise InvalidBoundError(
                    f"declared bound {bound} on side {side} beaten by a sampled "
                    f"pure state with variance sum {best}")

    @property
    def n(self) -> int:
        return len(self.ops_a)

    @property
    def dim_a(self) -> int:
        return self.ops_a[0].dim

    @property
    def dim_b(self) -> int:
        return self.ops_b[0].dim


@dataclass(frozen=True)
class LooBasis:
    """A complete Hilbert-Schmidt orthonormal basis of Hermitian operators."""

    ops: tuple[HermitianOperator, ...]

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        if not self.ops:
            raise ValidationError("empty operator list")
        d = self.ops[0].dim
        if len(self.ops) != d * d:
            raise ValidationError(f"need {d * d} operators for dimension {d}, got {len(self.ops)}")
        arrays = [np.asarray(op.matrix) for op in self.ops]
        gram = np.array([[_hs_inner(a, b) for b in arrays] for a in arrays])
        if np.abs(gram - np.eye(d * d)).max() > ORTHONORMALITY_ATOL:
            raise ValidationError("operators are not Hilbert-Schmidt orthonormal")

    @property
    def dim(self) -> int:
        return self.ops[0].dim


def su_generators(d: int) -> list[HermitianOperator]:
    """Generalized Gell-Mann matrices, Tr(g_i g_j) = 2 delta_ij.

    Order: symmetric pairs (j<k lexicographic), antisymmetric pairs, then
    the d-1 diagonal generators.  d=2 gives (sigma_x, sigma_y, sigma_z).
    """
    if d < 2:
        raise ParameterRangeError(f"dimension must be >= 2, got {d}")
    out = []
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = 1.0
            out.append(m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j
            m[k, j] = 1j
            out.append(m)
    for l in range(1, d):
        m = np.zeros((d, d), dtype=complex)
        for j in range(l):
            m[j, j] = 1.0
        m[l, l] = -l
        out.append(np.sqrt(2.0 / (l * (l + 1))) * m)
    return [HermitianOperator(m) for m in out]


@lru_cache(maxsize=None)
def _loo_ops(d: int) -> tuple[HermitianOperator, ...]:
    gens = [np.asarray(g.matrix) / np.sqrt(2.0) for g in su_generators(d)]
    gens.append(np.eye(d, dtype=complex) / np.sqrt(d))
    return tuple(HermitianOperator(g) for g in gens)


def loo_basis(d: int) -> LooBasis:
    """Canonical LOO basis: normalized generators plus identity/sqrt(d) last."""
    return LooBasis(_loo_ops(d))


@lru_cache(maxsize=None)
def _loo_vec_matrix(d: int) -> np.ndarray:
    """Unitary whose columns are row-major vec(G_k) of the canonical LOO basis."""
    return np.column_stack([np.asarray(op.matrix).ravel() for op in _loo_ops(d)])


def _zero_pad(ops: list[HermitianOperator], n: int) -> list[HermitianOperator]:
    d = ops[0].dim
    zero = HermitianOperator(np.zeros((d, d)))
    return list(ops) + [zero] * (n - len(ops))


def pauli_loo_pair() -> LocalObservableSet:
    """Qubit pair tuned to the singlet: A_k = G_k^A, B_k = -G_k^B with
    G^A = (-x, -y, -z, 1)/sqrt(2) and G^B = (x, y, z, 1)/sqrt(2).

    The four joint operators A_k (x) 1 + 1 (x) B_k all annihilate the
    singlet, so its joint variance sum is zero against bounds of 1 + 1.
    """
    gx, gy, gz, gi = (np.asarray(op.matrix) for op in _loo_ops(2))
    ops_a = [HermitianOperator(m) for m in (-gx, -gy, -gz, gi)]
    ops_b = [HermitianOperator(m) for m in (-gx, -gy, -gz, -gi)]
    return LocalObservableSet(ops_a, ops_b, 1.0, 1.0, BoundProvenance("analytic"))


def _conjugate_ops(ops: list[HermitianOperator]) -> list[HermitianOperator]:
    return [HermitianOperator(np.asarray(op.matrix).conj()) for op in ops]


def _paired(ops_a, ops_b, pairing: str):
    if pairing == "conjugate":
        ops_b = _conjugate_ops(ops_b)
    elif pairing != "direct":
        raise ParameterRangeError(f"pairing must be 'conjugate' or 'direct', got {pairing!r}")
    ops_b = [HermitianOperator(-np.asarray(op.matrix)) for op in ops_b]
    n = max(len(ops_a), len(ops_b))
    return _zero_pad(ops_a, n), _zero_pad(ops_b, n)


def loo_pair(dim_a: int, dim_b: int | None = None, pairing: str = "conjugate") -> LocalObservableSet:
    """Canonical full-LOO pair A_k = G_k, B_k = -G_k* (or -G_k for 'direct').

    The conjugate pairing annihilates the maximally entangled state.  Sides
    of unequal dimension are zero-padded to a common length; bounds are
    d_a - 1 and d_b - 1.
    """
    dim_b = dim_a if dim_b is None else dim_b
    ops_a, ops_b = _paired(list(loo_basis(dim_a).ops), list(loo_basis(dim_b).ops), pairing)
    return LocalObservableSet(ops_a, ops_b, dim_a - 1.0, dim_b - 1.0,
                              BoundProvenance("analytic"))


def su_pair(dim_a: int, dim_b: int | None = None, pairing: str = "conjugate",
            bound_mode: str = "analytic", seed: int = 0, restarts: int = 32) -> LocalObservableSet:
    """Generator pair A_k = g_k, B_k = -g_k* (or -g_k), bounds 2(d-1)."""
    dim_b = dim_a if dim_b is None else dim_b
    ops_a, ops_b = _paired(su_generators(dim_a), su_generators(dim_b), pairing)
    if bound_mode == "analytic":
        ba, bb = 2.0 * (dim_a - 1), 2.0 * (dim_b - 1)
        prov = BoundProvenance("analytic")
    elif bound_mode == "numeric":
        ba, prov = uncertainty_bound(ops_a, mode="numeric", seed=seed, restarts=restarts)
        bb, _ = uncertainty_bound(ops_b, mode="numeric", seed=seed, restarts=restarts)
    else:
        raise ParameterRangeError(f"bound_mode must be 'analytic' or 'numeric', got {bound_mode!r}")
    return LocalObservableSet(ops_a, ops_b, ba, bb, prov)


def operator_schmidt(rho: DensityMatrix):
    """Hermitian operator Schmidt decomposition rho = sum_k s_k G_k^A (x) G_k^B.

    The realigned matrix is expressed in the canonical LOO product basis,
    where a Hermitian state has a real coefficient matrix; its real SVD then
    yields nonnegative coefficients with orthonormal *Hermitian* factors on
    both sides (real orthogonal mixes of Hermitian operators stay Hermitian),
    and the full SVD factors already complete both LOO bases.

    Returns ``(coeffs, ops_a, ops_b)`` with coeffs descending of length
    min(d_a^2, d_b^2) and complete bases of d_a^2 / d_b^2 operators.
    """
    da, db = rho.dim_a, rho.dim_b
    wa, wb = _loo_vec_matrix(da), _loo_vec_matrix(db)
    coeff = wa.conj().T @ realign(rho) @ wb.conj()
    if np.abs(coeff.imag).max() > SYMMETRIZATION_ATOL:
        raise DegenerateDecompositionError(
            f"coefficient matrix has imaginary residual {np.abs(coeff.imag).max():.2e}")
    o1, s, o2t = np.linalg.svd(coeff.real)
    vecs_a = wa @ o1
    vecs_b = wb @ o2t.T
    ops_a = [vecs_a[:, m].reshape(da, da) for m in range(da * da)]
    ops_b = [vecs_b[:, m].reshape(db, db) for m in range(db * db)]
    resid = max(np.abs(m - m.conj().T).max() for m in ops_a + ops_b)
    if resid > SYMMETRIZATION_ATOL:
        raise DegenerateDecompositionError(
            f"Schmidt factors are non-Hermitian with residual {resid:.2e}")
    return s, [HermitianOperator(m) for m in ops_a], [HermitianOperator(m) for m in ops_b]


def schmidt_loo_pair(rho: DensityMatrix) -> LocalObservableSet:
    """Observables adapted to ``rho``: its Schmidt operators, paired with signs
    A_k = G_k^A, B_k = -G_k^B, extended to complete LOO bases.

    With these observables the joint variance sum equals
    d_a + d_b - 2 sum_k s_k - sum_k (<G_k^A> - <G_k^B>)^2, so a violation is
    at least as easy as a realignment (CCNR) violation.
    """
    _, ops_a, ops_b = operator_schmidt(rho)
    ops_b = [HermitianOperator(-np.asarray(op.matrix)) for op in ops_b]
    n = max(len(ops_a), len(ops_b))
    return LocalObservableSet(_zero_pad(ops_a, n), _zero_pad(ops_b, n),
                              rho.dim_a - 1.0, rho.dim_b - 1.0,
                              BoundProvenance("analytic"))


def _classify_analytic(arrays: list[np.ndarray]) -> float | None:
    """Recognize full LOO sets (-> d-1) and generator sets (-> 2(d-1))."""
    nonzero = [a for a in arrays if _fro(a) > 1e-12]
    if not nonzero:
        return 0.0
    d = nonzero[0].shape[0]
    n = len(nonzero)
    gram = np.array([[_hs_inner(a, b) for b in nonzero] for a in nonzero])
    if n == d * d and np.abs(gram - np.eye(n)).max() <= ORTHONORMALITY_ATOL:
        return float(d - 1)
    traceless = all(abs(np.trace(a)) <= 1e-10 for a in nonzero)
    if (n == d * d - 1 and traceless
            and np.abs(gram - 2.0 * np.eye(n)).max() <= 2 * ORTHONORMALITY_ATOL):
        return float(2 * (d - 1))
    return None


def _minimize_variance_sum(arrays, sq, psi, tol=1e-10, max_iter=1000):
    """Projected gradient descent with step halving on the unit sphere."""
    f = _variance_sum_pure(psi, arrays, sq)
    eta = 0.5
    for _ in range(max_iter):
        means = [(psi.conj() @ a @ psi).real for a in arrays]
        h = sq - 2.0 * sum(m * a for m, a in zip(means, arrays))
        grad = h @ psi
        grad = grad - (psi.conj() @ grad).real * psi
        if np.linalg.norm(grad) <= 1e-13 * max(1.0, abs(f)):
            return f
        improved = False
        while eta > 1e-18:
            trial = psi - eta * grad
            trial = trial / np.linalg.norm(trial)
            ft = _variance_sum_pure(trial, arrays, sq)
            if ft < f:
                improvement = f - ft
                psi, f = trial, ft
                eta = min(eta * 1.5, 8.0)
                improved = True
                break
            eta *= 0.5
        if not improved:
            return f  # no descent direction at current resolution
        if improvement <= tol * max(1.0, abs(f)):
            return f
    raise NumericalFailureError("variance-sum minimization did not converge", best_value=f)


def uncertainty_bound(ops, mode: str = "numeric", seed: int = 0,
                      restarts: int = 32) -> tuple[float, BoundProvenance]:
    """Certified lower bound on the pure-state minimum of sum_k Var(op_k).

    ``mode='analytic'`` uses the closed forms for full LOO and generator
    sets; ``mode='numeric'`` runs multi-start projected gradient descent and
    subtracts a safety margin of 1e-6 (the result is clamped at 0, which is
    always a valid bound for a sum of variances).
    """
    arrays = [as_array(op) for op in ops]
    if not arrays:
        raise ParameterRangeError("need at least one observable")
    dims = {a.shape for a in arrays}
    if len(dims) != 1:
        raise DimensionMismatchError("all observables must share a dimension")
    if mode == "analytic":
        val = _classify_analytic(arrays)
        if val is None:
            raise ParameterRangeError(
                "no closed form for this set; use mode='numeric'")
        return val, BoundProvenance("analytic")
    if mode != "numeric":
        raise ParameterRangeError(f"mode must be 'analytic' or 'numeric', got {mode!r}")
    d = arrays[0].shape[0]
    sq = sum(a @ a for a in arrays)
    rng = np.random.default_rng(int(seed))
    best = np.inf
    for _ in range(restarts):
        psi = random_pure_state(d, rng)
        best = min(best, _minimize_variance_sum(arrays, sq, psi))
    bound = max(best - SAFETY_MARGIN, 0.0)
    return bound, BoundProvenance("numeric", seed=int(seed), restarts=restarts, tolerance=1e-10)


OBS_BUILDERS = {
    "pauli_loo_pair": "singlet-tuned qubit LOO pair, bounds 1/1",
    "loo_pair": "canonical full LOO pair (params: dim_a, dim_b, pairing)",
    "su_pair": "generator pair (params: dim_a, dim_b, pairing, bound_mode, seed, restarts)",
    "schmidt_loo_pair": "state-adapted Schmidt operator pair (rebuilt per state)",
}


def spec_requires_state(spec) -> bool:
    """True when the observable spec must be rebuilt from each evaluated state."""
    if isinstance(spec, str):
        return spec == "schmidt_loo_pair"
    return isinstance(spec, dict) and spec.get("builder") == "schmidt_loo_pair"


def _parse_op_list(entries, where: str, dim_hint=None):
    if not isinstance(entries, (list, tuple)) or not entries:
        raise SpecParseError("expected a non-empty list of matrices", field=where)
    ops = []
    for i, m in enumerate(entries):
        arr = parse_complex_matrix(m, where=f"{where}[{i}]")
        try:
            ops.append(HermitianOperator(arr))
        except ValidationError as exc:
            raise SpecParseError(str(exc), field=f"{where}[{i}]") from exc
    return ops


def observables_from_spec(spec, state: DensityMatrix | None = None,
                          dims: tuple[int, int] | None = None,
                          default_seed: int = 0) -> LocalObservableSet:
    """Build a LocalObservableSet from a JSON-style spec.

    Accepts a bare builder name, ``{"builder": name, "params": {...}}``, or
    explicit matrices ``{"opsA": [...], "opsB": [...], "boundA": x,
    "boundB": y}`` whose declared bounds are sanity-sampled.  ``state``
    (or bare ``dims``) supplies default dimensions for dimension-generic
    builders; the Schmidt builder needs the state itself.
    """
    if isinstance(spec, str):
        spec = {"builder": spec}
    if not isinstance(spec, dict):
        raise SpecParseError("observable spec must be a name or JSON object", field="obs")
    if state is not None and dims is None:
        dims = (state.dim_a, state.dim_b)
    if "builder" in spec:
        name = spec["builder"]
        params = dict(spec.get("params", {}))
        if name == "pauli_loo_pair":
            if params:
                raise SpecParseError("pauli_loo_pair takes no parameters", field="params")
            return pauli_loo_pair()
        if name == "schmidt_loo_pair":
            if state is None:
                raise SpecParseError("schmidt_loo_pair requires a state to adapt to",
                                     field="builder")
            return schmidt_loo_pair(state)
        if name in ("loo_pair", "su_pair"):
            if "dim_a" not in params:
                if dims is None:
                    raise SpecParseError(f"{name} needs dim_a (or a state)", field="params")
                params.setdefault("dim_a", dims[0])
                params.setdefault("dim_b", dims[1])
            params = {k: (int(v) if k in ("dim_a", "dim_b", "seed", "restarts") else v)
                      for k, v in params.items()}
            if name == "su_pair":
                params.setdefault("seed", int(default_seed))
            try:
                return loo_pair(**params) if name == "loo_pair" else su_pair(**params)
            except TypeError as exc:
                raise SpecParseError(str(exc), field="params") from exc
        raise SpecParseError(f"unknown builder {name!r}", field="builder")
    if "opsA" in spec or "opsB" in spec:
        for key in ("opsA", "opsB", "boundA", "boundB"):
            if key not in spec:
                raise SpecParseError(f"missing key {key!r}", field=key)
        ops_a = _parse_op_list(spec["opsA"], "opsA")
        ops_b = _parse_op_list(spec["opsB"], "opsB")
        try:
            ba, bb = float(spec["boundA"]), float(spec["boundB"])
        except (TypeError, ValueError) as exc:
            raise SpecParseError("bounds must be numbers", field="boundA/boundB") from exc
        return LocalObservableSet(ops_a, ops_b, ba, bb, BoundProvenance("analytic"))
    raise SpecParseError("observable spec needs 'builder' or explicit opsA/opsB", field="obs")
