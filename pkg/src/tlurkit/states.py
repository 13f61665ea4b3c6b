"""State families and random-state constructors.

Basis labelling: spin labels (-1, 0, +1) of a qutrit map to computational
basis indices (0, 1, 2).

Random constructors are seeded and deterministic: seeds feed
``numpy.random.Generator`` backed by PCG64, local pure states are drawn
Haar-uniformly (normalized complex normal vectors), and mixture weights are
Dirichlet(1,...,1).  Draw order is weights first, then for each term the A
factor followed by the B factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ParameterRangeError, SpecParseError
from .linops import DensityMatrix

__all__ = [
    "horodecki33", "white_noise_mix", "horodecki_noise", "noisy_singlet",
    "singlet", "pure_state", "random_pure_state", "random_mixed_state",
    "random_separable", "state_from_spec", "FAMILIES", "StateFamily",
]


def pure_state(vec, dim_a: int, dim_b: int) -> DensityMatrix:
    """Density matrix of a (normalized) bipartite ket."""
    v = np.asarray(vec, dtype=complex).ravel()
    n = np.linalg.norm(v)
    if n == 0:
        raise ParameterRangeError("zero vector cannot be normalized")
    v = v / n
    return DensityMatrix(dim_a, dim_b, np.outer(v, v.conj()))


def _ket(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim)
    v[index] = 1.0
    return v


def singlet() -> DensityMatrix:
    """|psi_s> = (|01> - |10>)/sqrt(2)."""
    v = np.zeros(4)
    v[1], v[2] = 1.0, -1.0
    return pure_state(v, 2, 2)


def horodecki33(a: float) -> DensityMatrix:
    """The 3x3 bound entangled family, real symmetric, PPT for all a in (0,1).

    Weights a/(1+8a) on five product kets, 3a/(1+8a) on the maximally
    entangled projector and 1/(1+8a) on the a-dependent |Pi> projector;
    the weights sum to one exactly.
    """
    if not 0.0 < a < 1.0:
        raise ParameterRangeError(f"a must lie in (0,1), got {a}")

    def kk(i, j):
        return np.kron(_ket(3, i), _ket(3, j))

    rho = np.zeros((9, 9))
    for i, j in [(0, 1), (0, 2), (1, 0), (1, 2), (2, 1)]:
        v = kk(i, j)
        rho += a * np.outer(v, v)
    emax = (kk(0, 0) + kk(1, 1) + kk(2, 2)) / np.sqrt(3)
    rho += 3 * a * np.outer(emax, emax)
    pi = np.sqrt((1 + a) / 2) * kk(2, 0) + np.sqrt((1 - a) / 2) * kk(2, 2)
    rho += np.outer(pi, pi)
    return DensityMatrix(3, 3, rho / (1 + 8 * a))


def white_noise_mix(rho: DensityMatrix, p: float) -> DensityMatrix:
    """p * rho + (1-p) * identity / (dim_a dim_b)."""
    if not 0.0 <= p <= 1.0:
        raise ParameterRangeError(f"p must lie in [0,1], got {p}")
    d = rho.dim
    mixed = p * np.asarray(rho.matrix) + (1.0 - p) * np.eye(d) / d
    return DensityMatrix(rho.dim_a, rho.dim_b, mixed)


def horodecki_noise(a: float, p: float) -> DensityMatrix:
    """White-noise mixture of the 3x3 bound entangled state."""
    return white_noise_mix(horodecki33(a), p)


def noisy_singlet(p: float) -> DensityMatrix:
    """p |psi_s><psi_s| + (1-p) (2/3 |00><00| + 1/3 |01><01|); entangled for all p > 0."""
    if not 0.0 <= p <= 1.0:
        raise ParameterRangeError(f"p must lie in [0,1], got {p}")
    sep = np.diag([2.0 / 3.0, 1.0 / 3.0, 0.0, 0.0])
    mixed = p * np.asarray(singlet().matrix) + (1.0 - p) * sep
    return DensityMatrix(2, 2, mixed)


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random ket: normalized complex standard-normal vector."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_mixed_state(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random full- or fixed-rank density matrix (Wishart-style)."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_separable(dims: tuple[int, int], n_terms: int, seed: int) -> DensityMatrix:
    """Convex mixture of ``n_terms`` random pure product states."""
    if n_terms < 1:
        raise ParameterRangeError(f"n_terms must be >= 1, got {n_terms}")
    da, db = int(dims[0]), int(dims[1])
    rng = np.random.default_rng(int(seed))
    weights = rng.dirichlet(np.ones(n_terms)) if n_terms > 1 else np.ones(1)
    rho = np.zeros((da * db, da * db), dtype=complex)
    for w in weights:
        va = random_pure_state(da, rng)
        vb = random_pure_state(db, rng)
        rho += w * np.kron(np.outer(va, va.conj()), np.outer(vb, vb.conj()))
    return DensityMatrix(da, db, rho)


@dataclass(frozen=True)
class StateFamily:
    """A named, parameterized family of states for scans and the CLI."""

    name: str
    dims: tuple[int, int]
    params: dict[str, tuple[float, float]]  # name -> inclusive-ish (lo, hi)
    build: Callable[..., DensityMatrix]
    description: str = ""
    defaults: dict[str, float] = field(default_factory=dict)

    def instantiate(self, **params) -> DensityMatrix:
        merged = dict(self.defaults)
        merged.update(params)
        unknown = set(merged) - set(self.params)
        if unknown:
            raise ParameterRangeError(
                f"unknown parameter(s) {sorted(unknown)} for family '{self.name}'")
        missing = set(self.params) - set(merged)
        if missing:
            raise ParameterRangeError(
                f"missing parameter(s) {sorted(missing)} for family '{self.name}'")
        return self.build(**merged)


FAMILIES: dict[str, StateFamily] = {}


def _register(fam: StateFamily) -> None:
    FAMILIES[fam.name] = fam


_register(StateFamily(
    name="horodecki",
    dims=(3, 3),
    params={"a": (0.0, 1.0)},
    build=lambda a: horodecki33(a),
    description="3x3 bound entangled family (PPT, entangled), a in (0,1)",
))
_register(StateFamily(
    name="horodecki_noise",
    dims=(3, 3),
    params={"a": (0.0, 1.0), "p": (0.0, 1.0)},
    build=lambda a, p: horodecki_noise(a, p),
    description="white-noise mixture p*horodecki(a) + (1-p)*I/9",
))
_register(StateFamily(
    name="noisy_singlet",
    dims=(2, 2),
    params={"p": (0.0, 1.0)},
    build=lambda p: noisy_singlet(p),
    description="p*singlet + (1-p)*(2/3|00><00| + 1/3|01><01|)",
))
_register(StateFamily(
    name="random_separable",
    dims=(2, 2),
    params={"dim_a": (2, 16), "dim_b": (2, 16), "n_terms": (1, 1024), "seed": (0, 2**31)},
    build=lambda dim_a, dim_b, n_terms, seed: random_separable(
        (int(dim_a), int(dim_b)), int(n_terms), int(seed)),
    description="seeded random mixture of pure product states",
    defaults={"dim_a": 2, "dim_b": 2, "n_terms": 4, "seed": 0},
))


def family_dims(name: str, params: dict | None = None) -> tuple[int, int]:
    fam = FAMILIES.get(name)
    if fam is None:
        raise ParameterRangeError(f"unknown state family '{name}'")
    if name == "random_separable":
        merged = dict(fam.defaults)
        merged.update(params or {})
        return (int(merged["dim_a"]), int(merged["dim_b"]))
    return fam.dims


def _parse_complex_entry(entry, where: str) -> complex:
    if isinstance(entry, (int, float)):
        return complex(entry)
    if isinstance(entry, (list, tuple)) and len(entry) == 2:
        try:
            return complex(float(entry[0]), float(entry[1]))
        except (TypeError, ValueError):
            pass
    raise SpecParseError(f"expected number or [re, im] pair, got {entry!r}", field=where)


def parse_complex_matrix(rows, where: str = "matrix") -> np.ndarray:
    if not isinstance(rows, (list, tuple)) or not rows:
        raise SpecParseError("expected a non-empty list of rows", field=where)
    parsed = []
    for i, row in enumerate(rows):
        if not isinstance(row, (list, tuple)) or len(row) != len(rows):
            raise SpecParseError("matrix must be square", field=f"{where}[{i}]")
        parsed.append([_parse_complex_entry(e, f"{where}[{i}][{j}]")
                       for j, e in enumerate(row)])
    return np.array(parsed, dtype=complex)


def state_from_spec(spec: dict) -> DensityMatrix:
    """Build a state from a JSON-style spec.

    Either ``{"family": name, "params": {...}}`` or
    ``{"dims": [dim_a, dim_b], "matrix": [[[re, im], ...], ...]}``.
    """
    if not isinstance(spec, dict):
        raise SpecParseError("state spec must be a JSON object", field="state")
    if "family" in spec:
        name = spec["family"]
        fam = FAMILIES.get(name)
        if fam is None:
            raise SpecParseError(f"unknown family {name!r}", field="family")
        params = spec.get("params", {})
        if not isinstance(params, dict):
            raise SpecParseError("params must be an object", field="params")
        try:
            return fam.instantiate(**params)
        except TypeError as exc:
            raise SpecParseError(str(exc), field="params") from exc
    if "matrix" in spec:
        dims = spec.get("dims")
        if (not isinstance(dims, (list, tuple)) or len(dims) != 2
                or not all(isinstance(d, int) and d > 0 for d in dims)):
            raise SpecParseError("dims must be a pair of positive integers", field="dims")
        m = parse_complex_matrix(spec["matrix"], where="matrix")
        return DensityMatrix(int(dims[0]), int(dims[1]), m)
    raise SpecParseError("state spec needs either 'family' or 'matrix'", field="state")
