"""Finite-alphabet process models.

Distributions over S^k are dense numpy arrays of shape ``(|S|,) * k``; the
array index *is* the mixed-radix multi-index, so ``mass[x1, ..., xk]`` is the
probability of the string ``x1 ... xk`` and ``mass.ravel()`` is the row-major
flat layout used by the JSON spec format.

Coordinates are 1-based in every public signature (``i``, ``j`` refer to
``X_i``, ``X_j``); symbols are 0-based integer indices into the alphabet.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError, ConditioningError, ValidationError

NORMALIZATION_TOL = 1e-12
POSITIVE_TOL = 1e-300
DEFAULT_CELL_BUDGET = 2**24


def cell_budget() -> int:
    """Dense-table cell limit; ``MIXCONC_BUDGET`` overrides the default."""
    raw = os.environ.get("MIXCONC_BUDGET")
    if raw is None:
        return DEFAULT_CELL_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(f"MIXCONC_BUDGET must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValidationError("MIXCONC_BUDGET must be positive")
    return value


def check_capacity(cells: int, budget: int | None = None) -> None:
    budget = cell_budget() if budget is None else budget
    if cells > budget:
        raise CapacityError(cells, budget)


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if len(symbols) == 0:
            raise ValidationError("alphabet must contain at least one symbol")
        if len(set(symbols)) != len(symbols):
            raise ValidationError(f"alphabet labels must be distinct: {symbols}")

    @classmethod
    def of_size(cls, size: int) -> "Alphabet":
        return cls(tuple(f"s{k + 1}" for k in range(size)))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def index(self, label) -> int:
        try:
            return self.symbols.index(label)
        except ValueError:
            raise ValidationError(f"unknown symbol {label!r}") from None

    def encode(self, labels: Sequence) -> tuple[int, ...]:
        return tuple(self.index(lab) for lab in labels)

    def decode(self, indices: Sequence[int]) -> tuple:
        return tuple(self.symbols[k] for k in indices)

    def prefix(self, m: int) -> "Alphabet":
        return Alphabet(self.symbols[:m])


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Pmf:
    """Probability mass function on S^k stored as a dense ``(|S|,)*k`` array."""

    alphabet: Alphabet
    mass: np.ndarray

    def __post_init__(self):
        mass = _frozen(self.mass)
        object.__setattr__(self, "mass", mass)
        s = self.alphabet.size
        if mass.ndim < 1 or any(dim != s for dim in mass.shape):
            raise ValidationError(f"mass shape {mass.shape} does not match alphabet size {s}")
        if not np.all(np.isfinite(mass)) or np.any(mass < 0):
            raise ValidationError("mass entries must be finite and nonnegative")
        total = mass.sum()
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValidationError(f"mass sums to {total!r}, not 1")

    @property
    def length(self) -> int:
        return self.mass.ndim

    def __getitem__(self, x):
        return float(self.mass[tuple(x)])


class JointDist(Pmf):
    """The law of the whole sequence (X_1, ..., X_n)."""

    @property
    def n(self) -> int:
        return self.mass.ndim

    def prefix_mass(self, prefix: Sequence[int]) -> float:
        """P{X^i = prefix}."""
        prefix = tuple(prefix)
        if len(prefix) == 0:
            return float(self.mass.sum())
        return float(self.mass[prefix].sum())

    def marginal(self, k: int) -> np.ndarray:
        """Law of the first ``k`` coordinates as a ``(|S|,)*k`` array."""
        axes = tuple(range(k, self.n))
        return self.mass.sum(axis=axes) if axes else np.asarray(self.mass)


def _check_stochastic(matrix, rows: int, cols: int, what: str) -> np.ndarray:
    m = np.array(matrix, dtype=float)
    if m.shape != (rows, cols):
        raise ValidationError(f"{what} has shape {m.shape}, expected {(rows, cols)}")
    if not np.all(np.isfinite(m)) or np.any(m < 0):
        raise ValidationError(f"{what} has negative or non-finite entries")
    bad = np.abs(m.sum(axis=1) - 1.0) > NORMALIZATION_TOL
    if np.any(bad):
        raise ValidationError(f"{what}: rows {np.flatnonzero(bad).tolist()} do not sum to 1")
    m.setflags(write=False)
    return m


def _check_pmf_vector(vec, size: int, what: str) -> np.ndarray:
    v = np.array(vec, dtype=float)
    if v.shape != (size,):
        raise ValidationError(f"{what} has shape {v.shape}, expected {(size,)}")
    if not np.all(np.isfinite(v)) or np.any(v < 0):
        raise ValidationError(f"{what} has negative or non-finite entries")
    if abs(v.sum() - 1.0) > NORMALIZATION_TOL:
        raise ValidationError(f"{what} sums to {v.sum()!r}, not 1")
    v.setflags(write=False)
    return v


@dataclass(frozen=True, eq=False)
class MarkovSpec:
    """Possibly inhomogeneous Markov chain of length ``n``.

    ``kernels[k-1]`` is the matrix P^(k) with ``P[x, y] = p_k(y | x)``. With
    ``homogeneous=True`` a single matrix is reused for every step.
    """

    alphabet: Alphabet
    n: int
    p0: np.ndarray
    kernels: tuple
    homogeneous: bool = False

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError(f"sequence length must be a positive integer, got {self.n}")
        s = self.alphabet.size
        object.__setattr__(self, "p0", _check_pmf_vector(self.p0, s, "p0"))
        kernels = tuple(
            _check_stochastic(k, s, s, f"kernel {idx + 1}") for idx, k in enumerate(self.kernels)
        )
        expected = 1 if self.homogeneous else self.n - 1
        if self.homogeneous and self.n == 1 and len(kernels) == 0:
            expected = 0
        if len(kernels) != expected:
            raise ValidationError(f"expected {expected} kernels, got {len(kernels)}")
        object.__setattr__(self, "kernels", kernels)

    @classmethod
    def homogeneous_chain(cls, alphabet, n, p0, kernel) -> "MarkovSpec":
        return cls(alphabet, n, p0, (kernel,), homogeneous=True)

    def kernel(self, k: int) -> np.ndarray:
        """Transition matrix of step ``k`` (1 <= k <= n-1)."""
        if not 1 <= k <= self.n - 1:
            raise ValidationError(f"step {k} out of range 1..{self.n - 1}")
        return self.kernels[0] if self.homogeneous else self.kernels[k - 1]

    def step_kernels(self) -> list[np.ndarray]:
        return [self.kernel(k) for k in range(1, self.n)]

    def marginals(self) -> np.ndarray:
        """``(n, |S|)`` array of the one-dimensional laws of X_1..X_n."""
        out = np.empty((self.n, self.alphabet.size))
        out[0] = self.p0
        for k in range(1, self.n):
            out[k] = out[k - 1] @ self.kernel(k)
        return out

    def full_support(self) -> bool:
        return all(np.all(P > 0) for P in self.step_kernels())


@dataclass(frozen=True, eq=False)
class HmmSpec:
    """Hidden Markov chain: a Markov chain on a hidden alphabet plus emissions.

    ``emissions[l-1][h, x] = q_l(x | h)``; ``homogeneous_emissions`` reuses a
    single matrix for every step.
    """

    hidden: MarkovSpec
    alphabet: Alphabet
    emissions: tuple
    homogeneous_emissions: bool = False

    def __post_init__(self):
        rows, cols = self.hidden.alphabet.size, self.alphabet.size
        emissions = tuple(
            _check_stochastic(q, rows, cols, f"emission {idx + 1}")
            for idx, q in enumerate(self.emissions)
        )
        expected = 1 if self.homogeneous_emissions else self.hidden.n
        if len(emissions) != expected:
            raise ValidationError(f"expected {expected} emission matrices, got {len(emissions)}")
        object.__setattr__(self, "emissions", emissions)

    @property
    def n(self) -> int:
        return self.hidden.n

    def emission(self, ell: int) -> np.ndarray:
        if not 1 <= ell <= self.n:
            raise ValidationError(f"step {ell} out of range 1..{self.n}")
        return self.emissions[0] if self.homogeneous_emissions else self.emissions[ell - 1]


def build_markov_joint(spec: MarkovSpec, budget: int | None = None) -> JointDist:
    s, n = spec.alphabet.size, spec.n
    check_capacity(s**n, budget)
    mass = np.asarray(spec.p0, dtype=float)
    for k in range(1, n):
        # broadcast P(x^k) * p_k(x_{k+1} | x_k)
        mass = mass[..., None] * spec.kernel(k)[(None,) * (k - 1)]
    return JointDist(spec.alphabet, mass)


def build_hmm_joint(spec: HmmSpec, budget: int | None = None) -> tuple[JointDist, JointDist]:
    """Return ``(pair_joint, observed_joint)``.

    ``pair_joint`` lives on the product alphabet of ``(hidden, observed)``
    label pairs, pair ``(h, x)`` having index ``h * |S| + x``;
    ``observed_joint`` is its S^n marginal.
    """
    h, s, n = spec.hidden.alphabet.size, spec.alphabet.size, spec.n
    check_capacity((h * s) ** n, budget)
    # mass over (h_1, x_1, ..., h_k, x_k), carried forward one step at a time
    mass = spec.hidden.p0[:, None] * spec.emission(1)
    for k in range(1, n):
        P = spec.hidden.kernel(k)
        Q = spec.emission(k + 1)
        # (h_k, [x_k], h_{k+1}, x_{k+1}); broadcasts against mass[..., h_k, x_k, None, None]
        step = P[:, None, :, None] * Q[None, None, :, :]
        mass = mass[..., None, None] * step
    observed = mass.sum(axis=tuple(range(0, 2 * n, 2)))
    pairs = Alphabet(tuple((a, b) for a in spec.hidden.alphabet.symbols for b in spec.alphabet.symbols))
    pair = JointDist(pairs, mass.reshape((h * s,) * n))
    return pair, JointDist(spec.alphabet, observed)


def conditional(dist: JointDist, prefix: Sequence[int], j: int) -> Pmf:
    """Law of X_j^n given X^i = prefix, where i = len(prefix) < j."""
    prefix = tuple(prefix)
    i, n = len(prefix), dist.n
    if not i < j <= n:
        raise ValidationError(f"need len(prefix) < j <= n, got i={i}, j={j}, n={n}")
    block = dist.mass[prefix] if prefix else np.asarray(dist.mass)
    total = block.sum()
    if total <= POSITIVE_TOL:
        raise ConditioningError(prefix)
    skipped = tuple(range(j - i - 1))
    if skipped:
        block = block.sum(axis=skipped)
    return Pmf(dist.alphabet, block / total)


def tv_distance(p: Pmf, q: Pmf) -> float:
    pm = p.mass if isinstance(p, Pmf) else np.asarray(p, dtype=float)
    qm = q.mass if isinstance(q, Pmf) else np.asarray(q, dtype=float)
    if pm.shape != qm.shape:
        raise ValidationError(f"shape mismatch: {pm.shape} vs {qm.shape}")
    return float(np.clip(np.maximum(pm - qm, 0.0).sum(), 0.0, 1.0))


def truncate(dist: JointDist, m: int) -> JointDist:
    """m-truncation: keep S_m^n, dump the remaining mass on (s_m, ..., s_m)."""
    s, n = dist.alphabet.size, dist.n
    if not 1 <= m <= s:
        raise ValidationError(f"truncation level {m} out of range 1..{s}")
    inside = (slice(0, m),) * n
    kept = np.array(dist.mass[inside])
    outside = np.array(dist.mass)
    outside[inside] = 0.0
    kept[(m - 1,) * n] += outside.sum()
    return JointDist(dist.alphabet.prefix(m), kept)


def outside_mass(dist: JointDist, m: int) -> float:
    """P(S^n minus S_m^n), the right-hand side of the truncation TV bound."""
    outside = np.array(dist.mass)
    outside[(slice(0, m),) * dist.n] = 0.0
    return float(outside.sum())


def embed(dist: JointDist, alphabet: Alphabet) -> JointDist:
    """Pad a distribution on a prefix alphabet with zeros up to ``alphabet``."""
    m, n = dist.alphabet.size, dist.n
    if alphabet.symbols[:m] != dist.alphabet.symbols:
        raise ValidationError("target alphabet does not extend the source alphabet")
    mass = np.zeros((alphabet.size,) * n)
    mass[(slice(0, m),) * n] = dist.mass
    return JointDist(alphabet, mass)


def product_joint(alphabet: Alphabet, marginals: Sequence[Sequence[float]]) -> JointDist:
    """Independent coordinates with the given one-dimensional laws."""
    mass = np.ones(())
    for p in marginals:
        mass = np.multiply.outer(mass, _check_pmf_vector(p, alphabet.size, "marginal"))
    return JointDist(alphabet, mass)
