"""Martingale-difference kernels and the Psi / Phi norms on K_k = {S^k -> R}.

A :class:`KernelFn` is a signed function on S^k stored as a ``(|S|,)*k``
array (``k = 0`` is a scalar). The Phi-norm is the maximum of
``|<kappa, phi>|`` over 1-Lipschitz ``phi`` with range ``[0, k]``; two exact
routes are provided:

* :func:`phi_norm_oracle` enumerates every integer-valued candidate. The
  neighbor constraints of the Hamming graph form a network matrix, so the
  polytope's vertices are integral and the enumeration visits all of them.
* :func:`phi_norm_lp` solves the same linear program with HiGHS, for sizes
  the enumeration cannot reach.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .errors import BudgetError, ConditioningError, ValidationError
from .functions import LipschitzFn
from .process import POSITIVE_TOL, JointDist, conditional

DEFAULT_ORACLE_BUDGET = 2**24


@dataclass(frozen=True, eq=False)
class KernelFn:
    values: np.ndarray
    size: int

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if any(dim != self.size for dim in values.shape):
            raise ValidationError(f"shape {values.shape} does not match alphabet size {self.size}")
        if not np.all(np.isfinite(values)):
            raise ValidationError("kernel entries must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_array(cls, values, size: int | None = None) -> "KernelFn":
        values = np.asarray(values, dtype=float)
        if size is None:
            if values.ndim == 0:
                raise ValidationError("alphabet size is required for a scalar kernel")
            size = values.shape[0]
        return cls(values, size)

    @property
    def k(self) -> int:
        return self.values.ndim

    def __neg__(self):
        return KernelFn(-self.values, self.size)

    def __add__(self, other):
        return KernelFn(self.values + other.values, self.size)

    def __mul__(self, a):
        return KernelFn(a * self.values, self.size)

    __rmul__ = __mul__

    def total(self) -> float:
        return float(self.values.sum())

    def positive_mass(self) -> float:
        return float(np.maximum(self.values, 0.0).sum())


def _table(phi) -> np.ndarray:
    if isinstance(phi, LipschitzFn):
        return phi.dense()
    if isinstance(phi, KernelFn):
        return phi.values
    return np.asarray(phi, dtype=float)


def inner(kappa: KernelFn, phi) -> float:
    table = _table(phi)
    if table.shape != kappa.values.shape:
        raise ValidationError(f"shape mismatch: {kappa.values.shape} vs {table.shape}")
    return float(np.sum(kappa.values * table))


def _suffix_law(dist: JointDist, prefix: tuple, j: int) -> np.ndarray:
    if j > dist.n:
        # the whole string is fixed; its "future" is the empty string
        if dist.prefix_mass(prefix) <= POSITIVE_TOL:
            raise ConditioningError(prefix)
        return np.ones(())
    return conditional(dist, prefix, j).mass


def kappa_pair(dist: JointDist, i: int, prefix: Sequence[int], w: int, w_hat: int) -> KernelFn:
    """Kernel of the pairwise difference E[phi | y w] - E[phi | y w_hat]."""
    prefix = tuple(prefix)
    n, s = dist.n, dist.alphabet.size
    if not 1 <= i <= n or len(prefix) != i - 1:
        raise ValidationError(f"need 1 <= i <= n and a prefix of length i-1, got i={i}")
    values = np.zeros((s,) * n)
    values[prefix + (w,)] += _suffix_law(dist, prefix + (w,), i + 1)
    values[prefix + (w_hat,)] -= _suffix_law(dist, prefix + (w_hat,), i + 1)
    return KernelFn(values, s)


def kappa_prefix(dist: JointDist, z: Sequence[int]) -> KernelFn:
    """Kernel of V_i(phi; z^i) = E[phi | X^i = z^i] - E[phi | X^{i-1} = z^{i-1}]."""
    z = tuple(z)
    n, s, i = dist.n, dist.alphabet.size, len(z)
    if not 1 <= i <= n:
        raise ValidationError(f"prefix length must be in 1..{n}")
    values = np.zeros((s,) * n)
    values[z] += _suffix_law(dist, z, i + 1)
    values[z[:-1]] -= _suffix_law(dist, z[:-1], i)
    return KernelFn(values, s)


def _conditional_means(dist: JointDist, tables: np.ndarray, i: int):
    """E[phi | X^i] for a batch of tables: returns (means (m, s^i), ok (s^i,))."""
    s, n = dist.alphabet.size, dist.n
    m = tables.shape[0]
    mass = np.asarray(dist.mass).reshape(s**i, s ** (n - i))
    num = (tables.reshape(m, s**i, s ** (n - i)) * mass).sum(axis=2)
    den = mass.sum(axis=1)
    ok = den > POSITIVE_TOL
    means = np.divide(num, den, out=np.zeros_like(num), where=ok)
    return means, ok


def sup_norms(dist: JointDist, tables: np.ndarray, i: int) -> np.ndarray:
    """||V_i(phi)||_inf for every table in a ``(m, |S|,...)`` batch."""
    s, n = dist.alphabet.size, dist.n
    if not 1 <= i <= n:
        raise ValidationError(f"coordinate {i} out of range 1..{n}")
    tables = np.asarray(tables, dtype=float).reshape(-1, s**n)
    cur, ok = _conditional_means(dist, tables, i)
    prev, _ = _conditional_means(dist, tables, i - 1)
    diff = cur.reshape(-1, s ** (i - 1), s) - prev[:, :, None]
    diff = np.abs(diff.reshape(-1, s**i))[:, ok]
    return diff.max(axis=1) if diff.shape[1] else np.zeros(tables.shape[0])


def _cond_mean(dist: JointDist, table: np.ndarray, prefix: tuple) -> float:
    block = dist.mass[prefix] if prefix else np.asarray(dist.mass)
    total = block.sum()
    if total <= POSITIVE_TOL:
        raise ConditioningError(prefix)
    sub = table[prefix] if prefix else table
    return float((block * sub).sum() / total)


def martingale_diff(dist: JointDist, phi, i: int, mode: str = "sup-norm", *,
                    z: Sequence[int] | None = None, prefix: Sequence[int] | None = None,
                    w: int | None = None, w_hat: int | None = None) -> float:
    """Martingale differences of phi under dist, from conditional expectations.

    ``mode="at-point"`` gives V_i(phi; z); ``"sup-norm"`` gives
    max_z |V_i(phi; z)| over positive-probability z; ``"pairwise"`` gives
    E[phi | prefix w] - E[phi | prefix w_hat].
    """
    table = _table(phi)
    if table.shape != dist.mass.shape:
        raise ValidationError("function and distribution live on different spaces")
    if not 1 <= i <= dist.n:
        raise ValidationError(f"coordinate {i} out of range 1..{dist.n}")
    if mode == "at-point":
        z = tuple(z)
        if len(z) != i:
            raise ValidationError(f"z must have length {i}")
        return _cond_mean(dist, table, z) - _cond_mean(dist, table, z[:-1])
    if mode == "pairwise":
        prefix = tuple(prefix)
        if len(prefix) != i - 1:
            raise ValidationError(f"prefix must have length {i - 1}")
        return _cond_mean(dist, table, prefix + (w,)) - _cond_mean(dist, table, prefix + (w_hat,))
    if mode == "sup-norm":
        return float(sup_norms(dist, table[None], i)[0])
    raise ValidationError(f"unknown mode {mode!r}")


def project(kappa: KernelFn) -> KernelFn:
    """Sum out the first coordinate."""
    if kappa.k < 1:
        raise ValidationError("cannot project a scalar")
    return KernelFn(kappa.values.sum(axis=0), kappa.size)


def section(kappa: KernelFn, y: int) -> KernelFn:
    """Fix the last coordinate at ``y``."""
    if kappa.k < 1:
        raise ValidationError("cannot section a scalar")
    if not 0 <= y < kappa.size:
        raise ValidationError(f"unknown symbol index {y}")
    return KernelFn(kappa.values[..., y], kappa.size)


def prefix_reduce(kappa: KernelFn, z: Sequence[int]) -> KernelFn:
    """(T_z kappa)(x) = kappa(z x)."""
    z = tuple(z)
    if len(z) >= kappa.k and kappa.k > 0:
        raise ValidationError(f"prefix of length {len(z)} too long for a length-{kappa.k} kernel")
    return KernelFn(kappa.values[z] if z else kappa.values, kappa.size)


def psi_levels(kappa: KernelFn) -> list[float]:
    """Positive mass of kappa, kappa', kappa'', ... down to length one."""
    levels = []
    v = kappa.values
    while v.ndim >= 1:
        levels.append(float(np.maximum(v, 0.0).sum()))
        v = v.sum(axis=0)
    return levels


def psi(kappa: KernelFn) -> float:
    return float(sum(psi_levels(kappa)))


def psi_norm(kappa: KernelFn) -> float:
    return max(psi(kappa), psi(-kappa))


class PhiNorm(NamedTuple):
    value: float
    argmax: LipschitzFn
    index: int | None  # mixed-radix candidate index, None for the LP route


def _neighbor_pairs(size: int, k: int) -> np.ndarray:
    """Undirected Hamming-1 pairs (a, b), a < b, over row-major cell indices."""
    cells = np.arange(size**k).reshape((size,) * k)
    pairs = []
    for axis in range(k):
        moved = np.moveaxis(cells, axis, -1).reshape(-1, size)
        for u in range(size):
            for v in range(u + 1, size):
                pairs.append(np.stack([moved[:, u], moved[:, v]], axis=1))
    if not pairs:
        return np.zeros((0, 2), dtype=int)
    out = np.concatenate(pairs)
    return np.sort(out, axis=1)


def candidate_count(size: int, k: int) -> int:
    return (k + 1) ** (size**k)


@lru_cache(maxsize=16)
def _vertices(size: int, k: int) -> np.ndarray:
    cells = size**k
    pairs = _neighbor_pairs(size, k)
    earlier = [pairs[pairs[:, 1] == c, 0] for c in range(cells)]
    values = np.arange(k + 1, dtype=np.int8)
    partial = values[:, None]
    for c in range(1, cells):
        m = partial.shape[0]
        grown = np.empty((m * (k + 1), c + 1), dtype=np.int8)
        grown[:, :c] = np.repeat(partial, k + 1, axis=0)
        grown[:, c] = np.tile(values, m)
        nb = earlier[c]
        if len(nb):
            gap = np.abs(grown[:, nb].astype(np.int16) - grown[:, c, None])
            grown = grown[(gap <= 1).all(axis=1)]
        partial = grown
    partial.setflags(write=False)
    return partial


def lipschitz_vertices(size: int, k: int, budget: int | None = None) -> np.ndarray:
    """All integer 1-Lipschitz functions S^k -> {0..k}, in mixed-radix order.

    Rows are flattened row-major tables; the first cell is the most
    significant digit, so row order equals candidate-index order.
    """
    budget = DEFAULT_ORACLE_BUDGET if budget is None else budget
    if k < 1:
        raise ValidationError("Lipschitz vertices need k >= 1")
    count = candidate_count(size, k)
    if count > budget:
        raise BudgetError(count, budget)
    return _vertices(size, k)


def _candidate_index(row: np.ndarray, k: int) -> int:
    idx = 0
    for v in row.tolist():
        idx = idx * (k + 1) + int(v)
    return idx


def phi_norm_oracle(kappa: KernelFn, budget: int | None = None) -> PhiNorm:
    """Exact Phi-norm by exhaustive enumeration; ties go to the first candidate."""
    if kappa.k == 0:
        return PhiNorm(0.0, None, None)
    verts = lipschitz_vertices(kappa.size, kappa.k, budget)
    scores = np.abs(verts @ kappa.values.ravel())
    best = int(np.argmax(scores))
    row = verts[best]
    argmax = LipschitzFn.from_table(row.reshape(kappa.values.shape).astype(float), name="vertex")
    return PhiNorm(float(scores[best]), argmax, _candidate_index(row, kappa.k))


def _lp_max(c: np.ndarray, A, k: int):
    res = linprog(-c, A_ub=A, b_ub=np.ones(A.shape[0]), bounds=(0, k), method="highs-ds")
    if res.status != 0:
        raise RuntimeError(f"linear program failed: {res.message}")
    x = res.x
    rounded = np.rint(x)
    # vertices are integral; prefer the exact score of the rounded vertex
    if np.all(np.abs(x - rounded) < 1e-6):
        x = rounded
    return float(c @ x), x


def phi_norm_lp(kappa: KernelFn) -> PhiNorm:
    """Exact Phi-norm as a linear program over the Lipschitz polytope."""
    if kappa.k == 0:
        return PhiNorm(0.0, None, None)
    size, k = kappa.size, kappa.k
    pairs = _neighbor_pairs(size, k)
    rows = np.arange(2 * len(pairs))
    cols_pos = np.concatenate([pairs[:, 0], pairs[:, 1]])
    cols_neg = np.concatenate([pairs[:, 1], pairs[:, 0]])
    A = sparse.csr_matrix(
        (np.concatenate([np.ones(len(rows)), -np.ones(len(rows))]),
         (np.concatenate([rows, rows]), np.concatenate([cols_pos, cols_neg]))),
        shape=(len(rows), size**k),
    )
    c = kappa.values.ravel()
    up, x_up = _lp_max(c, A, k)
    down, x_down = _lp_max(-c, A, k)
    value, x = (up, x_up) if up >= down else (down, x_down)
    argmax = LipschitzFn.from_table(x.reshape(kappa.values.shape), name="lp-vertex")
    return PhiNorm(value, argmax, None)


def phi_norm(kappa: KernelFn, method: str = "auto", budget: int | None = None) -> PhiNorm:
    """Dispatch to the enumeration oracle when affordable, else the LP."""
    if method == "oracle":
        return phi_norm_oracle(kappa, budget)
    if method == "lp":
        return phi_norm_lp(kappa)
    if method != "auto":
        raise ValidationError(f"unknown method {method!r}")
    limit = DEFAULT_ORACLE_BUDGET if budget is None else budget
    if kappa.k == 0 or candidate_count(kappa.size, kappa.k) <= min(limit, 2**17):
        return phi_norm_oracle(kappa, budget)
    return phi_norm_lp(kappa)
