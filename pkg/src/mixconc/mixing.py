"""Mixing coefficients eta_ij, the Delta_n matrix, and contraction bounds."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .process import POSITIVE_TOL, HmmSpec, JointDist, MarkovSpec, conditional, tv_distance

ZERO_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MixingProfile:
    n: int
    eta_bar: np.ndarray  # (n, n), unit diagonal, zero strict-lower part
    h_rows: np.ndarray
    inf_norm: float

    @classmethod
    def from_matrix(cls, eta_bar: np.ndarray) -> "MixingProfile":
        eta_bar = np.array(eta_bar, dtype=float)
        h = eta_bar.sum(axis=1)
        eta_bar.setflags(write=False)
        h.setflags(write=False)
        return cls(eta_bar.shape[0], eta_bar, h, float(h.max()))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "eta_bar": self.eta_bar.tolist(),
            "h_rows": self.h_rows.tolist(),
            "inf_norm": self.inf_norm,
        }


@dataclass(frozen=True, eq=False)
class ContractionProfile:
    thetas: np.ndarray
    m_n: float

    @property
    def n(self) -> int:
        return len(self.thetas) + 1

    def eta_bounds(self) -> np.ndarray:
        """Upper-triangular matrix of theta products; unit diagonal."""
        n = self.n
        out = np.eye(n)
        for i in range(n):
            prod = 1.0
            for j in range(i + 1, n):
                prod *= self.thetas[j - 1]
                out[i, j] = prod
        return out

    def to_dict(self) -> dict:
        return {"n": self.n, "thetas": self.thetas.tolist(), "m_n": self.m_n}


def _check_indices(i: int, j: int, n: int) -> None:
    if not (1 <= i < j <= n):
        raise ValidationError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={n}")


def eta(dist: JointDist, i: int, j: int, prefix: Sequence[int], w: int, w_hat: int) -> float:
    """TV distance between the laws of X_j^n given X^i = prefix+w and prefix+w_hat."""
    _check_indices(i, j, dist.n)
    prefix = tuple(prefix)
    if len(prefix) != i - 1:
        raise ValidationError(f"prefix must have length {i - 1}")
    p = conditional(dist, prefix + (w,), j)
    q = conditional(dist, prefix + (w_hat,), j)
    return tv_distance(p, q)


def _future_laws(dist: JointDist, i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
    """Conditional laws of X_j^n given X^i, laid out as (prefix, w, future).

    Returns ``(cond, ok)`` where ``ok[y, w]`` marks positive-probability
    conditioning events; rows with ``ok`` false are zero.
    """
    s, n = dist.alphabet.size, dist.n
    block = np.asarray(dist.mass)
    skipped = tuple(range(i, j - 1))
    if skipped:
        block = block.sum(axis=skipped)
    block = block.reshape(s ** (i - 1), s, s ** (n - j + 1))
    den = block.sum(axis=2)
    ok = den > POSITIVE_TOL
    cond = np.divide(block, den[..., None], out=np.zeros_like(block), where=ok[..., None])
    return cond, ok


def eta_bar(dist: JointDist, i: int, j: int) -> float:
    """Worst-case eta_ij over positive-probability prefixes; 0 if no admissible pair."""
    _check_indices(i, j, dist.n)
    cond, ok = _future_laws(dist, i, j)
    # (prefix, w, w_hat) positive-part sums
    tv = np.maximum(cond[:, :, None, :] - cond[:, None, :, :], 0.0).sum(axis=3)
    admissible = ok[:, :, None] & ok[:, None, :]
    if not admissible.any():
        return 0.0
    return float(np.clip(tv[admissible].max(), 0.0, 1.0))


def mixing_profile(dist: JointDist) -> MixingProfile:
    n = dist.n
    mat = np.eye(n)
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            mat[i - 1, j - 1] = eta_bar(dist, i, j)
    return MixingProfile.from_matrix(mat)


def theta(kernel) -> float:
    """Contraction coefficient: half the largest l1 distance between rows."""
    P = np.asarray(kernel, dtype=float)
    if P.ndim != 2 or P.shape[0] == 0:
        raise ValidationError(f"kernel must be a nonempty matrix, got shape {P.shape}")
    if np.any(P < 0) or not np.all(np.isfinite(P)) or np.any(np.abs(P.sum(axis=1) - 1) > 1e-12):
        raise ValidationError("kernel rows must be probability vectors")
    diffs = np.abs(P[:, None, :] - P[None, :, :]).sum(axis=2)
    return float(np.clip(0.5 * diffs.max(), 0.0, 1.0))


def contraction_profile(spec: MarkovSpec) -> ContractionProfile:
    thetas = np.array([theta(P) for P in spec.step_kernels()], dtype=float)
    # G_i = 1 + theta_i * G_{i+1}, G_n = 1; M_n = max_i G_i (empty max -> 1)
    g, m_n = 1.0, 1.0
    for th in thetas[::-1]:
        g = 1.0 + th * g
        m_n = max(m_n, g)
    thetas.setflags(write=False)
    return ContractionProfile(thetas, float(m_n))


def _theta_product(spec: MarkovSpec, i: int, j: int) -> float:
    _check_indices(i, j, spec.n)
    return float(np.prod([theta(spec.kernel(k)) for k in range(i, j)]))


def markov_eta_bound(spec: MarkovSpec, i: int, j: int) -> float:
    """theta_i * ... * theta_{j-1}, an upper bound on eta_bar_ij for a Markov chain."""
    return _theta_product(spec, i, j)


def hmm_eta_bound(spec: HmmSpec, i: int, j: int) -> float:
    """Hidden-chain theta product, an upper bound on the observed chain's eta_bar_ij."""
    return _theta_product(spec.hidden, i, j)


def apply_kernel_transpose(u, kernel) -> np.ndarray:
    """u^T P for a zero-sum vector u; contracts l1 norm by theta(P)."""
    u = np.asarray(u, dtype=float)
    P = np.asarray(kernel, dtype=float)
    if u.ndim != 1 or P.shape[0] != u.shape[0]:
        raise ValidationError(f"vector of length {u.shape} does not match kernel {P.shape}")
    if abs(u.sum()) > ZERO_SUM_TOL:
        raise ValidationError(f"input must sum to zero, sums to {u.sum()!r}")
    return u @ P
