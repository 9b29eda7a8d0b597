"""BAR (binary additive representation) extremal functions for Markov measures.

A BAR function is ``phi(x) = sum_l mu_l(x_l)`` with bit-valued ``mu_l``. For a
full-support Markov measure, the kernel of V_1(phi; z) is
``sigma(x_1) * prod_k p_k(x_{k+1} | x_k)`` and each marginal projection keeps
that shape with sign function ``sigma <- sigma^T P``. Thresholding the sign
functions at zero gives a BAR function whose pairing with the kernel equals
its Psi functional.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .functions import LipschitzFn
from .mixing import apply_kernel_transpose
from .norms import (
    KernelFn,
    kappa_prefix,
    martingale_diff,
    phi_norm,
    prefix_reduce,
    psi,
    psi_norm,
)
from .process import POSITIVE_TOL, MarkovSpec, build_markov_joint

BAR_COUNT_LIMIT = 62


class ExtremalityWarning(UserWarning):
    """The chain lacks full support, so the BAR construction may not be extremal."""


@dataclass(frozen=True, eq=False)
class BarFunction:
    bits: np.ndarray  # (n, |S|) of 0/1

    def __post_init__(self):
        bits = np.array(self.bits, dtype=np.int8)
        if bits.ndim != 2 or not np.isin(bits, (0, 1)).all():
            raise ValidationError("BAR bits must be an (n, |S|) 0/1 matrix")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    @property
    def size(self) -> int:
        return self.bits.shape[1]

    def __call__(self, x) -> int:
        return int(self.bits[np.arange(self.n), list(x)].sum())

    def table(self) -> np.ndarray:
        return self.as_lipschitz().dense()

    def as_lipschitz(self) -> LipschitzFn:
        return LipschitzFn.additive(self.bits.astype(float), name="bar:" + ",".join(self.rows()))

    def rows(self) -> list[str]:
        return ["".join(str(int(b)) for b in row) for row in self.bits]

    def to_text(self) -> str:
        return "\n".join(self.rows()) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BarFunction":
        rows = [line.strip() for line in text.strip().splitlines() if line.strip()]
        if not rows or len({len(r) for r in rows}) != 1 or any(set(r) - {"0", "1"} for r in rows):
            raise ValidationError(f"malformed BAR text {text!r}")
        return cls(np.array([[int(ch) for ch in r] for r in rows]))


def _check_support(kernels) -> None:
    if not all(np.all(P > 0) for P in kernels):
        warnings.warn("kernels lack full support; BAR extremality is not guaranteed",
                      ExtremalityWarning, stacklevel=3)


def propagate_signs(seed: np.ndarray, kernels) -> list[np.ndarray]:
    """sigma^(L), sigma^(L-1), ..., sigma^(1) from a seed and L-1 step kernels."""
    sigmas = [np.asarray(seed, dtype=float)]
    for P in kernels:
        sigmas.append(apply_kernel_transpose(sigmas[-1], P))
    return sigmas


def sign_sequence(spec: MarkovSpec, z: int, i: int = 1, prefix=()) -> list[np.ndarray]:
    """Sign functions of kappa[z^i] and its successive projections.

    At ``i = 1`` the seed is ``1{y = z} - p0(y)``; for ``i > 1`` it is
    ``1{y = z} - p_{i-1}(y | prefix[-1])`` and the kernels are those of steps
    ``i .. n-1`` (the prefix-reduced kernel).
    """
    s, n = spec.alphabet.size, spec.n
    if not 1 <= i <= n:
        raise ValidationError(f"coordinate {i} out of range 1..{n}")
    if not 0 <= z < s:
        raise ValidationError(f"symbol index {z} out of range")
    prefix = tuple(prefix)
    if len(prefix) != i - 1:
        raise ValidationError(f"prefix must have length {i - 1}")
    base = spec.p0 if i == 1 else spec.kernel(i - 1)[prefix[-1]]
    seed = np.eye(s)[z] - base
    kernels = [spec.kernel(k) for k in range(i, n)]
    _check_support(kernels)
    return propagate_signs(seed, kernels)


def bar_from_signs(sigmas, tol: float = 0.0) -> BarFunction:
    """mu_l(x) = 1{sigma^(L-l+1)(x) > tol}; ``sigmas`` ordered from level L down."""
    return BarFunction(np.stack([(np.asarray(sig) > tol).astype(np.int8) for sig in sigmas]))


def build_bar(spec: MarkovSpec, z: int, sign: int = 1, tol: float = 0.0) -> BarFunction:
    """BAR function attaining Psi(sign * kappa[z]) for i = 1."""
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    sigmas = sign_sequence(spec, z)
    return bar_from_signs([sign * sig for sig in sigmas], tol)


def embed_bar(reduced: BarFunction, n: int) -> BarFunction:
    """Pad a BAR function on the last L coordinates with zero rows in front."""
    pad = np.zeros((n - reduced.n, reduced.size), dtype=np.int8)
    return BarFunction(np.vstack([pad, reduced.bits]))


@dataclass
class ExtremalReport:
    i: int
    lhs: float  # ||V_i(bar)||_inf
    rhs: float  # max_z ||T kappa[z^i]||_Psi
    gap: float
    phi_max: float  # max_z ||kappa[z^i]||_Phi
    dominates: bool
    argmax_prefix: tuple
    sign: int
    bar: BarFunction
    equality_gaps: list = field(default_factory=list)  # per z: |<kappa, bar_z> - Psi|
    psi_full_max: float = 0.0  # max_z ||kappa[z^i]||_Psi on the unreduced kernel
    phi_method: str = "oracle"

    def to_dict(self) -> dict:
        return {
            "i": self.i,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "phi_max": self.phi_max,
            "dominates": self.dominates,
            "argmax_prefix": list(self.argmax_prefix),
            "sign": self.sign,
            "bar": self.bar.rows(),
            "max_equality_gap": max(self.equality_gaps, default=0.0),
            "psi_full_max": self.psi_full_max,
            "phi_method": self.phi_method,
        }


def verify_extremal(spec: MarkovSpec, i: int = 1, phi_method: str = "oracle",
                    budget: int | None = None, tol: float = 1e-9) -> ExtremalReport:
    """Check the BAR extremality chain at coordinate ``i``.

    For every positive-probability ``z^i`` the kernel ``kappa[z^i]`` is
    prefix-reduced to length ``L = n - i + 1``, its two signed BAR functions
    are built from the sign recursion, and the one with the largest pairing
    is embedded back into S^n. ``lhs`` is the sup-norm martingale difference
    of that BAR function computed from conditional expectations; ``rhs`` is
    the largest reduced Psi-norm; ``phi_max`` is the largest Phi-norm.
    """
    n = spec.n
    if not 1 <= i <= n:
        raise ValidationError(f"coordinate {i} out of range 1..{n}")
    joint = build_markov_joint(spec)
    s = spec.alphabet.size
    if not spec.full_support():
        warnings.warn("kernels lack full support; BAR extremality is not guaranteed",
                      ExtremalityWarning, stacklevel=2)
    best = (-1.0, None, 1, None)
    phi_max, psi_full, gaps = 0.0, 0.0, []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ExtremalityWarning)
        for z in itertools.product(range(s), repeat=i):
            if joint.prefix_mass(z) <= POSITIVE_TOL:
                continue
            kappa = kappa_prefix(joint, z)
            reduced = prefix_reduce(kappa, z[:-1])
            sigmas = sign_sequence(spec, z[-1], i, z[:-1])
            for sign in (1, -1):
                bar = bar_from_signs([sign * sig for sig in sigmas])
                value = sign * _pair(reduced, bar)
                gaps.append(abs(value - psi(sign * reduced)))
                if value > best[0] + 1e-15:
                    best = (value, z, sign, bar)
            phi_max = max(phi_max, phi_norm(reduced, phi_method, budget).value)
            psi_full = max(psi_full, psi_norm(kappa))
    if best[1] is None:
        # no admissible prefix at all cannot happen for a valid joint
        raise ValidationError("no positive-probability prefix")
    rhs = max(psi_norm(prefix_reduce(kappa_prefix(joint, z), z[:-1]))
              for z in itertools.product(range(s), repeat=i)
              if joint.prefix_mass(z) > POSITIVE_TOL)
    full_bar = embed_bar(best[3], n)
    lhs = martingale_diff(joint, full_bar.as_lipschitz(), i, "sup-norm")
    return ExtremalReport(
        i=i, lhs=lhs, rhs=rhs, gap=abs(lhs - rhs), phi_max=phi_max,
        dominates=lhs >= phi_max - tol, argmax_prefix=best[1], sign=best[2], bar=full_bar,
        equality_gaps=gaps, psi_full_max=psi_full, phi_method=phi_method,
    )


def _pair(kappa: KernelFn, bar: BarFunction) -> float:
    return float(np.sum(kappa.values * bar.table()))


def bar_count(n: int, alphabet_size: int) -> int:
    """Number of BAR representations (bit matrices) on S^n: 2^(n|S|)."""
    if n < 1 or alphabet_size < 1:
        raise ValidationError("n and alphabet size must be positive")
    if n * alphabet_size > BAR_COUNT_LIMIT:
        raise ValidationError(f"n*|S| = {n * alphabet_size} exceeds {BAR_COUNT_LIMIT}")
    return 1 << (n * alphabet_size)


def enumerate_bars(n: int, alphabet_size: int):
    """Every BAR bit matrix, in lexicographic order."""
    for flat in itertools.product((0, 1), repeat=n * alphabet_size):
        yield BarFunction(np.array(flat).reshape(n, alphabet_size))
