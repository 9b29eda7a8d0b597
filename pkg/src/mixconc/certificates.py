"""Concentration certificates: Azuma-type tail bounds built from mixing constants.

All bounds are returned raw and may exceed 1; :attr:`Certificate.effective`
clips to a probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OutOfValidityError, ValidationError
from .mixing import ContractionProfile, MixingProfile

METRICS = ("hamming", "normalized-hamming")
CONSTANT_KINDS = ("delta", "mn", "explicit")
LN4 = math.log(4.0)


def _check_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise ValidationError(f"{name} must be a positive finite number, got {value!r}")
    return value


def _check_t(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t < 0):
        raise ValidationError("deviation t must be finite and nonnegative")
    return t


def _scalar(out):
    return float(out) if np.ndim(out) == 0 else out


def azuma_bound(D: float, r):
    """2 exp(-r^2 / (2 D^2)); the caller guarantees D^2 >= sum_i ||V_i||_inf^2."""
    D = _check_positive("D", D)
    r = _check_t(r)
    return _scalar(2.0 * np.exp(-(r**2) / (2.0 * D * D)))


@dataclass(frozen=True)
class Certificate:
    """Tail bound P{|phi - E phi| >= t} <= 2 exp(-t^2 / (2 n c^2 C^2)).

    With the normalized metric the deviation is measured in units of 1/n,
    which turns the exponent into ``-n t^2 / (2 c^2 C^2)``.
    """

    n: int
    c: float
    metric: str = "hamming"
    constant_kind: str = "delta"
    constant: float = 1.0
    note: str = ""

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError(f"n must be a positive integer, got {self.n}")
        _check_positive("c", self.c)
        _check_positive("constant", self.constant)
        if self.metric not in METRICS:
            raise ValidationError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.constant_kind not in CONSTANT_KINDS:
            raise ValidationError(f"constant kind must be one of {CONSTANT_KINDS}")
        if self.constant_kind != "explicit" and self.constant < 1.0 - 1e-12:
            raise ValidationError(f"{self.constant_kind} constant must be >= 1, got {self.constant}")

    @property
    def scale(self) -> float:
        """D in the Azuma form, for the t units of this metric."""
        if self.metric == "hamming":
            return math.sqrt(self.n) * self.c * self.constant
        return self.c * self.constant / math.sqrt(self.n)

    def bound(self, t):
        return azuma_bound(self.scale, t)

    def effective(self, t):
        return _scalar(np.minimum(self.bound(t), 1.0))

    def to_dict(self, t_grid=None) -> dict:
        out = {
            "n": self.n,
            "c": self.c,
            "metric": self.metric,
            "constant_kind": self.constant_kind,
            "constant": self.constant,
        }
        if self.note:
            out["note"] = self.note
        if t_grid is not None:
            t = np.asarray(t_grid, dtype=float)
            out["t_grid"] = t.tolist()
            out["bound"] = np.atleast_1d(self.bound(t)).tolist()
            out["effective"] = np.atleast_1d(self.effective(t)).tolist()
        return out


def general_certificate(profile: MixingProfile, c: float) -> Certificate:
    return Certificate(profile.n, c, "hamming", "delta", profile.inf_norm,
                       note="row-sum norm of the mixing matrix")


def markov_certificate(profile: ContractionProfile, c: float, metric: str = "hamming") -> Certificate:
    return Certificate(profile.n, c, metric, "mn", profile.m_n,
                       note="contraction-coefficient surrogate")


def certify_general(profile: MixingProfile, c: float, t):
    """2 exp(-t^2 / (2 n c^2 ||Delta_n||^2)) for c-Lipschitz phi in the Hamming metric."""
    return general_certificate(profile, c).bound(t)


def certify_markov(profile: ContractionProfile, c: float, t, metric: str = "hamming"):
    """Markov-chain bound with M_n in place of ||Delta_n||."""
    return markov_certificate(profile, c, metric).bound(t)


def concentration_alpha(profile: MixingProfile, t):
    """alpha(t) = 2 exp(-n t^2 / (2 ||Delta_n||^2)), normalized-metric 1-Lipschitz phi."""
    return Certificate(profile.n, 1.0, "normalized-hamming", "delta", profile.inf_norm).bound(t)


def alpha_inverse_half(profile: MixingProfile) -> float:
    """t_0 with alpha(t_0) = 1/2, i.e. ||Delta_n|| sqrt(2 ln 4 / n)."""
    return profile.inf_norm * math.sqrt(2.0 * LN4 / profile.n)


def median_bound(profile: MixingProfile, t):
    """Deviation bound around a median: alpha(t - t_0), valid only for t > t_0."""
    t = _check_t(t)
    t0 = alpha_inverse_half(profile)
    if np.any(t <= t0):
        bad = float(np.min(t))
        raise OutOfValidityError(bad, t0)
    return concentration_alpha(profile, t - t0)
