"""Path sampling, empirical deviation tails, and comparison with certificates.

Randomness is counter based: the uniform used by path ``k`` at step ``l`` on
stream ``r`` is a splitmix64 hash of ``(seed, k, l, r)``. A path is therefore
a pure function of the master seed and its index, and any split of the index
range across workers gives bit-identical batches.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .certificates import Certificate
from .errors import ConventionError, ValidationError
from .functions import LipschitzFn
from .process import HmmSpec, JointDist, MarkovSpec, build_hmm_joint, build_markov_joint

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
STEP_SALT = np.uint64(0xD1B54A32D192ED03)
STREAM_SALT = np.uint64(0x8CB92BA72F3D8DD7)
TIE_TOL = 1e-12
CHUNK = 1 << 16


def _mix(x: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer on a uint64 array (wrapping arithmetic)."""
    x = x + GOLDEN
    x = (x ^ (x >> np.uint64(30))) * MIX1
    x = (x ^ (x >> np.uint64(27))) * MIX2
    return x ^ (x >> np.uint64(31))


def uniforms(seed: int, paths: np.ndarray, step: int, stream: int = 0) -> np.ndarray:
    """Uniforms in [0, 1) keyed by (seed, path index, step, stream)."""
    if not 0 <= int(seed) < 2**64:
        raise ValidationError("seed must fit in 64 unsigned bits")
    with np.errstate(over="ignore"):
        key = _mix(np.full(1, seed, dtype=np.uint64))
        key = _mix(key ^ (np.uint64(step) * STEP_SALT) ^ (np.uint64(stream) * STREAM_SALT))
        h = _mix(key ^ np.asarray(paths, dtype=np.uint64))
        h = _mix(h)
    return (h >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _draw(cdf_rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF draw; row k of ``cdf_rows`` is the cumulative law for draw k.

    Scaling by the row total keeps zero-mass symbols unreachable even when the
    cumulative sum stops just short of 1.
    """
    v = u * cdf_rows[:, -1]
    return (cdf_rows <= v[:, None]).sum(axis=1)


def _sample_chain(p0, kernel_at, n, seed, idx, stream):
    cdf0 = np.cumsum(p0)
    x = np.empty((len(idx), n), dtype=np.int64)
    x[:, 0] = _draw(np.broadcast_to(cdf0, (len(idx), len(cdf0))), uniforms(seed, idx, 0, stream))
    for k in range(1, n):
        cdf = np.cumsum(kernel_at(k), axis=1)
        x[:, k] = _draw(cdf[x[:, k - 1]], uniforms(seed, idx, k, stream))
    return x


def _sample_block(spec, seed, idx):
    if isinstance(spec, MarkovSpec):
        return _sample_chain(spec.p0, spec.kernel, spec.n, seed, idx, 0)
    hidden = _sample_chain(spec.hidden.p0, spec.hidden.kernel, spec.n, seed, idx, 0)
    obs = np.empty_like(hidden)
    for ell in range(spec.n):
        cdf = np.cumsum(spec.emission(ell + 1), axis=1)
        obs[:, ell] = _draw(cdf[hidden[:, ell]], uniforms(seed, idx, ell, 1))
    return obs


def sample_paths(spec: MarkovSpec | HmmSpec, seed: int, count: int, workers: int = 1,
                 start: int = 0) -> np.ndarray:
    """Ancestral sampling of ``count`` paths, shape ``(count, n)``.

    Path ``k`` uses only uniforms keyed by ``start + k``, so the batch is
    independent of ``workers`` and of how the range is chunked.
    """
    if not isinstance(spec, (MarkovSpec, HmmSpec)):
        raise ValidationError("sampling needs a MarkovSpec or HmmSpec")
    if int(count) != count or count < 1:
        raise ValidationError(f"count must be a positive integer, got {count}")
    if workers < 1:
        raise ValidationError("workers must be positive")
    bounds = [(a, min(a + CHUNK, count)) for a in range(0, count, CHUNK)]
    job = lambda ab: _sample_block(spec, seed, np.arange(start + ab[0], start + ab[1], dtype=np.uint64))
    if workers == 1 or len(bounds) == 1:
        blocks = [job(ab) for ab in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(job, bounds))
    return np.concatenate(blocks, axis=0)


def clopper_pearson_upper(k, count: int, confidence: float = 0.95) -> np.ndarray:
    """One-sided exact binomial upper confidence limit for k successes in count trials."""
    k = np.asarray(k, dtype=float)
    alpha = 1.0 - confidence
    with np.errstate(invalid="ignore"):
        upper = stats.beta.ppf(1.0 - alpha, k + 1.0, count - k)
    return np.where(k >= count, 1.0, upper)


def exact_mean(process, phi: LipschitzFn, budget: int | None = None) -> float:
    """E phi by marginal propagation for additive phi, by enumeration otherwise."""
    if phi.is_additive and isinstance(process, (MarkovSpec, HmmSpec)):
        if isinstance(process, MarkovSpec):
            marg = process.marginals()
        else:
            hid = process.hidden.marginals()
            marg = np.stack([hid[l] @ process.emission(l + 1) for l in range(process.n)])
        return float(np.sum(marg * phi.weights))
    dist = _as_joint(process, budget)
    return float(np.sum(dist.mass * phi.dense(budget)))


def _as_joint(process, budget=None) -> JointDist:
    if isinstance(process, JointDist):
        return process
    if isinstance(process, MarkovSpec):
        return build_markov_joint(process, budget)
    if isinstance(process, HmmSpec):
        return build_hmm_joint(process, budget)[1]
    raise ValidationError("expected a JointDist, MarkovSpec or HmmSpec")


@dataclass
class TailEstimate:
    t_grid: np.ndarray
    tail: np.ndarray
    upper: np.ndarray
    count: int
    seed: int | None
    mean: float
    mean_mode: str
    n: int
    c: float
    metric: str = "hamming"
    mean_slack: float = 0.0
    confidence: float = 0.95

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "c": self.c,
            "metric": self.metric,
            "count": self.count,
            "seed": self.seed,
            "mean": self.mean,
            "mean_mode": self.mean_mode,
            "mean_slack": self.mean_slack,
            "confidence": self.confidence,
            "t_grid": np.asarray(self.t_grid).tolist(),
            "empirical": np.asarray(self.tail).tolist(),
            "upper_conf": np.asarray(self.upper).tolist(),
        }


def _check_grid(t_grid) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if t.ndim != 1 or np.any(~np.isfinite(t)) or np.any(t < 0):
        raise ValidationError("t grid must be a 1-d array of nonnegative numbers")
    return t


def _exceed_counts(dev: np.ndarray, t: np.ndarray) -> np.ndarray:
    dev = np.sort(dev)
    # #{dev >= t} with a tiny tolerance so exact ties count as exceedances
    return len(dev) - np.searchsorted(dev, t - TIE_TOL, side="left")


def empirical_tail(paths: np.ndarray, phi: LipschitzFn, t_grid, mean_mode: str = "plug-in",
                   process=None, mean: float | None = None, confidence: float = 0.95,
                   seed: int | None = None, metric: str = "hamming") -> TailEstimate:
    """Empirical P{|phi - E phi| >= t} with a one-sided upper confidence bound.

    ``exact`` mode takes E phi from ``mean`` or computes it from ``process``.
    ``plug-in`` uses the sample mean; half of the error budget goes to a
    Hoeffding interval of half-width ``delta`` around it, and the confidence
    bound at ``t`` uses the exceedance count at ``t - delta``.
    """
    t = _check_grid(t_grid)
    if not 0.5 <= confidence < 1.0:
        raise ValidationError("confidence must lie in [0.5, 1)")
    if metric not in ("hamming", "normalized-hamming"):
        raise ValidationError(f"unknown metric {metric!r}")
    values = phi.evaluate_paths(paths)
    count = len(values)
    alpha = 1.0 - confidence
    if mean_mode == "exact":
        if mean is None:
            if process is None:
                raise ValidationError("exact mean needs either mean= or process=")
            mean = exact_mean(process, phi)
        slack, cp_conf = 0.0, confidence
    elif mean_mode == "plug-in":
        if mean is not None:
            raise ValidationError("plug-in mode estimates the mean; do not pass mean=")
        mean = float(values.mean())
        lo, hi = phi.value_range()
        slack = (hi - lo) * math.sqrt(math.log(2.0 / (alpha / 2.0)) / (2.0 * count))
        cp_conf = 1.0 - alpha / 2.0
    else:
        raise ValidationError(f"mean mode must be 'exact' or 'plug-in', got {mean_mode!r}")
    scale = phi.n if metric == "normalized-hamming" else 1.0
    dev = np.abs(values - mean) / scale
    tail = _exceed_counts(dev, t) / count
    hits = _exceed_counts(dev, np.maximum(t - slack / scale, 0.0))
    upper = clopper_pearson_upper(hits, count, cp_conf)
    return TailEstimate(t, tail, np.asarray(upper, dtype=float), count, seed, float(mean), mean_mode,
                        phi.n, phi.lipschitz_const, metric, slack, confidence)


def exact_tail(process, phi: LipschitzFn, t_grid, metric: str = "hamming",
               budget: int | None = None) -> TailEstimate:
    """P{|phi - E phi| >= t} by exhaustive enumeration, or by a count DP for
    0/1-weight additive phi on a Markov chain (any n)."""
    t = _check_grid(t_grid)
    scale = phi.n if metric == "normalized-hamming" else 1.0
    if isinstance(process, MarkovSpec) and phi.is_additive and np.isin(phi.weights, (0.0, 1.0)).all():
        probs = count_distribution(process, phi.weights)
        values = np.arange(len(probs), dtype=float)
    else:
        dist = _as_joint(process, budget)
        probs = dist.mass.ravel()
        values = phi.dense(budget).ravel()
    mean = float(np.dot(probs, values))
    dev = np.abs(values - mean) / scale
    tail = np.array([probs[dev >= x - TIE_TOL].sum() for x in t])
    tail = np.clip(tail, 0.0, 1.0)
    return TailEstimate(t, tail, tail.copy(), 0, None, mean, "exact", phi.n,
                        phi.lipschitz_const, metric, 0.0, 1.0)


def count_distribution(spec: MarkovSpec, bits) -> np.ndarray:
    """Law of sum_l bits[l, X_l] for a Markov chain, by forward DP over (state, count)."""
    bits = np.asarray(bits)
    n, s = spec.n, spec.alphabet.size
    if bits.shape != (n, s):
        raise ValidationError(f"bits must have shape {(n, s)}")
    table = np.zeros((s, n + 1))
    table[np.arange(s), bits[0].astype(int)] = spec.p0
    for k in range(1, n):
        moved = spec.kernel(k).T @ table  # (next state, count)
        nxt = np.zeros_like(table)
        for y in range(s):
            b = int(bits[k, y])
            nxt[y, b:] = moved[y, : n + 1 - b]
        table = nxt
    return table.sum(axis=0)


@dataclass
class CompareReport:
    t_grid: np.ndarray
    empirical: np.ndarray
    upper_conf: np.ndarray
    bound: np.ndarray
    effective_bound: np.ndarray
    verdicts: np.ndarray
    certificate: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(np.all(self.verdicts))

    def failing_t(self) -> list[float]:
        return self.t_grid[~self.verdicts].tolist()

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "certificate": self.certificate,
            "rows": [
                {"t": float(t), "empirical": float(e), "upper_conf": float(u), "bound": float(b),
                 "effective_bound": float(eb), "verdict": "pass" if v else "fail"}
                for t, e, u, b, eb, v in zip(self.t_grid, self.empirical, self.upper_conf,
                                             self.bound, self.effective_bound, self.verdicts)
            ],
        }

    def to_tsv(self) -> str:
        lines = ["t\tempirical\tupper_conf\tbound\teffective_bound\tverdict"]
        for row in self.to_dict()["rows"]:
            lines.append("\t".join(repr(row[k]) if k != "verdict" else row[k]
                                   for k in ("t", "empirical", "upper_conf", "bound",
                                             "effective_bound", "verdict")))
        return "\n".join(lines) + "\n"


def compare(estimate: TailEstimate, certificate: Certificate, rtol: float = 1e-12) -> CompareReport:
    """Per-t check that the upper confidence bound does not exceed the certified bound."""
    if estimate.n != certificate.n:
        raise ConventionError(f"estimate has n={estimate.n}, certificate n={certificate.n}")
    if estimate.metric != certificate.metric:
        raise ConventionError(f"metric mismatch: {estimate.metric} vs {certificate.metric}")
    if estimate.c > certificate.c * (1 + rtol):
        raise ConventionError(f"functional is {estimate.c}-Lipschitz, certificate assumes c={certificate.c}")
    t = np.asarray(estimate.t_grid, dtype=float)
    bound = np.atleast_1d(certificate.bound(t))
    verdicts = np.asarray(estimate.upper) <= bound * (1 + rtol)
    return CompareReport(t, np.asarray(estimate.tail), np.asarray(estimate.upper), bound,
                         np.minimum(bound, 1.0), verdicts, certificate.to_dict())
