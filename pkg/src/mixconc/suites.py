"""Verification suites: randomized property checks and fixed reference values.

Every check returns a :class:`CheckResult`; the CLI ``verify`` command and
the acceptance tests both run them. Seeds are fixed so results are
reproducible.
"""

from __future__ import annotations

import itertools
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import fixtures
from .bar import ExtremalityWarning, bar_count, build_bar, enumerate_bars, sign_sequence, verify_extremal
from .certificates import (
    Certificate,
    alpha_inverse_half,
    azuma_bound,
    certify_general,
    certify_markov,
    concentration_alpha,
    markov_certificate,
    median_bound,
)
from .errors import BudgetError
from .functions import LipschitzFn
from .generators import (
    random_hmm_spec,
    random_joint,
    random_kernel_fn,
    random_lipschitz_table,
    random_markov_spec,
    random_zero_sum,
)
from .mixing import (
    MixingProfile,
    apply_kernel_transpose,
    contraction_profile,
    eta,
    eta_bar,
    hmm_eta_bound,
    markov_eta_bound,
    mixing_profile,
    theta,
)
from .montecarlo import compare, empirical_tail, exact_tail, sample_paths
from .norms import (
    KernelFn,
    inner,
    kappa_pair,
    kappa_prefix,
    lipschitz_vertices,
    martingale_diff,
    phi_norm,
    phi_norm_lp,
    phi_norm_oracle,
    prefix_reduce,
    project,
    psi,
    psi_levels,
    psi_norm,
    section,
    sup_norms,
)
from .process import (
    POSITIVE_TOL,
    HmmSpec,
    MarkovSpec,
    build_hmm_joint,
    build_markov_joint,
    outside_mass,
    truncate,
    tv_distance,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail} ({self.seconds:.2f}s)"

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail,
                "seconds": round(self.seconds, 3)}


def _timed(name: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    start = time.perf_counter()
    passed, detail = fn()
    return CheckResult(name, bool(passed), detail, time.perf_counter() - start)


def _vertex_max_sup_norm(dist, i: int) -> float:
    """max over all vertex phi of ||V_i(phi)||_inf.

    Equals max_z ||kappa[z^i]||_Phi; enumerated directly when the vertex
    list is affordable, otherwise solved per z by linear programming.
    """
    s, n = dist.alphabet.size, dist.n
    try:
        verts = lipschitz_vertices(s, n, budget=2**17)
    except BudgetError:
        verts = None
    if verts is not None:
        return float(sup_norms(dist, verts.astype(float), i).max())
    best = 0.0
    for z in itertools.product(range(s), repeat=i):
        if dist.prefix_mass(z) > POSITIVE_TOL:
            best = max(best, phi_norm_lp(kappa_prefix(dist, z)).value)
    return best


# ---------------------------------------------------------------- acceptance


def norm_inequality(count: int = 1000, seed: int = 1) -> CheckResult:
    """Phi-norm (exhaustive) never exceeds the Psi-norm; every vertex pairing is <= Psi."""

    def run():
        rng = np.random.default_rng(seed)
        shapes = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)]
        worst, worst_pair = -np.inf, -np.inf
        for t in range(count):
            s, k = shapes[t % len(shapes)]
            kappa = random_kernel_fn(rng, s, k)
            worst = max(worst, phi_norm_oracle(kappa).value - psi_norm(kappa))
            pairings = lipschitz_vertices(s, k) @ kappa.values.ravel()
            worst_pair = max(worst_pair, float(pairings.max()) - psi(kappa))
        ok = worst <= 1e-9 and worst_pair <= 1e-9
        return ok, f"{count} kernels; max(phi - psi) = {worst:.3e}; max(<k,phi> - Psi) = {worst_pair:.3e}"

    return _timed("norm-inequality", run)


def martingale_bound(count: int = 200, seed: int = 2) -> CheckResult:
    """||V_i(phi)||_inf <= H_{n,i} for every vertex phi, random joints n <= 3, |S| <= 3."""

    def run():
        rng = np.random.default_rng(seed)
        worst = -np.inf
        for _ in range(count):
            n, s = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            dist = random_joint(rng, n, s, zeros=float(rng.choice([0.0, 0.3])))
            prof = mixing_profile(dist)
            for i in range(1, n + 1):
                worst = max(worst, _vertex_max_sup_norm(dist, i) - prof.h_rows[i - 1])
        return worst <= 1e-9, f"{count} joints; max(||V_i|| - H_i) = {worst:.3e}"

    return _timed("martingale-bound", run)


def level_equality(count: int = 100, seed: int = 3) -> CheckResult:
    """Positive mass of the (j - i)-th projection of kappa_pair equals eta_ij."""

    def run():
        rng = np.random.default_rng(seed)
        worst, worst_psi, tuples = 0.0, -np.inf, 0
        for _ in range(count):
            n, s = int(rng.integers(2, 5)), int(rng.integers(2, 4))
            if s**n > 81:
                n = 3
            dist = random_joint(rng, n, s, zeros=float(rng.choice([0.0, 0.3])))
            for i in range(1, n):
                for y in itertools.product(range(s), repeat=i - 1):
                    for w, wh in itertools.permutations(range(s), 2):
                        if min(dist.prefix_mass(y + (w,)), dist.prefix_mass(y + (wh,))) <= POSITIVE_TOL:
                            continue
                        tuples += 1
                        reduced = prefix_reduce(kappa_pair(dist, i, y, w, wh), y)
                        levels = psi_levels(reduced)
                        etas = [eta(dist, i, j, y, w, wh) for j in range(i + 1, n + 1)]
                        for j in range(i + 1, n + 1):
                            worst = max(worst, abs(levels[j - i] - etas[j - i - 1]))
                        cap = 1.0 + sum(etas)
                        worst_psi = max(worst_psi, psi(reduced) - cap, psi(-reduced) - cap)
        ok = worst <= 1e-12 and worst_psi <= 1e-12
        return ok, f"{tuples} tuples; max level error {worst:.3e}; max(Psi - 1 - sum eta) = {worst_psi:.3e}"

    return _timed("level-equality", run)


def markov_contraction(count: int = 200, seed: int = 4) -> CheckResult:
    """eta_bar <= theta products and ||Delta_n|| <= M_n; exact fixture values."""

    def run():
        rng = np.random.default_rng(seed)
        worst_eta, worst_norm = -np.inf, -np.inf
        for _ in range(count):
            n, s = int(rng.integers(1, 5)), int(rng.integers(1, 4))
            spec = random_markov_spec(rng, n, s, full_support=bool(rng.integers(2)))
            joint = build_markov_joint(spec)
            prof, cprof = mixing_profile(joint), contraction_profile(spec)
            for i in range(1, n):
                for j in range(i + 1, n + 1):
                    worst_eta = max(worst_eta, prof.eta_bar[i - 1, j - 1] - markov_eta_bound(spec, i, j))
            worst_norm = max(worst_norm, prof.inf_norm - cprof.m_n)
        prof = mixing_profile(build_markov_joint(fixtures.f1()))
        m3 = contraction_profile(fixtures.f1()).m_n
        etas = (prof.eta_bar[0, 1], prof.eta_bar[0, 2], prof.eta_bar[1, 2])
        fixture_ok = (np.allclose(etas, (0.5, 0.25, 0.5), atol=1e-12, rtol=0)
                      and abs(prof.inf_norm - 1.75) <= 1e-12 and abs(m3 - 1.75) <= 1e-12)
        ok = worst_eta <= 1e-10 and worst_norm <= 1e-10 and fixture_ok
        return ok, (f"{count} chains; max(eta - prod theta) = {worst_eta:.3e}; "
                    f"max(||Delta|| - M_n) = {worst_norm:.3e}; F1 eta = {tuple(map(float, etas))}, "
                    f"||Delta|| = {prof.inf_norm}, M_3 = {m3}")

    return _timed("markov-contraction", run)


def hmm_bound(count: int = 200, seed: int = 5) -> CheckResult:
    """Observed-chain eta_bar is bounded by the hidden chain's theta products."""

    def run():
        rng = np.random.default_rng(seed)
        worst, worst_id = -np.inf, 0.0
        for t in range(count):
            n = int(rng.integers(1, 4))
            hs, s = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            spec = random_hmm_spec(rng, n, hs, s, zeros=float(rng.choice([0.0, 0.3])))
            observed = build_hmm_joint(spec)[1]
            prof = mixing_profile(observed)
            for i in range(1, n):
                for j in range(i + 1, n + 1):
                    worst = max(worst, prof.eta_bar[i - 1, j - 1] - hmm_eta_bound(spec, i, j))
            # identity emissions copy the hidden chain
            hidden = spec.hidden
            ident = HmmSpec(hidden, hidden.alphabet, (np.eye(hs),), homogeneous_emissions=True)
            got = mixing_profile(build_hmm_joint(ident)[1]).eta_bar
            want = mixing_profile(build_markov_joint(hidden)).eta_bar
            worst_id = max(worst_id, float(np.abs(got - want).max()))
        ok = worst <= 1e-10 and worst_id <= 1e-12
        return ok, f"{count} HMMs; max(eta - bound) = {worst:.3e}; identity-emission gap {worst_id:.3e}"

    return _timed("hmm-bound", run)


def bar_extremality(count: int = 100, seed: int = 6) -> CheckResult:
    """<kappa[z], bar> = Psi(kappa[z]) and ||V_1(bar)|| >= ||kappa[z]||_Phi at i = 1."""

    def run():
        rng = np.random.default_rng(seed)
        worst_eq, worst_dom = 0.0, -np.inf
        for _ in range(count):
            n, s = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            spec = random_markov_spec(rng, n, s, full_support=True)
            joint = build_markov_joint(spec)
            for z in range(s):
                kappa = kappa_prefix(joint, (z,))
                worst_eq = max(worst_eq, abs(inner(kappa, build_bar(spec, z).table()) - psi(kappa)))
            report = verify_extremal(spec, 1, phi_method="auto")
            worst_dom = max(worst_dom, report.phi_max - report.lhs)
        f1 = verify_extremal(fixtures.f1(), 1)
        f1_ok = abs(f1.lhs - 0.875) <= 1e-12 and abs(f1.phi_max - 0.875) <= 1e-12
        ok = worst_eq <= 1e-10 and worst_dom <= 1e-9 and f1_ok
        return ok, (f"{count} chains; max |<k,bar> - Psi| = {worst_eq:.3e}; "
                    f"max(phi - ||V_1(bar)||) = {worst_dom:.3e}; F1 {f1.lhs} vs {f1.phi_max}")

    return _timed("bar-extremality", run)


def contraction_inequality(count: int = 1000, seed: int = 7) -> CheckResult:
    """||u^T P||_1 <= theta(P) ||u||_1 for zero-sum u."""

    def run():
        rng = np.random.default_rng(seed)
        worst = -np.inf
        for _ in range(count):
            s = int(rng.integers(1, 7))
            P = random_markov_spec(rng, 2, s, full_support=bool(rng.integers(2))).kernel(1)
            u = random_zero_sum(rng, s)
            lhs = np.abs(apply_kernel_transpose(u, P)).sum()
            worst = max(worst, lhs - theta(P) * np.abs(u).sum())
        return worst <= 1e-12, f"{count} pairs; max(||uP|| - theta ||u||) = {worst:.3e}"

    return _timed("contraction-inequality", run)


def norm_axioms(count: int = 200, seed: int = 8) -> CheckResult:
    """Norm axioms for Psi- and Phi-norms; Psi section identity; operator commutation."""

    def run():
        rng = np.random.default_rng(seed)
        shapes = [(2, 1), (2, 2), (3, 1), (3, 2), (2, 3)]
        errs = {"nonneg": 0.0, "homog": 0.0, "triangle": 0.0, "definite": 0.0,
                "section-identity": 0.0, "commute": 0.0, "mass": 0.0}
        for t in range(count):
            s, k = shapes[t % len(shapes)]
            a, b = random_kernel_fn(rng, s, k), random_kernel_fn(rng, s, k)
            c = float(rng.uniform(-3, 3))
            zero = KernelFn(np.zeros((s,) * k), s)
            for norm in (psi_norm, lambda x: phi_norm_oracle(x).value):
                na, nb = norm(a), norm(b)
                errs["nonneg"] = max(errs["nonneg"], -min(na, nb))
                errs["homog"] = max(errs["homog"], abs(norm(a * c) - abs(c) * na))
                errs["triangle"] = max(errs["triangle"], norm(a + b) - na - nb)
                errs["definite"] = max(errs["definite"], norm(zero), 0.0 if na > 0 else 1.0)
            rhs = sum(psi(section(a, y)) + max(section(a, y).total(), 0.0) for y in range(s))
            errs["section-identity"] = max(errs["section-identity"], abs(psi(a) - rhs))
            if k >= 2:
                for y in range(s):
                    d = np.abs(project(section(a, y)).values - section(project(a), y).values).max()
                    errs["commute"] = max(errs["commute"], float(d))
            for y in range(s if k >= 2 else 0):
                errs["mass"] = max(errs["mass"], abs(project(section(a, y)).total() - section(a, y).total()))
        tol = {"nonneg": 1e-9, "homog": 1e-9, "triangle": 1e-9, "definite": 1e-9,
               "section-identity": 1e-12, "commute": 1e-12, "mass": 1e-12}
        ok = all(errs[key] <= tol[key] for key in errs)
        return ok, "; ".join(f"{key} {val:.1e}" for key, val in errs.items())

    return _timed("norm-axioms", run)


def truncation_convergence() -> CheckResult:
    """|eta_bar^(m) - eta_bar| shrinks below 1e-3 as m -> 6 and vanishes at m = 6."""

    def run():
        joint = build_markov_joint(fixtures.trunc6())
        exact = eta_bar(joint, 1, 2)
        gaps = [abs(eta_bar(truncate(joint, m), 1, 2) - exact) for m in range(1, 7)]
        tv_ok = all(
            tv_distance(joint.mass, _embed_mass(truncate(joint, m), 6)) <= outside_mass(joint, m) + 1e-15
            for m in range(1, 7)
        )
        ok = (all(b <= a for a, b in zip(gaps, gaps[1:])) and gaps[-2] < 1e-3 and gaps[-1] == 0.0
              and tv_ok)
        return ok, "gaps by m: " + ", ".join(f"{g:.2e}" for g in gaps) + f"; TV bound {'ok' if tv_ok else 'violated'}"

    return _timed("truncation-convergence", run)


def _embed_mass(dist, size: int) -> np.ndarray:
    out = np.zeros((size,) * dist.n)
    out[(slice(0, dist.alphabet.size),) * dist.n] = dist.mass
    return out


def montecarlo_domination(count: int = 100_000, seed: int = 42) -> CheckResult:
    """Upper-confidence empirical tail <= Markov certificate on 0:0.5:20 (n = 100),
    and the exactly enumerated tail <= certificate at n = 3."""

    def run():
        grid = np.arange(0.0, 20.0 + 1e-12, 0.5)
        spec = fixtures.f1(100)
        phi = LipschitzFn.hamming_weight(100, 2, 0)
        cert = markov_certificate(contraction_profile(spec), 1.0)
        paths = sample_paths(spec, seed, count)
        mc = compare(empirical_tail(paths, phi, grid, "plug-in", seed=seed), cert)
        small = fixtures.f1(3)
        exact = compare(exact_tail(small, LipschitzFn.hamming_weight(3, 2, 0), grid),
                        markov_certificate(contraction_profile(small), 1.0))
        ok = mc.passed and exact.passed
        return ok, (f"n=100 MC {'pass' if mc.passed else 'fail at ' + str(mc.failing_t())}; "
                    f"n=3 exact {'pass' if exact.passed else 'fail at ' + str(exact.failing_t())}; "
                    f"min bound on grid {float(mc.bound.min()):.4f}")

    return _timed("montecarlo-domination", run)


def bar_cardinality() -> CheckResult:
    """bar_count matches exhaustive generation for n * |S| <= 8."""

    def run():
        bad = []
        for n in range(1, 9):
            for s in range(1, 9):
                if n * s <= 8 and bar_count(n, s) != sum(1 for _ in enumerate_bars(n, s)):
                    bad.append((n, s))
        return not bad and bar_count(3, 2) == 64, f"mismatches {bad}; bar_count(3, 2) = {bar_count(3, 2)}"

    return _timed("bar-cardinality", run)


ACCEPTANCE = [
    norm_inequality,
    martingale_bound,
    level_equality,
    markov_contraction,
    hmm_bound,
    bar_extremality,
    contraction_inequality,
    norm_axioms,
    truncation_convergence,
    montecarlo_domination,
    bar_cardinality,
]


# ---------------------------------------------------------- module properties


def process_properties(seed: int = 11) -> CheckResult:
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(30):
            p, q, r = (random_joint(rng, 2, 3).mass for _ in range(3))
            worst = max(worst, abs(tv_distance(p, q) - tv_distance(q, p)),
                        tv_distance(p, r) - tv_distance(p, q) - tv_distance(q, r),
                        abs(tv_distance(p, q) - 0.5 * np.abs(p - q).sum()), tv_distance(p, p))
            spec = random_markov_spec(rng, 3, 3, full_support=False)
            joint = build_markov_joint(spec)
            for w in range(3):
                laws = [joint.mass[y, w] / joint.mass[y, w].sum() for y in range(3)
                        if joint.mass[y, w].sum() > POSITIVE_TOL]
                for law in laws[1:]:
                    worst = max(worst, float(np.abs(law - laws[0]).max()))
        f1 = build_markov_joint(fixtures.f1())
        obs = build_hmm_joint(fixtures.f4())[1]
        fixed = abs(f1[(0, 0, 0)] - 0.28125) <= 1e-15 and abs(obs.marginal(1)[0] - 0.5) <= 1e-15
        return worst <= 1e-12 and fixed, f"max metric / Markov-property error {worst:.1e}"

    return _timed("process-properties", run)


def martingale_properties(seed: int = 12) -> CheckResult:
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(30):
            n, s = int(rng.integers(1, 4)), int(rng.integers(2, 4))
            dist = random_joint(rng, n, s, zeros=0.2)
            table = random_lipschitz_table(rng, s, n)
            a, c = float(rng.uniform(0.1, 3)), float(rng.uniform(-5, 5))
            for i in range(1, n + 1):
                base = martingale_diff(dist, table, i)
                worst = max(worst, abs(martingale_diff(dist, a * table, i) - a * base),
                            abs(martingale_diff(dist, table + c, i) - base))
                for z in itertools.product(range(s), repeat=i):
                    if dist.prefix_mass(z) > POSITIVE_TOL and dist.prefix_mass(z[:-1]) > POSITIVE_TOL:
                        kappa = kappa_prefix(dist, z)
                        worst = max(worst, abs(kappa.total()),
                                    abs(inner(kappa, table) - martingale_diff(dist, table, i, "at-point", z=z)))
            # interior Lipschitz functions never beat the vertex maximum
            kappa = random_kernel_fn(rng, s, n)
            worst = max(worst, abs(inner(kappa, table)) - phi_norm(kappa).value)
        return worst <= 1e-9, f"max homogeneity / translation / kernel error {worst:.1e}"

    return _timed("martingale-properties", run)


def certificate_properties(seed: int = 13) -> CheckResult:
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(30):
            n, s = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            spec = random_markov_spec(rng, n, s, full_support=bool(rng.integers(2)))
            prof = mixing_profile(build_markov_joint(spec))
            cprof = contraction_profile(spec)
            c = float(rng.uniform(0.2, 3))
            t = np.linspace(0, 10, 21)
            worst = max(worst,
                        float(np.abs(certify_general(prof, c, t)
                                     - azuma_bound(np.sqrt(n) * c * prof.inf_norm, t)).max()),
                        float((certify_general(prof, c, t) - certify_markov(cprof, c, t)).max()))
            t0 = alpha_inverse_half(prof)
            worst = max(worst, abs(concentration_alpha(prof, t0) - 0.5))
            tv = t0 + np.linspace(0.01, 3, 7)
            worst = max(worst, float(np.abs(median_bound(prof, tv) - concentration_alpha(prof, tv - t0)).max()))
        return worst <= 1e-12, f"max pipeline / dominance / median error {worst:.1e}"

    return _timed("certificate-properties", run)


def bar_properties(seed: int = 14) -> CheckResult:
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ExtremalityWarning)
            for _ in range(30):
                n, s = int(rng.integers(1, 4)), int(rng.integers(1, 4))
                spec = random_markov_spec(rng, n, s, full_support=bool(rng.integers(2)))
                joint = build_markov_joint(spec)
                for z in range(s):
                    sig = sign_sequence(spec, z)
                    worst = max(worst, max(abs(v.sum()) for v in sig))
                    bar = build_bar(spec, z).as_lipschitz()
                    lo, hi = bar.value_range()
                    worst = max(worst, bar.lipschitz_const - 1, -lo, hi - n)
                    if joint.prefix_mass((z,)) > POSITIVE_TOL:
                        # each projection of kappa[z] carries the next sign function
                        kappa = kappa_prefix(joint, (z,)).values
                        for level in range(n - 1, -1, -1):
                            marg = kappa.reshape(s, -1).sum(axis=1)
                            worst = max(worst, float(np.abs(marg - sig[n - 1 - level]).max()))
                            kappa = kappa.sum(axis=0)
        return worst <= 1e-12, f"max sign / Lipschitz / projection error {worst:.1e}"

    return _timed("bar-properties", run)


def adversarial_certificate(count: int = 100_000, seed: int = 7) -> CheckResult:
    """A wrong certificate must be caught, and a halved M_n must still hold.

    On a chain with theta = 0.98 and n = 10, the Hamming weight is all-or-none
    with probability about 0.91. Ignoring dependence (constant 1) predicts at
    most 2 exp(-25/20) at t = 5 and is flagged. Halving M_n leaves a bound
    that the exact tail still respects: the certified exponent has slack of
    more than a factor four over the truth in this family.
    """

    def run():
        spec = fixtures.sticky()
        phi = LipschitzFn.hamming_weight(spec.n, 2, 0)
        grid = np.arange(0.0, 5.0 + 1e-12, 0.5)
        est = empirical_tail(sample_paths(spec, seed, count), phi, grid, "exact", process=spec, seed=seed)
        m_n = contraction_profile(spec).m_n
        blind = compare(est, Certificate(spec.n, 1.0, "hamming", "explicit", 1.0))
        halved = compare(exact_tail(spec, phi, grid), Certificate(spec.n, 1.0, "hamming", "explicit", m_n / 2))
        ok = (not blind.passed) and halved.passed
        return ok, f"dependence-blind flagged at t = {blind.failing_t()}; halved M_n holds: {halved.passed}"

    return _timed("adversarial-certificate", run)


def fixture_values() -> CheckResult:
    """Reference values on the shipped fixtures."""

    def run():
        f1 = fixtures.f1()
        joint = build_markov_joint(f1)
        checks = {
            "P(aaa)": (joint[(0, 0, 0)], 0.28125),
            "eta_bar_13": (eta_bar(joint, 1, 3), 0.25),
            "||Delta_3||": (mixing_profile(joint).inf_norm, 1.75),
            "M_3": (contraction_profile(f1).m_n, 1.75),
            "<kappa[a], count a>": (inner(kappa_prefix(joint, (0,)), LipschitzFn.hamming_weight(3, 2, 0)), 0.875),
            "Psi pair": (psi(kappa_pair(joint, 1, (), 0, 1)), 1.75),
            "Phi kappa[a]": (phi_norm_oracle(kappa_prefix(joint, (0,))).value, 0.875),
            "V_3 at aaa": (martingale_diff(joint, LipschitzFn.hamming_weight(3, 2, 0), 3, "at-point", z=(0, 0, 0)), 0.25),
            "general bound t=1": (certify_general(mixing_profile(joint), 1.0, 1.0), 2 * np.exp(-1 / 18.375)),
            "alpha product n=100 t=0.3": (concentration_alpha(_identity_profile(100), 0.3), 2 * np.exp(-4.5)),
            "F4 hmm bound (1,3)": (hmm_eta_bound(fixtures.f4(), 1, 3), 0.25),
        }
        bad = {key: got for key, (got, want) in checks.items() if abs(got - want) > 1e-12}
        f4_obs = eta_bar(build_hmm_joint(fixtures.f4())[1], 1, 3)
        ok = not bad and f4_obs <= 0.25
        return ok, f"{len(checks) - len(bad)}/{len(checks)} reference values match; F4 observed eta_13 = {f4_obs:.6f}"

    return _timed("fixture-values", run)


def _identity_profile(n: int) -> MixingProfile:
    return MixingProfile.from_matrix(np.eye(n))


PROPERTIES = [
    fixture_values,
    process_properties,
    martingale_properties,
    certificate_properties,
    bar_properties,
    adversarial_certificate,
]

SUITES = {
    "acceptance": ACCEPTANCE,
    "properties": PROPERTIES,
    "all": ACCEPTANCE + PROPERTIES,
}


def run_suite(name: str = "all") -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(name)
    return [check() for check in SUITES[name]]
