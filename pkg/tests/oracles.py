"""Slow, literal reference implementations used to cross-check the library.

Everything here works on plain dicts keyed by tuples and loops over S^n
directly, sharing no code with the package.
"""

from __future__ import annotations

import itertools
import math


def strings(s: int, n: int):
    return list(itertools.product(range(s), repeat=n))


def markov_joint(p0, kernels, n: int) -> dict:
    s = len(p0)
    out = {}
    for x in strings(s, n):
        p = p0[x[0]]
        for k in range(n - 1):
            p *= kernels[k][x[k]][x[k + 1]]
        out[x] = p
    return out


def hmm_observed(p0, kernels, emissions, n: int, s_obs: int) -> dict:
    s_hid = len(p0)
    hidden = markov_joint(p0, kernels, n)
    out = {x: 0.0 for x in strings(s_obs, n)}
    for h in strings(s_hid, n):
        for x in out:
            p = hidden[h]
            for ell in range(n):
                p *= emissions[ell][h[ell]][x[ell]]
            out[x] += p
    return out


def prob_prefix(joint: dict, prefix: tuple) -> float:
    return sum(p for x, p in joint.items() if x[: len(prefix)] == prefix)


def future_law(joint: dict, prefix: tuple, j: int) -> dict:
    """L(X_j..X_n | X^i = prefix) as a dict over suffixes (j is 1-based)."""
    den = prob_prefix(joint, prefix)
    law = {}
    for x, p in joint.items():
        if x[: len(prefix)] == prefix:
            key = x[j - 1:]
            law[key] = law.get(key, 0.0) + p / den
    return law


def tv(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def eta_bar(joint: dict, s: int, i: int, j: int) -> float:
    best = 0.0
    for y in strings(s, i - 1):
        for w in range(s):
            for wh in range(s):
                a, b = y + (w,), y + (wh,)
                if prob_prefix(joint, a) > 0 and prob_prefix(joint, b) > 0:
                    best = max(best, tv(future_law(joint, a, j), future_law(joint, b, j)))
    return best


def cond_mean(joint: dict, phi, prefix: tuple) -> float:
    den = prob_prefix(joint, prefix)
    return sum(p * phi(x) for x, p in joint.items() if x[: len(prefix)] == prefix) / den


def v_sup(joint: dict, s: int, phi, i: int) -> float:
    best = 0.0
    for z in strings(s, i):
        if prob_prefix(joint, z) > 0:
            best = max(best, abs(cond_mean(joint, phi, z) - cond_mean(joint, phi, z[:-1])))
    return best


def psi(values: dict, s: int, k: int) -> float:
    """Psi functional: positive mass, then recurse on the first-coordinate sum."""
    total = 0.0
    cur = dict(values)
    for length in range(k, 0, -1):
        total += sum(max(v, 0.0) for v in cur.values())
        nxt = {}
        for x, v in cur.items():
            nxt[x[1:]] = nxt.get(x[1:], 0.0) + v
        cur = nxt
    return total


def lipschitz_tables(s: int, k: int):
    """Every integer function S^k -> {0..k} with neighbor differences <= 1."""
    cells = strings(s, k)
    for values in itertools.product(range(k + 1), repeat=len(cells)):
        f = dict(zip(cells, values))
        if all(abs(f[x] - f[y]) <= 1 for x in cells for y in cells
               if sum(a != b for a, b in zip(x, y)) == 1):
            yield f


def phi_norm(values: dict, s: int, k: int) -> float:
    return max(abs(sum(values[x] * f[x] for x in values)) for f in lipschitz_tables(s, k))


def azuma(D: float, r: float) -> float:
    return 2.0 * math.exp(-r * r / (2.0 * D * D))
