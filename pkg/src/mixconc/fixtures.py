"""Reference processes used by the verification suites and examples."""

from __future__ import annotations

import numpy as np

from .process import Alphabet, HmmSpec, MarkovSpec

SYMMETRIC_KERNEL = np.array([[0.75, 0.25], [0.25, 0.75]])
NOISY_EMISSION = np.array([[0.9, 0.1], [0.1, 0.9]])
AB = Alphabet(("a", "b"))


def f1(n: int = 3) -> MarkovSpec:
    """Symmetric two-state chain with theta = 1/2 and a uniform start."""
    return MarkovSpec.homogeneous_chain(AB, n, [0.5, 0.5], SYMMETRIC_KERNEL)


def f4(n: int = 3) -> HmmSpec:
    """f1 observed through a symmetric channel that flips with probability 0.1."""
    return HmmSpec(f1(n), AB, (NOISY_EMISSION,), homogeneous_emissions=True)


def sticky(n: int = 10, flip: float = 0.01) -> MarkovSpec:
    """Two-state chain that rarely switches; theta = 1 - 2 * flip."""
    kernel = np.array([[1 - flip, flip], [flip, 1 - flip]])
    return MarkovSpec.homogeneous_chain(AB, n, [0.5, 0.5], kernel)


def trunc6() -> MarkovSpec:
    """Six-symbol chain (n = 2) whose masses fall off like r^(k^2).

    Tails this light make the mass dumped at (s_m, s_m) by m-truncation
    negligible next to P(X_1 = s_m), so the truncated mixing coefficient
    converges quickly.
    """
    k = np.arange(6)
    p0 = 0.5 ** (k**2)
    p0 = p0 / p0.sum()
    rows = []
    for x in range(6):
        row = 0.3 ** (k**2) * (1 + 3 * (k == min(x, 1)))
        rows.append(row / row.sum())
    return MarkovSpec.homogeneous_chain(Alphabet.of_size(6), 2, p0, np.array(rows))
