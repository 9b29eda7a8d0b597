"""Random test instances: processes, kernels and Lipschitz functions."""

from __future__ import annotations

import numpy as np

from .functions import LipschitzFn
from .norms import KernelFn
from .process import Alphabet, HmmSpec, JointDist, MarkovSpec


def _simplex(rng: np.random.Generator, size: int, rows: int | None = None,
             zeros: float = 0.0, concentration: float = 1.0) -> np.ndarray:
    """Dirichlet rows, optionally with random zeros (each row keeps one positive entry)."""
    shape = (size,) if rows is None else (rows, size)
    out = rng.gamma(concentration, size=shape)
    if zeros > 0:
        keep = rng.random(shape) >= zeros
        flat = out.reshape(-1, size)
        k = keep.reshape(-1, size)
        k[np.arange(len(k)), rng.integers(0, size, len(k))] = True
        out = (flat * k).reshape(shape)
    out = out / out.sum(axis=-1, keepdims=True)
    # fold the rounding residue into the largest entry so rows pass the 1e-12 check
    flat = out.reshape(-1, size)
    top = flat.argmax(axis=1)
    flat[np.arange(len(flat)), top] += 1.0 - flat.sum(axis=1)
    return flat.reshape(shape)


def random_markov_spec(rng: np.random.Generator, n: int, size: int, full_support: bool = True,
                       homogeneous: bool | None = None, concentration: float = 1.0) -> MarkovSpec:
    if homogeneous is None:
        homogeneous = bool(rng.integers(2))
    zeros = 0.0 if full_support else 0.3
    p0 = _simplex(rng, size, zeros=zeros)
    count = 1 if homogeneous else n - 1
    kernels = [_simplex(rng, size, size, zeros, concentration) for _ in range(count)]
    return MarkovSpec(Alphabet.of_size(size), n, p0, tuple(kernels), homogeneous=homogeneous)


def random_hmm_spec(rng: np.random.Generator, n: int, hidden_size: int, size: int,
                    zeros: float = 0.0) -> HmmSpec:
    hidden = random_markov_spec(rng, n, hidden_size, full_support=zeros == 0.0, homogeneous=False)
    emissions = [_simplex(rng, size, hidden_size, zeros) for _ in range(n)]
    return HmmSpec(hidden, Alphabet.of_size(size), tuple(emissions))


def random_joint(rng: np.random.Generator, n: int, size: int, zeros: float = 0.0) -> JointDist:
    """Arbitrary law on S^n; ``zeros`` is the chance that a cell gets no mass."""
    mass = rng.gamma(1.0, size=(size,) * n)
    if zeros > 0:
        mass = mass * (rng.random(mass.shape) >= zeros)
        if mass.sum() == 0:
            mass.flat[rng.integers(mass.size)] = 1.0
    mass = mass / mass.sum()
    mass.flat[np.argmax(mass)] += 1.0 - mass.sum()
    return JointDist(Alphabet.of_size(size), mass)


def random_kernel_fn(rng: np.random.Generator, size: int, k: int) -> KernelFn:
    """Signed kernel with entries uniform in [-1, 1]."""
    return KernelFn(rng.uniform(-1.0, 1.0, size=(size,) * k), size)


def random_zero_sum(rng: np.random.Generator, size: int) -> np.ndarray:
    u = rng.uniform(-1.0, 1.0, size)
    return u - u.mean()


def random_lipschitz_table(rng: np.random.Generator, size: int, k: int) -> np.ndarray:
    """A random real 1-Lipschitz function S^k -> [0, k].

    McShane extension of random anchor values: the lower envelope of cones
    ``v_a + d(x, a)`` is 1-Lipschitz, and clipping to [0, k] keeps it so.
    """
    grid = np.indices((size,) * k).reshape(k, -1).T
    anchors = rng.choice(len(grid), size=rng.integers(1, len(grid) + 1), replace=False)
    dist = (grid[:, None, :] != grid[None, anchors, :]).sum(axis=2)
    values = rng.uniform(0.0, k, size=len(anchors))
    table = np.min(values[None, :] + dist, axis=1)
    return np.clip(table, 0.0, k).reshape((size,) * k)


def random_lipschitz_fn(rng: np.random.Generator, size: int, k: int) -> LipschitzFn:
    return LipschitzFn.from_table(random_lipschitz_table(rng, size, k), name="random")
