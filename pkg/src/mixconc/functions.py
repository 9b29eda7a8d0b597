"""Real functions on S^n and their Hamming-Lipschitz constants.

A :class:`LipschitzFn` is either a dense table over S^n or an additive
function ``phi(x) = sum_l w[l, x_l]`` held as an ``(n, |S|)`` weight matrix.
The additive form covers symbol counts and BAR functions at any ``n``
without materializing S^n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .process import Alphabet, check_capacity


def hamming(x, y) -> int:
    """Unnormalized Hamming distance between two equal-length strings."""
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != y.shape:
        raise ValidationError("strings must have equal length")
    return int(np.count_nonzero(x != y))


def neighbor_lipschitz(table: np.ndarray) -> float:
    """Best Hamming-Lipschitz constant of a table.

    The Hamming metric is the path metric of the Hamming graph, so the worst
    ratio |f(x) - f(y)| / d(x, y) is attained on a pair at distance one.
    """
    table = np.asarray(table, dtype=float)
    best = 0.0
    for axis in range(table.ndim):
        # all pairs differing only in this coordinate
        spread = table.max(axis=axis) - table.min(axis=axis)
        best = max(best, float(spread.max()))
    return best


@dataclass(frozen=True, eq=False)
class LipschitzFn:
    n: int
    size: int
    table: np.ndarray | None = None
    weights: np.ndarray | None = None
    lipschitz_const: float = 0.0
    name: str = "table"

    @classmethod
    def from_table(cls, table, name: str = "table") -> "LipschitzFn":
        table = np.array(table, dtype=float)
        if table.ndim < 1 or len(set(table.shape)) != 1:
            raise ValidationError(f"table shape {table.shape} is not (|S|,)*n")
        if not np.all(np.isfinite(table)):
            raise ValidationError("table entries must be finite")
        table.setflags(write=False)
        return cls(table.ndim, table.shape[0], table=table,
                   lipschitz_const=neighbor_lipschitz(table), name=name)

    @classmethod
    def additive(cls, weights, name: str = "additive") -> "LipschitzFn":
        weights = np.array(weights, dtype=float)
        if weights.ndim != 2:
            raise ValidationError("additive weights must be an (n, |S|) matrix")
        weights.setflags(write=False)
        c = float((weights.max(axis=1) - weights.min(axis=1)).max())
        return cls(weights.shape[0], weights.shape[1], weights=weights,
                   lipschitz_const=c, name=name)

    @classmethod
    def hamming_weight(cls, n: int, size: int, symbol: int) -> "LipschitzFn":
        """Number of coordinates equal to ``symbol``; 1-Lipschitz."""
        if not 0 <= symbol < size:
            raise ValidationError(f"symbol index {symbol} out of range")
        w = np.zeros((n, size))
        w[:, symbol] = 1.0
        return cls.additive(w, name=f"hamming-weight:{symbol}")

    @property
    def is_additive(self) -> bool:
        return self.weights is not None

    def dense(self, budget: int | None = None) -> np.ndarray:
        if self.table is not None:
            return self.table
        check_capacity(self.size**self.n, budget)
        out = np.zeros(())
        for row in self.weights:
            out = np.add.outer(out, row)
        return out

    def __call__(self, x) -> float:
        x = tuple(int(v) for v in x)
        if len(x) != self.n:
            raise ValidationError(f"expected a string of length {self.n}")
        if self.table is not None:
            return float(self.table[x])
        return float(self.weights[np.arange(self.n), list(x)].sum())

    def evaluate_paths(self, paths: np.ndarray) -> np.ndarray:
        """Vectorized evaluation over an integer ``(count, n)`` batch."""
        paths = np.asarray(paths)
        if paths.ndim != 2 or paths.shape[1] != self.n:
            raise ValidationError(f"paths must have shape (count, {self.n})")
        if self.table is not None:
            return self.table[tuple(paths.T)]
        return self.weights[np.arange(self.n)[None, :], paths].sum(axis=1)

    def value_range(self) -> tuple[float, float]:
        if self.table is not None:
            return float(self.table.min()), float(self.table.max())
        return float(self.weights.min(axis=1).sum()), float(self.weights.max(axis=1).sum())


def parse_functional(text: str, alphabet: Alphabet, n: int, table=None) -> LipschitzFn:
    """Build a named functional.

    ``hamming-weight:<label>`` counts a symbol; ``bar:<bits>,<bits>,...``
    takes one 0/1 string of length |S| per coordinate; ``table`` uses the
    explicit array passed in ``table``.
    """
    kind, _, arg = text.partition(":")
    if kind == "hamming-weight":
        return LipschitzFn.hamming_weight(n, alphabet.size, alphabet.index(arg))
    if kind == "bar":
        from .bar import BarFunction

        bar = BarFunction.from_text(arg.replace(",", "\n"))
        if bar.n != n or bar.size != alphabet.size:
            raise ValidationError(f"BAR function is {bar.n}x{bar.size}, expected {n}x{alphabet.size}")
        return bar.as_lipschitz()
    if kind == "table":
        if table is None:
            raise ValidationError("functional 'table' needs an explicit array")
        fn = LipschitzFn.from_table(table)
        if fn.n != n or fn.size != alphabet.size:
            raise ValidationError("table shape does not match the process")
        return fn
    raise ValidationError(f"unknown functional {text!r}")
