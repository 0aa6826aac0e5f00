"""Fractional convolution quadrature on a uniform grid."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma, rgamma

from .correction import CorrectionSet
from .errors import LengthMismatch, PoleEvaluation
from .weights import WeightTable


@dataclass(frozen=True)
class UniformGrid:
    """Nodes ``x_k = k h``, ``k = 0..N``, with ``h = L / N``."""

    L: float
    N: int

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"interval length must be positive, got {self.L}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"step count must be a positive integer, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "L", float(self.L))

    @classmethod
    def from_step(cls, h: float, L: float = 1.0) -> "UniformGrid":
        return cls(L, int(round(L / h)))

    @property
    def h(self) -> float:
        return self.L / self.N

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.N + 1) * self.h


@dataclass(frozen=True)
class QuadratureResult:
    values: np.ndarray = field(repr=False)
    used_correction: bool = False


def _check_lengths(table, samples, grid):
    if len(samples) != grid.N + 1:
        raise LengthMismatch(f"expected {grid.N + 1} samples, got {len(samples)}")
    if table.n_max < grid.N:
        raise LengthMismatch(f"weight table n_max={table.n_max} shorter than N={grid.N}")


def convolution_part(table: WeightTable, samples, grid: UniformGrid) -> np.ndarray:
    """``h^alpha sum_{j<=n} omega_{n-j} u_j`` for every node."""
    u = np.asarray(samples, dtype=float)
    _check_lengths(table, u, grid)
    n = grid.N
    return grid.h ** table.scheme.alpha * np.convolve(table.omega[: n + 1], u)[: n + 1]


def apply(table: WeightTable, correction: CorrectionSet | None, samples, grid: UniformGrid) -> QuadratureResult:
    """Approximate ``I^alpha u`` at every node, adding starting weights if given."""
    u = np.asarray(samples, dtype=float)
    values = convolution_part(table, u, grid)
    used = correction is not None and correction.s > 0
    if used:
        if correction.n_max < grid.N:
            raise LengthMismatch(f"correction n_max={correction.n_max} shorter than N={grid.N}")
        s = correction.s
        if s > grid.N:
            raise LengthMismatch(f"{s} starting weights need at least {s} steps")
        values = values + grid.h ** table.scheme.alpha * (
            correction.start_weights[: grid.N + 1] @ u[1 : s + 1]
        )
    return QuadratureResult(values, used)


def exact_riemann_liouville_monomial(beta: float, alpha: float, x):
    """``I^alpha x^beta = Gamma(beta+1)/Gamma(beta+alpha+1) x^(beta+alpha)``."""
    if beta < 0 and float(beta).is_integer():
        raise PoleEvaluation(f"beta={beta} is a negative integer")
    c = beta + alpha + 1.0
    if c <= 0 and float(c).is_integer():
        raise PoleEvaluation(f"beta+alpha+1={c} is a nonpositive integer")
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):  # x = 0 with beta + alpha < 0 gives inf
        return gamma(beta + 1.0) * rgamma(c) * x ** (beta + alpha)


def convolution_error(table: WeightTable, samples, exact, grid: UniformGrid) -> float:
    """``max_{1<=n<=N} |h^alpha sum omega_{n-j} u_j - I^alpha u(x_n)|``."""
    exact = np.asarray(exact, dtype=float)
    if len(exact) != grid.N + 1:
        raise LengthMismatch(f"expected {grid.N + 1} exact values, got {len(exact)}")
    values = convolution_part(table, samples, grid)
    return float(np.max(np.abs(values[1:] - exact[1:])))


def write_csv(fh, grid: UniformGrid, approx, exact) -> None:
    """Write ``n,x,approx,exact,abs_error`` rows."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "x", "approx", "exact", "abs_error"])
    for n, (x, a, e) in enumerate(zip(grid.nodes, approx, exact)):
        w.writerow([n, f"{x:.16e}", f"{a:.16e}", f"{e:.16e}", f"{abs(a - e):.16e}"])
