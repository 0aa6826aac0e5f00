"""Starting weights restoring second order for solutions ``x^beta * smooth``.

For every step ``n`` the starting weights ``omega_{n,1..s}`` are chosen so that
the corrected quadrature integrates the monomials ``x^l``, ``l`` in the
exponent set, exactly:

    sum_j omega_{n,j} j^l = Gamma(l+1)/Gamma(l+alpha+1) n^(l+alpha)
                            - sum_{j=0}^{n} omega_{n-j} j^l
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.special import gamma, rgamma

from .errors import InvalidBeta, SingularSystem
from .weights import WeightTable

MAX_CORRECTIONS = 8
PIVOT_TOL = 1e-13


@dataclass(frozen=True)
class ExponentSet:
    """Exponents ``beta + q`` (``q = 0, 1, ...``) below ``2 - min(1, alpha)``."""

    beta: float
    alpha: float
    exponents: tuple

    @property
    def s(self) -> int:
        return len(self.exponents)

    @property
    def cutoff(self) -> float:
        return 2.0 - min(1.0, self.alpha)


def _is_negative_integer(x: float) -> bool:
    return x < 0 and float(x).is_integer()


def exponent_set(beta: float, alpha: float) -> ExponentSet:
    """Build the exponent set for leading singular exponent ``beta``.

    Raises
    ------
    InvalidBeta
        If ``beta`` is a negative integer.
    """
    if _is_negative_integer(beta):
        raise InvalidBeta(f"beta={beta} is a negative integer")
    cutoff = 2.0 - min(1.0, alpha)
    exps = []
    q = 0
    while beta + q < cutoff:
        exps.append(beta + q)
        q += 1
    return ExponentSet(float(beta), float(alpha), tuple(exps))


@dataclass(frozen=True)
class CorrectionSet:
    """Starting weights, row ``n`` holds ``omega_{n,1..s}``."""

    exponent_set: ExponentSet
    start_weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.start_weights, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "start_weights", arr)

    @property
    def s(self) -> int:
        return self.exponent_set.s

    @property
    def n_max(self) -> int:
        return self.start_weights.shape[0] - 1

    def to_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "j", "omega_nj"])
        for n, row in enumerate(self.start_weights):
            for j, v in enumerate(row, start=1):
                w.writerow([n, j, f"{v:.16e}"])


def empty_correction(alpha: float, n_max: int, beta: float = float("nan")) -> CorrectionSet:
    return CorrectionSet(ExponentSet(beta, alpha, ()), np.zeros((n_max + 1, 0)))


def _index_powers(ell: float, n: int) -> np.ndarray:
    # j^l for j = 0..n with 0^l := 0 for l != 0
    j = np.arange(n + 1, dtype=float)
    out = np.zeros(n + 1)
    out[1:] = j[1:] ** ell
    if ell == 0.0:
        out[0] = 1.0
    return out


def moment_targets(ell: float, alpha: float, n_max: int) -> np.ndarray:
    """``Gamma(l+1)/Gamma(l+alpha+1) n^(l+alpha)`` for ``n = 0..n_max``."""
    n = np.arange(n_max + 1, dtype=float)
    p = ell + alpha
    out = np.zeros(n_max + 1)
    out[1:] = n[1:] ** p
    out[0] = 1.0 if p == 0.0 else 0.0
    return gamma(ell + 1.0) * rgamma(ell + alpha + 1.0) * out


def _factor(exps: ExponentSet):
    s = exps.s
    j = np.arange(1, s + 1, dtype=float)
    mat = np.array([j**ell for ell in exps.exponents])
    with warnings.catch_warnings():
        # an exactly singular matrix is reported below as SingularSystem
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(mat, check_finite=True)
    small = np.abs(np.diag(lu)) < PIVOT_TOL
    if np.any(small):
        raise SingularSystem(
            f"starting-weight matrix has pivot below {PIVOT_TOL:g} "
            f"(exponents {exps.exponents})"
        )
    return lu, piv


def solve_starting_weights(table: WeightTable, exps: ExponentSet, n_max: int | None = None) -> CorrectionSet:
    """Solve the starting-weight system for ``n = 0..n_max``.

    The ``s x s`` matrix ``[j^l]`` does not depend on ``n``; it is LU factored
    once with partial pivoting and reused for every right-hand side. Row
    ``n = 0`` is set to zero since the quadrature there is not used.

    Raises
    ------
    SingularSystem
        If a pivot falls below ``1e-13`` (e.g. duplicate exponents).
    """
    if n_max is None:
        n_max = table.n_max
    if n_max > table.n_max:
        raise ValueError(f"weight table has n_max={table.n_max} < {n_max}")
    s = exps.s
    if s == 0:
        return empty_correction(exps.alpha, n_max, exps.beta)
    if s > MAX_CORRECTIONS:
        raise ValueError(f"{s} starting weights requested, at most {MAX_CORRECTIONS} supported")
    if s > n_max:
        raise ValueError(f"need n_max >= s, got n_max={n_max}, s={s}")
    if not np.isclose(table.scheme.alpha, exps.alpha, rtol=0, atol=1e-15):
        raise ValueError("exponent set and weight table have different alpha")

    omega = table.omega[: n_max + 1]
    rhs = np.empty((s, n_max + 1))
    for i, ell in enumerate(exps.exponents):
        conv = np.convolve(omega, _index_powers(ell, n_max))[: n_max + 1]
        rhs[i] = moment_targets(ell, exps.alpha, n_max) - conv
    rhs[:, 0] = 0.0
    lu_piv = _factor(exps)
    sol = scipy.linalg.lu_solve(lu_piv, rhs) + 0.0  # no signed zeros in row 0
    return CorrectionSet(exps, sol.T)


def moment_residual(table: WeightTable, cset: CorrectionSet) -> float:
    """Max relative residual of the defining system over ``n = 1..n_max``, all exponents."""
    n_max = cset.n_max
    s = cset.s
    if s == 0:
        return 0.0
    omega = table.omega[: n_max + 1]
    j = np.arange(1, s + 1, dtype=float)
    worst = 0.0
    for ell in cset.exponent_set.exponents:
        target = moment_targets(ell, cset.exponent_set.alpha, n_max)[1:]
        lhs = cset.start_weights[1:] @ j**ell
        lhs += np.convolve(omega, _index_powers(ell, n_max))[1 : n_max + 1]
        scale = np.maximum(np.abs(target), 1e-300)
        worst = max(worst, float(np.max(np.abs(lhs - target) / scale)))
    return worst
