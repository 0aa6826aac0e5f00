"""Implicit step-by-step solvers for three linear model problems.

* Caputo ODE ``D^alpha u = u + f``, ``u(0) = u0``, ``0 < alpha < 1``, rewritten
  for ``v = u - u0`` as ``I^{-alpha} v = v + f + u0``;
* Abel equation of the second kind ``u = f + lambda I^alpha u``;
* Bagley-Torvik ``u'' + 2 D^{3/2} u + 2 u = f`` with ``u(0) = u'(0) = 0``.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.linalg
from scipy.special import rgamma

from .correction import ExponentSet, exponent_set, solve_starting_weights
from .errors import SingularSystem, StepSingular
from .quadrature import UniformGrid, exact_riemann_liouville_monomial
from .scheme import Family, ThetaScheme
from .weights import weights_by_recurrence

STEP_TOL = 1e-13


class ProblemKind(str, enum.Enum):
    CAPUTO_LINEAR = "CaputoLinear"
    ABEL = "AbelSecondKind"
    BAGLEY_TORVIK = "BagleyTorvik"


@dataclass(frozen=True)
class ProblemSpec:
    kind: ProblemKind
    alpha: float
    rhs: Callable
    exact: Optional[Callable] = None
    lam: complex = 0.0
    u0: float = 0.0
    mu: Optional[float] = None


@dataclass(frozen=True)
class SolveReport:
    grid: UniformGrid
    numerical: np.ndarray = field(repr=False)
    max_error: Optional[float]
    schemes: tuple

    def exact_values(self, spec: ProblemSpec):
        if spec.exact is None:
            return None
        return np.asarray(spec.exact(self.grid.nodes), dtype=float)

    def to_csv(self, fh, spec: ProblemSpec) -> None:
        """Write ``n,x,u_num,u_exact,abs_err`` rows."""
        ex = self.exact_values(spec)
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "x", "u_num", "u_exact", "abs_err"])
        for n, x in enumerate(self.grid.nodes):
            u = self.numerical[n]
            if ex is None:
                w.writerow([n, f"{x:.16e}", f"{u:.16e}", "", ""])
            else:
                w.writerow([n, f"{x:.16e}", f"{u:.16e}", f"{ex[n]:.16e}", f"{abs(u - ex[n]):.16e}"])


def _max_error(numerical, spec: ProblemSpec, grid: UniformGrid):
    if spec.exact is None:
        return None
    ex = np.asarray(spec.exact(grid.nodes[1:]))
    return float(np.max(np.abs(numerical[1:] - ex)))


# Manufactured problems --------------------------------------------------------

def caputo_problem(alpha: float, u0: float = 1.0) -> ProblemSpec:
    """``u = u0 + x^3`` with ``f = 6 x^(3-alpha)/Gamma(4-alpha) - x^3 - u0``."""
    if not 0 < alpha < 1:
        raise ValueError(f"Caputo order must lie in (0, 1), got {alpha}")

    def rhs(x):
        x = np.asarray(x, dtype=float)
        return 6.0 * x ** (3.0 - alpha) * rgamma(4.0 - alpha) - x**3 - u0

    def exact(x):
        return u0 + np.asarray(x, dtype=float) ** 3

    return ProblemSpec(ProblemKind.CAPUTO_LINEAR, alpha, rhs, exact, u0=u0)


def abel_problem(alpha: float, lam: complex, f: Callable | float = 1.0, exact=None) -> ProblemSpec:
    if not 0 < alpha < 1:
        raise ValueError(f"Abel order must lie in (0, 1), got {alpha}")
    if callable(f):
        rhs = f
    else:
        const = float(f)

        def rhs(x):
            return np.full(np.shape(x), const)

    return ProblemSpec(ProblemKind.ABEL, alpha, rhs, exact, lam=lam)


def bagley_torvik_problem(mu: float) -> ProblemSpec:
    """``u = x^mu + x^5`` (``mu > 1``) and the matching right-hand side."""
    if not mu > 1:
        raise ValueError(f"mu must exceed 1, got {mu}")

    def rhs(x):
        x = np.asarray(x, dtype=float)
        out = 2.0 * (x**mu + x**5)
        for beta in (mu, 5.0):
            out = out + exact_riemann_liouville_monomial(beta, -2.0, x)
            out = out + 2.0 * exact_riemann_liouville_monomial(beta, -1.5, x)
        return out

    def exact(x):
        x = np.asarray(x, dtype=float)
        return x**mu + x**5

    return ProblemSpec(ProblemKind.BAGLEY_TORVIK, 2.0, rhs, exact, mu=mu)


# Solvers ----------------------------------------------------------------------

def solve_caputo_linear(scheme: ThetaScheme, spec: ProblemSpec, grid: UniformGrid) -> SolveReport:
    """Solve ``h^-a sum omega_{n-j} v^j = v^n + f(x_n) + u0`` step by step."""
    if spec.kind is not ProblemKind.CAPUTO_LINEAR:
        raise ValueError(f"expected a CaputoLinear problem, got {spec.kind}")
    if not math.isclose(scheme.alpha, -spec.alpha, abs_tol=1e-15):
        raise ValueError(f"scheme order must be {-spec.alpha}, got {scheme.alpha}")
    n_steps = grid.N
    omega = weights_by_recurrence(scheme, n_steps).omega
    c = grid.h**scheme.alpha
    denom = c * omega[0] - 1.0
    if abs(denom) < STEP_TOL:
        raise StepSingular(f"h^-alpha omega_0 - 1 = {denom:g}")
    f = np.asarray(spec.rhs(grid.nodes), dtype=float)
    v = np.zeros(n_steps + 1)
    for n in range(1, n_steps + 1):
        hist = np.dot(omega[n:0:-1], v[:n])
        v[n] = (f[n] + spec.u0 - c * hist) / denom
    u = v + spec.u0
    return SolveReport(grid, u, _max_error(u, spec, grid), (scheme,))


def solve_abel(scheme: ThetaScheme, spec: ProblemSpec, grid: UniformGrid) -> SolveReport:
    """Solve ``u^n = f(x_n) + lambda h^alpha sum_{j<=n} omega_{n-j} u^j``."""
    if spec.kind is not ProblemKind.ABEL:
        raise ValueError(f"expected an AbelSecondKind problem, got {spec.kind}")
    if not math.isclose(scheme.alpha, spec.alpha, abs_tol=1e-15):
        raise ValueError(f"scheme order must be {spec.alpha}, got {scheme.alpha}")
    n_steps = grid.N
    omega = weights_by_recurrence(scheme, n_steps).omega
    z = spec.lam * grid.h**scheme.alpha
    denom = 1.0 - z * omega[0]
    if abs(denom) < STEP_TOL:
        raise StepSingular(f"1 - lambda h^alpha omega_0 = {denom:g}")
    dtype = complex if isinstance(z, complex) or np.iscomplexobj(z) else float
    f = np.asarray(spec.rhs(grid.nodes), dtype=dtype)
    u = np.zeros(n_steps + 1, dtype=dtype)
    u[0] = f[0] / denom
    for n in range(1, n_steps + 1):
        u[n] = (f[n] + z * np.dot(omega[n:0:-1], u[:n])) / denom
    return SolveReport(grid, u, _max_error(u, spec, grid), (scheme,))


@dataclass(frozen=True)
class _Operator:
    coef: float
    omega: np.ndarray
    start: np.ndarray  # (N+1, s)


def _coupled_solve(ops: Sequence[_Operator], diag: float, f: np.ndarray) -> np.ndarray:
    """Solve ``sum_k c_k (conv_k + start_k)(u)[n] + diag u^n = f_n`` for ``n >= 1``, ``u^0 = 0``."""
    n_steps = len(f) - 1
    s_star = max(op.start.shape[1] for op in ops)
    u = np.zeros(n_steps + 1)
    lead = sum(op.coef * op.omega[0] for op in ops) + diag
    if s_star > n_steps:
        raise SingularSystem(f"{s_star} coupled starting values need at least that many steps")

    if s_star > 0:
        mat = np.zeros((s_star, s_star))
        for n in range(1, s_star + 1):
            for op in ops:
                for j in range(1, n + 1):
                    mat[n - 1, j - 1] += op.coef * op.omega[n - j]
                s = op.start.shape[1]
                mat[n - 1, :s] += op.coef * op.start[n]
            mat[n - 1, n - 1] += diag
        lu, piv = scipy.linalg.lu_factor(mat)
        if np.any(np.abs(np.diag(lu)) < STEP_TOL):
            raise SingularSystem("coupled starting system is singular")
        u[1 : s_star + 1] = scipy.linalg.lu_solve((lu, piv), f[1 : s_star + 1])

    if abs(lead) < STEP_TOL:
        raise StepSingular(f"implicit step coefficient {lead:g} vanishes")
    for n in range(s_star + 1, n_steps + 1):
        acc = 0.0
        for op in ops:
            s = op.start.shape[1]
            acc += op.coef * (np.dot(op.omega[n:0:-1], u[:n]) + np.dot(op.start[n], u[1 : s + 1]))
        u[n] = (f[n] - acc) / lead
    return u


CORRECTION_MODES = ("leading", "full", "none")


def _start_weights(scheme: ThetaScheme, table, n_steps: int, beta: float, mode: str):
    if mode == "none":
        return np.zeros((n_steps + 1, 0))
    if mode == "leading":
        exps = ExponentSet(float(beta), scheme.alpha, (float(beta),))
    elif mode == "full":
        exps = exponent_set(beta, scheme.alpha)
    else:
        raise ValueError(f"correction must be one of {CORRECTION_MODES}, got {mode!r}")
    return solve_starting_weights(table, exps, n_steps).start_weights


def solve_bagley_torvik(
    scheme1: ThetaScheme,
    scheme2: ThetaScheme,
    spec: ProblemSpec,
    grid: UniformGrid,
    mu: float | None = None,
    correction: str = "leading",
) -> SolveReport:
    """Solve Bagley-Torvik with ``u''`` by ``scheme1`` and ``D^{3/2}`` by ``scheme2``.

    Parameters
    ----------
    correction : {"leading", "full", "none"}
        ``"leading"`` gives each operator one starting weight for the exponent
        ``mu``; this is the setting that matches the reference Bagley-Torvik
        tables. ``"full"`` uses every ``mu + q`` below ``2 - min(1, order)``
        (three weights per operator for ``mu = 1.1``).

    Notes
    -----
    The first ``max(s1, s2)`` unknowns are coupled through the starting
    weights and solved together; the rest follow by scalar implicit steps.

    Raises
    ------
    StepSingular, SingularSystem
    """
    if spec.kind is not ProblemKind.BAGLEY_TORVIK:
        raise ValueError(f"expected a BagleyTorvik problem, got {spec.kind}")
    if scheme1.alpha != -2.0 or scheme2.alpha != -1.5:
        raise ValueError("Bagley-Torvik needs scheme orders -2 and -3/2")
    if mu is None:
        mu = spec.mu
    n_steps, h = grid.N, grid.h
    ops = []
    for scheme, coef in ((scheme1, h**-2.0), (scheme2, 2.0 * h**-1.5)):
        table = weights_by_recurrence(scheme, n_steps)
        start = _start_weights(scheme, table, n_steps, mu, correction)
        ops.append(_Operator(coef, table.omega, start))
    f = np.asarray(spec.rhs(grid.nodes[1:]), dtype=float)
    f = np.concatenate([[0.0], f])
    u = _coupled_solve(ops, 2.0, f)
    return SolveReport(grid, u, _max_error(u, spec, grid), (scheme1, scheme2))


# Convergence tables -----------------------------------------------------------

@dataclass(frozen=True)
class TableRow:
    alpha: Optional[float]
    thetas: tuple
    h: float
    error: float
    rate: float


def observed_rates(errors: Sequence[float]) -> list:
    """``log2(E_{k-1}/E_k)``; the first entry and degenerate ratios are NaN."""
    rates = [math.nan]
    for prev, cur in zip(errors[:-1], errors[1:]):
        if prev > 0 and cur > 0:
            rates.append(math.log2(prev / cur))
        else:
            rates.append(math.nan)
    return rates


def _check_halving(hs):
    for a, b in zip(hs[:-1], hs[1:]):
        if not math.isclose(a, 2.0 * b, rel_tol=1e-12):
            raise ValueError(f"step sizes must halve successively, got {a} -> {b}")


def convergence_table(
    kind,
    family,
    alphas: Sequence[float] | None,
    thetas: Sequence,
    hs: Sequence[float],
    *,
    mu: float = 1.1,
    L: float = 1.0,
    correction: str = "leading",
) -> list:
    """Errors and observed rates for each (alpha, theta) column over ``hs``.

    For ``kind = BagleyTorvik`` each entry of ``thetas`` is a pair
    ``(theta1, theta2)`` and ``alphas`` is ignored.
    """
    kind = ProblemKind(kind) if not isinstance(kind, ProblemKind) else kind
    family = Family.coerce(family)
    hs = [float(h) for h in hs]
    _check_halving(hs)
    rows = []
    if kind is ProblemKind.BAGLEY_TORVIK:
        spec = bagley_torvik_problem(mu)
        for pair in thetas:
            th1, th2 = pair
            s1 = ThetaScheme(family, -2.0, th1)
            s2 = ThetaScheme(family, -1.5, th2)
            errs = [
                solve_bagley_torvik(s1, s2, spec, UniformGrid.from_step(h, L), mu, correction).max_error
                for h in hs
            ]
            rows += [
                TableRow(None, (th1, th2), h, e, r)
                for h, e, r in zip(hs, errs, observed_rates(errs))
            ]
        return rows

    if kind is not ProblemKind.CAPUTO_LINEAR:
        raise ValueError("convergence tables are defined for CaputoLinear and BagleyTorvik")
    for alpha in alphas:
        spec = caputo_problem(alpha)
        for th in thetas:
            scheme = ThetaScheme(family, -alpha, th)
            errs = [solve_caputo_linear(scheme, spec, UniformGrid.from_step(h, L)).max_error for h in hs]
            rows += [
                TableRow(alpha, (th,), h, e, r)
                for h, e, r in zip(hs, errs, observed_rates(errs))
            ]
    return rows
