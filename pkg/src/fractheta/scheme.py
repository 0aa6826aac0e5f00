"""Fractional theta-method parametrisation and generating functions.

Two one-parameter families of second-order convolution quadratures for the
Riemann-Liouville operator ``I^alpha``. Special members:

    family   theta = 0         theta = 1/2
    BT       fractional BDF2   fractional trapezoidal rule
    BN       fractional BDF2   order-2 generalised Newton-Gregory

Both share the quadratic

    Q(xi) = (3/2 - theta) - (2 - 2 theta) xi + (1/2 - theta) xi^2

and have generating functions

    BT:  omega(xi) = [(1 - theta + theta xi) / Q(xi)]^alpha
    BN:  omega(xi) = (1 - alpha theta + alpha theta xi) / Q(xi)^alpha

Positive ``alpha`` is integration, negative ``alpha`` differentiation.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolation, DegenerateWeight, PoleEvaluation

POLE_TOL = 1e-14


class Family(str, enum.Enum):
    BT = "BT"
    BN = "BN"

    @classmethod
    def coerce(cls, value) -> "Family":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ConstraintViolation(
                f"unknown family {value!r}; expected 'BT' or 'BN'",
                constraint="family",
            ) from None


class StabilityAdvisory(UserWarning):
    """BN scheme with ``alpha * theta > 1/2``: convergent but not A(pi/2)-stable."""


@dataclass(frozen=True)
class ThetaScheme:
    """A member of the BT or BN family with its theta range checked.

    The degenerate BN case ``alpha * theta == 1`` (``omega_0 = 0``) can be
    represented, so the explicit sums can still be evaluated; use
    :func:`make_scheme` to reject it up front.

    Parameters
    ----------
    family : Family
        ``Family.BT`` or ``Family.BN``.
    alpha : float
        Order of ``I^alpha``; negative values give fractional derivatives.
    theta : float
        Family parameter.
    """

    family: Family
    alpha: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family.coerce(self.family))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "theta", float(self.theta))
        _validate(self.family, self.alpha, self.theta)

    @property
    def advisory(self) -> bool:
        """True when the scheme is convergent but loses A(pi/2)-stability."""
        return self.family is Family.BN and self.alpha * self.theta > 0.5

    def with_alpha(self, alpha: float) -> "ThetaScheme":
        return ThetaScheme(self.family, alpha, self.theta)

    def __str__(self):
        return f"{self.family.value}(alpha={self.alpha:g}, theta={self.theta:g})"


def _validate(family: Family, alpha: float, theta: float) -> None:
    if not (math.isfinite(alpha) and math.isfinite(theta)):
        raise ConstraintViolation(
            f"alpha and theta must be finite, got alpha={alpha}, theta={theta}",
            constraint="finite",
        )
    if family is Family.BT:
        if alpha <= 0 and not theta < 0.5:
            raise ConstraintViolation(
                f"BT with alpha={alpha} <= 0 requires theta < 1/2, got {theta}",
                constraint="theta < 1/2 (alpha <= 0)",
                bound=0.5,
            )
        if alpha > 0 and not theta <= 0.5:
            raise ConstraintViolation(
                f"BT with alpha={alpha} > 0 requires theta <= 1/2, got {theta}",
                constraint="theta <= 1/2 (alpha > 0)",
                bound=0.5,
            )
    else:
        if not theta <= 1.0:
            raise ConstraintViolation(
                f"BN requires theta <= 1, got {theta}",
                constraint="theta <= 1",
                bound=1.0,
            )


def make_scheme(family, alpha: float, theta: float) -> ThetaScheme:
    """Build a validated scheme, warning when a BN scheme is not A(pi/2)-stable.

    Raises
    ------
    ConstraintViolation
        If ``theta`` is outside the admissible range of the family.
    DegenerateWeight
        For a BN scheme with ``alpha * theta == 1``.
    """
    scheme = ThetaScheme(family, alpha, theta)
    if scheme.family is Family.BN and scheme.alpha * scheme.theta == 1.0:
        raise DegenerateWeight(
            f"BN with alpha*theta = 1 has omega_0 = 0 (alpha={alpha}, theta={theta})"
        )
    if scheme.advisory:
        warnings.warn(
            f"{scheme}: alpha*theta = {scheme.alpha * scheme.theta:g} > 1/2, "
            "the method is not A(pi/2)-stable",
            StabilityAdvisory,
            stacklevel=2,
        )
    return scheme


def _quadratic(theta, xi):
    return (1.5 - theta) - (2.0 - 2.0 * theta) * xi + (0.5 - theta) * xi * xi


def _numerator(scheme: ThetaScheme, xi):
    th = scheme.theta
    if scheme.family is Family.BT:
        return 1.0 - th + th * xi
    at = scheme.alpha * th
    return 1.0 - at + at * xi


def gen_fn_eval(scheme: ThetaScheme, xi):
    """Evaluate the generating function ``omega(xi)`` of ``scheme``.

    Complex powers use the principal branch ``exp(alpha * Log w)``. Accepts a
    scalar or an array of complex arguments and returns the same shape.

    Raises
    ------
    PoleEvaluation
        If any ``xi`` lies within ``1e-14`` of a singular point.
    """
    scalar = np.ndim(xi) == 0
    z = np.asarray(xi, dtype=complex)
    alpha = scheme.alpha
    if alpha == 0.0:
        out = np.ones_like(z)
        return complex(out) if scalar else out

    q = _quadratic(scheme.theta, z)
    p = _numerator(scheme, z)
    q_zero = np.abs(q) < POLE_TOL
    if alpha > 0 and np.any(q_zero):
        raise PoleEvaluation(f"{scheme}: xi={xi!r} is a pole (Q(xi) = 0)")

    if scheme.family is Family.BT:
        p_zero = np.abs(p) < POLE_TOL
        if alpha < 0 and np.any(p_zero):
            raise PoleEvaluation(f"{scheme}: xi={xi!r} is a pole (1-theta+theta*xi = 0)")
        vanish = p_zero | q_zero
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(vanish, 1.0, p / np.where(q_zero, 1.0, q))
            out = np.exp(alpha * np.log(w))
        out = np.where(vanish, 0.0, out)
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            qs = np.where(q_zero, 1.0, q)
            out = p * np.exp(-alpha * np.log(qs))
        out = np.where(q_zero, 0.0, out)
    return complex(out) if scalar else out


def reduced_gen_fn(scheme: ThetaScheme, xi):
    """Regular factor ``omega(xi) * (1 - xi)^alpha``, equal to 1 at ``xi = 1``."""
    z = np.asarray(xi, dtype=complex)
    a, th = scheme.alpha, scheme.theta
    d = 1.0 - z
    # written in powers of (1 - xi) so the value at xi = 1 is exactly 1
    if scheme.family is Family.BT:
        w = (1.0 - th * d) / (1.0 + (0.5 - th) * d)
        out = np.exp(a * np.log(w))
    else:
        out = (1.0 - a * th * d) * np.exp(-a * np.log(1.0 + (0.5 - th) * d))
    return complex(out) if np.ndim(xi) == 0 else out


# Classical second-order generating functions used as regression anchors.

def fbdf2(alpha: float, xi):
    xi = np.asarray(xi, dtype=complex)
    return (1.5 - 2.0 * xi + 0.5 * xi * xi) ** (-alpha)


def ftr(alpha: float, xi):
    xi = np.asarray(xi, dtype=complex)
    return 2.0 ** (-alpha) * ((1.0 + xi) / (1.0 - xi)) ** alpha


def gngf2(alpha: float, xi):
    xi = np.asarray(xi, dtype=complex)
    return (1.0 - alpha / 2.0 + 0.5 * alpha * xi) / (1.0 - xi) ** alpha
