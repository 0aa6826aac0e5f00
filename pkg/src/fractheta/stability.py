"""Stability regions for the Abel test equation ``u = f + lambda I^alpha u``.

The numerical scheme is stable for ``z = lambda h^alpha`` outside the set
``{1 / omega(xi) : |xi| <= 1}``. Only the image of the unit circle is sampled
here; sector tests on its argument give evidence of A(vartheta)-stability.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .scheme import Family, ThetaScheme, gen_fn_eval

DEFAULT_SAMPLES = 4096


@dataclass(frozen=True)
class BoundaryCurve:
    """Sampled boundary ``z(phi) = 1/omega(exp(i phi))``, ``0 < phi < 2 pi``.

    ``limit_point`` is 0 for ``alpha > 0`` (the image of ``phi -> 0``) and
    ``None`` otherwise, when the curve escapes to infinity.
    """

    scheme: ThetaScheme
    phi: np.ndarray = field(repr=False)
    z: np.ndarray = field(repr=False)
    limit_point: Optional[complex] = None

    @property
    def points(self) -> np.ndarray:
        if self.limit_point is None:
            return self.z
        return np.append(self.z, self.limit_point)

    def to_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["phi", "re_z", "im_z"])
        for p, z in zip(self.phi, self.z):
            w.writerow([f"{p:.16e}", f"{z.real:.16e}", f"{z.imag:.16e}"])
        if self.limit_point is not None:
            w.writerow([f"{0.0:.16e}", f"{self.limit_point.real:.16e}", f"{self.limit_point.imag:.16e}"])


def boundary_curve(scheme: ThetaScheme, m_samples: int = DEFAULT_SAMPLES) -> BoundaryCurve:
    """Sample ``1/omega`` at ``phi_k = 2 pi k / (m + 1)``, ``k = 1..m``."""
    if m_samples < 16:
        raise ValueError(f"need at least 16 samples, got {m_samples}")
    k = np.arange(1, m_samples + 1)
    phi = 2.0 * np.pi * k / (m_samples + 1)
    omega = gen_fn_eval(scheme, np.exp(1j * phi))
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(omega == 0, complex(np.inf, 0.0), 1.0 / np.where(omega == 0, 1.0, omega))
    limit = 0j if scheme.alpha > 0 else None
    return BoundaryCurve(scheme, phi, z, limit)


def real_intercept(scheme: ThetaScheme) -> float:
    """Closed form of ``1/omega(-1)``.

    Returns ``inf`` when the denominator vanishes (BT at ``theta = 1/2``) and
    ``nan`` for the indeterminate 0/0 case (BN with ``theta = 1``,
    ``alpha = 1/2``).
    """
    a, th = scheme.alpha, scheme.theta
    if a == 0.0:
        return 1.0
    if scheme.family is Family.BT:
        base = 1.0 - 2.0 * th
        if base == 0.0:
            return math.inf
        return (4.0 * (1.0 - th) / base) ** a
    if th == 1.0:
        num = 0.0 if a > 0 else math.inf
    else:
        num = (4.0 * (1.0 - th)) ** a
    den = 1.0 - 2.0 * a * th
    if den == 0.0:
        return math.nan if num == 0.0 else math.inf
    return num / den


@dataclass(frozen=True)
class Verdict:
    stable: bool
    phi: Optional[float] = None
    z: Optional[complex] = None

    def __bool__(self):
        return self.stable


def a_theta_check(curve: BoundaryCurve, vartheta: float, tol: float = 1e-10) -> Verdict:
    """Look for boundary points inside the sector ``|arg z - pi| < vartheta``.

    A point counts as a violation only if it lies more than ``tol`` radians
    inside the sector. The first witness (smallest ``phi``) is reported.
    """
    if not 0 < vartheta <= math.pi:
        raise ValueError(f"vartheta must lie in (0, pi], got {vartheta}")
    z = curve.z
    finite = np.isfinite(z) & (z != 0)
    dist = math.pi - np.abs(np.angle(z))  # |arg z - pi| with arg in (-pi, pi]
    bad = finite & (dist < vartheta - tol)
    if not np.any(bad):
        return Verdict(True)
    i = int(np.argmax(bad))
    return Verdict(False, float(curve.phi[i]), complex(z[i]))


def a_stability_angle(alpha: float) -> float:
    """Half-opening ``(1 - alpha/2) pi`` of the analytic stability sector."""
    return (1.0 - alpha / 2.0) * math.pi


def max_abs_arg(curve: BoundaryCurve) -> float:
    z = curve.z
    z = z[np.isfinite(z) & (z != 0)]
    return float(np.max(np.abs(np.angle(z))))
