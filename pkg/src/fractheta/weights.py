"""Convolution weights of the BT/BN theta-methods.

Three independent routes are provided:

* :func:`bt_weight_direct` / :func:`bn_weight_direct` evaluate the explicit
  binomial convolution sums, ``O(j^2)`` per weight;
* :func:`weights_by_recurrence` uses the ``O(N)`` recurrence obtained from
  ``psi(xi) omega'(xi) = phi(xi) omega(xi)`` for ``omega = p1^a p2^b``;
* :func:`series_oracle` factors each polynomial into its roots, expands every
  linear factor as a binomial series and convolves the results.

The recurrence is the production path; the other two exist for cross-checks.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DegenerateWeight
from .scheme import Family, ThetaScheme, reduced_gen_fn


@dataclass(frozen=True)
class WeightTable:
    """Weights ``omega_0 .. omega_{n_max}`` of one scheme."""

    scheme: ThetaScheme
    omega: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.omega, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "omega", arr)

    @property
    def n_max(self) -> int:
        return len(self.omega) - 1

    def __len__(self):
        return len(self.omega)

    def __getitem__(self, j):
        return self.omega[j]

    def to_csv(self, fh) -> None:
        """Write ``j,omega`` rows with 17 significant digits."""
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["j", "omega"])
        for j, v in enumerate(self.omega):
            w.writerow([j, f"{v:.16e}"])


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Coefficients of ``phi = a p1' p2 + b p1 p2'`` and ``psi = p1 p2``."""

    phi: np.ndarray
    psi: np.ndarray


def binomial_series(a: float, n: int) -> np.ndarray:
    """``C(a, k)`` for ``k = 0..n`` by ``C(a,k) = C(a,k-1) (a-k+1)/k``."""
    out = np.empty(n + 1)
    out[0] = 1.0
    c = 1.0
    for k in range(1, n + 1):
        c *= (a - k + 1) / k
        out[k] = c
    return out


def bt_weight_direct(scheme: ThetaScheme, j: int) -> float:
    """Weight ``omega_j`` of a BT scheme from the triple binomial convolution."""
    if scheme.family is not Family.BT:
        raise ValueError(f"expected a BT scheme, got {scheme}")
    a, th = scheme.alpha, scheme.theta
    k = np.arange(j + 1)
    k1 = (th / (1.0 - th)) ** k * binomial_series(a, j)
    k2 = (-(1.0 - 2.0 * th) / (3.0 - 2.0 * th)) ** k * binomial_series(-a, j)
    k3 = (-1.0) ** k * binomial_series(-a, j)
    total = 0.0
    for i in range(j + 1):
        # sum_s k2[s] * k3[j-i-s]
        m = j - i
        total += k1[i] * np.dot(k2[: m + 1], k3[m::-1])
    return (2.0 * (1.0 - th) / (3.0 - 2.0 * th)) ** a * total


def _bn_kappa(a: float, th: float, j: int) -> float:
    if j < 0:
        return 0.0
    g = (1.0 - 2.0 * th) / (3.0 - 2.0 * th)
    b = binomial_series(-a, j)
    k = np.arange(j + 1)
    return (-1.0) ** j * float(np.sum(g ** (j - k) * b * b[::-1]))


def bn_weight_direct(scheme: ThetaScheme, j: int) -> float:
    """Weight ``omega_j`` of a BN scheme from its binomial sum (``kappa_{-1} = 0``)."""
    if scheme.family is not Family.BN:
        raise ValueError(f"expected a BN scheme, got {scheme}")
    a, th = scheme.alpha, scheme.theta
    at = a * th
    return (2.0 / (3.0 - 2.0 * th)) ** a * (
        (1.0 - at) * _bn_kappa(a, th, j) + at * _bn_kappa(a, th, j - 1)
    )


def direct_weights(scheme: ThetaScheme, n_max: int) -> WeightTable:
    fn = bt_weight_direct if scheme.family is Family.BT else bn_weight_direct
    return WeightTable(scheme, [fn(scheme, j) for j in range(n_max + 1)])


def factorization(scheme: ThetaScheme):
    """Return ``(p1, a), (p2, b)`` with ``omega = p1^a p2^b`` (ascending coefficients)."""
    a, th = scheme.alpha, scheme.theta
    q = np.array([1.5 - th, -(2.0 - 2.0 * th), 0.5 - th])
    if scheme.family is Family.BT:
        return (np.array([1.0 - th, th]), a), (q, -a)
    return (np.array([1.0 - a * th, a * th]), 1.0), (q, -a)


def recurrence_coeffs(scheme: ThetaScheme) -> RecurrenceCoeffs:
    """Closed-form ``phi_0..phi_2`` and ``psi_0..psi_3`` for the scheme's family."""
    a, th = scheme.alpha, scheme.theta
    if scheme.family is Family.BT:
        phi = [
            a / 2.0 * (2.0 * th * th - 5.0 * th + 4.0),
            a * (2.0 * th - 1.0) * (1.0 - th),
            a * th / 2.0 * (2.0 * th - 1.0),
        ]
        psi = [
            0.5 * (3.0 - 2.0 * th) * (1.0 - th),
            0.5 * (1.0 - 2.0 * th) * (3.0 * th - 4.0),
            0.5 * (1.0 - th) * (1.0 - 6.0 * th),
            0.5 * th * (1.0 - 2.0 * th),
        ]
    else:
        at = a * th
        phi = [
            2.0 * a * (th - 1.0) * (at - 1.0) - at * (th - 1.5),
            a * (2.0 * th * th + 3.0 * at - 4.0 * at * th - 1.0),
            at * (0.5 - th - a + 2.0 * at),
        ]
        psi = [
            0.5 * (3.0 - 2.0 * th) * (1.0 - at),
            at / 2.0 * (3.0 - 2.0 * th) + 2.0 * (1.0 - th) * (at - 1.0),
            0.5 * (at - 1.0) * (2.0 * th - 1.0) + 2.0 * at * (th - 1.0),
            0.5 * at * (1.0 - 2.0 * th),
        ]
    return RecurrenceCoeffs(np.array(phi), np.array(psi))


def generic_recurrence_coeffs(scheme: ThetaScheme) -> RecurrenceCoeffs:
    """``phi`` and ``psi`` built by polynomial arithmetic from the factorisation."""
    (p1, a), (p2, b) = factorization(scheme)
    phi = P.polyadd(a * P.polymul(P.polyder(p1), p2), b * P.polymul(p1, P.polyder(p2)))
    psi = P.polymul(p1, p2)
    return RecurrenceCoeffs(_pad(phi, 3), _pad(psi, 4))


def _pad(c, n):
    out = np.zeros(max(n, len(c)))
    out[: len(c)] = c
    return out


def recurrence_weights(phi, psi, omega0: float, n_max: int) -> np.ndarray:
    """Run ``omega_k = sum_{j<k} (phi_{k-j-1} - j psi_{k-j}) omega_j / (k psi_0)``.

    ``phi`` and ``psi`` are finite coefficient lists; only their nonzero tail
    enters each step so the cost is ``O(n_max * len(psi))``.
    """
    phi = np.asarray(phi, dtype=float)
    psi = np.asarray(psi, dtype=float)
    if psi[0] == 0.0:
        raise DegenerateWeight("psi_0 = 0: the weight recurrence cannot be started")
    d = max(len(phi), len(psi) - 1)
    phi = _pad(phi, d)
    psi = _pad(psi, d + 1)
    omega = np.zeros(n_max + 1)
    omega[0] = omega0
    for k in range(1, n_max + 1):
        acc = 0.0
        for i in range(1, min(k, d) + 1):
            acc += (phi[i - 1] - (k - i) * psi[i]) * omega[k - i]
        omega[k] = acc / (k * psi[0])
    return omega


def weights_by_recurrence(scheme: ThetaScheme, n_max: int) -> WeightTable:
    """Weights ``omega_0..omega_{n_max}`` in ``O(n_max)`` operations.

    Raises
    ------
    DegenerateWeight
        If ``psi_0 = 0`` (BN with ``alpha * theta = 1``).
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    a, th = scheme.alpha, scheme.theta
    if scheme.family is Family.BN and a * th == 1.0:
        raise DegenerateWeight(f"{scheme}: psi_0 = 0, the weight recurrence cannot be started")
    if scheme.family is Family.BN and a * th > 0.5:
        return WeightTable(scheme, _bn_factored(scheme, n_max))
    co = recurrence_coeffs(scheme)
    if scheme.family is Family.BT:
        omega0 = ((2.0 - 2.0 * th) / (3.0 - 2.0 * th)) ** a
    else:
        omega0 = 2.0**a * (1.0 - a * th) / (3.0 - 2.0 * th) ** a
    return WeightTable(scheme, recurrence_weights(co.phi, co.psi, omega0, n_max))


def _bn_factored(scheme: ThetaScheme, n_max: int) -> np.ndarray:
    # For alpha*theta > 1/2 the root of 1 - at + at*xi lies inside the unit
    # disk and the full recurrence amplifies rounding like |root|^-k. Run the
    # recurrence on Q^-alpha alone (roots 1 and 1/gamma) and apply the
    # numerator as a two-term filter.
    (p1, _), (q, b) = factorization(scheme)
    phi = b * P.polyder(q)
    kappa = recurrence_weights(phi, q, q[0] ** b, n_max)
    out = p1[0] * kappa
    out[1:] += p1[1] * kappa[:-1]
    return out


def _power_series(coeffs, e: float, n_max: int) -> np.ndarray:
    """Taylor coefficients of ``p(xi)^e`` from the roots of ``p``."""
    c = np.asarray(coeffs, dtype=float)
    # a top coefficient below rounding level puts a root beyond 1e16 whose
    # factor is 1 to working precision; dropping it keeps np.roots finite
    big = np.max(np.abs(c))
    while len(c) > 1 and abs(c[-1]) <= 1e-16 * big:
        c = c[:-1]
    shift = 0
    while c[0] == 0.0:
        c = c[1:]
        shift += 1
    if shift:
        m = shift * e
        if m != int(m) or m < 0:
            raise ValueError("branch point at xi = 0")
        shift = int(m)
    out = np.zeros(n_max + 1, dtype=complex)
    out[0] = complex(c[0]) ** e
    k = np.arange(n_max + 1)
    binom = binomial_series(e, n_max)
    for r in np.roots(c[::-1]):
        out = np.convolve(out, binom * (-1.0 / r) ** k)[: n_max + 1]
    if shift:
        out = np.concatenate([np.zeros(shift), out])[: n_max + 1]
    return out


def series_oracle(scheme: ThetaScheme, n_max: int) -> WeightTable:
    """Brute-force ``O(n_max^2)`` weights from root factorisation and convolution."""
    (p1, a), (p2, b) = factorization(scheme)
    if scheme.alpha == 0.0 and scheme.family is Family.BT:
        omega = np.zeros(n_max + 1)
        omega[0] = 1.0
        return WeightTable(scheme, omega)
    s = np.convolve(_power_series(p1, a, n_max), _power_series(p2, b, n_max))[: n_max + 1]
    return WeightTable(scheme, s.real)


def consistency_constants(scheme: ThetaScheme, step: float = 1e-6):
    """``(omega~(1), omega~'(1))`` of the regular factor ``(1-xi)^alpha omega(xi)``.

    The derivative is a central finite difference; a consistent scheme has
    ``(1, alpha/2)``.
    """
    c0 = reduced_gen_fn(scheme, 1.0).real
    d = (reduced_gen_fn(scheme, 1.0 + step) - reduced_gen_fn(scheme, 1.0 - step)).real
    return c0, d / (2.0 * step)


def relative_difference(a, b) -> float:
    """Normwise relative difference ``max|a - b| / max|b|``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.max(np.abs(b))
    return float(np.max(np.abs(a - b)) / (scale if scale > 0 else 1.0))
