"""Right-invariant metrics, invariant frames and closed-form geodesics.

Two sign conventions for the Euler-Arnold flow are supported through
:class:`GeodesicModel`.  ``PAPER`` uses dPi^q/dt = -nu Pi^p exactly as
published; ``LEVI_CIVITA`` uses the opposite sign, which is the one whose
curves satisfy the geodesic equation of the metric (checked against direct
Christoffel integration in :mod:`osc_complexity.oracle`).  The two agree
whenever nu = 0 or D = F = 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _special as sp
from .group import AlgebraElement, GroupElement
from .errors import InvalidMetric


class GeodesicModel(enum.Enum):
    LEVI_CIVITA = -1
    PAPER = 1

    @property
    def sigma(self) -> int:
        return self.value

    @classmethod
    def parse(cls, value) -> GeodesicModel:
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        if key in ("paper", "published"):
            return cls.PAPER
        if key in ("levi-civita", "lc", "corrected"):
            return cls.LEVI_CIVITA
        raise ValueError(f"unknown geodesic model {value!r}")


DEFAULT_MODEL = GeodesicModel.LEVI_CIVITA


@dataclass(frozen=True)
class Metric:
    """eta = [[a,0,0,b],[0,1,0,0],[0,0,1,0],[b,0,0,d]] in (e, q, p, alpha) order."""

    a: float
    b: float
    d: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and math.isfinite(self.d)):
            raise InvalidMetric(f"non-finite metric parameters {self}")
        if self.a <= 0.0 or self.det <= 0.0:
            raise InvalidMetric(f"metric not positive definite: a={self.a}, ad-b^2={self.det}")

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.b

    @property
    def eta(self) -> np.ndarray:
        a, b, d = self.a, self.b, self.d
        return np.array([[a, 0, 0, b], [0, 1, 0, 0], [0, 0, 1, 0], [b, 0, 0, d]], dtype=float)

    @property
    def eta_inv(self) -> np.ndarray:
        a, b, d, D = self.a, self.b, self.d, self.det
        return np.array(
            [[d / D, 0, 0, -b / D], [0, 1, 0, 0], [0, 0, 1, 0], [-b / D, 0, 0, a / D]], dtype=float
        )

    def quad(self, x) -> float:
        """eta(x, x) for a coefficient array in (e, q, p, alpha) order."""
        e, q, p, al = x
        return self.a * e * e + 2.0 * self.b * e * al + self.d * al * al + q * q + p * p


@dataclass(frozen=True)
class GeodesicParams:
    """Integration constants: Pi^e = A, Pi^alpha = B, (Pi^q, Pi^p)(0) = (F, D)."""

    A: float
    B: float
    D: float
    F: float

    def as_array(self) -> np.ndarray:
        return np.array([self.A, self.B, self.D, self.F])

    def initial_pi(self) -> np.ndarray:
        """Pi(0) in (e, q, p, alpha) order."""
        return np.array([self.A, self.F, self.D, self.B])

    @classmethod
    def from_initial_pi(cls, pi0) -> GeodesicParams:
        A, F, D, B = (float(v) for v in pi0)
        return cls(A, B, D, F)


def nu(m: Metric, gp: GeodesicParams) -> float:
    """Euler-Arnold frequency a A + (b + 1) B."""
    return m.a * gp.A + (m.b + 1.0) * gp.B


def nu_tilde(m: Metric, gp: GeodesicParams, model: GeodesicModel = DEFAULT_MODEL) -> float:
    """Angular rate of the (q, p) projection of the geodesic.

    PAPER: a A + (b + 2) B.  LEVI_CIVITA: -(a A + b B), i.e. minus the conserved
    momentum conjugate to e.
    """
    return model.sigma * nu(m, gp) + gp.B


# --------------------------------------------------------------------------- frames


def _cs(a: np.ndarray):
    al = a[..., 3]
    return np.cos(al), np.sin(al)


def mu_right(a) -> np.ndarray:
    """Right-invariant frame components mu_R[i, j] (row: coordinate, column: generator)."""
    a = np.asarray(a, dtype=float)
    c, s = _cs(a)
    q, p = a[..., 1], a[..., 2]
    out = np.zeros(a.shape[:-1] + (4, 4))
    out[..., 0, 0] = 1.0
    out[..., 0, 1] = 0.5 * (p * c - q * s)
    out[..., 0, 2] = -0.5 * (p * s + q * c)
    out[..., 1, 1] = c
    out[..., 1, 2] = -s
    out[..., 2, 1] = s
    out[..., 2, 2] = c
    out[..., 3, 3] = 1.0
    return out


def lambda_right(a) -> np.ndarray:
    """Inverse of :func:`mu_right`: right Maurer-Cartan coefficients lambda_R[i, k]."""
    a = np.asarray(a, dtype=float)
    c, s = _cs(a)
    q, p = a[..., 1], a[..., 2]
    out = np.zeros(a.shape[:-1] + (4, 4))
    out[..., 0, 0] = 1.0
    out[..., 0, 1] = -0.5 * p
    out[..., 0, 2] = 0.5 * q
    out[..., 1, 1] = c
    out[..., 1, 2] = s
    out[..., 2, 1] = -s
    out[..., 2, 2] = c
    out[..., 3, 3] = 1.0
    return out


def dlambda_right(a) -> np.ndarray:
    """Coordinate derivatives: out[..., k, i, j] = d lambda_R[i, j] / d a^k."""
    a = np.asarray(a, dtype=float)
    c, s = _cs(a)
    out = np.zeros(a.shape[:-1] + (4, 4, 4))
    out[..., 2, 0, 1] = -0.5  # d/dp of -p/2
    out[..., 1, 0, 2] = 0.5  # d/dq of q/2
    out[..., 3, 1, 1] = -s
    out[..., 3, 1, 2] = c
    out[..., 3, 2, 1] = -c
    out[..., 3, 2, 2] = -s
    return out


def mu_left(a) -> np.ndarray:
    """Left-invariant frame components mu_L[i, j]."""
    a = np.asarray(a, dtype=float)
    q, p = a[..., 1], a[..., 2]
    out = np.zeros(a.shape[:-1] + (4, 4))
    out[..., 0, 0] = 1.0
    out[..., 0, 1] = -0.5 * p
    out[..., 0, 2] = 0.5 * q
    out[..., 1, 1] = 1.0
    out[..., 1, 3] = -p
    out[..., 2, 2] = 1.0
    out[..., 2, 3] = q
    out[..., 3, 3] = 1.0
    return out


def structure_constants() -> np.ndarray:
    """c[k, i, j] with [X_i, X_j] = i c^k_ij X_k in (E, P, Q, H) <-> (e, q, p, alpha) order."""
    c = np.zeros((4, 4, 4))
    c[0, 2, 1], c[0, 1, 2] = 1.0, -1.0  # [Q, P] = iE
    c[1, 2, 3], c[1, 3, 2] = 1.0, -1.0  # [Q, H] = iP
    c[2, 1, 3], c[2, 3, 1] = -1.0, 1.0  # [P, H] = -iQ
    return c


# --------------------------------------------------------------------------- flows


def euler_arnold_pi(m: Metric, gp: GeodesicParams, t: float, model: GeodesicModel = DEFAULT_MODEL):
    """(Pi^e, Pi^q, Pi^p, Pi^alpha) at time t."""
    w = model.sigma * nu(m, gp) * t
    c, s = math.cos(w), math.sin(w)
    return (gp.A, -gp.D * s + gp.F * c, gp.D * c + gp.F * s, gp.B)


def euler_arnold_rhs(m: Metric, pi, model: GeodesicModel = DEFAULT_MODEL) -> np.ndarray:
    """Right-hand side of the Euler-Arnold system for the given convention.

    The PAPER branch is eta^{ij} eta_kl c^l_jm Pi^k Pi^m evaluated from the
    structure constants; LEVI_CIVITA is its negative.
    """
    pi = np.asarray(pi, dtype=float)
    v = np.einsum("kl,ljm,...k,...m->...j", m.eta, structure_constants(), pi, pi)
    return model.sigma * np.einsum("ij,...j->...i", m.eta_inv, v)


def geodesic_point(m: Metric, gp: GeodesicParams, t: float, model: GeodesicModel = DEFAULT_MODEL) -> GroupElement:
    """Closed-form geodesic through the identity, evaluated at parameter t."""
    nt = nu_tilde(m, gp, model)
    x = nt * t
    S, C = t * sp.sinc(x), t * sp.cosc(x)
    K = gp.D * gp.D + gp.F * gp.F
    return GroupElement(
        e=gp.A * t - 0.5 * K * t * t * sp.sinm(x),
        alpha=gp.B * t,
        q=gp.F * S - gp.D * C,
        p=gp.D * S + gp.F * C,
    )


def geodesic_velocity(m: Metric, gp: GeodesicParams, t: float, model: GeodesicModel = DEFAULT_MODEL) -> np.ndarray:
    """d/dt of :func:`geodesic_point` in (e, q, p, alpha) order."""
    nt = nu_tilde(m, gp, model)
    x = nt * t
    c, s = math.cos(x), math.sin(x)
    K = gp.D * gp.D + gp.F * gp.F
    return np.array([
        gp.A - 0.5 * K * t * sp.cosc(x),
        gp.F * c - gp.D * s,
        gp.D * c + gp.F * s,
        gp.B,
    ])


def speed(m: Metric, gp: GeodesicParams) -> float:
    """sqrt(eta(Pi, Pi)); constant along the geodesic and equal to its length on [0, 1]."""
    return math.sqrt(m.quad(gp.initial_pi()))


def exp_is_geodesic(m: Metric, x: AlgebraElement, tol: float = 1e-12) -> bool:
    """Whether t -> exp(t X) is a geodesic: eta_kl c^l_jm x^k x^m = 0."""
    lam = m.a * x.xe + (m.b + 1.0) * x.xalpha
    return abs(x.xq * lam) <= tol and abs(x.xp * lam) <= tol


def params_for_exponential(x: AlgebraElement) -> GeodesicParams:
    """Geodesic constants with Pi(0) equal to the algebra element."""
    return GeodesicParams(A=x.xe, B=x.xalpha, D=x.xp, F=x.xq)


def eq58_residual(
    m: Metric,
    gp: GeodesicParams,
    curve: Callable[[float], GroupElement],
    ts: Sequence[float],
    model: GeodesicModel = DEFAULT_MODEL,
    h: float = 1e-5,
) -> float:
    """max_t |da/dt - mu_R(a) Pi(t)| with da/dt from central differences of ``curve``."""
    worst = 0.0
    for t in ts:
        a = curve(t).as_array()
        da = (curve(t + h).as_array() - curve(t - h).as_array()) / (2.0 * h)
        pi = np.array(euler_arnold_pi(m, gp, t, model))
        worst = max(worst, float(np.max(np.abs(da - mu_right(a) @ pi))))
    return worst
