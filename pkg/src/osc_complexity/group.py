"""Exact arithmetic on the oscillator group.

Elements are written g(e, alpha, q, p) = exp(ieE) exp(i alpha H) exp(i(pQ + qP)),
with [Q, P] = iE, [Q, H] = iP, [P, H] = -iQ and E central.  Whenever an
element or an algebra element is flattened to an array the coordinate order
is (e, q, p, alpha), matching the index order of the metric matrix; this is
the only place that convention is stated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import _special as sp
from .errors import DegenerateAutomorphism, NotInExponentialImage

EPS_EXCL = 1e-9
"""Absolute tolerance on |alpha - 2 pi k| for the set missed by the exponential map."""


@dataclass(frozen=True)
class GroupElement:
    e: float = 0.0
    alpha: float = 0.0
    q: float = 0.0
    p: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.e, self.alpha, self.q, self.p)):
            raise ValueError(f"non-finite group coordinates: {self}")

    @property
    def r2(self) -> float:
        return self.q * self.q + self.p * self.p

    def as_array(self) -> np.ndarray:
        return np.array([self.e, self.q, self.p, self.alpha])

    @classmethod
    def from_array(cls, a) -> GroupElement:
        e, q, p, alpha = (float(v) for v in a)
        return cls(e, alpha, q, p)

    def __mul__(self, other: GroupElement) -> GroupElement:
        return compose(self, other)

    def distance_to(self, other: GroupElement) -> float:
        """Max-abs coordinate difference (not a group-invariant distance)."""
        return float(np.max(np.abs(self.as_array() - other.as_array())))


IDENTITY = GroupElement()


@dataclass(frozen=True)
class AlgebraElement:
    """X = xe E + xp Q + xq P + xalpha H."""

    xe: float = 0.0
    xq: float = 0.0
    xp: float = 0.0
    xalpha: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.xe, self.xq, self.xp, self.xalpha)):
            raise ValueError(f"non-finite algebra coefficients: {self}")

    def as_array(self) -> np.ndarray:
        return np.array([self.xe, self.xq, self.xp, self.xalpha])

    @classmethod
    def from_array(cls, x) -> AlgebraElement:
        return cls(*(float(v) for v in x))

    def scaled(self, s: float) -> AlgebraElement:
        return AlgebraElement(s * self.xe, s * self.xq, s * self.xp, s * self.xalpha)


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """Group product g * h; the rotation of the right factor acts on the left translation."""
    c, s = math.cos(h.alpha), math.sin(h.alpha)
    qr = g.q * c - g.p * s
    pr = g.p * c + g.q * s
    return GroupElement(
        e=g.e + h.e + 0.5 * h.p * qr - 0.5 * h.q * pr,
        alpha=g.alpha + h.alpha,
        q=h.q + qr,
        p=h.p + pr,
    )


def inverse(g: GroupElement) -> GroupElement:
    c, s = math.cos(g.alpha), math.sin(g.alpha)
    return GroupElement(
        e=-g.e,
        alpha=-g.alpha,
        q=-(g.q * c + g.p * s),
        p=-(g.p * c - g.q * s),
    )


def exp(x: AlgebraElement) -> GroupElement:
    """Closed-form exponential map exp(iX) evaluated at unit time."""
    th = x.xalpha
    # q + ip = (xq + i xp) (e^{i th} - 1)/(i th)
    s, c = sp.sinc(th), sp.cosc(th)
    q = x.xq * s - x.xp * c
    p = x.xp * s + x.xq * c
    w2 = x.xq * x.xq + x.xp * x.xp
    return GroupElement(e=x.xe - 0.5 * w2 * sp.sinm(th), alpha=th, q=q, p=p)


def in_excluded_set(g: GroupElement, tol: float = EPS_EXCL) -> bool:
    k = sp.nearest_pole(g.alpha)
    return k != 0 and abs(g.alpha - 2.0 * math.pi * k) < tol and g.r2 > 0.0


def log(g: GroupElement) -> AlgebraElement:
    """Principal logarithm (inverse of :func:`exp` for |xalpha| < 2 pi)."""
    if in_excluded_set(g):
        raise NotInExponentialImage(
            f"alpha={g.alpha!r} is a nonzero multiple of 2pi and q^2+p^2={g.r2!r} > 0"
        )
    a = g.alpha
    if g.r2 == 0.0:
        return AlgebraElement(xe=g.e, xq=0.0, xp=0.0, xalpha=a)
    hc = sp.half_cot(a)
    return AlgebraElement(
        xe=g.e + 0.25 * g.r2 * sp.heis(a),
        xq=hc * g.q + 0.5 * a * g.p,
        xp=hc * g.p - 0.5 * a * g.q,
        xalpha=a,
    )


@dataclass(frozen=True)
class Automorphism:
    """Algebra automorphism from one of the two standard families.

    first:  Q' = mu Q + nu P + (nu sigma + mu rho) E,  P' = -nu Q + mu P + (mu sigma - nu rho) E,
            H' = H + rho Q + sigma P + tau E,          E' = (mu^2 + nu^2) E
    second: Q' = mu Q + nu P - (nu sigma + mu rho) E,  P' = nu Q - mu P + (mu sigma - nu rho) E,
            H' = -H + rho Q + sigma P + tau E,         E' = -(mu^2 + nu^2) E
    """

    family: Literal["first", "second"] = "first"
    mu: float = 1.0
    nu: float = 0.0
    rho: float = 0.0
    sigma: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        if self.family not in ("first", "second"):
            raise ValueError(f"unknown automorphism family {self.family!r}")
        if self.mu * self.mu + self.nu * self.nu == 0.0:
            raise DegenerateAutomorphism("mu^2 + nu^2 must be nonzero")

    def matrix(self) -> np.ndarray:
        """Linear map on coefficient arrays (e, q, p, alpha): primed coefficients -> unprimed."""
        mu, nu, rho, sg, tau = self.mu, self.nu, self.rho, self.sigma, self.tau
        n2 = mu * mu + nu * nu
        if self.family == "first":
            return np.array([
                [n2, mu * sg - nu * rho, nu * sg + mu * rho, tau],
                [0.0, mu, nu, sg],
                [0.0, -nu, mu, rho],
                [0.0, 0.0, 0.0, 1.0],
            ])
        return np.array([
            [-n2, mu * sg - nu * rho, -(nu * sg + mu * rho), tau],
            [0.0, -mu, nu, sg],
            [0.0, nu, mu, rho],
            [0.0, 0.0, 0.0, -1.0],
        ])


def automorphism_algebra_map(A: Automorphism, x: AlgebraElement) -> AlgebraElement:
    """Rewrite X = x'^i X'_i in the unprimed basis."""
    return AlgebraElement.from_array(A.matrix() @ x.as_array())


def apply_automorphism(A: Automorphism, g: GroupElement) -> GroupElement:
    """Group automorphism induced by ``A``.

    Evaluated factor by factor on exp(ieE) exp(i alpha H) exp(i(pQ + qP)),
    each factor being the exponential of the mapped algebra element.  When
    rho = sigma = 0 this is exactly the linear coordinate map of
    :meth:`Automorphism.matrix`.
    """
    if A.mu * A.mu + A.nu * A.nu == 0.0:
        raise DegenerateAutomorphism("mu^2 + nu^2 must be nonzero")
    M = A.matrix()
    fe = exp(AlgebraElement.from_array(M @ np.array([g.e, 0.0, 0.0, 0.0])))
    fa = exp(AlgebraElement.from_array(M @ np.array([0.0, 0.0, 0.0, g.alpha])))
    ft = exp(AlgebraElement.from_array(M @ np.array([0.0, g.q, g.p, 0.0])))
    return compose(compose(fe, fa), ft)
