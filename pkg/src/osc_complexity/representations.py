"""Named unitaries in an irreducible representation and their complexity.

A representation is fixed by the Casimir values E = Omega and
HE - (Q^2 + P^2)/2 = h.  Its kernel is central, so each unitary corresponds to
a coset of group elements differing by shifts of e (always, period 2 pi/Omega)
and of alpha (period 2 pi l, only when h/Omega + 1/2 = k/l is rational).
Complexity is the minimum over the coset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .boundary import BoundaryProblem, ComplexityResult, complexity
from .errors import InvalidRepresentation
from .geodesics import DEFAULT_MODEL, GeodesicModel, Metric
from .group import AlgebraElement, GroupElement, exp


@dataclass(frozen=True)
class RepresentationSpec:
    omega: float
    h: float = 0.0
    rationality: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0.0):
            raise InvalidRepresentation(f"omega must be positive and finite, got {self.omega}")
        if not math.isfinite(self.h):
            raise InvalidRepresentation("h must be finite")
        if self.rationality is not None:
            k, l = self.rationality
            if int(l) != l or l < 1 or int(k) != k:
                raise InvalidRepresentation(f"rationality must be integers (k, l) with l >= 1, got {self.rationality}")
            x = self.h / self.omega + 0.5 - k / l
            if abs(x - round(x)) > 1e-12:
                raise InvalidRepresentation(f"h/omega + 1/2 = {self.h / self.omega + 0.5} is not {k}/{l} mod 1")

    @classmethod
    def with_detected_rationality(cls, omega: float, h: float = 0.0, max_denominator: int = 1000) -> RepresentationSpec:
        """Declare rationality when h/omega + 1/2 matches a fraction with small denominator to 1e-12."""
        x = h / omega + 0.5
        frac = Fraction(x).limit_denominator(max_denominator)
        if abs(x - float(frac)) <= 1e-12:
            return cls(omega, h, (frac.numerator, frac.denominator))
        return cls(omega, h, None)


@dataclass(frozen=True)
class KernelInfo:
    e_period: float
    alpha_period: Optional[float] = None


@dataclass(frozen=True)
class OscillatorEvolution:
    t: float


@dataclass(frozen=True)
class Displacement:
    q: float
    p: float


@dataclass(frozen=True)
class ShiftedOscillator:
    t: float
    lam: float


@dataclass(frozen=True)
class Generic:
    x: AlgebraElement


NamedUnitary = Union[OscillatorEvolution, Displacement, ShiftedOscillator, Generic]


def kernel(spec: RepresentationSpec) -> KernelInfo:
    e_period = 2.0 * math.pi / spec.omega
    if spec.rationality is None:
        return KernelInfo(e_period, None)
    return KernelInfo(e_period, 2.0 * math.pi * spec.rationality[1])


def to_group_element(u: NamedUnitary, spec: RepresentationSpec) -> GroupElement:
    W = spec.omega
    if isinstance(u, OscillatorEvolution):
        return GroupElement(e=0.0, alpha=-W * u.t, q=0.0, p=0.0)
    if isinstance(u, Displacement):
        return GroupElement(e=0.0, alpha=0.0, q=u.q, p=u.p)
    if isinstance(u, ShiftedOscillator):
        wt = W * u.t
        s = u.lam / W**2
        q_coef = -s * math.sin(wt)  # coefficient of Q -> p slot
        p_coef = s * (math.cos(wt) - 1.0)  # coefficient of P -> q slot
        return GroupElement(e=0.5 * s * s * (wt - math.sin(wt)), alpha=-wt, q=p_coef, p=q_coef)
    if isinstance(u, Generic):
        return exp(u.x)
    raise TypeError(f"unsupported unitary {u!r}")


def shifted_oscillator_generator(u: ShiftedOscillator, spec: RepresentationSpec) -> AlgebraElement:
    """Algebra element X with exp(X) = U(t): -(Omega H + lam Q / Omega) t."""
    return AlgebraElement(xe=0.0, xq=0.0, xp=-u.lam * u.t / spec.omega, xalpha=-spec.omega * u.t)


def spectrum(spec: RepresentationSpec, n_max: int) -> List[float]:
    """Eigenvalues n + 1/2 + h/Omega of H for n = 0..n_max."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    return [n + 0.5 + spec.h / spec.omega for n in range(n_max + 1)]


# --------------------------------------------------------------------------- quotient


def _huber(u: float, a: float) -> float:
    return a * u * u if abs(u) <= 2.0 / a else 4.0 * abs(u) - 4.0 / a


def length_lower_bound(m: Metric, g: GroupElement, model: GeodesicModel = DEFAULT_MODEL) -> float:
    """Lower bound on the length of every geodesic from the identity to g.

    Combines min_nu L(nu) of the boundary solver with the bound obtained from
    |e - A| <= (D^2 + F^2)/4 along any geodesic.
    """
    bp = BoundaryProblem(m, g, model)
    L = bp.length_floor_outside(0.0)
    shear = m.det * g.alpha**2 / m.a + _huber(g.e + m.b * g.alpha / m.a, m.a)
    return math.sqrt(max(L * L, shear))


def _nearest_shift(x: float, period: float) -> int:
    return -round(x / period)


def canonical_representative(g: GroupElement, k: KernelInfo) -> GroupElement:
    """Translate with e and (if periodic) alpha reduced to the nearest-zero window."""
    e = g.e + _nearest_shift(g.e, k.e_period) * k.e_period
    al = g.alpha
    if k.alpha_period is not None:
        al = al + _nearest_shift(al, k.alpha_period) * k.alpha_period
    return GroupElement(e=e, alpha=al, q=g.q, p=g.p)


def quotient_reduce(
    g: GroupElement,
    k: KernelInfo,
    m: Optional[Metric] = None,
    best: Optional[float] = None,
    model: GeodesicModel = DEFAULT_MODEL,
) -> List[GroupElement]:
    """Kernel translates of g that can still beat ``best``, in increasing lower-bound order.

    Without a metric only the canonical representative is returned.  With a
    metric and no ``best``, the canonical representative's complexity is used
    as the initial bound.
    """
    g0 = canonical_representative(g, k)
    if m is None:
        return [g0]
    if best is None:
        best = complexity(BoundaryProblem(m, g0, model)).value
    cap2 = best * best * (1.0 + 1e-12) + 1e-12
    Pe, Pa = k.e_period, k.alpha_period
    alphas = [g0.alpha]
    if Pa is not None:
        # det alpha^2 / a <= cap2 bounds the alpha shifts
        amax = math.sqrt(cap2 * m.a / m.det)
        j = 1
        while True:
            added = False
            for al in (g0.alpha + j * Pa, g0.alpha - j * Pa):
                if abs(al) <= amax:
                    alphas.append(al)
                    added = True
            if not added:
                break
            j += 1
    reps = []
    for al in alphas:
        base = m.det * al * al / m.a
        c = -m.b * al / m.a
        # huber(e - c) <= cap2 - base bounds the e shifts
        room = cap2 - base
        if room < 0:
            continue
        umax = math.sqrt(room / m.a) if room <= 4.0 / m.a else (room + 4.0 / m.a) / 4.0
        n_lo = math.ceil((c - umax - g0.e) / Pe)
        n_hi = math.floor((c + umax - g0.e) / Pe)
        for n in range(n_lo, n_hi + 1):
            rep = GroupElement(e=g0.e + n * Pe, alpha=al, q=g0.q, p=g0.p)
            lb = length_lower_bound(m, rep, model)
            if lb * lb <= cap2:
                reps.append((lb, rep))
    if not any(r is g0 or r == g0 for _, r in reps):
        reps.append((length_lower_bound(m, g0, model), g0))
    reps.sort(key=lambda t: (t[0], abs(t[1].alpha), abs(t[1].e)))
    return [r for _, r in reps]


@dataclass
class UnitaryComplexity:
    value: float
    representative: GroupElement
    result: ComplexityResult
    representatives_checked: int


def coset_complexity(
    g: GroupElement,
    spec: RepresentationSpec,
    m: Metric,
    model: GeodesicModel = DEFAULT_MODEL,
) -> UnitaryComplexity:
    """Minimal complexity over the kernel coset of g, visiting translates by lower bound."""
    k = kernel(spec)
    g0 = canonical_representative(g, k)
    res0 = complexity(BoundaryProblem(m, g0, model))
    best = UnitaryComplexity(res0.value, g0, res0, 1)
    for rep in quotient_reduce(g, k, m, res0.value, model):
        if rep == g0:
            continue
        if length_lower_bound(m, rep, model) >= best.value:
            break
        res = complexity(BoundaryProblem(m, rep, model))
        best.representatives_checked += 1
        if res.value < best.value:
            best = UnitaryComplexity(res.value, rep, res, best.representatives_checked)
    return best


def unitary_complexity_detail(
    u: NamedUnitary,
    spec: RepresentationSpec,
    m: Metric,
    model: GeodesicModel = DEFAULT_MODEL,
) -> UnitaryComplexity:
    return coset_complexity(to_group_element(u, spec), spec, m, model)


def unitary_complexity(
    u: NamedUnitary,
    spec: RepresentationSpec,
    m: Metric,
    model: GeodesicModel = DEFAULT_MODEL,
) -> float:
    """Minimal geodesic length over all group elements representing u."""
    return unitary_complexity_detail(u, spec, m, model).value
