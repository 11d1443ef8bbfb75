"""Geodesic boundary problem: all geodesics from the identity to a target.

Writing r^2 = q^2 + p^2 for the target, every geodesic reaching it is labelled
by a root nu~ of

    f(nu~; s Delta) = Gamma,    f(nu; D) = D nu + (sin nu - nu)/(1 - cos nu),

with Delta = 4/(a r^2), Gamma = (e + c alpha/a) 4/r^2 and s = model.sigma.  The
shift c is b + 2 for the published flow and b for the Levi-Civita flow, so the
published equation is recovered with s = +1.  Targets with r = 0 (or r so small
that Delta exceeds CENTRAL_DELTA) are handled
separately by :func:`solve_central`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from scipy.optimize import brentq

from . import _special as sp
from .errors import (
    EmptyWindow,
    NoConvergence,
    PoleAtRoot,
    SingularRoot,
    WindowCapExceeded,
)
from .geodesics import DEFAULT_MODEL, GeodesicModel, GeodesicParams, Metric
from .group import EPS_EXCL, GroupElement

TWO_PI = 2.0 * math.pi
EPS_POLE = 1e-8
ROOT_XTOL = 1e-12
TIE_TOL = 1e-9
WINDOW_START = 3
WINDOW_CAP = 10**4
MAX_ITER = 200
POLISH_RADIUS = 0.5


CENTRAL_DELTA = 1e24
"""Targets with 4/(a r^2) above this are solved as central; their endpoints then
differ from the target by r < 2e-12/sqrt(a)."""


class PoleRoot(float):
    """A root nu~ = 2 pi k + eps lying inside a pole guard.

    Behaves as the float 2 pi k + eps, but keeps ``eps`` to full relative
    precision so the integration constants, which scale like 1/eps, stay accurate.
    """

    def __new__(cls, k: int, eps: float):
        obj = super().__new__(cls, TWO_PI * k + eps)
        obj.k, obj.eps = int(k), float(eps)
        return obj

    def __neg__(self):
        return PoleRoot(-self.k, -self.eps)

    def __reduce__(self):
        return PoleRoot, (self.k, self.eps)


@dataclass(frozen=True)
class BoundaryProblem:
    metric: Metric
    target: GroupElement
    model: GeodesicModel = DEFAULT_MODEL

    @property
    def r2(self) -> float:
        return self.target.r2

    @property
    def is_central(self) -> bool:
        """q = p = 0, or so close to it that 4/(a r^2) exceeds CENTRAL_DELTA."""
        return self.r2 == 0.0 or 4.0 / (self.metric.a * self.r2) > CENTRAL_DELTA

    @property
    def shift(self) -> float:
        """Coefficient c in A = (s nu~ - c alpha)/a."""
        return self.metric.b + 1.0 + self.model.sigma

    @property
    def kappa(self) -> float:
        """Offset in the (nu~ - kappa alpha)^2 term of the length: 2 (published) or 0."""
        s = self.model.sigma
        return float(s * (1 + s))

    @property
    def delta(self) -> Optional[float]:
        if self.is_central:
            return None
        return 4.0 / (self.metric.a * self.r2)

    @property
    def signed_delta(self) -> Optional[float]:
        d = self.delta
        return None if d is None else self.model.sigma * d

    @property
    def gamma(self) -> Optional[float]:
        if self.is_central:
            return None
        t = self.target
        return (t.e + self.shift * t.alpha / self.metric.a) * 4.0 / self.r2

    def amplitude_A(self, nu_tilde: float) -> float:
        return (self.model.sigma * nu_tilde - self.shift * self.target.alpha) / self.metric.a

    def length_floor_sq(self, nu: float) -> float:
        """Lower bound L(nu)^2 on the squared length of any root at nu (uses 1 - cos <= 2)."""
        m, al = self.metric, self.target.alpha
        return ((nu - self.kappa * al) ** 2 + m.det * al * al) / m.a + 0.25 * nu * nu * self.r2

    def length_floor_outside(self, radius: float) -> float:
        """min of L(nu) over |nu| >= radius; L^2 is a convex quadratic in nu."""
        m, al = self.metric, self.target.alpha
        curv = 1.0 / m.a + 0.25 * self.r2
        nu0 = self.kappa * al / m.a / curv
        if abs(nu0) >= radius:
            return math.sqrt(self.length_floor_sq(nu0))
        return math.sqrt(min(self.length_floor_sq(radius), self.length_floor_sq(-radius)))


@dataclass(frozen=True)
class GeodesicCandidate:
    nu_tilde: float
    params: GeodesicParams
    length: float
    branch_index: int
    family: str = "regular"

    def sort_key(self):
        return (self.branch_index, self.nu_tilde)


@dataclass
class ComplexityResult:
    value: float
    winner: GeodesicCandidate
    candidates: List[GeodesicCandidate] = field(default_factory=list)
    bound: float = math.inf
    window: int = 0

    def __iter__(self):
        return iter((self.value, self.winner, self.candidates))


# --------------------------------------------------------------------------- f and its branches


def _check_pole(nu: float, tol: float = EPS_EXCL) -> None:
    k = sp.nearest_pole(nu)
    if k != 0 and abs(nu - TWO_PI * k) < tol:
        raise PoleAtRoot(f"nu={nu!r} is within {tol} of the pole 2*pi*{k}")


def f_of_nu(nu: float, delta: float) -> float:
    """f(nu; Delta) = Delta nu + (sin nu - nu)/(1 - cos nu)."""
    _check_pole(nu)
    return delta * nu - sp.heis(nu)


def f_prime(nu: float, delta: float) -> float:
    _check_pole(nu)
    return delta - sp.heis_prime(nu)


def maximum_condition(nu: float, delta: float) -> float:
    """nu sin nu - 2(1 - cos nu) + Delta (1 - cos nu)^2: same sign as f', but pole-free."""
    omc = sp.one_minus_cos(nu)
    return nu * math.sin(nu) - 2.0 * omc + delta * omc * omc


def branch_max_seed(k: int, delta: float) -> float:
    """Large-k approximation to the maximiser in (2 pi k, 2 pi (k+1))."""
    m = (2 * k + 1) * math.pi
    return m - 4.0 * (1.0 - delta) / m


def branch_max_asymptote(k: int, delta: float) -> float:
    """Large-k approximation to the maximal value of f on (2 pi k, 2 pi (k+1)).

    Expanding f about nu = m - 4(1-Delta)/m with m = (2k+1) pi gives
    (Delta - 1/2) m + 2 (1-Delta)^2 / m + O(1/m^3).  The maxima therefore
    approach the line (Delta - 1/2) nu.
    """
    m = (2 * k + 1) * math.pi
    return (delta - 0.5) * m + 2.0 * (1.0 - delta) ** 2 / m


def _brent(fun, lo: float, hi: float) -> float:
    try:
        return brentq(fun, lo, hi, xtol=ROOT_XTOL, rtol=8.9e-16, maxiter=MAX_ITER)
    except RuntimeError as exc:  # pragma: no cover - brentq only fails on non-convergence here
        raise NoConvergence(str(exc)) from exc


def branch_max(k: int, delta: float) -> Tuple[float, float]:
    """Location and value of the maximum of f on (2 pi k, 2 pi (k+1)) for k >= 0.

    For k >= 1, f is concave with one interior maximum.  For k = 0 the maximum is
    interior only when Delta > 1/3; otherwise f decreases on (0, 2 pi) and the
    supremum (0, 0) at the left end is returned.  Intervals with k <= -1 carry a
    minimum instead; use oddness of f.
    """
    if k < 0:
        raise ValueError("branch_max is defined for k >= 0; mirror negative intervals via f(-nu) = -f(nu)")
    if k == 0:
        if delta <= 1.0 / 3.0:
            return 0.0, 0.0
        hi = TWO_PI - EPS_POLE
        lo = 0.0
        nu = _brent(lambda x: f_prime(x, delta), lo, hi)
        return nu, f_of_nu(nu, delta)
    lo, hi = TWO_PI * k, TWO_PI * (k + 1)
    seed = branch_max_seed(k, delta)
    # tighten the bracket around the seed when the sign pattern allows it
    width = 8.0 / ((2 * k + 1) * math.pi) + 1e-3
    a, b = max(lo + EPS_POLE, seed - width), min(hi - EPS_POLE, seed + width)
    if not (a < b and maximum_condition(a, delta) > 0.0 > maximum_condition(b, delta)):
        a, b = lo + EPS_POLE, hi - EPS_POLE
        if not (maximum_condition(a, delta) > 0.0 > maximum_condition(b, delta)):
            raise SingularRoot(f"maximum of f on interval {k} lies inside a pole guard (Delta={delta})")
    nu = _brent(lambda x: maximum_condition(x, delta), a, b)
    return nu, f_of_nu(nu, delta)


def _f_near_pole(k: int, eps: float, delta: float) -> float:
    """f(2 pi k + eps; delta) with the pole term evaluated from eps directly."""
    omc = sp.one_minus_cos(eps)
    num = TWO_PI * k + eps * eps * sp.sinm(eps)
    if omc == 0.0:
        return -math.copysign(math.inf, num)
    return delta * (TWO_PI * k + eps) - num / omc


def _near_pole_root(delta: float, gamma: float, k: int, side: int, limit: int) -> PoleRoot:
    """Root of f = gamma at nu = 2 pi k + side * x for small x > 0.

    f - gamma has sign ``limit`` as x -> 0 and the opposite sign at x of order
    EPS_POLE.  The bracket is located on a logarithmic grid (searching outward
    too, since the float evaluation at the guard may misjudge the side) and
    refined in log x.
    """
    def g(u):
        return _f_near_pole(k, side * math.exp(u), delta) - gamma

    def same(v):
        return (v > 0) == (limit > 0)

    step = math.log(10.0)
    lo = hi = math.log(EPS_POLE)
    v = g(hi)
    if v != 0.0 and same(v):
        # root lies just outside the guard
        top = math.log(POLISH_RADIUS * 2.0)
        while same(v) and hi < top:
            lo, hi = hi, min(hi + step, top)
            v = g(hi)
        if v != 0.0 and same(v):
            raise SingularRoot(f"no root of f={gamma} found next to the pole at 2 pi * {k}")
    else:
        for _ in range(320):
            lo = hi - step
            v = g(lo)
            if v == 0.0 or same(v):
                break
            hi = lo
        else:
            raise SingularRoot(f"root of f={gamma} next to the pole at 2 pi * {k} is closer than 1e-300")
    for u in (lo, hi):
        if g(u) == 0.0:
            return PoleRoot(k, side * math.exp(u))
    try:
        u = brentq(g, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=MAX_ITER)
    except RuntimeError as exc:  # pragma: no cover
        raise NoConvergence(str(exc)) from exc
    return PoleRoot(k, side * math.exp(u))


def _root_on_monotone(
    delta: float, gamma: float, lo: float, hi: float, lo_limit: int = 0, hi_limit: int = 0
) -> Optional[float]:
    """Root of f = gamma on [lo, hi] where f is monotone.

    ``lo_limit``/``hi_limit`` give the sign of the infinite limit of f at a pole
    lying just beyond a guarded end (0 for an ordinary end).  If f - gamma at the
    guard has the opposite sign, the single root of the piece lies inside the
    guard and is returned as a :class:`PoleRoot`.
    """
    g_lo = f_of_nu(lo, delta) - gamma
    g_hi = f_of_nu(hi, delta) - gamma
    if lo_limit and g_lo != 0.0 and (g_lo > 0) != (lo_limit > 0):
        return _near_pole_root(delta, gamma, sp.nearest_pole(lo), +1, lo_limit)
    if hi_limit and g_hi != 0.0 and (g_hi > 0) != (hi_limit > 0):
        return _near_pole_root(delta, gamma, sp.nearest_pole(hi), -1, hi_limit)
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    if (g_lo > 0) != (g_hi > 0):
        return _polish_near_pole(delta, gamma, _brent(lambda x: f_of_nu(x, delta) - gamma, lo, hi))
    return None


def _polish_near_pole(delta: float, gamma: float, nu: float) -> float:
    """Refine a root close to a pole in log|nu - 2 pi k| so the offset keeps full relative precision."""
    k = sp.nearest_pole(nu)
    eps0 = nu - TWO_PI * k
    if k == 0 or eps0 == 0.0 or abs(eps0) > POLISH_RADIUS:
        return nu
    side = 1 if eps0 > 0 else -1

    def g(u):
        return _f_near_pole(k, side * math.exp(u), delta) - gamma

    u0 = math.log(abs(eps0))
    width = 1e-9
    umax = math.log(POLISH_RADIUS * 2.0)
    while width < 10.0:
        lo, hi = u0 - width, min(u0 + width, umax)
        g_lo, g_hi = g(lo), g(hi)
        if g_lo == 0.0:
            return PoleRoot(k, side * math.exp(lo))
        if g_hi == 0.0:
            return PoleRoot(k, side * math.exp(hi))
        if (g_lo > 0) != (g_hi > 0):
            try:
                u = brentq(g, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=MAX_ITER)
            except RuntimeError:  # pragma: no cover
                return nu
            return PoleRoot(k, side * math.exp(u))
        width *= 10.0
    return nu


def central_roots(delta: float, gamma: float) -> List[float]:
    """Roots of f(nu; delta) = gamma on the central interval (-2 pi, 2 pi)."""
    lo, hi = -TWO_PI + EPS_POLE, TWO_PI - EPS_POLE
    if delta <= 1.0 / 3.0:
        r = _root_on_monotone(delta, gamma, lo, hi, +1, -1)
        return [] if r is None else [r]
    nstar, _ = branch_max(0, delta)
    roots = []
    for a, b, la, lb in ((lo, -nstar, +1, 0), (-nstar, nstar, 0, 0), (nstar, hi, 0, -1)):
        r = _root_on_monotone(delta, gamma, a, b, la, lb)
        if r is not None and r not in roots:
            roots.append(r)
    return roots


def _side_roots(k: int, delta: float, gamma: float) -> List[float]:
    """Roots in (2 pi k, 2 pi (k+1)) for k >= 1; f -> -inf at both poles."""
    nmax, fmax = branch_max(k, delta)
    if gamma > fmax:
        return []
    lo, hi = TWO_PI * k + EPS_POLE, TWO_PI * (k + 1) - EPS_POLE
    roots = []
    for a, b, la, lb in ((lo, nmax, -1, 0), (nmax, hi, 0, -1)):
        r = _root_on_monotone(delta, gamma, a, b, la, lb)
        if r is not None and r not in roots:
            roots.append(r)
    return roots


def roots_in_interval(k: int, delta: float, gamma: float) -> List[float]:
    """Roots of f(nu; delta) = gamma with floor(nu / 2 pi) = k."""
    if k >= 1:
        return _side_roots(k, delta, gamma)
    if k <= -2:
        return sorted(-r for r in _side_roots(-k - 1, delta, -gamma))
    central = central_roots(delta, gamma)
    if k == 0:
        return [r for r in central if r >= 0.0]
    return [r for r in central if r < 0.0]


def _roots_for(delta: float, gamma: float, kmin: int, kmax: int) -> List[float]:
    out: List[float] = []
    for k in range(kmin, kmax + 1):
        if k == 0 or k == -1:
            continue
        out.extend(roots_in_interval(k, delta, gamma))
    if kmin <= 0 <= kmax or kmin <= -1 <= kmax:
        out.extend(central_roots(delta, gamma))
    return sorted(set(out))


def enumerate_roots(bp: BoundaryProblem, window: int) -> List[float]:
    """All roots nu~ with |nu~| < 2 pi (window + 1), in increasing order.

    The scan is symmetric: intervals k = -(window+1), ..., window.
    """
    if window < 0:
        raise EmptyWindow(f"window must be >= 0, got {window}")
    if bp.is_central:
        raise ValueError("target has q = p = 0; use solve_central")
    return _roots_for(bp.signed_delta, bp.gamma, -(window + 1), window)


# --------------------------------------------------------------------------- constants and lengths


def _is_pole(nu: float) -> bool:
    k = sp.nearest_pole(nu)
    return k != 0 and abs(nu - TWO_PI * k) < EPS_EXCL


def solve_constants(bp: BoundaryProblem, nu_tilde: float) -> GeodesicParams:
    """Integration constants (A, B, D, F) of the geodesic labelled by a root nu~."""
    t = bp.target
    A = bp.amplitude_A(nu_tilde)
    if bp.is_central:
        if _is_pole(nu_tilde):
            K = 2.0 * nu_tilde * (A - t.e)
            if K < -1e-12 * max(1.0, abs(nu_tilde * A)):
                raise SingularRoot(f"looping family at nu~={nu_tilde} does not reach the target (D^2+F^2={K} < 0)")
            return GeodesicParams(A=A, B=t.alpha, D=0.0, F=math.sqrt(max(K, 0.0)))
        return GeodesicParams(A=A, B=t.alpha, D=0.0, F=0.0)
    h = 0.5 * nu_tilde
    if isinstance(nu_tilde, PoleRoot):
        # cot(pi k + eps/2) = cot(eps/2)
        hc = h / math.tan(0.5 * nu_tilde.eps)
    elif _is_pole(nu_tilde):
        raise SingularRoot(f"nu~={nu_tilde} is a pole while q^2+p^2 > 0")
    else:
        hc = sp.half_cot(nu_tilde)
    return GeodesicParams(
        A=A,
        B=t.alpha,
        D=hc * t.p - h * t.q,
        F=hc * t.q + h * t.p,
    )


def length_at_root(bp: BoundaryProblem, nu_tilde: float) -> float:
    """Length of the geodesic labelled by nu~ (its constant speed on [0, 1])."""
    m, t = bp.metric, bp.target
    if bp.is_central and _is_pole(nu_tilde):
        gp = solve_constants(bp, nu_tilde)
        K = gp.D**2 + gp.F**2
    elif isinstance(nu_tilde, PoleRoot):
        K = bp.r2 * (0.5 * nu_tilde / math.sin(0.5 * nu_tilde.eps)) ** 2
    elif _is_pole(nu_tilde):
        raise SingularRoot(f"nu~={nu_tilde} is a pole while q^2+p^2 > 0")
    else:
        K = bp.r2 * sp.inv_sinc_half_sq(nu_tilde)
    al = t.alpha
    return math.sqrt(((nu_tilde - bp.kappa * al) ** 2 + m.det * al * al) / m.a + K)


def _branch_index(nu: float) -> int:
    if isinstance(nu, PoleRoot):
        return nu.k if nu.eps > 0 else nu.k - 1
    return math.floor(nu / TWO_PI)


def _candidate(bp: BoundaryProblem, nu: float, family: str = "regular") -> GeodesicCandidate:
    return GeodesicCandidate(
        nu_tilde=nu,
        params=solve_constants(bp, nu),
        length=length_at_root(bp, nu),
        branch_index=_branch_index(nu),
        family=family,
    )


def _pick(cands: List[GeodesicCandidate]) -> GeodesicCandidate:
    best = None
    for c in cands:
        if best is None or c.length < best.length - TIE_TOL:
            best = c
        elif abs(c.length - best.length) <= TIE_TOL and abs(c.nu_tilde) < abs(best.nu_tilde):
            best = c
    return best


def principal_central_root(bp: BoundaryProblem) -> float:
    t, m = bp.target, bp.metric
    return bp.model.sigma * (m.a * t.e + bp.shift * t.alpha)


def solve_central(bp: BoundaryProblem, best: float = math.inf) -> List[GeodesicCandidate]:
    """All geodesics to a target with q = p = 0 whose length can beat ``best``.

    Besides the principal solution (D = F = 0) there are loops at nu~ = 2 pi k
    with D^2 + F^2 = 2 nu~ (A - e) >= 0; their (q, p) projection is a closed
    circle.  The representative with D = 0 is returned for each.
    """
    if not bp.is_central:
        raise ValueError("solve_central needs a target with q = p = 0")
    t = bp.target
    cands = [_candidate(bp, principal_central_root(bp), "principal")]
    cap = min(best, cands[0].length)
    k = 1
    a, ka = bp.metric.a, abs(bp.kappa * t.alpha)
    while True:
        nu_abs = TWO_PI * k
        if nu_abs > ka and (nu_abs - ka) ** 2 / a > cap * cap + TIE_TOL:
            break
        for nu in (nu_abs, -nu_abs):
            A = bp.amplitude_A(nu)
            if 2.0 * nu * (A - t.e) >= 0.0:
                c = _candidate(bp, nu, "loop")
                cands.append(c)
                cap = min(cap, c.length)
        k += 1
        if k > WINDOW_CAP:
            raise WindowCapExceeded("looping-family scan exceeded the window cap")
    return sorted(cands, key=GeodesicCandidate.sort_key)


def complexity(
    bp: BoundaryProblem,
    window_start: int = WINDOW_START,
    window_cap: int = WINDOW_CAP,
) -> ComplexityResult:
    """Minimal geodesic length from the identity to ``bp.target``.

    The root scan doubles its window until min_{|nu| >= 2 pi (W+1)} L(nu) is at
    least the best length found, which certifies that no unscanned root can win.
    """
    if bp.is_central:
        cands = solve_central(bp)
        win = _pick(cands)
        return ComplexityResult(win.length, win, cands, bound=math.inf, window=0)
    if window_start < 0:
        raise EmptyWindow(f"window must be >= 0, got {window_start}")
    W = window_start
    scanned_hi = -1  # intervals k in [-(scanned_hi+1), scanned_hi] already scanned
    roots: List[float] = []
    delta, gamma = bp.signed_delta, bp.gamma
    while True:
        roots.extend(_roots_for(delta, gamma, scanned_hi + 1, W))
        roots.extend(_roots_for(delta, gamma, -(W + 1), -(scanned_hi + 2)))
        scanned_hi = W
        cands = [_candidate(bp, nu) for nu in sorted(set(roots))]
        bound = bp.length_floor_outside(TWO_PI * (W + 1))
        if cands:
            win = _pick(cands)
            if bound >= win.length:
                cands.sort(key=GeodesicCandidate.sort_key)
                return ComplexityResult(win.length, win, cands, bound=bound, window=W)
        if W >= window_cap:
            raise WindowCapExceeded(f"minimum not certified within |k| <= {window_cap}")
        W = min(2 * W if W > 0 else 1, window_cap)


def minima_at_odd_pi(k: int, metric: Metric, delta: float) -> GroupElement:
    """Target whose shortest published-flow geodesic sits at nu~ = (2k+1) pi.

    Uses alpha = (2k+1)(Delta+1)/Delta * pi/2, r^2 = 4/(a Delta) and e chosen so
    that (2k+1) pi solves the endpoint equation.  The construction relies on the
    (nu~ - 2 alpha)^2 term of the published length and has no analogue in the
    Levi-Civita flow.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    nu = (2 * k + 1) * math.pi
    alpha = nu * (delta + 1.0) / (2.0 * delta)
    r2 = 4.0 / (metric.a * delta)
    gamma = f_of_nu(nu, delta)
    e = gamma * r2 / 4.0 - (metric.b + 2.0) * alpha / metric.a
    return GroupElement(e=e, alpha=alpha, q=math.sqrt(r2), p=0.0)
