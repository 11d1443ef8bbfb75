"""Numerical geodesic oracle and integrals of motion.

Two independent integrators are provided: the first-order reconstruction
da/dt = mu_R(a) Pi(t) (with Pi either closed form or itself integrated), and
the second-order geodesic equation with Christoffel symbols assembled from the
invariant frames.  Both use fixed-step classical RK4 on [0, 1] and are
vectorised over a batch of independent problems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import NegativeAmplitudeSquared
from .geodesics import (
    DEFAULT_MODEL,
    GeodesicModel,
    GeodesicParams,
    Metric,
    dlambda_right,
    lambda_right,
    mu_left,
    mu_right,
    nu_tilde,
    speed,
    structure_constants,
)
from .group import GroupElement, IDENTITY, AlgebraElement, compose, exp, inverse


@dataclass(frozen=True)
class PhaseState:
    coords: GroupElement
    velocities: tuple  # (de, dq, dp, dalpha)/dt, same order as coordinate arrays


# --------------------------------------------------------------------------- batch helpers


def _etas(metrics: Sequence[Metric]):
    eta = np.stack([m.eta for m in metrics])
    eta_inv = np.stack([m.eta_inv for m in metrics])
    return eta, eta_inv


def _rk4(rhs, y0: np.ndarray, steps: int, keep_all: bool):
    h = 1.0 / steps
    y = np.array(y0, dtype=float)
    out = [y.copy()] if keep_all else None
    for n in range(steps):
        t = n * h
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if keep_all:
            out.append(y.copy())
    return np.stack(out) if keep_all else y


def pi_closed_form_batch(metrics, params, model: GeodesicModel = DEFAULT_MODEL):
    """Closed-form Pi(t) for a batch, returned as a function of t giving shape (N, 4)."""
    a = np.array([m.a for m in metrics])
    b = np.array([m.b for m in metrics])
    A, B, D, F = np.array([gp.as_array() for gp in params]).T
    rate = model.sigma * (a * A + (b + 1.0) * B)

    def pi(t):
        c, s = np.cos(rate * t), np.sin(rate * t)
        return np.stack([A, -D * s + F * c, D * c + F * s, B], axis=-1)

    return pi


def integrate_geodesic_batch(
    metrics: Sequence[Metric],
    params: Sequence[GeodesicParams],
    steps: int,
    model: GeodesicModel = DEFAULT_MODEL,
    numeric_pi: bool = False,
    keep_all: bool = False,
) -> np.ndarray:
    """RK4 for da/dt = mu_R(a) Pi(t) from the identity, batched.

    With ``numeric_pi`` the Euler-Arnold system is integrated alongside instead
    of using the rotating closed form.  Returns shape (N, 4) (or (steps+1, N, 4)).
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    n = len(metrics)
    if numeric_pi:
        eta, eta_inv = _etas(metrics)
        c = structure_constants()
        # dPi^i/dt = s eta^{ij} eta_kl c^l_jm Pi^k Pi^m
        T = model.sigma * np.einsum("nij,nkl,ljm->nikm", eta_inv, eta, c)
        pi0 = np.stack([gp.initial_pi() for gp in params])

        def rhs(t, y):
            a, pi = y[:, :4], y[:, 4:]
            da = np.einsum("nij,nj->ni", mu_right(a), pi)
            dpi = np.einsum("nikm,nk,nm->ni", T, pi, pi)
            return np.concatenate([da, dpi], axis=1)

        y = _rk4(rhs, np.concatenate([np.zeros((n, 4)), pi0], axis=1), steps, keep_all)
        return y[..., :4]

    pi = pi_closed_form_batch(metrics, params, model)

    def rhs(t, a):
        return np.einsum("nij,nj->ni", mu_right(a), pi(t))

    return _rk4(rhs, np.zeros((n, 4)), steps, keep_all)


def integrate_geodesic(
    m: Metric,
    gp: GeodesicParams,
    steps: int,
    model: GeodesicModel = DEFAULT_MODEL,
    numeric_pi: bool = False,
) -> List[GroupElement]:
    """Trajectory samples at t = n/steps, n = 0..steps."""
    traj = integrate_geodesic_batch([m], [gp], steps, model, numeric_pi, keep_all=True)[:, 0, :]
    return [GroupElement.from_array(row) for row in traj]


# --------------------------------------------------------------------------- Christoffel route


def _connection_tensor(eta: np.ndarray, eta_inv: np.ndarray) -> np.ndarray:
    """X[..., l, m, s] = c^t_sr eta_tm eta^lr."""
    return np.einsum("tsr,...tm,...lr->...lms", structure_constants(), eta, eta_inv)


def christoffel(m: Metric, a) -> np.ndarray:
    """Christoffel symbols Gamma[i, j, k] of the right-invariant metric at coordinates ``a``.

    Assembled from the frames: 1/2 mu (d lambda + d lambda^T) minus the
    symmetrised structure-constant term.  Vectorised over leading axes of ``a``.
    """
    a = np.asarray(a, dtype=float)
    X = _connection_tensor(m.eta, m.eta_inv)
    return _christoffel_from(a, X)


def _christoffel_from(a: np.ndarray, X: np.ndarray) -> np.ndarray:
    mu, lam, dlam = mu_right(a), lambda_right(a), dlambda_right(a)
    # dlam[..., k, l, j] = d_k lambda^l_j
    sym = np.einsum("...il,...klj->...ijk", mu, dlam)
    sym = sym + np.swapaxes(sym, -1, -2)
    t = np.einsum("...il,...lms,...mj,...sk->...ijk", mu, X, lam, lam, optimize=True)
    return 0.5 * sym - 0.5 * (t + np.swapaxes(t, -1, -2))


def _christoffel_contract(a: np.ndarray, v: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Gamma^i_jk v^j v^k without forming Gamma: mu (d lambda[v, v] - X[lambda v, lambda v])."""
    u = np.einsum("nij,nj->ni", lambda_right(a), v)
    dl = np.einsum("nklj,nk,nj->nl", dlambda_right(a), v, v)
    xu = np.einsum("nlms,nm,ns->nl", X, u, u)
    return np.einsum("nil,nl->ni", mu_right(a), dl - xu)


def integrate_christoffel_batch(
    metrics: Sequence[Metric],
    start_velocities,
    steps: int,
    keep_all: bool = False,
) -> np.ndarray:
    """RK4 for a'' + Gamma(a) a' a' = 0 from the identity; returns stacked (a, a')."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    eta, eta_inv = _etas(metrics)
    X = _connection_tensor(eta, eta_inv)
    v0 = np.asarray(start_velocities, dtype=float).reshape(len(metrics), 4)

    def rhs(t, y):
        a, v = y[:, :4], y[:, 4:]
        return np.concatenate([v, -_christoffel_contract(a, v, X)], axis=1)

    return _rk4(rhs, np.concatenate([np.zeros_like(v0), v0], axis=1), steps, keep_all)


def integrate_christoffel(m: Metric, start_velocity, steps: int, with_velocities: bool = False):
    """Geodesic from the identity with initial coordinate velocity ``start_velocity``.

    Returns a list of GroupElement (or of PhaseState when ``with_velocities``).
    For matched initial data use ``gp.initial_pi()``: at the identity mu_R = 1.
    """
    y = integrate_christoffel_batch([m], [start_velocity], steps, keep_all=True)[:, 0, :]
    if with_velocities:
        return [PhaseState(GroupElement.from_array(r[:4]), tuple(r[4:])) for r in y]
    return [GroupElement.from_array(r[:4]) for r in y]


# --------------------------------------------------------------------------- metric and adjoint


def metric_tensor(m: Metric, a) -> np.ndarray:
    """Coordinate metric g_ij read off the line element, (e, q, p, alpha) order."""
    a = np.asarray(a, dtype=float)
    q, p = a[..., 1], a[..., 2]
    g = np.zeros(a.shape[:-1] + (4, 4))
    A, b, d = m.a, m.b, m.d
    # w = q dp - p dq; ds^2 = a de^2 + dq^2 + dp^2 + a/4 w^2 + 2b de da + d da^2 + w (a de + b da)
    wq, wp = -p, q
    g[..., 0, 0] = A
    g[..., 1, 1] = 1.0 + 0.25 * A * wq * wq
    g[..., 2, 2] = 1.0 + 0.25 * A * wp * wp
    g[..., 1, 2] = g[..., 2, 1] = 0.25 * A * wq * wp
    g[..., 0, 3] = g[..., 3, 0] = b
    g[..., 3, 3] = d
    g[..., 0, 1] = g[..., 1, 0] = 0.5 * A * wq
    g[..., 0, 2] = g[..., 2, 0] = 0.5 * A * wp
    g[..., 3, 1] = g[..., 1, 3] = 0.5 * b * wq
    g[..., 3, 2] = g[..., 2, 3] = 0.5 * b * wp
    return g


def adjoint_matrix(a) -> np.ndarray:
    """D(a) with g X_i g^{-1} = D^j_i X_j, from mu_L = mu_R D."""
    return np.einsum("...ij,...jk->...ik", lambda_right(a), mu_left(a))


def adjoint_matrix_fd(g: GroupElement, h: float = 1e-6) -> np.ndarray:
    """D(g) by differentiating h -> g exp(h X_i) g^{-1} at h = 0 (Richardson-extrapolated)."""
    gi = inverse(g)

    def conj(i, s):
        x = np.zeros(4)
        x[i] = s
        # algebra coefficient array is (xe, xq, xp, xalpha), matching coordinate order
        return compose(compose(g, exp(AlgebraElement.from_array(x))), gi).as_array()

    D = np.zeros((4, 4))
    for i in range(4):
        d1 = (conj(i, h) - conj(i, -h)) / (2 * h)
        d2 = (conj(i, h / 2) - conj(i, -h / 2)) / h
        D[:, i] = (4.0 * d2 - d1) / 3.0
    return D


# --------------------------------------------------------------------------- integrals of motion


def momenta(m: Metric, coords, vel):
    """(p_e, p_alpha) conjugate to the cyclic coordinates."""
    coords, vel = np.asarray(coords, float), np.asarray(vel, float)
    q, p = coords[..., 1], coords[..., 2]
    de, dq, dp, dal = vel[..., 0], vel[..., 1], vel[..., 2], vel[..., 3]
    w = q * dp - p * dq
    pe = m.a * de + m.b * dal + 0.5 * m.a * w
    pal = m.b * de + m.d * dal + 0.5 * m.b * w
    return pe, pal


def angular_momentum(m: Metric, coords, vel):
    """Rotation integral in its original form (before eliminating de, dalpha)."""
    coords, vel = np.asarray(coords, float), np.asarray(vel, float)
    q, p = coords[..., 1], coords[..., 2]
    de, dq, dp, dal = vel[..., 0], vel[..., 1], vel[..., 2], vel[..., 3]
    r2 = q * q + p * p
    return -0.5 * r2 * (m.a * de + m.b * dal) + (1.0 + 0.25 * m.a * r2) * (p * dq - q * dp)


def angular_momentum_reduced(m: Metric, coords, vel):
    """J = p q' - q p' - (p_e/2)(q^2 + p^2)."""
    coords, vel = np.asarray(coords, float), np.asarray(vel, float)
    q, p = coords[..., 1], coords[..., 2]
    pe, _ = momenta(m, coords, vel)
    return p * vel[..., 1] - q * vel[..., 2] - 0.5 * pe * (q * q + p * p)


def lagrangian(m: Metric, coords, vel):
    g = metric_tensor(m, coords)
    v = np.asarray(vel, float)
    return 0.5 * np.einsum("...i,...ij,...j->...", v, g, v)


def energy(m: Metric, coords, vel):
    """Energy in the separated form, written without the 1/r^2 singularity.

    dr^2/2 + J^2/(2 r^2) + p_e^2 r^2/8 + J p_e/2 collapses to (q'^2 + p'^2)/2.
    """
    vel = np.asarray(vel, float)
    pe, pal = momenta(m, coords, vel)
    det = m.det
    rest = ((m.d * pe - m.b * pal) * pe + (m.a * pal - m.b * pe) * pal) / (2.0 * det)
    return 0.5 * (vel[..., 1] ** 2 + vel[..., 2] ** 2) + rest


def noether_charges(m: Metric, coords, vel) -> np.ndarray:
    """I_j = (dL/da'^i) mu_L^i_j(a), using the coordinate metric."""
    g = metric_tensor(m, coords)
    mom = np.einsum("...ij,...j->...i", g, np.asarray(vel, float))
    return np.einsum("...i,...ij->...j", mom, mu_left(coords))


def noether_charges_adjoint(m: Metric, coords, pi) -> np.ndarray:
    """I_j = eta_kl D^k_j(a) Pi^l."""
    return np.einsum("...kj,kl,...l->...j", adjoint_matrix(coords), m.eta, np.asarray(pi, float))


@dataclass
class DriftReport:
    values: Dict[str, np.ndarray] = field(default_factory=dict)
    drift: Dict[str, float] = field(default_factory=dict)

    @property
    def max_drift(self) -> float:
        return max(self.drift.values()) if self.drift else 0.0


def conserved_along(m: Metric, coords, vel) -> DriftReport:
    """Evaluate all integrals along sampled (coords, velocities) and report drift.

    Drift is max |Q(t) - Q(0)| / max(1, |Q(0)|) per quantity.
    """
    coords, vel = np.asarray(coords, float), np.asarray(vel, float)
    pe, pal = momenta(m, coords, vel)
    pi = np.einsum("...ij,...j->...i", lambda_right(coords), vel)
    vals = {
        "pe": pe,
        "palpha": pal,
        "J": angular_momentum(m, coords, vel),
        "J_reduced": angular_momentum_reduced(m, coords, vel),
        "energy": energy(m, coords, vel),
        "lagrangian": lagrangian(m, coords, vel),
    }
    I = noether_charges(m, coords, vel)
    I_adj = noether_charges_adjoint(m, coords, pi)
    for j in range(4):
        vals[f"I{j}"] = I[..., j]
        vals[f"I{j}_adjoint"] = I_adj[..., j]
    rep = DriftReport(values=vals)
    for k, v in vals.items():
        v0 = v[0]
        rep.drift[k] = float(np.max(np.abs(v - v0)) / max(1.0, abs(v0)))
    return rep


# --------------------------------------------------------------------------- Hamiltonian closed form


def hamiltonian_solution(m: Metric, pe: float, palpha: float, E: float, gamma0: float, s: float) -> GroupElement:
    """Point at affine parameter ``s`` of the integrated Hamiltonian flow from the identity (J = 0)."""
    if pe == 0.0:
        raise ValueError("p_e = 0 is the free-particle limit; the amplitude formula divides by p_e")
    det = m.det
    rest = (pe * (m.d * pe - m.b * palpha) + palpha * (m.a * palpha - m.b * pe)) / det
    amp2 = 8.0 * E / pe**2 - 4.0 * rest / pe**2
    if amp2 < 0.0:
        if amp2 > -1e-12 * max(1.0, 8.0 * abs(E) / pe**2):
            amp2 = 0.0
        else:
            raise NegativeAmplitudeSquared(f"amplitude^2 = {amp2} < 0: energy below the minimum for these momenta")
    h = 0.5 * math.sqrt(amp2)
    w = pe * s
    c0, s0 = math.cos(gamma0), math.sin(gamma0)
    sw, omc = math.sin(w), 1.0 - math.cos(w)
    return GroupElement(
        q=h * c0 * sw + h * s0 * omc,
        p=-h * c0 * omc + h * s0 * sw,
        alpha=(m.a * palpha - m.b * pe) / det * s,
        e=-amp2 / 8.0 * sw + (pe * amp2 / 8.0 + (m.d * pe - m.b * palpha) / det) * s,
    )


@dataclass(frozen=True)
class HamiltonianData:
    pe: float
    palpha: float
    energy: float
    gamma0: float
    amplitude: float


def hamiltonian_data(m: Metric, gp: GeodesicParams) -> HamiltonianData:
    """Integrals of the Levi-Civita geodesic with constants ``gp``."""
    pe = m.a * gp.A + m.b * gp.B
    pal = m.b * gp.A + m.d * gp.B
    E = 0.5 * speed(m, gp) ** 2
    nt = nu_tilde(m, gp, GeodesicModel.LEVI_CIVITA)
    K = gp.D**2 + gp.F**2
    if K == 0.0 or nt == 0.0:
        return HamiltonianData(pe, pal, E, 0.0, 0.0)
    amp = 2.0 * math.sqrt(K) / abs(nt)
    g0 = math.atan2(-2.0 * gp.D / (nt * amp), -2.0 * gp.F / (nt * amp))
    return HamiltonianData(pe, pal, E, g0, amp)
