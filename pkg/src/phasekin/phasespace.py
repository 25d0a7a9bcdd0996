"""Classical-like phase-space observables by reduced (r, p, u) quadrature.

The kinetic energy and its split are Wigner-function averages of p^2/2M,
(p cos u)^2/2M and (p sin u)^2/2M; the classical-like squared angular
momentum averages (r p sin u)^2.  Integrals use the reduced s-state
measure from geometry, Gauss-Legendre in u, and log-mapped Gauss-Legendre
with panel doubling in r and p.  Convergence is monitored by successive
refinement; a refinement that cannot reach tolerance raises, never
returns silently.

Two-dimensional states are always integrated directly here.  The
operator-picture shortcut through <1/r^2> offsets is never taken in this
module, for any dimension; it would be ill-defined at d = 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.special import jv

from .geometry import check_dimension, solid_angle
from .quadrature import QuadratureError, gauss_legendre, log_radial_nodes
from .wigner import WignerGaussianSum

__all__ = [
    "PhaseReport",
    "McEstimate",
    "McReport",
    "ReducedGrid",
    "default_grid",
    "phase_report",
    "free_gaussian_closed_form",
    "position_marginal",
    "mc_oracle",
    "QuadratureError",
]


@dataclass(frozen=True)
class PhaseReport:
    """Phase-space-picture kinetic decomposition plus <Lambda^2>."""

    T_total: float
    T_rad: float
    T_ang: float
    Lambda2: float
    norm: float
    quadrature_error_estimate: float
    picture: str = "phase-space"
    units: str = "hbar=M=1"

    def to_json_dict(self, state_id: str, d: int, units: str | None = None, t_over_tau: float | None = None) -> dict:
        out = {
            "state_id": state_id,
            "picture": self.picture,
            "D": d,
            "T_total": self.T_total,
            "T_rad": self.T_rad,
            "T_ang": self.T_ang,
            "Lambda2": self.Lambda2,
            "units": units if units is not None else self.units,
            "error_estimate": self.quadrature_error_estimate,
        }
        if t_over_tau is not None:
            out["t_over_tau"] = t_over_tau
        return out


@dataclass(frozen=True)
class ReducedGrid:
    """Tensor (r, p, u) quadrature specification with the s-state measure.

    nodes() returns arrays whose weights already include the measure
    powers r^(d-1), p^(d-1), sin(u)^(d-2) and the panel Jacobians; the
    angular prefactor S_d S_(d-1) is returned alongside.
    """

    d: int
    r_lo: float
    r_hi: float
    p_lo: float
    p_hi: float
    r_panels: int = 4
    p_panels: int = 4
    order: int = 16
    n_u: int = 32

    def refined(self) -> "ReducedGrid":
        return replace(self, r_panels=2 * self.r_panels, p_panels=2 * self.p_panels)

    def with_u(self, n_u: int) -> "ReducedGrid":
        return replace(self, n_u=n_u)

    def nodes(self) -> tuple:
        r, wr = log_radial_nodes(self.r_lo, self.r_hi, self.r_panels, self.order)
        p, wp = log_radial_nodes(self.p_lo, self.p_hi, self.p_panels, self.order)
        wr = wr * r ** (self.d - 1)
        wp = wp * p ** (self.d - 1)
        x, w = gauss_legendre(self.n_u)
        u = 0.5 * math.pi * (x + 1.0)
        wu = 0.5 * math.pi * w
        if self.d > 2:
            wu = wu * np.sin(u) ** (self.d - 2)
        pref = solid_angle(self.d) * solid_angle(self.d - 1)
        return r, wr, p, wp, u, wu, pref


def _term_sigmas(term) -> tuple:
    det = term.A * term.B - term.C * term.C
    if det <= 0.0 or term.A <= 0.0 or term.B <= 0.0:
        raise ValueError("Wigner term is not a decaying Gaussian; cannot integrate")
    return math.sqrt(term.B / (2.0 * det)), math.sqrt(term.A / (2.0 * det))


def default_grid(w: WignerGaussianSum) -> ReducedGrid:
    """Starting grid sized from the per-term Gaussian covariances."""
    check_dimension(w.d)
    if not w.terms:
        raise ValueError("Wigner sum has no terms")
    sig_r = [_term_sigmas(t)[0] for t in w.terms]
    sig_p = [_term_sigmas(t)[1] for t in w.terms]
    tail = 14.0 + w.d
    small = 10.0 ** (-12.0 / w.d)
    plain = all(t.C == 0.0 and t.omega == 0.0 and t.chirp == 0.0 for t in w.terms)
    return ReducedGrid(
        d=w.d,
        r_lo=small * min(sig_r),
        r_hi=tail * max(sig_r),
        p_lo=small * min(sig_p),
        p_hi=tail * max(sig_p),
        n_u=8 if plain else 32,
    )


@lru_cache(maxsize=None)
def _u_nodes(n: int, d: int, half: bool):
    """cos(u), weight, weight*cos^2 arrays for the u integral, cached.

    Terms even in cos(u) integrate over [0, pi/2] with doubled weights.
    """
    x, w = gauss_legendre(n)
    if half:
        u = 0.25 * math.pi * (x + 1.0)
        wu = 0.5 * math.pi * w
    else:
        u = 0.5 * math.pi * (x + 1.0)
        wu = 0.5 * math.pi * w
    if d > 2:
        wu = wu * np.sin(u) ** (d - 2)
    cosu = np.cos(u)
    cos2 = cosu * cosu
    out = (cosu, wu, wu * cos2)
    for arr in out:
        arr.setflags(write=False)
    return out


_MASK_CUT = -70.0  # exp() below this is negligible against tol * T_total


def _bessel_u_moments(z: np.ndarray, d: int) -> tuple:
    """Exact angular moments of an oscillatory stationary term.

    For z = |omega| r p,

        M0(z)  = int_0^pi sin(u)^(d-2) cos(z cos u) du
        Mc2(z) = int_0^pi sin(u)^(d-2) cos^2(u) cos(z cos u) du

    are K z^(-nu) J_nu(z) and its negated second z-derivative, with
    nu = (d-2)/2 and K = sqrt(pi) Gamma(nu + 1/2) 2^nu.  Small z switches
    to the power series to avoid the 0/0 in z^(-nu) J_nu.
    """
    nu = 0.5 * (d - 2)
    k_const = math.sqrt(math.pi) * math.gamma(nu + 0.5) * 2.0 ** nu
    z = np.asarray(z, dtype=float)
    a = np.empty_like(z)
    b = np.empty_like(z)
    small = z < 1e-3
    zl = z[~small]
    if zl.size:
        a[~small] = jv(nu, zl) / zl ** nu
        b[~small] = jv(nu + 1.0, zl) / zl ** (nu + 1.0)
    zs2 = z[small] ** 2
    if zs2.size:
        c0 = 0.5 ** nu / math.gamma(nu + 1.0)
        a[small] = c0 * (1.0 - zs2 / (4.0 * (nu + 1.0)) + zs2 * zs2 / (32.0 * (nu + 1.0) * (nu + 2.0)))
        c1 = 0.5 ** (nu + 1.0) / math.gamma(nu + 2.0)
        b[small] = c1 * (1.0 - zs2 / (4.0 * (nu + 2.0)) + zs2 * zs2 / (32.0 * (nu + 2.0) * (nu + 3.0)))
    m0 = k_const * a
    mc2 = k_const * (a - (2.0 * nu + 1.0) * b)
    return m0, mc2


def _term_u_request(t, base: int) -> int:
    """Heuristic u-node count for one term, before the global doubling check.

    The boundary-layer factor exp(2C rp cos u) needs nodes like sqrt(kappa)
    (Gauss-Legendre clusters quadratically at the interval ends); the
    oscillation cos(omega rp cos u) needs nodes like 0.55 kappa.  kappa is
    taken at the largest r*p the Gaussian envelope makes non-negligible.
    """
    q = 32.0
    sab = math.sqrt(t.A * t.B)
    rp_eff = 0.5 * q / max(sab - abs(t.C), 1e-300)
    kappa_exp = 2.0 * abs(t.C) * rp_eff
    kappa_osc = abs(t.omega) * rp_eff + abs(t.chirp) * q / t.B
    n = max(base, 3.5 * math.sqrt(kappa_exp) + 12.0, 0.55 * kappa_osc + 16.0)
    return 1 << max(3, math.ceil(math.log2(n)))


def _moments(w: WignerGaussianSum, grid: ReducedGrid, u_factor: int, u_cap: int) -> tuple:
    """Raw integrals [norm, <p^2>, <(p cos u)^2>, <(p sin u)^2>, <(r p sin u)^2>].

    Returns (values, clipped) where clipped reports any non-negligible term
    whose requested u resolution exceeded u_cap.
    """
    r, wr, p, wp, _, _, pref = grid.nodes()
    d = grid.d
    X = r * r
    Y = p * p
    rp_flat = np.outer(r, p).ravel()
    y_flat = np.broadcast_to(Y[None, :], (r.size, p.size)).ravel()
    mc2 = np.zeros(r.size * p.size)
    ms2 = np.zeros_like(mc2)
    weights = [abs(t.amp) * (math.pi / math.sqrt(t.A * t.B - t.C * t.C)) ** d for t in w.terms]
    total_weight = sum(weights)
    clipped = False
    for t, wgt in zip(w.terms, weights):
        if wgt <= 1e-15 * total_weight:
            continue
        xy = (-t.A * X[:, None] - t.B * Y[None, :]).ravel()
        if t.C == 0.0 and t.chirp == 0.0:
            # stationary term: the u integral closes in Bessel functions
            idx = np.flatnonzero(xy > _MASK_CUT)
            if idx.size == 0:
                continue
            env = t.amp * np.exp(xy[idx])
            if t.omega == 0.0:
                m0_u, mc2_u = _bessel_u_moments(np.zeros(1), d)
                mc2[idx] += float(mc2_u[0]) * env
                ms2[idx] += float(m0_u[0] - mc2_u[0]) * env
            else:
                m0_u, mc2_u = _bessel_u_moments(abs(t.omega) * rp_flat[idx], d)
                mc2[idx] += env * mc2_u
                ms2[idx] += env * (m0_u - mc2_u)
            continue
        # sheared term (free evolution): Gauss-Legendre in u, order chosen
        # per term and validated by the caller's doubling check
        n_req = _term_u_request(t, grid.n_u) * u_factor
        if n_req > u_cap:
            clipped = True
            n_req = u_cap
        cosu, wu, wuc2 = _u_nodes(n_req, d, False)
        bound = xy + (2.0 * abs(t.C)) * rp_flat if t.C != 0.0 else xy
        idx = np.flatnonzero(bound > _MASK_CUT)
        if idx.size == 0:
            continue
        xy_i = xy[idx]
        rp_i = rp_flat[idx]
        oscillatory = t.omega != 0.0 or t.chirp != 0.0
        chirp_y = t.chirp * y_flat[idx] if t.chirp != 0.0 else None
        acc_c = np.zeros(idx.size)
        acc_s = np.zeros(idx.size)
        for k in range(cosu.size):
            cu = cosu[k]
            # the full quadratic form is negative definite, so one exp
            # per u node never overflows
            g = t.amp * np.exp(xy_i + (2.0 * t.C * cu) * rp_i)
            if oscillatory:
                arg = (t.omega * cu) * rp_i
                if chirp_y is not None:
                    arg = arg + chirp_y
                g = g * np.cos(arg)
            acc_c += wuc2[k] * g
            acc_s += (wu[k] - wuc2[k]) * g
        mc2[idx] += acc_c
        ms2[idx] += acc_s
    mc2 = mc2.reshape(r.size, p.size)
    ms2 = ms2.reshape(r.size, p.size)
    m0 = mc2 + ms2
    wp_p2 = wp * Y
    vals = np.array(
        [
            pref * (wr @ m0 @ wp),
            pref * (wr @ m0 @ wp_p2),
            pref * (wr @ mc2 @ wp_p2),
            pref * (wr @ ms2 @ wp_p2),
            pref * ((wr * X) @ ms2 @ wp_p2),
        ]
    )
    return vals, clipped


def _rel_diff(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(abs(a[1]), 1e-300)
    lam_scale = max(abs(a[4]), scale)
    return max(
        abs(a[0] - b[0]),
        abs(a[1] - b[1]) / scale,
        abs(a[2] - b[2]) / scale,
        abs(a[3] - b[3]) / scale,
        abs(a[4] - b[4]) / lam_scale,
    )


def _u_converged_moments(w, grid: ReducedGrid, tol: float, u_cap: int) -> np.ndarray:
    factor = 1
    vals, _ = _moments(w, grid, factor, u_cap)
    while True:
        vals2, clipped = _moments(w, grid, 2 * factor, u_cap)
        if _rel_diff(vals2, vals) <= 0.25 * tol:
            if clipped:
                raise QuadratureError(
                    f"u-quadrature hit the {u_cap}-node cap before its accuracy "
                    "could be verified (oscillatory cross terms too fast)"
                )
            return vals2
        if clipped:
            raise QuadratureError(
                f"u-quadrature not converged at the {u_cap}-node cap "
                "(oscillatory cross terms too fast for this cap)"
            )
        vals = vals2
        factor *= 2


def phase_report(
    w: WignerGaussianSum,
    grid: ReducedGrid | None = None,
    *,
    mass: float = 1.0,
    tol: float = 1e-9,
    u_cap: int = 512,
    max_levels: int = 7,
) -> PhaseReport:
    """Kinetic decomposition and <Lambda^2> of a Wigner sum by quadrature.

    Refines the grid (doubling r/p panels; u resolution is chosen per term
    and verified by doubling) until two successive refinements agree to
    `tol` relative to the total kinetic energy.  Raises QuadratureError
    when a cap is hit first; never returns an unconverged value silently.
    """
    if grid is None:
        grid = default_grid(w)
    g = grid
    prev = _u_converged_moments(w, g, tol, u_cap)
    for _ in range(max_levels):
        g = g.refined()
        vals = _u_converged_moments(w, g, tol, u_cap)
        err = _rel_diff(vals, prev)
        if err <= tol:
            half_m = 0.5 / mass
            return PhaseReport(
                T_total=half_m * vals[1],
                T_rad=half_m * vals[2],
                T_ang=half_m * vals[3],
                Lambda2=vals[4],
                norm=vals[0],
                quadrature_error_estimate=err,
            )
        prev = vals
    raise QuadratureError(
        f"reduced quadrature did not reach tol={tol:g} within {max_levels} panel doublings"
    )


def free_gaussian_closed_form(alpha: float, t: float, mass: float = 1.0, d: int = 3) -> PhaseReport:
    """Closed-form report for the spreading minimum-uncertainty state, d = 3.

    With eps = alpha^2 hbar^2 / M and tau = M / (alpha^2 hbar):

        T_total = 3/4 eps                      (constant in time)
        T_ang   = eps / (2 ((t/tau)^2 + 1))
        T_rad   = T_total - T_ang
        <Lambda^2> = 3/2 hbar^2                (constant in time)
    """
    if d != 3:
        raise ValueError("the closed form is only available for d = 3; use phase_report")
    if alpha <= 0 or mass <= 0:
        raise ValueError("alpha and mass must be positive")
    eps = alpha * alpha / mass
    tau = mass / (alpha * alpha)
    x = (t / tau) ** 2
    t_ang = eps / (2.0 * (x + 1.0))
    return PhaseReport(
        T_total=0.75 * eps,
        T_rad=0.75 * eps - t_ang,
        T_ang=t_ang,
        Lambda2=1.5,
        norm=1.0,
        quadrature_error_estimate=0.0,
    )


def position_marginal(w: WignerGaussianSum, r_values, *, tol: float = 1e-8, u_cap: int = 512) -> np.ndarray:
    """Integral of W over momentum at fixed |r|, i.e. the density |psi(r)|^2.

    Integrates S_(d-1) int p^(d-1) sin(u)^(d-2) W(r, p, u) dp du with the
    same doubling control as phase_report.
    """
    r_values = np.atleast_1d(np.asarray(r_values, dtype=float))
    d = w.d
    sig_p = [_term_sigmas(t)[1] for t in w.terms]
    p_lo = 10.0 ** (-12.0 / d) * min(sig_p)
    p_hi = (14.0 + d) * max(sig_p)
    pref = solid_angle(d - 1)
    plain = all(t.C == 0.0 and t.omega == 0.0 and t.chirp == 0.0 for t in w.terms)

    def value(panels: int, n_u: int) -> np.ndarray:
        p, wp = log_radial_nodes(p_lo, p_hi, panels, 16)
        wp = wp * p ** (d - 1)
        x, wgl = gauss_legendre(n_u)
        u = 0.5 * math.pi * (x + 1.0)
        wu = 0.5 * math.pi * wgl
        if d > 2:
            wu = wu * np.sin(u) ** (d - 2)
        cosu = np.cos(u)
        out = np.zeros(r_values.size)
        for i, r in enumerate(r_values):
            acc = np.zeros(p.size)
            for t in w.terms:
                env = t.amp * np.exp(-t.A * r * r - t.B * p * p)
                if t.C == 0.0 and t.chirp == 0.0:
                    if t.omega == 0.0:
                        acc += env * float(wu.sum())
                    else:
                        acc += env * _bessel_u_moments(abs(t.omega) * r * p, d)[0]
                    continue
                rp = r * np.outer(p, cosu)
                g = t.amp * np.exp(
                    -t.A * r * r - t.B * (p * p)[:, None] + 2.0 * t.C * rp
                )
                if t.omega != 0.0 or t.chirp != 0.0:
                    g = g * np.cos(t.omega * rp + t.chirp * (p * p)[:, None])
                acc += g @ wu
            out[i] = pref * (wp @ acc)
        return out

    panels, n_u = 4, (8 if plain else 32)
    prev = value(panels, n_u)
    for _ in range(10):
        panels *= 2
        if 2 * n_u <= u_cap:
            n_u *= 2
        cur = value(panels, n_u)
        if np.max(np.abs(cur - prev)) <= tol * max(np.max(np.abs(cur)), 1e-300):
            return cur
        prev = cur
    raise QuadratureError("position marginal did not converge")


@dataclass(frozen=True)
class McEstimate:
    value: float
    stderr: float


@dataclass(frozen=True)
class McReport:
    """Importance-sampled Monte Carlo estimates with standard errors."""

    norm: McEstimate
    T_total: McEstimate
    T_rad: McEstimate
    T_ang: McEstimate
    Lambda2: McEstimate
    n_samples: int
    seed: int


def mc_oracle(w: WignerGaussianSum, n_samples: int, seed: int, mass: float = 1.0) -> McReport:
    """Monte Carlo cross-check of phase_report over the full 2d phase space.

    Samples from a Gaussian mixture matched to the term envelopes (with
    mildly inflated covariance so the proposal dominates the tails) and
    importance-weights the exact W.  Intended as an oracle, not a fast
    path.
    """
    if n_samples < 10_000:
        raise ValueError("mc_oracle needs n_samples >= 10000")
    d = w.d
    rng = np.random.default_rng(seed)
    # per-term 2x2 covariance of each (x_k, p_k) pair, inflated for coverage
    covs, weights = [], []
    for t in w.terms:
        det = t.A * t.B - t.C * t.C
        if det <= 0.0 or not math.isfinite(det):
            raise ValueError("degenerate Wigner term; no valid proposal")
        cov = 1.5 * np.array([[t.B, t.C], [t.C, t.A]]) / (2.0 * det)
        covs.append(cov)
        weights.append(abs(t.amp) * (math.pi / math.sqrt(det)) ** d)
    weights = np.asarray(weights)
    if not np.all(np.isfinite(weights)) or weights.sum() <= 0.0:
        raise ValueError("degenerate proposal weights")
    weights = weights / weights.sum()
    chols = [np.linalg.cholesky(c) for c in covs]
    inv_covs = [np.linalg.inv(c) for c in covs]
    log_norms = [-math.log(2.0 * math.pi * math.sqrt(np.linalg.det(c))) for c in covs]

    counts = rng.multinomial(n_samples, weights)
    xs = np.empty((n_samples, d))
    ps = np.empty((n_samples, d))
    pos = 0
    for cnt, chol in zip(counts, chols):
        if cnt == 0:
            continue
        z = rng.standard_normal((cnt, d, 2))
        sample = z @ chol.T
        xs[pos : pos + cnt] = sample[:, :, 0]
        ps[pos : pos + cnt] = sample[:, :, 1]
        pos += cnt

    # mixture density: product over the d independent (x_k, p_k) pairs
    log_q = np.full(n_samples, -np.inf)
    for wgt, inv, ln in zip(weights, inv_covs, log_norms):
        quad = (
            inv[0, 0] * xs * xs + 2.0 * inv[0, 1] * xs * ps + inv[1, 1] * ps * ps
        ).sum(axis=1)
        log_qi = math.log(wgt) + d * ln - 0.5 * quad
        log_q = np.logaddexp(log_q, log_qi)

    r2 = (xs * xs).sum(axis=1)
    p2 = (ps * ps).sum(axis=1)
    rp = (xs * ps).sum(axis=1)
    wvals = np.zeros(n_samples)
    for t in w.terms:
        g = t.amp * np.exp(-t.A * r2 - t.B * p2 + 2.0 * t.C * rp)
        if t.omega != 0.0 or t.chirp != 0.0:
            g = g * np.cos(t.omega * rp + t.chirp * p2)
        wvals += g
    ratio = wvals * np.exp(-log_q)

    half_m = 0.5 / mass
    lam2 = r2 * p2 - rp * rp
    with np.errstate(invalid="ignore", divide="ignore"):
        rad = np.where(r2 > 0.0, rp * rp / r2, 0.0)

    def est(f: np.ndarray) -> McEstimate:
        vals = f * ratio
        mean = float(vals.mean())
        return McEstimate(mean, float(vals.std(ddof=1) / math.sqrt(n_samples)))

    return McReport(
        norm=est(np.ones(n_samples)),
        T_total=est(half_m * p2),
        T_rad=est(half_m * rad),
        T_ang=est(half_m * (p2 - rad)),
        Lambda2=est(lam2),
        n_samples=n_samples,
        seed=seed,
    )
