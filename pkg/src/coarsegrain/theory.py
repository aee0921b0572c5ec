"""Value-gap bounds, switch distances, and Monte Carlo checks of them.

Every ``check_*`` function returns one or more :class:`CheckReport`; a
check passes only with zero violations.  ``bound_scale`` multiplies the
bound under test and exists as a negative-control hook (values < 1 should
produce violations).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernels, analytic, riverswim, smoothness
from .errors import ConfigurationError, InfeasibleParametersError
from .metric import MetricSpace, ball_volume_constant, linear_size

_TOL = 1e-12


@dataclass(frozen=True)
class ReachabilityParams:
    k: int
    delta: float
    d_min: float
    r_min: float
    gamma: float
    q_max: float
    d_eps: float | None = None
    delta_q_eps: float | None = None
    d_max: float | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ConfigurationError("k must be a positive integer")
        if not 0 <= self.delta < 1:
            raise ConfigurationError("delta must lie in [0, 1)")
        if not self.d_min > 0:
            raise ConfigurationError("d_min must be positive")
        if not 0 < self.gamma < 1:
            raise ConfigurationError("gamma must lie in (0, 1)")
        if self.d_eps is not None and not self.d_eps > 0:
            raise ConfigurationError("d_eps must be positive")
        if self.delta_q_eps is not None and self.delta_q_eps < 0:
            raise ConfigurationError("delta_q_eps must be non-negative")
        if self.d_max is not None:
            if not self.d_max > 0:
                raise ConfigurationError("d_max must be positive")
            if self.delta > 0 and not self.d_max < (1 - self.delta) / self.delta * self.d_min:
                raise InfeasibleParametersError("d_max must be below ((1 - delta)/delta) d_min")

    @property
    def value_floor(self):
        """``r_min / (1 - gamma)``, the smallest possible discounted return."""
        return self.r_min / (1.0 - self.gamma)

    @classmethod
    def for_riverswim(cls, cfg):
        """Deterministic riverswim: k=1, delta=0, d_min=a_max-c, r_min=0, q_max=r_right."""
        if not cfg.a_max > cfg.c:
            raise ConfigurationError("a_max must exceed c")
        return cls(k=1, delta=0.0, d_min=cfg.a_max - cfg.c, r_min=min(0.0, cfg.r_left), gamma=cfg.gamma, q_max=cfg.r_right)


@dataclass
class CheckReport:
    name: str
    trials: int
    violations: int
    max_violation: float
    bound_value: float
    passed: bool = False

    def __post_init__(self):
        self.passed = self.violations == 0

    def to_json(self):
        d = asdict(self)
        d["max_violation"] = float(d["max_violation"])
        d["bound_value"] = float(d["bound_value"])
        return json.dumps(d)


def _report(name, lhs, bound, bound_value=None):
    """Count ``lhs > bound`` with a relative float tolerance."""
    lhs = np.asarray(lhs, dtype=np.float64).ravel()
    bound = np.broadcast_to(np.asarray(bound, dtype=np.float64), lhs.shape)
    excess = lhs - bound
    slack = 1e-9 * np.maximum(1.0, np.abs(bound))
    viol = int(np.count_nonzero(excess > slack))
    worst = float(excess.max()) if lhs.size else 0.0
    bv = float(bound.max()) if bound_value is None and lhs.size else float(bound_value or 0.0)
    return CheckReport(name, int(lhs.size), viol, worst, bv)


# -------------------------------------------------------------- jump bounds


def delta_q_bound(p, q_max_pair):
    """Local value-gap bound for two points whose states are within d_min."""
    if q_max_pair < p.value_floor - _TOL * max(1.0, abs(p.value_floor)):
        raise ConfigurationError("q_max_pair cannot lie below r_min / (1 - gamma)")
    gk = p.gamma**p.k
    return (1.0 - gk) / (1.0 - p.delta * gk) * (q_max_pair - p.value_floor)


def delta_q_max(p):
    return delta_q_bound(p, p.q_max)


def delta_q_bound_stochastic(p, q_max_pair):
    """Local bound plus the noise-scale gap term for stochastic continuous dynamics."""
    if p.d_eps is None or p.delta_q_eps is None:
        raise ConfigurationError("stochastic bound needs d_eps and delta_q_eps")
    gk = p.gamma**p.k
    return delta_q_bound(p, q_max_pair) + gk * (1.0 - p.delta) / (1.0 - p.delta * gk) * p.delta_q_eps


def naive_stochastic_bound(p):
    """Chaining bound ``delta_q_eps * ceil(d_min / d_eps)`` for comparison."""
    if p.d_eps is None or p.delta_q_eps is None:
        raise ConfigurationError("needs d_eps and delta_q_eps")
    return p.delta_q_eps * analytic._ceil_ratio(p.d_min, p.d_eps)


def random_walker_tau(delta, D_dmax, D):
    """Expected absorption time of the skip-free walker started at D."""
    speed = 1.0 - delta - delta * D_dmax
    if speed <= 0:
        raise InfeasibleParametersError(
            f"1 - delta - delta*D_dmax = {speed:.6g} <= 0: the walker need not reach the goal"
        )
    return D / speed


def walker_recurrence_residual(delta, D_dmax, D):
    """``tau(D) - [(1-d)(1+tau(D-1)) + d(1+tau(D+D_dmax))]``, zero for an exact solution."""
    tau = lambda n: random_walker_tau(delta, D_dmax, n) if n > 0 else 0.0  # noqa: E731
    rhs = (1 - delta) * (1 + tau(D - 1)) + delta * (1 + tau(D + D_dmax))
    return tau(D) - rhs


def relaxed_k(p):
    if p.d_max is None:
        raise ConfigurationError("relaxed bound needs d_max")
    D_dmax = analytic._ceil_ratio(p.d_max, p.d_min)
    return p.k * random_walker_tau(p.delta, D_dmax, 1)


def delta_q_bound_relaxed(p, q_max_pair):
    """Bound when failed attempts may drift up to d_max away (needs r_min <= 0)."""
    if p.r_min > 0:
        raise ConfigurationError("the relaxed-reachability bound requires r_min <= 0")
    k_tilde = relaxed_k(p)
    return (1.0 - p.gamma**k_tilde) * (q_max_pair - p.value_floor)


def lemma_any_points_bound(p, d):
    """Chained bound ``delta_q_max * ceil(d / d_min)`` for arbitrary distances."""
    d = np.asarray(d, dtype=np.float64)
    ratio = d / p.d_min
    snapped = np.where(np.abs(ratio - np.round(ratio)) < 1e-9 * np.maximum(1.0, ratio), np.round(ratio), np.ceil(ratio))
    out = delta_q_max(p) * snapped
    return float(out) if out.ndim == 0 else out


def l_alpha_upper_bound(p):
    """Upper bound on L_alpha at alpha = d_min."""
    return 2.0 * delta_q_max(p) / p.d_min


# -------------------------------------------------------------- L vs L_alpha


def switch_distance(L, L_alpha, alpha):
    """Distance beyond which the L_alpha envelope term is strictly below the Lipschitz one."""
    if not L_alpha > 0 or L < L_alpha:
        raise ConfigurationError("need L >= L_alpha > 0")
    if L_alpha > L / 3.0:
        return float(alpha)
    return 2.0 * L_alpha * alpha / (L - L_alpha)


class FractionBound(NamedTuple):
    value: float
    hypothesis_holds: bool


def volume_fraction_bound(space, L, L_alpha, alpha, N):
    """Guaranteed fraction of the domain where the L_alpha envelope is the tighter one."""
    if N == 0:
        return FractionBound(1.0, True)
    consts = linear_size(space)
    l_a = switch_distance(L, L_alpha, alpha)
    excluded = consts.C_D / consts.C_DX * (l_a / consts.l_X) ** space.D * N
    if excluded >= 1.0:
        return FractionBound(0.0, False)
    return FractionBound(1.0 - excluded, True)


def measure_tightness_fraction(samples, L, alpha, L_alpha, queries, rng):
    """Share of uniform queries where the L_alpha envelope is strictly narrower."""
    Q = samples.space.sample_uniform(int(queries), rng)
    wa = smoothness.l_alpha_envelope(samples, alpha, L_alpha, Q).width
    wl = smoothness.lipschitz_envelope(samples, L, Q).width
    return float(np.mean(wa < wl))


def zoomrl_episode_threshold(alpha):
    if not alpha > 0:
        raise ConfigurationError("alpha must be positive")
    return 2.0 / (3.0 * alpha)


# -------------------------------------------------------------- riverswim checks


def _riverswim_pairs(cfg, n, rng, max_state_gap, matched_actions):
    """Random state-action pairs whose lower-value successor is non-terminal.

    The value-gap argument moves the agent from the lower-value successor
    to the higher-value one, which is impossible once the lower one has
    already ended the episode on the left bank.
    """
    am = cfg.a_max
    out_s1, out_a1, out_s2, out_a2 = [], [], [], []
    need = n
    while need > 0:
        m = 2 * need + 64
        s1 = rng.uniform(-1.0, 1.0, m)
        a1 = rng.uniform(-am, am, m)
        s2 = s1 + rng.uniform(-max_state_gap, max_state_gap, m)
        a2 = a1.copy() if matched_actions else rng.uniform(-am, am, m)
        low = np.minimum(s1 + a1, s2 + a2)
        ok = (s2 > -1.0) & (s2 < 1.0) & (low > cfg.c - 1.0)
        take = np.flatnonzero(ok)[:need]
        for buf, arr in ((out_s1, s1), (out_a1, a1), (out_s2, s2), (out_a2, a2)):
            buf.append(arr[take])
        need -= take.size
    return tuple(np.concatenate(b) for b in (out_s1, out_a1, out_s2, out_a2))


def verify_theorem1_on_riverswim(cfg, pairs, rng, bound_scale=1.0):
    """Local, global and chained value-gap bounds on matched-action pairs.

    State gaps are drawn up to 2 d_min; pairs within d_min are checked
    against the local and global bounds, the rest against the chained one.
    Values use the arrival-discounted closed form, which agrees with the
    simulator.
    """
    p = ReachabilityParams.for_riverswim(cfg)
    s1, a1, s2, a2 = _riverswim_pairs(cfg, pairs, rng, 2.0 * p.d_min, matched_actions=True)
    q1 = riverswim.q_star(cfg, s1, a1, arrival_discount=True)
    q2 = riverswim.q_star(cfg, s2, a2, arrival_discount=True)
    gap = np.abs(q1 - q2)
    d = np.abs(s1 - s2)
    near = d <= p.d_min
    qpair = np.maximum(q1, q2)
    local = np.array([delta_q_bound(p, q) for q in qpair[near]]) * bound_scale
    far_bound = lemma_any_points_bound(p, d[~near]) * bound_scale
    lhs = np.concatenate([gap[near], gap[~near]])
    rhs = np.concatenate([local, np.atleast_1d(far_bound)])
    return _report("thm1", lhs, rhs, bound_value=delta_q_max(p) * bound_scale)


def check_corollary1(cfg, pairs, rng, bound_scale=1.0):
    p = ReachabilityParams.for_riverswim(cfg)
    s1, a1, s2, a2 = _riverswim_pairs(cfg, pairs, rng, p.d_min, matched_actions=True)
    gap = np.abs(riverswim.q_star(cfg, s1, a1, True) - riverswim.q_star(cfg, s2, a2, True))
    bound = delta_q_max(p) * bound_scale
    return _report("cor1", gap, bound, bound)


def check_lemma1(cfg, pairs, rng, bound_scale=1.0):
    """Chained bound for arbitrary state-action pairs under ``|ds| + |da|``."""
    p = ReachabilityParams.for_riverswim(cfg)
    s1, a1, s2, a2 = _riverswim_pairs(cfg, pairs, rng, 2.0, matched_actions=False)
    gap = np.abs(riverswim.q_star(cfg, s1, a1, True) - riverswim.q_star(cfg, s2, a2, True))
    d = np.abs(s1 - s2) + np.abs(a1 - a2)
    return _report("lemma1", gap, lemma_any_points_bound(p, d) * bound_scale, delta_q_max(p) * bound_scale)


def riverswim_q_along_right(cfg, n_states=2001, arrival_discount=True):
    """Samples of ``Q*(s, a_max)`` on a uniform state grid inside (-1, 1)."""
    s = np.linspace(-1.0, 1.0, n_states + 2)[1:-1]
    space = MetricSpace.interval(-1.0, 1.0)
    q = riverswim.q_star(cfg, s, np.full_like(s, cfg.a_max), arrival_discount)
    return smoothness.SampleSet(space, s, q)


def check_prop2(cfg, n_states=2001, bound_scale=1.0, arrival_discount=True):
    """Empirical L_{d_min} of Q*(., a_max) against its structural upper bound."""
    p = ReachabilityParams.for_riverswim(cfg)
    samples = riverswim_q_along_right(cfg, n_states, arrival_discount)
    emp = smoothness.l_alpha_empirical(samples, p.d_min)
    bound = l_alpha_upper_bound(p) * bound_scale
    return _report("prop2", [emp], bound, bound)


# -------------------------------------------------------------- step-ramp corpus


@dataclass(frozen=True)
class StepRamp:
    """``scale * sign * (m x + A floor((x - phase) / w)) + offset`` on [0, 1]."""

    m: float
    A: float
    w: float
    phase: float
    scale: float
    sign: float
    offset: float

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        return self.scale * self.sign * (self.m * x + self.A * np.floor((x - self.phase) / self.w)) + self.offset

    def l_alpha(self, alpha):
        """Upper bound on L_alpha: both parts rise together, so slopes add."""
        stairs = analytic.stairs_l_alpha(analytic.Stairs(self.A, self.w), alpha) if self.A > 0 else 0.0
        return self.scale * (self.m + stairs)

    @property
    def jump(self):
        return self.scale * self.A


def random_step_ramp(rng):
    return StepRamp(
        m=float(rng.uniform(0.0, 3.0)),
        A=float(rng.uniform(0.0, 0.5)),
        w=float(rng.uniform(0.02, 0.3)),
        phase=float(rng.uniform(0.0, 0.3)),
        scale=float(rng.uniform(0.2, 2.0)),
        sign=float(rng.choice([-1.0, 1.0])),
        offset=float(rng.uniform(-1.0, 1.0)),
    )


class CorpusResult(NamedTuple):
    strict: CheckReport
    relaxed: CheckReport
    jumps: CheckReport


def check_step_ramp_corpus(n_functions, grid_points, rng, bound_scale=1.0):
    """Strict and relaxed envelopes plus the jump cap on random step ramps."""
    space = MetricSpace.interval(0.0, 1.0)
    grid = np.linspace(0.0, 1.0, grid_points)
    strict_lhs, strict_rhs = [], []
    relax_lhs, relax_rhs = [], []
    jump_lhs, jump_rhs = [], []
    for _ in range(n_functions):
        f = random_step_ramp(rng)
        alpha = float(rng.uniform(0.02, 0.3))
        la = f.l_alpha(alpha) * bound_scale
        n_obs = int(rng.integers(1, 12))
        samples = smoothness.SampleSet.from_function(space, f, rng.uniform(0.0, 1.0, n_obs))
        truth = f(grid)
        env = smoothness.l_alpha_envelope(samples, alpha, la, grid)
        # excess of f over the envelope, compared against 0
        strict_lhs.append(np.maximum(truth - env.upper, env.lower - truth))
        strict_rhs.append(np.zeros_like(truth))
        rel = smoothness.relaxed_envelope(samples, alpha, la, grid)
        relax_lhs.append(np.maximum(truth - rel.upper, rel.lower - truth))
        # the cap is strict, so shave off the comparison slack
        cap = smoothness.max_jump_given_l_alpha(alpha, la)
        relax_rhs.append(np.full_like(truth, cap - 2e-9 * max(1.0, cap)))
        jump_lhs.append(np.abs(np.diff(truth)).max())
        jump_rhs.append(smoothness.max_jump_given_l_alpha(alpha, la))
    strict = _report("eq7_strict", np.concatenate(strict_lhs), np.concatenate(strict_rhs), 0.0)
    relaxed = _report("relaxed_cap", np.concatenate(relax_lhs), np.concatenate(relax_rhs))
    jumps = _report("prop1", jump_lhs, jump_rhs)
    return CorpusResult(strict, relaxed, jumps)


# -------------------------------------------------------------- tightness-fraction configs


def sine_l_alpha_in_dims(f, alpha, D):
    """L_alpha of ``x -> f(x_0)`` on a D-dimensional euclidean box.

    Pairs at distance >= alpha may differ by less than alpha along x_0;
    their slope is at most ``max_gap(delta) / alpha`` where
    ``max_gap(delta) = m delta + 2 A |sin(pi omega delta)|``.
    """
    base = analytic.sine_l_alpha(f, alpha)
    if D == 1:
        return base
    gap = lambda t: f.m * t + 2.0 * f.A * abs(math.sin(math.pi * f.omega * t))  # noqa: E731
    ts = np.linspace(0.0, alpha, 513)
    vals = np.array([gap(t) for t in ts])
    i = int(np.argmax(vals))
    lo, hi = ts[max(0, i - 1)], ts[min(len(ts) - 1, i + 1)]
    best = vals[i]
    if hi > lo:
        res = minimize_scalar(lambda t: -gap(t), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        best = max(best, -res.fun)
    return max(base, best / alpha)


class Thm2Config(NamedTuple):
    space: MetricSpace
    f: analytic.SineRamp
    L: float
    alpha: float
    L_alpha: float
    N: int


def random_thm2_config(rng, D=None):
    """A sine-ramp of the first coordinate on the unit cube, with N kept inside the hypothesis."""
    D = int(rng.integers(1, 4)) if D is None else D
    space = MetricSpace.unit_cube(D)
    while True:
        f = analytic.SineRamp(float(rng.uniform(0.2, 3.0)), float(rng.uniform(0.5, 4.0)), float(rng.uniform(0.1, 5.0)))
        alpha = float(rng.uniform(0.05, 1.0)) / f.omega
        L = analytic.sine_lipschitz(f)
        la = sine_l_alpha_in_dims(f, alpha, D)
        if la >= L:
            continue
        lsw = switch_distance(L, la, alpha)
        per_obs = ball_volume_constant(space) * lsw**D / space.volume
        n_max = math.ceil(1.0 / per_obs) - 1
        if n_max >= 1:
            N = int(rng.integers(1, min(n_max, 30) + 1))
            return Thm2Config(space, f, L, alpha, la, N)


def check_theorem2(n_configs, queries, rng, bound_scale=1.0):
    """Measured tighter-fraction against the guaranteed one, 3-sigma Monte Carlo slack."""
    lhs, rhs = [], []
    for _ in range(n_configs):
        cfg = random_thm2_config(rng)
        X = cfg.space.sample_uniform(cfg.N, rng)
        samples = smoothness.SampleSet(cfg.space, X, cfg.f(X[:, 0]))
        frac = measure_tightness_fraction(samples, cfg.L, cfg.alpha, cfg.L_alpha, queries, rng)
        fb = volume_fraction_bound(cfg.space, cfg.L, cfg.L_alpha, cfg.alpha, cfg.N)
        se = math.sqrt(max(fb.value * (1 - fb.value), 1.0 / queries) / queries)
        # a corrupted (scaled-down) constant inflates the claimed fraction
        target = min(1.0, fb.value / bound_scale)
        lhs.append(target - 3.0 * se - frac)
        rhs.append(0.0)
    return _report("thm2", lhs, rhs, 0.0)


# -------------------------------------------------------------- skip-free walker


class WalkerEstimate(NamedTuple):
    mean_steps: float
    stderr: float
    unabsorbed: int


def simulate_walker(delta, D_dmax, episodes, rng, start=1, chunk=64, max_steps=100_000):
    """Absorption times of the skip-free walker, advanced in chunks of pre-drawn uniforms."""
    pos = np.full(episodes, start, dtype=np.int64)
    steps = np.zeros(episodes, dtype=np.int64)
    live = np.arange(episodes)
    taken = 0
    while live.size and taken < max_steps:
        u = rng.random((live.size, chunk))
        p, s = _kernels.walk(pos[live], u, delta, D_dmax)
        pos[live] = p
        steps[live] += s
        live = live[p > 0]
        taken += chunk
    return steps, int(live.size)


def walker_tau_estimate(delta, D_dmax, episodes, rng):
    steps, left = simulate_walker(delta, D_dmax, episodes, rng)
    return WalkerEstimate(float(steps.mean()), float(steps.std(ddof=1) / math.sqrt(episodes)), left)


def walker_discount_exact(delta, D_dmax, z, tol=1e-15, max_iter=100_000):
    """``E[z**T]`` for the walker's absorption time from D = 1.

    Solves ``G = z((1 - delta) + delta G**(D_dmax + 1))`` by fixed-point
    iteration from G = 0, which converges to the smallest root.
    """
    G = 0.0
    for _ in range(max_iter):
        nxt = z * ((1.0 - delta) + delta * G ** (D_dmax + 1))
        if abs(nxt - G) < tol:
            return nxt
        G = nxt
    return G


def check_walker_tau(delta=0.1, D_dmax=3, episodes=1_000_000, rng=None):
    rng = np.random.default_rng() if rng is None else rng
    est = walker_tau_estimate(delta, D_dmax, episodes, rng)
    tau = random_walker_tau(delta, D_dmax, 1)
    # violation measured in standard errors beyond 3
    z = abs(est.mean_steps - tau) / est.stderr if est.stderr > 0 else 0.0
    rep = _report("appB_walker_tau", [z], 3.0, tau)
    if est.unabsorbed:
        rep.violations += est.unabsorbed
        rep.passed = False
    return rep


def check_walker_recurrence(delta=0.1, D_dmax=3, D_range=range(1, 51)):
    res = [abs(walker_recurrence_residual(delta, D_dmax, D)) for D in D_range]
    return _report("appB_recurrence", res, 1e-9, 1e-9)


def check_theorem4(trials, rng, n_configs=8, bound_scale=1.0):
    """Walker-with-rewards simulation of the relaxed-reachability bound.

    Each configuration draws (delta, D_dmax, gamma, k, r_min <= 0, Q1).
    The walker pays r_min per agent step until absorption and then Q1, so
    the value gap equals ``(1 - E[gamma**(k T)]) (Q1 - r_min / (1 - gamma))``.
    The exact gap (generating function) and a simulated gap allowing five
    standard errors are both compared with the bound.
    """
    lhs, rhs = [], []
    bound_max = 0.0
    for _ in range(n_configs):
        while True:
            delta = float(rng.uniform(0.0, 0.2))
            D_dmax = int(rng.integers(1, 6))
            if 1 - delta - delta * D_dmax > 0.05:
                break
        gamma = float(rng.uniform(0.5, 0.99))
        k = int(rng.integers(1, 4))
        r_min = -float(rng.uniform(0.0, 1.0))
        q1 = float(rng.uniform(0.0, 10.0))
        p = ReachabilityParams(k, delta, 1.0, r_min, gamma, q1, d_max=float(D_dmax))
        bound = delta_q_bound_relaxed(p, q1) * bound_scale
        bound_max = max(bound_max, bound)
        span = q1 - p.value_floor
        exact_gap = (1.0 - walker_discount_exact(delta, D_dmax, gamma**k)) * span
        steps, _ = simulate_walker(delta, D_dmax, trials, rng)
        disc = gamma ** (k * steps.astype(np.float64))
        q2 = r_min * (1.0 - disc) / (1.0 - gamma) + disc * q1
        sim_gap = q1 - q2.mean()
        sim_se = q2.std(ddof=1) / math.sqrt(trials)
        lhs += [exact_gap, sim_gap - 5.0 * sim_se]
        rhs += [bound, bound]
    return _report("appB_thm4", lhs, rhs, bound_max)


def check_theorem3_consistency(rng, n=200):
    """Stochastic bound reduces to the local bound at zero noise gap and grows with it."""
    bad = []
    for _ in range(n):
        p0 = ReachabilityParams(
            int(rng.integers(1, 4)), float(rng.uniform(0, 0.5)), 1.0, float(rng.uniform(-1, 0)),
            float(rng.uniform(0.5, 0.99)), float(rng.uniform(0, 5)), d_eps=0.01, delta_q_eps=0.0,
        )
        base = delta_q_bound(p0, p0.q_max)
        zero = delta_q_bound_stochastic(p0, p0.q_max)
        eps = sorted(rng.uniform(0, 1, 5))
        vals = [delta_q_bound_stochastic(_with(p0, delta_q_eps=e), p0.q_max) for e in eps]
        bad.append(abs(zero - base) + sum(max(0.0, a - b) for a, b in zip(vals, vals[1:])))
    return _report("appB_thm3", bad, 1e-12, 0.0)


def _with(p, **kw):
    return ReachabilityParams(**{**asdict(p), **kw})


# -------------------------------------------------------------- suites

SUITES = ("thm1", "thm2", "prop1", "prop2", "prop3", "lemma1", "appB")


def run_suite(name, rng, bound_scale=1.0, cfg=None, quick=False):
    """Reports for one named suite; ``quick`` shrinks trial counts for smoke runs."""
    cfg = riverswim.RiverswimConfig() if cfg is None else cfg
    if name == "all":
        out = []
        for s in SUITES:
            out += run_suite(s, rng, bound_scale, cfg, quick)
        return out
    if name not in SUITES:
        raise ConfigurationError(f"unknown suite {name!r}")
    pairs = 10_000 if quick else 100_000
    if name == "thm1":
        half = riverswim.RiverswimConfig(cfg.a_max, cfg.c, cfg.r_left, cfg.r_right, 0.5)
        r1 = verify_theorem1_on_riverswim(cfg, pairs, rng, bound_scale)
        r2 = verify_theorem1_on_riverswim(half, pairs, rng, bound_scale)
        r2.name = "thm1_gamma0.5"
        return [r1, r2, check_corollary1(cfg, pairs, rng, bound_scale)]
    if name == "lemma1":
        return [check_lemma1(cfg, pairs, rng, bound_scale)]
    if name == "prop2":
        return [check_prop2(cfg, bound_scale=bound_scale)]
    if name == "prop1":
        res = check_step_ramp_corpus(40 if quick else 200, 2_000 if quick else 10_000, rng, bound_scale)
        return [res.strict, res.relaxed, res.jumps]
    if name == "thm2":
        return [check_theorem2(20 if quick else 100, 10_000 if quick else 100_000, rng, bound_scale)]
    if name == "prop3":
        from .agents import zoom

        return [
            zoom.check_index_dominance(200 if quick else 1_000, rng, bound_scale),
            zoom.check_radius_floor(cfg, rng, seeds=3 if quick else 10),
        ]
    return [
        check_walker_tau(episodes=100_000 if quick else 1_000_000, rng=rng),
        check_walker_recurrence(),
        check_theorem4(1_000 if quick else 10_000, rng, bound_scale=bound_scale),
        check_theorem3_consistency(rng),
    ]
