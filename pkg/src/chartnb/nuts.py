"""No-U-Turn Sampler with windowed warmup adaptation.

Multinomial NUTS with the generalized U-turn criterion (checked on every
merged subtree and across subtree boundaries), a diagonal mass matrix and
dual-averaging step-size adaptation. Targets supply
``logp_and_grad(z) -> (float, ndarray)`` on an unconstrained space.

Random streams: chain ``c`` draws from ``Philox`` seeded with child ``c`` of
``numpy.random.SeedSequence(seed)``, so results do not depend on the number
of chains run or on whether chains run in parallel.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

MAX_DELTA_H = 1000.0
LOG_08 = math.log(0.8)


class SamplerError(RuntimeError):
    pass


@dataclass(frozen=True)
class SamplerConfig:
    chains: int = 2
    warmup_draws: int = 2000
    post_warmup_draws: int = 2000
    target_accept: float = 0.9
    max_tree_depth: int = 10
    seed: int = 0
    init_jitter: float = 0.5

    def __post_init__(self):
        if self.chains < 1:
            raise ValueError("chains must be >= 1")
        if self.warmup_draws < 0 or self.post_warmup_draws < 1:
            raise ValueError("need warmup_draws >= 0 and post_warmup_draws >= 1")
        if not 0.0 < self.target_accept < 1.0:
            raise ValueError("target_accept must lie in (0, 1)")
        if self.max_tree_depth < 1:
            raise ValueError("max_tree_depth must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


class FunctionTarget:
    """Wrap a ``fn(z) -> (logp, grad)`` callable as a sampler target."""

    def __init__(self, fn: Callable, dim: int, names: Sequence[str] | None = None):
        self.fn = fn
        self.dim = dim
        self.param_names = tuple(names) if names else tuple(f"x{i}" for i in range(dim))
        self.unconstrained_names = self.param_names

    def logp_and_grad(self, z):
        return self.fn(z)


class GaussianTarget:
    """Multivariate normal target; handy for testing the sampler."""

    def __init__(self, mean, cov):
        self.mean = np.atleast_1d(np.asarray(mean, dtype=float))
        self.cov = np.atleast_2d(np.asarray(cov, dtype=float))
        self.precision = np.linalg.inv(self.cov)
        self.dim = self.mean.size
        self.param_names = tuple(f"x{i}" for i in range(self.dim))
        self.unconstrained_names = self.param_names

    def logp_and_grad(self, z):
        d = np.asarray(z, dtype=float) - self.mean
        g = -self.precision @ d
        return float(0.5 * d @ g), g


# -- integrator ----------------------------------------------------------------


class State(NamedTuple):
    q: np.ndarray
    p: np.ndarray
    logp: float
    grad: np.ndarray


def leapfrog(position, momentum, step, target, mass_inv, grad=None):
    """One velocity-Verlet step. Returns ``(q, p, logp, grad)`` at the end point.

    ``target`` is a sampler target or a ``fn(z) -> (logp, grad)`` callable.
    A non-finite log density is returned as ``-inf`` (the caller treats it as
    a divergence).
    """
    fn = target.logp_and_grad if hasattr(target, "logp_and_grad") else target
    q = np.asarray(position, dtype=float)
    p = np.asarray(momentum, dtype=float)
    if grad is None:
        grad = fn(q)[1]
    p_half = p + 0.5 * step * grad
    q_new = q + step * mass_inv * p_half
    logp, g = fn(q_new)
    p_new = p_half + 0.5 * step * g
    if not np.isfinite(logp):
        logp = -np.inf
    return q_new, p_new, logp, g


def _hamiltonian(state: State, mass_inv: np.ndarray) -> float:
    h = -state.logp + 0.5 * float(np.dot(state.p, mass_inv * state.p))
    return h if np.isfinite(h) else np.inf


def _no_u_turn(p_sharp_minus, p_sharp_plus, rho) -> bool:
    return float(np.dot(p_sharp_plus, rho)) > 0 and float(np.dot(p_sharp_minus, rho)) > 0


# -- transition ----------------------------------------------------------------


class Subtree(NamedTuple):
    valid: bool
    end: State
    proposal: State
    log_sum_weight: float
    rho: np.ndarray
    p_beg: np.ndarray
    p_end: np.ndarray
    p_sharp_beg: np.ndarray
    p_sharp_end: np.ndarray


class TransitionStats(NamedTuple):
    accept_stat: float
    tree_depth: int
    n_leapfrog: int
    diverging: bool
    energy: float


class _TreeBuilder:
    def __init__(self, fn, step, mass_inv, rng, h0):
        self.fn = fn
        self.step = step
        self.mass_inv = mass_inv
        self.rng = rng
        self.h0 = h0
        self.n_leapfrog = 0
        self.sum_metro_prob = 0.0
        self.divergent = False

    def build(self, depth: int, z: State, direction: int) -> Subtree:
        if depth == 0:
            q, p, logp, g = leapfrog(z.q, z.p, direction * self.step, self.fn, self.mass_inv, z.grad)
            new = State(q, p, logp, g)
            self.n_leapfrog += 1
            h = _hamiltonian(new, self.mass_inv)
            if h - self.h0 > MAX_DELTA_H:
                self.divergent = True
            log_w = self.h0 - h
            self.sum_metro_prob += 1.0 if log_w > 0 else math.exp(log_w)
            p_sharp = self.mass_inv * p
            return Subtree(not self.divergent, new, new, log_w, p.copy(), p, p, p_sharp, p_sharp)

        init = self.build(depth - 1, z, direction)
        if not init.valid:
            return init._replace(valid=False)
        final = self.build(depth - 1, init.end, direction)
        if not final.valid:
            return final._replace(valid=False)

        log_sum_weight = np.logaddexp(init.log_sum_weight, final.log_sum_weight)
        proposal = init.proposal
        if self.rng.uniform() < math.exp(final.log_sum_weight - log_sum_weight):
            proposal = final.proposal

        rho = init.rho + final.rho
        persist = _no_u_turn(init.p_sharp_beg, final.p_sharp_end, rho)
        persist &= _no_u_turn(init.p_sharp_beg, final.p_sharp_beg, init.rho + final.p_beg)
        persist &= _no_u_turn(init.p_sharp_end, final.p_sharp_end, final.rho + init.p_end)
        return Subtree(
            persist, final.end, proposal, log_sum_weight, rho,
            init.p_beg, final.p_end, init.p_sharp_beg, final.p_sharp_end,
        )


def nuts_draw(current: State, target, step_size: float, mass_inv: np.ndarray,
              rng: np.random.Generator, max_tree_depth: int = 10) -> tuple[State, TransitionStats]:
    """One multinomial NUTS transition from ``current``.

    ``current`` must carry a finite log density and its gradient. A
    divergent trajectory still yields a valid state drawn from the part of
    the trajectory built before the divergence.
    """
    fn = target.logp_and_grad if hasattr(target, "logp_and_grad") else target
    if not np.isfinite(current.logp):
        raise SamplerError("current state has non-finite log density")
    p0 = rng.standard_normal(current.q.size) / np.sqrt(mass_inv)
    z0 = State(current.q, p0, current.logp, current.grad)
    h0 = _hamiltonian(z0, mass_inv)
    builder = _TreeBuilder(fn, step_size, mass_inv, rng, h0)

    z_fwd = z_bck = z0
    p_sharp0 = mass_inv * p0
    p_fwd_fwd = p_fwd_bck = p_bck_fwd = p_bck_bck = p0
    ps_fwd_fwd = ps_fwd_bck = ps_bck_fwd = ps_bck_bck = p_sharp0
    rho = p0.copy()
    log_sum_weight = 0.0
    sample = z0
    depth = 0

    while depth < max_tree_depth:
        if rng.uniform() > 0.5:
            # the existing trajectory becomes the backward half
            rho_bck, p_bck_fwd, ps_bck_fwd = rho, p_fwd_fwd, ps_fwd_fwd
            tree = builder.build(depth, z_fwd, 1)
            z_fwd = tree.end
            rho_fwd = tree.rho
            p_fwd_bck, p_fwd_fwd = tree.p_beg, tree.p_end
            ps_fwd_bck, ps_fwd_fwd = tree.p_sharp_beg, tree.p_sharp_end
        else:
            rho_fwd, p_fwd_bck, ps_fwd_bck = rho, p_bck_bck, ps_bck_bck
            tree = builder.build(depth, z_bck, -1)
            z_bck = tree.end
            rho_bck = tree.rho
            p_bck_fwd, p_bck_bck = tree.p_beg, tree.p_end
            ps_bck_fwd, ps_bck_bck = tree.p_sharp_beg, tree.p_sharp_end

        if not tree.valid:
            break
        depth += 1

        # biased progressive sampling favours the new subtree
        if tree.log_sum_weight > log_sum_weight:
            sample = tree.proposal
        elif rng.uniform() < math.exp(tree.log_sum_weight - log_sum_weight):
            sample = tree.proposal
        log_sum_weight = np.logaddexp(log_sum_weight, tree.log_sum_weight)

        rho = rho_bck + rho_fwd
        persist = _no_u_turn(ps_bck_bck, ps_fwd_fwd, rho)
        persist &= _no_u_turn(ps_bck_bck, ps_fwd_bck, rho_bck + p_fwd_bck)
        persist &= _no_u_turn(ps_bck_fwd, ps_fwd_fwd, rho_fwd + p_bck_fwd)
        if not persist:
            break

    n = max(builder.n_leapfrog, 1)
    stats = TransitionStats(
        accept_stat=builder.sum_metro_prob / n,
        tree_depth=depth,
        n_leapfrog=builder.n_leapfrog,
        diverging=builder.divergent,
        energy=_hamiltonian(sample, mass_inv),
    )
    return State(sample.q, sample.p, sample.logp, sample.grad), stats


# -- adaptation ----------------------------------------------------------------


class DualAveraging:
    """Step-size adaptation toward a target acceptance statistic."""

    def __init__(self, target_accept: float, gamma: float = 0.05, t0: float = 10.0, kappa: float = 0.75):
        self.delta = target_accept
        self.gamma = gamma
        self.t0 = t0
        self.kappa = kappa
        self.restart(1.0)

    def restart(self, step_size: float) -> None:
        self.mu = math.log(10.0 * step_size)
        self.counter = 0
        self.s_bar = 0.0
        self.x_bar = 0.0

    def update(self, accept_stat: float) -> float:
        """Feed one acceptance statistic, return the next step size."""
        self.counter += 1
        accept_stat = min(1.0, accept_stat)
        eta = 1.0 / (self.counter + self.t0)
        self.s_bar = (1.0 - eta) * self.s_bar + eta * (self.delta - accept_stat)
        x = self.mu - self.s_bar * math.sqrt(self.counter) / self.gamma
        x_eta = self.counter ** (-self.kappa)
        self.x_bar = (1.0 - x_eta) * self.x_bar + x_eta * x
        return math.exp(x)

    @property
    def final_step_size(self) -> float:
        return math.exp(self.x_bar)


class WelfordVariance:
    def __init__(self, dim: int):
        self.dim = dim
        self.restart()

    def restart(self) -> None:
        self.n = 0
        self.mean = np.zeros(self.dim)
        self.m2 = np.zeros(self.dim)

    def add(self, x: np.ndarray) -> None:
        self.n += 1
        delta = x - self.mean
        self.mean += delta / self.n
        self.m2 += (x - self.mean) * delta

    def regularized_variance(self) -> np.ndarray:
        n = self.n
        var = self.m2 / (n - 1.0)
        # shrink toward 1e-3 for short windows
        return (n / (n + 5.0)) * var + 1e-3 * (5.0 / (n + 5.0))


def warmup_windows(num_warmup: int, init_buffer: int = 75, term_buffer: int = 50,
                   base_window: int = 25) -> list[tuple[int, int]]:
    """Half-open ``(start, end)`` iteration ranges of the metric windows.

    Windows double in size; the last one stretches to the start of the
    terminal buffer if the next doubling would not fit.
    """
    if num_warmup < 20:
        return []
    if init_buffer + base_window + term_buffer > num_warmup:
        init_buffer = int(0.15 * num_warmup)
        term_buffer = int(0.1 * num_warmup)
        base_window = num_warmup - (init_buffer + term_buffer)
    last = num_warmup - term_buffer
    windows = []
    start, size = init_buffer, base_window
    while start < last:
        end = start + size
        if end + 2 * size >= last:
            end = last
        windows.append((start, end))
        start, size = end, 2 * size
    return windows


@dataclass
class AdaptationState:
    """Warmup adaptation for one chain: step size plus diagonal inverse mass."""

    dim: int
    num_warmup: int
    target_accept: float
    step_size: float = 1.0
    inv_mass: np.ndarray = field(default=None)
    iteration: int = 0

    def __post_init__(self):
        if self.inv_mass is None:
            self.inv_mass = np.ones(self.dim)
        self.dual = DualAveraging(self.target_accept)
        self.windows = warmup_windows(self.num_warmup)
        self.window_ends = {end - 1 for _, end in self.windows}
        self.estimator = WelfordVariance(self.dim)

    def in_window(self, i: int) -> bool:
        return any(s <= i < e for s, e in self.windows)

    def learn(self, q: np.ndarray, accept_stat: float) -> bool:
        """Update after warmup iteration ``self.iteration``.

        Returns True when a metric window closed and the inverse mass changed;
        the caller must then re-initialize the step size and call
        :meth:`restart_step_size`.
        """
        i = self.iteration
        self.iteration += 1
        self.step_size = self.dual.update(accept_stat)
        if self.iteration == self.num_warmup:
            self.step_size = self.dual.final_step_size
        if not self.in_window(i):
            return False
        self.estimator.add(q)
        if i in self.window_ends:
            self.inv_mass = self.estimator.regularized_variance()
            self.estimator.restart()
            return True
        return False

    def restart_step_size(self, step_size: float) -> None:
        self.step_size = step_size
        self.dual.restart(step_size)


def find_reasonable_step_size(state: State, target, step_size: float, mass_inv, rng) -> float:
    """Double or halve the step until one leapfrog step's acceptance crosses 0.8."""
    fn = target.logp_and_grad if hasattr(target, "logp_and_grad") else target
    direction = 0
    for _ in range(100):
        p = rng.standard_normal(state.q.size) / np.sqrt(mass_inv)
        h0 = _hamiltonian(state._replace(p=p), mass_inv)
        q1, p1, logp1, g1 = leapfrog(state.q, p, step_size, fn, mass_inv, state.grad)
        delta_h = h0 - _hamiltonian(State(q1, p1, logp1, g1), mass_inv)
        if direction == 0:
            direction = 1 if delta_h > LOG_08 else -1
        elif (direction == 1) != (delta_h > LOG_08):
            break
        step_size = step_size * 2.0 if direction == 1 else step_size * 0.5
        if step_size > 1e7 or step_size == 0.0:
            raise SamplerError("step size search did not converge; target may be improper")
    return step_size


# -- driver --------------------------------------------------------------------


@dataclass
class Trace:
    """Post-warmup draws and per-draw sampler statistics.

    ``unconstrained`` holds draws in model coordinates on the sampling scale
    (e.g. ``log_alpha``); ``draws`` holds the same draws on the reporting
    scale (e.g. ``alpha``). Both are ``[chain, draw, parameter]``.
    """

    param_names: tuple[str, ...]
    unconstrained_names: tuple[str, ...]
    draws: np.ndarray
    unconstrained: np.ndarray
    accept_stat: np.ndarray
    tree_depth: np.ndarray
    n_leapfrog: np.ndarray
    diverging: np.ndarray
    energy: np.ndarray
    step_size: np.ndarray
    inv_mass: np.ndarray
    warmup_divergences: np.ndarray
    n_clamped: np.ndarray

    @property
    def n_chains(self) -> int:
        return self.draws.shape[0]

    @property
    def n_draws(self) -> int:
        return self.draws.shape[1]

    @property
    def divergences(self) -> np.ndarray:
        return self.diverging.sum(axis=1)

    def get(self, name: str) -> np.ndarray:
        """``[chain, draw]`` draws of one parameter by reporting or sampling name."""
        if name in self.param_names:
            return self.draws[:, :, self.param_names.index(name)]
        if name in self.unconstrained_names:
            return self.unconstrained[:, :, self.unconstrained_names.index(name)]
        raise KeyError(f"unknown parameter {name!r}; have {self.param_names}")

    def pooled(self, name: str) -> np.ndarray:
        return self.get(name).reshape(-1)

    @classmethod
    def from_arrays(cls, arrays: dict[str, np.ndarray]) -> "Trace":
        """Build a trace from ``[chain, draw]`` (or 1-d) arrays, no sampler stats."""
        names = tuple(arrays)
        cols = [np.atleast_2d(np.asarray(a, dtype=float)) for a in arrays.values()]
        draws = np.stack(cols, axis=-1)
        c, d = draws.shape[:2]
        return cls(
            param_names=names, unconstrained_names=names, draws=draws, unconstrained=draws.copy(),
            accept_stat=np.full((c, d), np.nan), tree_depth=np.zeros((c, d), int),
            n_leapfrog=np.zeros((c, d), int), diverging=np.zeros((c, d), bool),
            energy=np.full((c, d), np.nan), step_size=np.full(c, np.nan),
            inv_mass=np.ones((c, len(names))), warmup_divergences=np.zeros(c, int),
            n_clamped=np.zeros(c, int),
        )


def chain_rng(seed: int, chain: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed).spawn(chain + 1)[chain]))


def _initial_state(target, z0, jitter, rng) -> State:
    for _ in range(100):
        z = z0 + rng.uniform(-jitter, jitter, size=z0.size) if jitter > 0 else z0.copy()
        logp, g = target.logp_and_grad(z)
        if np.isfinite(logp) and np.all(np.isfinite(g)):
            return State(z, np.zeros_like(z), float(logp), np.asarray(g, dtype=float))
        if jitter <= 0:
            break
    raise SamplerError("could not find an initial point with finite log density")


class _ChainResult(NamedTuple):
    q: np.ndarray
    accept_stat: np.ndarray
    tree_depth: np.ndarray
    n_leapfrog: np.ndarray
    diverging: np.ndarray
    energy: np.ndarray
    step_size: float
    inv_mass: np.ndarray
    warmup_divergences: int
    n_clamped: int


def run_chain(target, config: SamplerConfig, chain: int, init=None) -> _ChainResult:
    """Warmup plus post-warmup sampling for a single chain.

    ``init`` is in the target's sampling coordinates; ``None`` means zeros
    jittered by ``config.init_jitter``.
    """
    rng = chain_rng(config.seed, chain)
    dim = target.dim
    if init is None:
        state = _initial_state(target, np.zeros(dim), config.init_jitter, rng)
    else:
        state = _initial_state(target, np.asarray(init, dtype=float), 0.0, rng)

    n_warm, n_draw = config.warmup_draws, config.post_warmup_draws
    adapt = AdaptationState(dim, n_warm, config.target_accept)
    adapt.restart_step_size(find_reasonable_step_size(state, target, 1.0, adapt.inv_mass, rng))
    clamped_before = getattr(target, "n_clamped", 0)

    q = np.empty((n_draw, dim))
    accept = np.empty(n_draw)
    depth = np.empty(n_draw, dtype=int)
    n_leap = np.empty(n_draw, dtype=int)
    diverging = np.zeros(n_draw, dtype=bool)
    energy = np.empty(n_draw)
    warm_div = 0

    for i in range(n_warm):
        state, stats = nuts_draw(state, target, adapt.step_size, adapt.inv_mass, rng, config.max_tree_depth)
        warm_div += stats.diverging
        if adapt.learn(state.q, stats.accept_stat):
            adapt.restart_step_size(
                find_reasonable_step_size(state, target, adapt.step_size, adapt.inv_mass, rng))
    if n_warm and warm_div == n_warm:
        raise SamplerError(f"chain {chain}: every warmup transition diverged")

    step = adapt.step_size
    for i in range(n_draw):
        state, stats = nuts_draw(state, target, step, adapt.inv_mass, rng, config.max_tree_depth)
        q[i] = state.q
        accept[i], depth[i], n_leap[i] = stats.accept_stat, stats.tree_depth, stats.n_leapfrog
        diverging[i], energy[i] = stats.diverging, stats.energy

    if not np.all(np.isfinite(q)):
        raise SamplerError(f"chain {chain} produced non-finite draws")
    return _ChainResult(q, accept, depth, n_leap, diverging, energy, step, adapt.inv_mass.copy(),
                        warm_div, getattr(target, "n_clamped", 0) - clamped_before)


def _run_chain_args(args):
    return run_chain(*args)


def run_chains(target, config: SamplerConfig = SamplerConfig(), init=None, n_jobs: int = 1) -> Trace:
    """Run ``config.chains`` independent chains and collect a :class:`Trace`.

    ``init`` optionally gives one start point per chain in sampling
    coordinates. ``n_jobs > 1`` runs chains in worker processes (the target
    must be picklable); output is identical either way.
    """
    inits = list(init) if init is not None else [None] * config.chains
    if len(inits) != config.chains:
        raise ValueError("need one initial point per chain")
    jobs = [(target, config, c, inits[c]) for c in range(config.chains)]
    if n_jobs > 1 and config.chains > 1:
        with ProcessPoolExecutor(max_workers=min(n_jobs, config.chains)) as pool:
            results = list(pool.map(_run_chain_args, jobs))
    else:
        results = [run_chain(*job) for job in jobs]

    q = np.stack([r.q for r in results])
    to_model = getattr(target, "to_model", None)
    unconstrained = to_model(q) if to_model else q
    constrain = getattr(target, "constrain", None)
    draws = constrain(unconstrained) if constrain else unconstrained.copy()
    names = tuple(getattr(target, "param_names", [f"x{i}" for i in range(target.dim)]))
    return Trace(
        param_names=names,
        unconstrained_names=tuple(getattr(target, "unconstrained_names", names)),
        draws=draws,
        unconstrained=unconstrained,
        accept_stat=np.stack([r.accept_stat for r in results]),
        tree_depth=np.stack([r.tree_depth for r in results]),
        n_leapfrog=np.stack([r.n_leapfrog for r in results]),
        diverging=np.stack([r.diverging for r in results]),
        energy=np.stack([r.energy for r in results]),
        step_size=np.array([r.step_size for r in results]),
        inv_mass=np.stack([r.inv_mass for r in results]),
        warmup_divergences=np.array([r.warmup_divergences for r in results]),
        n_clamped=np.array([r.n_clamped for r in results]),
    )


# -- validation harness --------------------------------------------------------


@dataclass(frozen=True)
class ConjugateReport:
    analytic_mean: float
    analytic_sd: float
    sample_mean: float
    sample_sd: float
    mcse_mean: float
    mcse_sd: float

    @property
    def mean_z(self) -> float:
        return abs(self.sample_mean - self.analytic_mean) / self.mcse_mean

    @property
    def sd_z(self) -> float:
        return abs(self.sample_sd - self.analytic_sd) / self.mcse_sd

    @property
    def passed(self) -> bool:
        return self.mean_z <= 3.0 and self.sd_z <= 3.0


def normal_mean_posterior(y, prior_mean: float = 0.0, prior_sd: float = 1.0,
                          noise_sd: float = 1.0) -> tuple[float, float]:
    y = np.asarray(y, dtype=float)
    precision = 1.0 / prior_sd ** 2 + y.size / noise_sd ** 2
    mean = (prior_mean / prior_sd ** 2 + y.sum() / noise_sd ** 2) / precision
    return float(mean), float(1.0 / math.sqrt(precision))


def conjugate_check(y, prior_mean: float = 0.0, prior_sd: float = 1.0, noise_sd: float = 1.0,
                    config: SamplerConfig = SamplerConfig()) -> ConjugateReport:
    """Sample the Normal-mean posterior and compare with its closed form.

    Monte Carlo standard errors use bulk ESS: of the draws for the mean, and
    of the squared deviations for the SD (delta method).
    """
    from .diagnostics import ess_bulk

    y = np.asarray(y, dtype=float)
    n, total = y.size, y.sum()

    def fn(z):
        t = z[0]
        logp = -0.5 * (t - prior_mean) ** 2 / prior_sd ** 2 - 0.5 * (n * t * t - 2 * t * total) / noise_sd ** 2
        grad = -(t - prior_mean) / prior_sd ** 2 - (n * t - total) / noise_sd ** 2
        return logp, np.array([grad])

    trace = run_chains(FunctionTarget(fn, 1, ["mu"]), config)
    draws = trace.get("mu")
    flat = draws.reshape(-1)
    mean, sd = float(flat.mean()), float(flat.std(ddof=1))
    a_mean, a_sd = normal_mean_posterior(y, prior_mean, prior_sd, noise_sd)
    mcse_mean = sd / math.sqrt(ess_bulk(draws))
    sq = (draws - mean) ** 2
    mcse_var = float(sq.reshape(-1).std(ddof=1)) / math.sqrt(ess_bulk(sq))
    mcse_sd = mcse_var / (2.0 * sd)
    return ConjugateReport(a_mean, a_sd, mean, sd, mcse_mean, mcse_sd)
