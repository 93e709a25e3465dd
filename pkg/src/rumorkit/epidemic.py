"""Epidemic-style volume dynamics and parameter fitting.

Three models are fitted to an event's per-interval tweet counts and their
parameters become time-series features:

* SIS: susceptible-infected-susceptible, rates beta (infection) and alpha
  (recovery), fitted against the cumulative tweet count.
* SEIZ: susceptible-exposed-infected-skeptic with branching probabilities
  p and l, also fitted against the cumulative count. The diagnostic
  R_SI = ((1-p)*beta + (1-l)*b) / (rho + eps) comes along for free.
* SpikeM: a power-law rise-and-fall cascade with two periodic attention
  gates, fitted against the per-interval counts directly.

Time is measured in hours (rates are 1/hour). Fitting is derivative-free
multi-start Nelder-Mead; the integer SpikeM shock interval is handled by an
outer grid search.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .optimize import nelder_mead

RATE_MAX = 50.0


def rk4_integrate(deriv, y0, t_grid, substeps=4):
    """Classic fixed-step RK4 over `t_grid`, with `substeps` steps between
    consecutive grid points. Returns the state at every grid point."""
    y = np.asarray(y0, dtype=np.float64).copy()
    out = np.empty((len(t_grid), y.size), dtype=np.float64)
    out[0] = y
    for j in range(1, len(t_grid)):
        h = (t_grid[j] - t_grid[j - 1]) / substeps
        t = t_grid[j - 1]
        for _ in range(substeps):
            k1 = deriv(t, y)
            k2 = deriv(t + 0.5 * h, y + 0.5 * h * k1)
            k3 = deriv(t + 0.5 * h, y + 0.5 * h * k2)
            k4 = deriv(t + h, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += h
        if not np.all(np.isfinite(y)):
            raise NumericalError(f"integration diverged at t={t_grid[j]}")
        out[j] = y
    return out


@dataclass(frozen=True)
class SisParams:
    beta: float = 0.0
    alpha: float = 0.0


@dataclass(frozen=True)
class SeizParams:
    beta: float = 0.0
    b: float = 0.0
    rho: float = 0.0
    eps: float = 0.0
    p: float = 0.0
    l: float = 0.0

    @property
    def r_si(self):
        denom = self.rho + self.eps
        if denom <= 0:
            return 0.0
        return ((1.0 - self.p) * self.beta + (1.0 - self.l) * self.b) / denom


@dataclass(frozen=True)
class SpikeMParams:
    beta: float = 0.0
    n_b: int = 0
    s_b: float = 0.0
    eps: float = 0.0
    p_a: float = 0.0
    p_p: float = 24.0
    p_s: float = 0.0
    q_a: float = 0.0
    q_p: float = 24.0
    q_s: float = 0.0


def simulate_sis(params, n_pop, i0, t_grid, substeps=4):
    """Infected count over `t_grid` (hours). S + I stays exactly n_pop."""
    if not 0 < i0 <= n_pop:
        raise NumericalError(f"need 0 < i0 <= n_pop, got i0={i0}")
    beta, alpha = params.beta, params.alpha

    def deriv(t, y):
        s, i = y
        flow = beta * s * i / n_pop
        return np.array([-flow + alpha * i, flow - alpha * i])

    states = rk4_integrate(deriv, [n_pop - i0, i0], t_grid, substeps)
    return states[:, 1]


def simulate_seiz(params, n_pop, initial, t_grid, substeps=4):
    """Integrate the four SEIZ compartments; returns shape (len(grid), 4)
    columns (S, E, I, Z). The compartment sum is conserved."""
    initial = np.asarray(initial, dtype=np.float64)
    if initial.min() < 0 or abs(initial.sum() - n_pop) > 1e-6 * max(n_pop, 1.0):
        raise NumericalError("initial compartments must be >= 0 and sum to n_pop")
    beta, b, rho, eps, p, l = (
        params.beta, params.b, params.rho, params.eps, params.p, params.l,
    )

    def deriv(t, y):
        s, e, i, z = y
        si = beta * s * i / n_pop
        sz = b * s * z / n_pop
        ei = rho * e * i / n_pop
        return np.array(
            [
                -si - sz,
                (1.0 - p) * si + (1.0 - l) * sz - ei - eps * e,
                p * si + ei + eps * e,
                l * sz,
            ]
        )

    return rk4_integrate(deriv, initial, t_grid, substeps)


def _attention_gate(n, amplitude, period, phase):
    return 1.0 - (amplitude / 2.0) * (
        np.sin(2.0 * np.pi * (n + phase) / period) + 1.0
    )


def simulate_spikem(params, n_intervals):
    """New-infection series over integer interval indices 0..n_intervals-1.

    The cascade starts at the shock interval n_b with external shock size
    s_b and decays by the tau^-1.5 power law, modulated by the product of
    two periodic attention gates. Values before and at n_b are zero.
    """
    n = np.arange(n_intervals, dtype=np.float64)
    gate = _attention_gate(n, params.p_a, params.p_p, params.p_s)
    gate *= _attention_gate(n, params.q_a, params.q_p, params.q_s)
    delta = np.zeros(n_intervals)
    if params.n_b >= n_intervals - 1:
        return delta
    shock = np.zeros(n_intervals)
    shock[params.n_b] = params.s_b
    tau = np.arange(1, n_intervals + 1, dtype=np.float64)
    kernel = params.beta * tau ** -1.5
    nb = params.n_b
    with np.errstate(over="ignore", invalid="ignore"):
        for nxt in range(nb + 1, n_intervals):
            src = delta[nb:nxt] + shock[nb:nxt]
            ker = kernel[: nxt - nb][::-1]
            delta[nxt] = gate[nxt] * (src @ ker + params.eps)
    return delta


@dataclass(frozen=True)
class FitConfig:
    starts: int = 8
    max_evals: int = 800
    polish_evals: int = 600
    polish_rounds: int = 8
    seed: int = 0
    substeps: int = 2
    spikem_starts: int = 4
    spikem_max_evals: int = 500


@dataclass
class EpiFitResult:
    model: str
    params: object
    rms_residual: float
    converged: bool
    evaluations: int

    def feature_values(self):
        """Fitted parameters keyed by catalog feature name."""
        if self.model == "sis":
            return {"BetaSIS": self.params.beta, "AlphaSIS": self.params.alpha}
        if self.model == "seiz":
            p = self.params
            return {
                "BetaSEIZ": p.beta,
                "BSEIZ": p.b,
                "LSEIZ": p.l,
                "PSEIZ": p.p,
                "EpsilonSEIZ": p.eps,
                "RhoSEIZ": p.rho,
                "RSI": p.r_si,
            }
        p = self.params
        return {
            "PsSpikeM": p.p_s,
            "PaSpikeM": p.p_a,
            "PpSpikeM": p.p_p,
            "QsSpikeM": p.q_s,
            "QaSpikeM": p.q_a,
            "QpSpikeM": p.q_p,
        }


def _zero_result(model):
    params = {"sis": SisParams(), "seiz": SeizParams(), "spikem": SpikeMParams()}
    return EpiFitResult(
        model=model,
        params=params[model],
        rms_residual=0.0,
        converged=False,
        evaluations=0,
    )


def _rms(a, b):
    d = a - b
    return math.sqrt(float(np.mean(d * d)))


def _log_uniform(rng, lo, hi):
    return math.exp(rng.uniform(math.log(lo), math.log(hi)))


def _multi_start(objective, starts, bounds, config, max_evals):
    best = None
    total_evals = 0
    for x0 in starts:
        res = nelder_mead(objective, x0, bounds=bounds, max_evals=max_evals)
        total_evals += res.evaluations
        if best is None or res.fx < best.fx:
            best = res
    # Restarting from the best point with a fresh simplex digs much deeper
    # than a single run; stop when the improvement stalls.
    for _ in range(config.polish_rounds):
        fx_prev = best.fx
        polish = nelder_mead(
            objective, best.x, bounds=bounds, max_evals=config.polish_evals
        )
        total_evals += polish.evaluations
        if polish.fx < best.fx:
            best = polish
        if fx_prev - best.fx < 1e-12 + 1e-6 * abs(best.fx):
            break
    return best, total_evals


def _anchored_observations(counts, interval_hours):
    """Cumulative counts from the first active interval onward.

    The fitted curve is anchored at the first nonzero cumulative
    observation: that instant becomes t=0 and the infected compartment
    starts exactly there, which removes the initial size as a nuisance
    parameter.
    """
    cum = np.cumsum(counts)
    j0 = int(np.nonzero(cum)[0][0])
    obs = cum[j0:]
    grid = np.arange(len(obs), dtype=np.float64) * interval_hours
    return obs, grid


def _fit_sis(counts, interval_hours, n_pop, config):
    obs, grid = _anchored_observations(counts, interval_hours)
    i0 = min(float(obs[0]), 0.98 * n_pop)
    bounds = [(0.0, RATE_MAX), (0.0, RATE_MAX)]

    def objective(x):
        try:
            with np.errstate(all="ignore"):
                series = simulate_sis(
                    SisParams(x[0], x[1]), n_pop, i0, grid, config.substeps
                )
        except NumericalError:
            return np.inf
        return _rms(series, obs)

    rng = np.random.default_rng(config.seed)
    starts = [np.array([1.0, 0.1])]
    for _ in range(config.starts - 1):
        starts.append(
            np.array([_log_uniform(rng, 1e-3, 10.0), _log_uniform(rng, 1e-3, 10.0)])
        )
    best, evals = _multi_start(objective, starts, bounds, config, config.max_evals)
    params = SisParams(beta=float(best.x[0]), alpha=float(best.x[1]))
    return EpiFitResult(
        model="sis",
        params=params,
        rms_residual=best.fx,
        converged=bool(np.isfinite(best.fx)),
        evaluations=evals,
    )


# A small seeded skeptic pool keeps the S->Z contact channel live, so b and
# l influence the objective; the exposed pool starts empty by convention.
SEIZ_Z0_FRACTION = 0.01


def seiz_initial_state(n_pop, i0):
    z0 = SEIZ_Z0_FRACTION * n_pop
    return np.array([n_pop - i0 - z0, 0.0, i0, z0])


def _fit_seiz(counts, interval_hours, n_pop, config):
    obs, grid = _anchored_observations(counts, interval_hours)
    i0 = min(float(obs[0]), 0.9 * n_pop)
    bounds = [
        (0.0, RATE_MAX),  # beta
        (0.0, RATE_MAX),  # b
        (0.0, RATE_MAX),  # rho
        (0.0, RATE_MAX),  # eps
        (0.0, 1.0),       # p
        (0.0, 1.0),       # l
    ]

    def objective(x):
        try:
            with np.errstate(all="ignore"):
                states = simulate_seiz(
                    SeizParams(x[0], x[1], x[2], x[3], x[4], x[5]),
                    n_pop,
                    seiz_initial_state(n_pop, i0),
                    grid,
                    config.substeps,
                )
        except NumericalError:
            return np.inf
        return _rms(states[:, 2], obs)

    rng = np.random.default_rng(config.seed)
    starts = [np.array([1.0, 0.5, 0.5, 0.1, 0.5, 0.5])]
    for _ in range(config.starts - 1):
        starts.append(
            np.array(
                [
                    _log_uniform(rng, 1e-3, 10.0),
                    _log_uniform(rng, 1e-3, 10.0),
                    _log_uniform(rng, 1e-3, 10.0),
                    _log_uniform(rng, 1e-3, 10.0),
                    rng.uniform(0.0, 1.0),
                    rng.uniform(0.0, 1.0),
                ]
            )
        )
    best, evals = _multi_start(objective, starts, bounds, config, config.max_evals)
    x = best.x
    params = SeizParams(
        beta=float(x[0]), b=float(x[1]), rho=float(x[2]),
        eps=float(x[3]), p=float(x[4]), l=float(x[5]),
    )
    return EpiFitResult(
        model="seiz",
        params=params,
        rms_residual=best.fx,
        converged=bool(np.isfinite(best.fx)),
        evaluations=evals,
    )


def _spikem_shock_candidates(counts):
    peak = int(np.argmax(counts))
    cands = sorted({0, max(0, peak - 2), max(0, peak - 1), peak})
    return [c for c in cands if c < len(counts) - 1] or [0]


def _fit_spikem(counts, interval_hours, n_pop, config):
    target = np.asarray(counts, dtype=np.float64)
    n = len(target)
    bounds = [
        (0.0, 3.0),             # beta
        (0.0, 10.0 * max(1.0, target.max())),  # s_b
        (0.0, max(1.0, target.max())),         # eps
        (0.0, 1.0),             # p_a
        (2.0, 48.0),            # p_p
        (0.0, 48.0),            # p_s
        (0.0, 1.0),             # q_a
        (2.0, 48.0),            # q_p
        (0.0, 48.0),            # q_s
    ]
    rng = np.random.default_rng(config.seed)
    best = None
    best_nb = 0
    total_evals = 0
    for nb in _spikem_shock_candidates(target):

        def objective(x, nb=nb):
            params = SpikeMParams(
                beta=x[0], n_b=nb, s_b=x[1], eps=x[2],
                p_a=x[3], p_p=x[4], p_s=x[5],
                q_a=x[6], q_p=x[7], q_s=x[8],
            )
            series = simulate_spikem(params, n)
            if not np.all(np.isfinite(series)):
                return np.inf
            return _rms(series, target)

        starts = [
            np.array([0.5, max(1.0, target.max()), 0.1, 0.0, 24.0, 0.0, 0.0, 24.0, 0.0])
        ]
        for _ in range(config.spikem_starts - 1):
            starts.append(
                np.array(
                    [
                        rng.uniform(0.01, 1.5),
                        _log_uniform(rng, 0.5, 10.0 * max(1.0, target.max())),
                        _log_uniform(rng, 1e-3, max(1.0, target.max())),
                        rng.uniform(0.0, 1.0),
                        rng.uniform(2.0, 48.0),
                        rng.uniform(0.0, 48.0),
                        rng.uniform(0.0, 1.0),
                        rng.uniform(2.0, 48.0),
                        rng.uniform(0.0, 48.0),
                    ]
                )
            )
        cand, evals = _multi_start(
            objective, starts, bounds, config, config.spikem_max_evals
        )
        total_evals += evals
        if best is None or cand.fx < best.fx:
            best, best_nb = cand, nb
    x = best.x
    params = SpikeMParams(
        beta=float(x[0]), n_b=best_nb, s_b=float(x[1]), eps=float(x[2]),
        p_a=float(x[3]), p_p=float(x[4]), p_s=float(x[5]),
        q_a=float(x[6]), q_p=float(x[7]), q_s=float(x[8]),
    )
    return EpiFitResult(
        model="spikem",
        params=params,
        rms_residual=best.fx,
        converged=bool(np.isfinite(best.fx)),
        evaluations=total_evals,
    )


def fit_model(counts, model, interval_hours, n_pop, config=None):
    """Fit one of {sis, seiz, spikem} to per-interval tweet counts.

    Degenerate inputs (all-zero series, or fewer than 4 nonzero intervals
    for SEIZ/SpikeM) return a non-converged result with zeroed parameters.
    """
    config = config or FitConfig()
    counts = np.asarray(counts, dtype=np.float64)
    if model not in ("sis", "seiz", "spikem"):
        raise ValueError(f"unknown epidemic model {model!r}")
    nonzero = int(np.count_nonzero(counts))
    if nonzero == 0:
        return _zero_result(model)
    if model in ("seiz", "spikem") and nonzero < 4:
        return _zero_result(model)
    n_pop = max(float(n_pop), float(np.sum(counts)), 1.0)
    if model == "sis":
        return _fit_sis(counts, interval_hours, n_pop, config)
    if model == "seiz":
        return _fit_seiz(counts, interval_hours, n_pop, config)
    return _fit_spikem(counts, interval_hours, n_pop, config)


def population_proxy(event):
    """Susceptible-population stand-in: distinct in-window users, falling
    back to the tweet count when user identity is degenerate."""
    from .corpus import bucket_intervals

    tweets = [tw for b in bucket_intervals(event) for tw in b.tweets]
    users = {
        (tw.user.followers, tw.user.friends, tw.user.join_date) for tw in tweets
    }
    return float(max(len(users), len(tweets), 1))
