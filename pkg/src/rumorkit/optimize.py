"""Derivative-free simplex minimization with box constraints.

Standard Nelder-Mead (reflection / expansion / contraction / shrink) with
bounds enforced by projecting every candidate vertex into the box. The
curve-fitting objectives this serves are integrations whose parameter
dependence is not smooth enough for gradient methods.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class NelderMeadResult:
    x: np.ndarray
    fx: float
    evaluations: int
    converged: bool


def _project(x, lower, upper):
    if lower is None:
        return x
    return np.minimum(np.maximum(x, lower), upper)


def nelder_mead(
    objective,
    x0,
    bounds=None,
    max_evals=2000,
    xtol=1e-8,
    ftol=1e-12,
    initial_step=0.05,
):
    """Minimize `objective` from `x0`, optionally inside `bounds`
    (sequence of (low, high) pairs). Non-finite objective values are
    treated as +inf; if the entire initial simplex is non-finite the result
    comes back with converged=False instead of raising.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    n = x0.size
    if bounds is not None:
        lower = np.array([b[0] for b in bounds], dtype=np.float64)
        upper = np.array([b[1] for b in bounds], dtype=np.float64)
    else:
        lower = upper = None

    evals = 0

    def f(x):
        nonlocal evals
        evals += 1
        v = objective(x)
        return float(v) if np.isfinite(v) else np.inf

    # Initial simplex: perturb each coordinate by a relative step.
    verts = [_project(x0.copy(), lower, upper)]
    for i in range(n):
        v = x0.copy()
        step = initial_step * abs(v[i]) if v[i] != 0 else initial_step
        if upper is not None:
            span = upper[i] - lower[i]
            step = min(step, 0.25 * span) if span > 0 else step
        v[i] += step
        verts.append(_project(v, lower, upper))
    verts = np.array(verts)
    fvals = np.array([f(v) for v in verts])

    if not np.any(np.isfinite(fvals)):
        return NelderMeadResult(x=x0, fx=np.inf, evaluations=evals, converged=False)

    while evals < max_evals:
        order = np.argsort(fvals, kind="stable")
        verts, fvals = verts[order], fvals[order]

        diameter = np.max(np.abs(verts[1:] - verts[0]))
        fspread = fvals[-1] - fvals[0]
        if diameter < xtol or (np.isfinite(fspread) and fspread < ftol):
            return NelderMeadResult(
                x=verts[0], fx=fvals[0], evaluations=evals, converged=True
            )

        centroid = verts[:-1].mean(axis=0)
        reflected = _project(centroid + (centroid - verts[-1]), lower, upper)
        f_r = f(reflected)

        if f_r < fvals[0]:
            expanded = _project(centroid + 2.0 * (centroid - verts[-1]), lower, upper)
            f_e = f(expanded)
            if f_e < f_r:
                verts[-1], fvals[-1] = expanded, f_e
            else:
                verts[-1], fvals[-1] = reflected, f_r
        elif f_r < fvals[-2]:
            verts[-1], fvals[-1] = reflected, f_r
        else:
            contracted = _project(
                centroid + 0.5 * (verts[-1] - centroid), lower, upper
            )
            f_c = f(contracted)
            if f_c <= fvals[-1]:
                verts[-1], fvals[-1] = contracted, f_c
            else:
                # Shrink toward the best vertex.
                for i in range(1, n + 1):
                    verts[i] = _project(
                        verts[0] + 0.5 * (verts[i] - verts[0]), lower, upper
                    )
                    fvals[i] = f(verts[i])

    order = np.argsort(fvals, kind="stable")
    return NelderMeadResult(
        x=verts[order[0]], fx=fvals[order[0]], evaluations=evals, converged=False
    )
