"""Local minimizers used as inner VQE drivers.

Central finite-difference gradients, fixed-step gradient descent, and BFGS
with Armijo backtracking.  Every objective call — including the 2D-point
finite-difference stencil — is charged to the evaluation tally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MAX_BACKTRACKS = 40
CURVATURE_FLOOR = 1e-12


class GradientError(RuntimeError):
    """Non-finite value in the finite-difference stencil."""

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


@dataclass
class LocalOptConfig:
    grad_step: float = 1e-6
    max_iters: int = 200
    grad_tol: float = 1e-6
    gd_learning_rate: float = 0.1
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5

    def __post_init__(self):
        if self.grad_step <= 0:
            raise ValueError("grad_step must be positive")
        if self.grad_tol <= 0:
            raise ValueError("grad_tol must be positive")
        if not 0.0 < self.armijo_c < 1.0:
            raise ValueError("armijo_c must lie in (0, 1)")
        if not 0.0 < self.backtrack_factor < 1.0:
            raise ValueError("backtrack_factor must lie in (0, 1)")


@dataclass
class LocalResult:
    x: np.ndarray
    fun: float
    evaluations: int
    iterations: int
    stop_reason: str
    trace: list = field(default_factory=list)  # (cum_evals, f) after each step


def fd_gradient(objective, x, h: float) -> np.ndarray:
    """Central-difference gradient, 2 calls per coordinate."""
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for j in range(x.size):
        step = np.zeros_like(x)
        step[j] = h
        fp = float(objective(x + step))
        fm = float(objective(x - step))
        if not (math.isfinite(fp) and math.isfinite(fm)):
            raise GradientError(f"non-finite stencil value at coordinate {j}", j)
        grad[j] = (fp - fm) / (2.0 * h)
    return grad


def gradient_descent(objective, x0, config: LocalOptConfig, callback=None) -> LocalResult:
    """Fixed-step descent x <- x - lr * g; stops on grad_tol, max_iters, or the
    first step that would increase the objective."""
    counter = {"n": 0}

    def f(x):
        counter["n"] += 1
        return float(objective(x))

    x = np.asarray(x0, dtype=float).copy()
    fx = f(x)
    trace = [(counter["n"], fx)]
    if callback is not None:
        callback(x, fx, counter["n"])
    stop_reason = "max_iters"
    iterations = 0
    for _ in range(config.max_iters):
        grad = fd_gradient(f, x, config.grad_step)
        if np.linalg.norm(grad) < config.grad_tol:
            stop_reason = "grad_tol"
            break
        x_new = x - config.gd_learning_rate * grad
        f_new = f(x_new)
        if f_new > fx:
            stop_reason = "non_improvement"
            break
        x, fx = x_new, f_new
        iterations += 1
        trace.append((counter["n"], fx))
        if callback is not None:
            callback(x, fx, counter["n"])
    return LocalResult(
        x=x,
        fun=fx,
        evaluations=counter["n"],
        iterations=iterations,
        stop_reason=stop_reason,
        trace=trace,
    )


def bfgs_minimize(
    objective, x0, config: LocalOptConfig, callback=None, hessian_log=None
) -> LocalResult:
    """BFGS with an Armijo backtracking line search.

    The inverse-Hessian update is skipped when the curvature product s.y falls
    at or below 1e-12.  A line search that fails to improve after 40
    backtracks returns the best point seen with stop_reason "line_search_failed".
    If `hessian_log` is a list, the inverse-Hessian approximation is appended
    after every iteration.
    """
    counter = {"n": 0}

    def f(x):
        counter["n"] += 1
        return float(objective(x))

    x = np.asarray(x0, dtype=float).copy()
    dim = x.size
    fx = f(x)
    grad = fd_gradient(f, x, config.grad_step)
    h_inv = np.eye(dim)
    trace = [(counter["n"], fx)]
    if callback is not None:
        callback(x, fx, counter["n"])
    stop_reason = "max_iters"
    iterations = 0

    for _ in range(config.max_iters):
        if np.linalg.norm(grad) < config.grad_tol:
            stop_reason = "grad_tol"
            break
        direction = -h_inv @ grad
        slope = float(grad @ direction)
        if slope >= 0.0:
            # fall back to steepest descent if the model lost descent
            direction = -grad
            slope = float(grad @ direction)
        alpha = 1.0
        x_new = None
        for _bt in range(MAX_BACKTRACKS):
            cand = x + alpha * direction
            f_cand = f(cand)
            if f_cand <= fx + config.armijo_c * alpha * slope:
                x_new, f_new = cand, f_cand
                break
            alpha *= config.backtrack_factor
        if x_new is None:
            stop_reason = "line_search_failed"
            break
        grad_new = fd_gradient(f, x_new, config.grad_step)
        s = x_new - x
        y = grad_new - grad
        sy = float(s @ y)
        if sy > CURVATURE_FLOOR:
            rho = 1.0 / sy
            eye = np.eye(dim)
            left = eye - rho * np.outer(s, y)
            right = eye - rho * np.outer(y, s)
            h_inv = left @ h_inv @ right + rho * np.outer(s, s)
        x, fx, grad = x_new, f_new, grad_new
        iterations += 1
        trace.append((counter["n"], fx))
        if hessian_log is not None:
            hessian_log.append(h_inv.copy())
        if callback is not None:
            callback(x, fx, counter["n"])

    return LocalResult(
        x=x,
        fun=fx,
        evaluations=counter["n"],
        iterations=iterations,
        stop_reason=stop_reason,
        trace=trace,
    )
