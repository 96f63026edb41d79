"""Regularized Bradley-Terry maximum likelihood and empirical Borda scores.

The objective is sum over records of -log sigma(<theta, winner - loser>)
plus lambda * ||theta||^2, minimized by full-batch gradient descent with
Armijo backtracking. The log-sigmoid is evaluated in its stable form.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError, NumericError
from .model import ComparisonRecord, RewardModel

__all__ = ["nll", "nll_gradient", "fit_mle", "borda_scores", "score"]

DEFAULT_LAMBDA = 1e-3
DEFAULT_GRAD_TOL = 1e-8
DEFAULT_MAX_ITERS = 10000

ARMIJO_C = 1e-4
BACKTRACK_SHRINK = 0.5
MAX_BACKTRACKS = 60


def _winner_deltas(data: list[ComparisonRecord]) -> np.ndarray:
    """Stack winner-minus-loser feature differences, one row per record."""
    if not data:
        raise InputError("empty dataset")
    rows = []
    d = data[0].a0.shape[0]
    for rec in data:
        if rec.a0.shape[0] != d:
            raise InputError("records have inconsistent dimensions")
        if rec.label == 1:
            rows.append(rec.a1 - rec.a0)
        else:
            rows.append(rec.a0 - rec.a1)
    return np.stack(rows)


def _nll_from_deltas(theta: np.ndarray, deltas: np.ndarray, lam: float) -> float:
    z = deltas @ theta
    # -log sigma(z) = log(1 + exp(-z)), stable for both signs of z
    data_term = float(np.sum(np.logaddexp(0.0, -z)))
    return data_term + lam * float(theta @ theta)


def _grad_from_deltas(theta: np.ndarray, deltas: np.ndarray, lam: float) -> np.ndarray:
    z = deltas @ theta
    # 1 - p_win = sigma(-z)
    with np.errstate(over="ignore"):
        q = np.where(z >= 0, np.exp(-np.clip(z, 0, None)) / (1 + np.exp(-np.clip(z, 0, None))),
                     1.0 / (1.0 + np.exp(np.clip(z, None, 0))))
    return -(q @ deltas) + 2.0 * lam * theta


def nll(theta, data: list[ComparisonRecord], lam: float = 0.0) -> float:
    """Regularized negative log likelihood of the dataset at theta."""
    if lam < 0:
        raise InputError("lambda must be >= 0")
    theta = np.asarray(theta, dtype=np.float64)
    deltas = _winner_deltas(data)
    if theta.shape[0] != deltas.shape[1]:
        raise InputError("theta dimension differs from data dimension")
    return _nll_from_deltas(theta, deltas, lam)


def nll_gradient(theta, data: list[ComparisonRecord], lam: float = 0.0) -> np.ndarray:
    """Analytic gradient of nll; matches central finite differences."""
    if lam < 0:
        raise InputError("lambda must be >= 0")
    theta = np.asarray(theta, dtype=np.float64)
    deltas = _winner_deltas(data)
    if theta.shape[0] != deltas.shape[1]:
        raise InputError("theta dimension differs from data dimension")
    return _grad_from_deltas(theta, deltas, lam)


def fit_mle(
    data: list[ComparisonRecord],
    lam: float = DEFAULT_LAMBDA,
    max_iters: int = DEFAULT_MAX_ITERS,
    grad_tol: float = DEFAULT_GRAD_TOL,
    init=None,
) -> RewardModel:
    """Fit theta_hat by gradient descent with backtracking line search.

    With lam=0 on separable data the MLE has no finite minimizer; that
    case is reported as converged=False with a diagnostic rather than
    silently returning a large theta.
    """
    if lam < 0:
        raise InputError("lambda must be >= 0")
    deltas = _winner_deltas(data)
    d = deltas.shape[1]
    theta = np.zeros(d) if init is None else np.array(init, dtype=np.float64)
    if theta.shape[0] != d:
        raise InputError("init dimension differs from data dimension")

    loss = _nll_from_deltas(theta, deltas, lam)
    if not np.isfinite(loss):
        raise NumericError("non-finite loss at the initial point")
    history = [loss]
    step = 1.0 / max(1, len(data))
    prev_theta = None
    prev_grad = None
    converged = False
    iterations = 0
    for iterations in range(1, max_iters + 1):
        grad = _grad_from_deltas(theta, deltas, lam)
        if not np.all(np.isfinite(grad)):
            raise NumericError(f"non-finite gradient at iteration {iterations}")
        gnorm = float(np.max(np.abs(grad)))
        if gnorm <= grad_tol:
            converged = True
            iterations -= 1
            break
        gsq = float(grad @ grad)
        # Barzilai-Borwein trial step, safeguarded by the Armijo backtracking
        # below; falls back to growing the last accepted step.
        t = step * 2.0
        if prev_grad is not None:
            s = theta - prev_theta
            y = grad - prev_grad
            sy = float(s @ y)
            if sy > 0:
                bb = float(s @ s) / sy
                if np.isfinite(bb) and bb > 0:
                    t = bb
        accepted = False
        for _ in range(MAX_BACKTRACKS):
            cand = theta - t * grad
            cand_loss = _nll_from_deltas(cand, deltas, lam)
            if np.isfinite(cand_loss) and cand_loss <= loss - ARMIJO_C * t * gsq:
                accepted = True
                break
            t *= BACKTRACK_SHRINK
        if not accepted:
            # no further descent possible at float precision
            break
        prev_theta, prev_grad = theta, grad
        theta, loss, step = cand, cand_loss, t
        history.append(loss)

    diagnostic = ""
    if converged and lam == 0.0:
        z = deltas @ theta
        if np.all(z > 0):
            converged = False
            diagnostic = (
                "data is separated by the fitted direction; with lambda=0 the "
                "NLL infimum is not attained and the MLE diverges"
            )
    if not converged and not diagnostic:
        diagnostic = f"gradient tolerance {grad_tol} not reached in {max_iters} iterations"
    return RewardModel(
        theta_hat=theta,
        lam=lam,
        final_nll=loss,
        converged=converged,
        iterations=iterations,
        diagnostic=diagnostic,
        nll_history=tuple(history),
    )


def _slate_key(a: np.ndarray) -> bytes:
    return np.ascontiguousarray(a, dtype=np.float64).tobytes()


def borda_scores(data: list[ComparisonRecord], slate: list) -> dict:
    """Empirical win-rate Borda score per slate index.

    score(a) = wins / comparisons involving a; alternatives that never
    appear in the data map to None (undefined), not zero.
    """
    if not data:
        raise InputError("empty dataset")
    index = {}
    for i, a in enumerate(slate):
        index.setdefault(_slate_key(np.asarray(a, dtype=np.float64)), i)
    wins = np.zeros(len(slate))
    appearances = np.zeros(len(slate))
    for rec in data:
        winner = rec.a1 if rec.label == 1 else rec.a0
        loser = rec.a0 if rec.label == 1 else rec.a1
        iw = index.get(_slate_key(winner))
        il = index.get(_slate_key(loser))
        if iw is not None:
            wins[iw] += 1
            appearances[iw] += 1
        if il is not None:
            appearances[il] += 1
    return {
        i: (wins[i] / appearances[i] if appearances[i] > 0 else None)
        for i in range(len(slate))
    }


def score(model: RewardModel, a) -> float:
    """The voting rule's output for an alternative: f(a) = <theta_hat, a>."""
    a = np.asarray(a, dtype=np.float64)
    if a.shape != model.theta_hat.shape:
        raise InputError("alternative dimension differs from model dimension")
    return float(model.theta_hat @ a)
