"""Semi-binary NMF baseline (Zhang-style sign rule).

H is binary but not one-hot: columns may contain any number of ones.
Each row of H is refreshed by thresholding a linear score built from the
matching basis column against the rest of the factorization.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .init import SingularInitError, init_h_real, init_w
from .matrices import as_data_matrix, frobenius_objective
from .nmf import FactorizationTrace, FactorizeOptions, _converged, update_w


@dataclass
class SemiBinaryModel:
    basis: np.ndarray
    coefficients: np.ndarray
    trace: FactorizationTrace


def sgn(x) -> int:
    """1 if x > 0, else 0 (zero belongs to the 'else' branch)."""
    return 1 if x > 0 else 0


def update_h_row(X, W, H, row: int) -> np.ndarray:
    """Recompute one row of binary H by the sign rule.

    With z the matching basis column and W', H' the factorization with
    that column/row removed, the new row is the elementwise sign of
    X^T z - (z^T z)/2 - H'^T W'^T z. Other rows are untouched.
    """
    X = np.asarray(X, dtype=np.float64)
    W = np.asarray(W, dtype=np.float64)
    H = np.asarray(H, dtype=np.float64)
    k = W.shape[1]
    if not 0 <= row < k:
        raise IndexError(f"row {row} outside [0, {k})")
    if H.shape != (k, X.shape[1]) or W.shape[0] != X.shape[0]:
        raise ValueError(f"shape mismatch: X {X.shape}, W {W.shape}, H {H.shape}")

    z = W[:, row]
    others = np.arange(k) != row
    score = X.T @ z - 0.5 * (z @ z) - H[others].T @ (W[:, others].T @ z)
    out = H.copy()
    out[row] = (score > 0).astype(np.float64)
    return out


def factorize_zhang(X, k: int, opts: FactorizeOptions | None = None) -> SemiBinaryModel:
    """Alternate the multiplicative W update with a full ascending row
    sweep of the sign rule.

    H starts from the least-squares H0 thresholded at 1/2. Stops at
    max_iterations or when H is unchanged and the relative objective
    change is below tolerance.
    """
    opts = opts or FactorizeOptions()
    X = as_data_matrix(X)
    if k < 1:
        raise ValueError("k must be >= 1")

    t0 = time.perf_counter()
    trace = FactorizationTrace()
    W = init_w(X, k, opts.seed)
    try:
        H = (init_h_real(W, X) > 0.5).astype(np.float64)
    except SingularInitError:
        rng = np.random.default_rng(opts.seed)
        H = rng.integers(0, 2, size=(k, X.shape[1])).astype(np.float64)
        trace.notes.append("init_h_fallback_random")

    prev_obj = None
    for _ in range(opts.max_iterations):
        W = update_w(X, W, H, opts.epsilon_guard)
        H_new = H
        for row in range(k):
            H_new = update_h_row(X, W, H_new, row)
        obj = frobenius_objective(X, W, H_new)
        trace.objective_per_iteration.append(obj)
        trace.iterations_run += 1
        stable = bool(np.array_equal(H_new, H))
        H = H_new
        if stable and prev_obj is not None and _converged(prev_obj, obj, opts.tolerance):
            break
        prev_obj = obj
    trace.wall_time_train = time.perf_counter() - t0
    return SemiBinaryModel(basis=W, coefficients=H, trace=trace)
