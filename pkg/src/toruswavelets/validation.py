"""Input validation helpers for the estimator API."""

from __future__ import annotations

import numpy as np

from .grids import TorusGrid, TorusSignal


def check_signal_array(X, grid: TorusGrid):
    """Coerce X to a batch of signals with shape (n_samples, n1, n2).

    Accepts a single (n1, n2) array or a batch given either as
    (n_samples, n1, n2) or flattened rows (n_samples, n1*n2).
    """
    X = np.asarray(X)
    n1, n2 = grid.n1, grid.n2
    if X.ndim == 2 and X.shape == (n1, n2):
        batch = X[None, :, :]
    elif X.ndim == 2 and X.shape[1] == n1 * n2:
        batch = X.reshape(X.shape[0], n1, n2)
    elif X.ndim == 3 and X.shape[1:] == (n1, n2):
        batch = X
    else:
        raise ValueError(
            f"cannot interpret array of shape {X.shape} as signals on a ({n1}, {n2}) grid"
        )
    batch = np.asarray(batch, dtype=complex)
    if not np.all(np.isfinite(batch)):
        raise ValueError("signals contain non-finite entries")
    return batch


def check_coefficient_matrix(X, n_cells: int, grid: TorusGrid):
    """Coerce X to coefficient batches of shape (n_samples, n_cells, n1, n2)."""
    X = np.asarray(X, dtype=complex)
    n1, n2 = grid.n1, grid.n2
    per_sample = n_cells * n1 * n2
    if X.ndim == 1 and X.size == per_sample:
        X = X[None, :]
    if X.ndim == 2 and X.shape[1] == per_sample:
        return X.reshape(X.shape[0], n_cells, n1, n2)
    if X.ndim == 4 and X.shape[1:] == (n_cells, n1, n2):
        return X
    raise ValueError(
        f"cannot interpret array of shape {X.shape} as {n_cells} coefficient cells "
        f"on a ({n1}, {n2}) grid"
    )


def signals_from_batch(batch, grid: TorusGrid):
    return [TorusSignal(grid, row) for row in batch]
