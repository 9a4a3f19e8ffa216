"""Symmetric normalized Laplacian and spectral embedding."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError

logger = logging.getLogger(__name__)

ZERO_EIGENVALUE_TOL = 1e-8


@dataclass(frozen=True)
class Embedding:
    coords: np.ndarray       # n x d
    eigenvalues: np.ndarray  # d + 1 smallest, ascending; [0] is the dropped one
    d: int


def _values(S) -> np.ndarray:
    return np.asarray(getattr(S, "values", S), dtype=float)


def degree_vector(S) -> np.ndarray:
    return _values(S).sum(axis=1)


def normalized_laplacian(S) -> np.ndarray:
    """I - D^-1/2 S D^-1/2, with zero-degree nodes given identity rows."""
    s = _values(S)
    deg = degree_vector(s)
    inv_sqrt = np.zeros_like(deg)
    nz = deg > 0
    inv_sqrt[nz] = 1.0 / np.sqrt(deg[nz])
    lap = np.eye(len(deg)) - inv_sqrt[:, None] * s * inv_sqrt[None, :]
    # Exact symmetry so eigh sees the same matrix regardless of triangle.
    return (lap + lap.T) / 2.0


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive (first index wins ties)."""
    out = vectors.copy()
    for c in range(out.shape[1]):
        col = out[:, c]
        i = int(np.argmax(np.abs(col)))
        if col[i] < 0:
            out[:, c] = -col
    return out


def laplacian_spectrum(S) -> tuple[np.ndarray, np.ndarray]:
    """Full ascending eigendecomposition of the normalized Laplacian."""
    lap = normalized_laplacian(S)
    try:
        evals, evecs = np.linalg.eigh(lap)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    return evals, evecs


def zero_eigenvalue_count(eigenvalues, tol: float = ZERO_EIGENVALUE_TOL) -> int:
    return int(np.sum(np.abs(eigenvalues) <= tol))


def embed(S, d: int) -> Embedding:
    """Eigenvectors of the d smallest eigenvalues after the trivial one.

    Only the single smallest eigenpair is dropped; a disconnected graph keeps
    its other zero-eigenvalue vectors, and a warning is logged.
    """
    s = _values(S)
    n = s.shape[0]
    if not 1 <= d < n:
        raise ConfigError(f"embedding dimension must satisfy 1 <= d < n (d={d}, n={n})")
    evals, evecs = laplacian_spectrum(s)
    zeros = zero_eigenvalue_count(evals)
    if zeros > 1:
        logger.warning("similarity graph has %d connected components with links; "
                       "embedding keeps %d extra zero-eigenvalue vectors", zeros, min(zeros - 1, d))
    isolated = np.flatnonzero(degree_vector(s) == 0)
    if isolated.size:
        logger.warning("%d isolated node(s) with no usable links: %s", isolated.size, isolated.tolist())
    coords = fix_signs(evecs[:, 1:d + 1])
    return Embedding(coords=coords, eigenvalues=evals[:d + 1].copy(), d=d)
