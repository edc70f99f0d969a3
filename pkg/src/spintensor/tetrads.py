"""Orthonormal factorization of frame metrics.

A frame metric g of signature (+,-,-,-) factors as g = L eta L^T with L
lower triangular and positive diagonal (a signed Cholesky).  The
columns of L^{-T} are an orthonormal tetrad expanded in the frame, and
L^T is the tangent transition from that tetrad back to the frame.  The
spinor structure fields of a scenario in a non-orthonormal frame are
the canonical tables contracted with this factor on their tangent
slots, which is what keeps the structure identities tied to g.
"""

from __future__ import annotations

import numpy as np

from .frames import MatrixField

SIGNS = (1.0, -1.0, -1.0, -1.0)


def signed_cholesky(g, signs=SIGNS):
    """Lower-triangular L with positive diagonal and g = L eta L^T."""
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    lower = np.zeros((n, n))
    for j in range(n):
        acc = g[j, j]
        for k in range(j):
            acc -= signs[k] * lower[j, k] ** 2
        val = signs[j] * acc
        if val <= 0.0:
            raise ValueError("metric does not admit a time-first orthonormal factor")
        lower[j, j] = np.sqrt(val)
        for i in range(j + 1, n):
            acc = g[i, j]
            for k in range(j):
                acc -= signs[k] * lower[i, k] * lower[j, k]
            lower[i, j] = signs[j] * acc / lower[j, j]
    return lower


def signed_cholesky_partial(lower, dg, signs=SIGNS):
    """Derivative of L from the derivative of g at fixed factorization.

    With X = L^-1 dL (lower triangular) and M = L^-1 dg L^-T, the
    factorization differential reads X eta + eta X^T = M, which solves
    entrywise: X[i,j] = s_j M[i,j] below the diagonal and
    X[i,i] = s_i M[i,i] / 2 on it.
    """
    lower = np.asarray(lower, dtype=float)
    n = lower.shape[0]
    linv = np.linalg.inv(lower)
    mid = linv @ np.asarray(dg, dtype=float) @ linv.T
    x = np.zeros((n, n))
    for i in range(n):
        x[i, i] = signs[i] * mid[i, i] / 2.0
        for j in range(i):
            x[i, j] = signs[j] * mid[i, j]
    return lower @ x


def orthonormal_factor_field(g_field: MatrixField) -> MatrixField:
    """Pointwise signed-Cholesky factor of a metric field."""

    def evaluate(point):
        return signed_cholesky(np.real(np.asarray(g_field(point))))

    if g_field.partials is not None:

        def partials(a, point):
            lower = evaluate(point)
            return signed_cholesky_partial(lower, np.real(g_field.partial(a, point)))

        return MatrixField(evaluate, partials=partials)
    return MatrixField(evaluate)


def derived_symbol_field(g_field: MatrixField, canonical) -> MatrixField:
    """Structure-symbol field tied to g on its covariant tangent slot.

    canonical is the orthonormal-frame table with the tangent index
    last; the frame components are sum_c canonical[..., c] L[q, c].
    """
    canonical = np.asarray(canonical, dtype=complex)
    factor = orthonormal_factor_field(g_field)

    def evaluate(point):
        return np.einsum("...c,qc->...q", canonical, factor(point))

    if factor.partials is not None:

        def partials(a, point):
            return np.einsum("...c,qc->...q", canonical, factor.partial(a, point))

        return MatrixField(evaluate, partials=partials)
    return MatrixField(evaluate)
