"""Ordinary least squares with coefficient inference."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from augdoe.errors import InsufficientDataError, InvalidInputError, SingularDesignError
from augdoe.regstats.tdist import t_p_value


@dataclass(frozen=True)
class ModelFit:
    terms: list
    estimates: np.ndarray
    std_errors: np.ndarray
    t_values: np.ndarray
    p_values: np.ndarray
    residual_df: int
    sigma2: float
    r2: float
    rss: float
    residuals: np.ndarray

    def as_dict(self) -> dict:
        """Per-term ``{name: (estimate, std_error, t, p)}``."""
        return {
            name: (float(e), float(s), float(t), float(p))
            for name, e, s, t, p in zip(self.terms, self.estimates, self.std_errors, self.t_values, self.p_values)
        }


def _t_and_p(estimate: float, se: float, df: int) -> tuple[float, float]:
    if se > 0:
        t = estimate / se
        return t, t_p_value(t, df)
    # zero residual variance: the limit of est/se as se -> 0
    if estimate == 0:
        return 0.0, 1.0
    return float(np.sign(estimate) * np.inf), 0.0


def ols_fit(X, y, terms=None) -> ModelFit:
    """Least-squares fit of ``y`` on the columns of ``X`` via column-pivoted QR.

    Raises :class:`SingularDesignError` naming the dependent columns when
    ``X`` is rank deficient.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise InvalidInputError(f"X must be n x k and y length n; got {X.shape} and {y.shape}")
    n, k = X.shape
    terms = [f"x{j}" for j in range(k)] if terms is None else list(terms)
    if len(terms) != k:
        raise InvalidInputError(f"{len(terms)} term names for {k} columns")
    if n <= k:
        raise InsufficientDataError(f"{n} observations cannot support {k} parameters with residual df >= 1")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise InvalidInputError("X and y must be finite")

    Q, R, piv = linalg.qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = max(n, k) * np.finfo(np.float64).eps * (diag[0] if k else 0.0)
    rank = int(np.sum(diag > tol))
    if rank < k:
        # each dropped column is (numerically) R11^-1 R12 of the kept ones
        coef = linalg.solve_triangular(R[:rank, :rank], R[:rank, rank:])
        involved = set(piv[rank:]) | {piv[i] for i in np.flatnonzero(np.abs(coef).max(axis=1) > 1e-8)}
        names = [terms[j] for j in sorted(involved)]
        raise SingularDesignError(
            f"design matrix has rank {rank} < {k}; linearly dependent columns: {', '.join(names)}", names
        )

    beta = np.empty(k)
    beta[piv] = linalg.solve_triangular(R, Q.T @ y)
    r_inv = linalg.solve_triangular(R, np.eye(k))
    unscaled = np.empty(k)
    unscaled[piv] = np.einsum("ij,ij->i", r_inv, r_inv)

    residuals = y - X @ beta
    rss = float(residuals @ residuals)
    df = n - k
    sigma2 = rss / df
    se = np.sqrt(sigma2 * unscaled)
    tp = [_t_and_p(float(b), float(s), df) for b, s in zip(beta, se)]
    tss = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - rss / tss if tss > 0 else (1.0 if rss == 0 else 0.0)
    return ModelFit(
        terms=terms,
        estimates=beta,
        std_errors=se,
        t_values=np.array([t for t, _ in tp]),
        p_values=np.array([p for _, p in tp]),
        residual_df=df,
        sigma2=sigma2,
        r2=r2,
        rss=rss,
        residuals=residuals,
    )
