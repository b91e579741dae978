"""Statistical engine: Pearson correlation with significance, and OLS model fits.

The t-distribution CDF is computed from scratch via the regularized
incomplete beta function (continued fraction) so significance never depends
on an external stats stack. OLS is solved by QR factorization, never by
explicit normal-equation inversion; predictors are z-scored internally for
conditioning and coefficients mapped back to original units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np


class InferenceError(ValueError):
    pass


# ---------------------------------------------------------------------------
# t distribution


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (Lentz's method)."""
    MAXIT, EPS, FPMIN = 200, 3e-16, 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return h
    raise InferenceError("incomplete beta continued fraction failed to converge")


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_cdf(t: float, dof: int) -> float:
    """Cumulative probability of Student's t with ``dof`` degrees of freedom."""
    if dof < 1:
        raise InferenceError("dof must be >= 1")
    if t == 0.0:
        return 0.5
    x = dof / (dof + t * t)
    tail = 0.5 * reg_inc_beta(dof / 2.0, 0.5, x)
    return 1.0 - tail if t > 0 else tail


def two_sided_p(t: float, dof: int) -> float:
    return 2.0 * (1.0 - t_cdf(abs(t), dof))


# ---------------------------------------------------------------------------
# Pearson correlation


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n: int
    t_stat: float
    p_value: float


def pearson(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Pearson r with two-sided significance from the t distribution (n-2 dof)."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise InferenceError("x and y must be 1-d vectors of equal length")
    n = xa.size
    if n < 3:
        raise InferenceError("need at least 3 observations")
    xc = xa - xa.mean()
    yc = ya - ya.mean()
    sx = math.sqrt(float(xc @ xc))
    sy = math.sqrt(float(yc @ yc))
    if sx == 0.0 or sy == 0.0:
        raise InferenceError("zero variance")
    r = float(xc @ yc) / (sx * sy)
    r = max(-1.0, min(1.0, r))
    if abs(r) >= 1.0 - 1e-13:  # exact collinearity up to rounding
        r = math.copysign(1.0, r)
    if abs(r) == 1.0:
        return CorrelationResult(r=r, n=n, t_stat=math.inf if r > 0 else -math.inf,
                                 p_value=0.0)
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return CorrelationResult(r=r, n=n, t_stat=t, p_value=two_sided_p(t, n - 2))


# ---------------------------------------------------------------------------
# OLS


@dataclass(frozen=True)
class ModelSpec:
    dependent: str
    predictors: tuple[str, ...]
    include_intercept: bool = True

    def __post_init__(self) -> None:
        if not self.predictors:
            raise InferenceError("predictors must be non-empty")
        if len(set(self.predictors)) != len(self.predictors):
            raise InferenceError("duplicate predictors")
        if self.dependent in self.predictors:
            raise InferenceError("dependent variable cannot also be a predictor")

    @classmethod
    def from_dict(cls, raw: Mapping) -> "ModelSpec":
        return cls(
            dependent=raw["dependent"],
            predictors=tuple(raw["predictors"]),
            include_intercept=bool(raw.get("include_intercept", True)),
        )

    def to_dict(self) -> dict:
        return {
            "dependent": self.dependent,
            "predictors": list(self.predictors),
            "include_intercept": self.include_intercept,
        }


@dataclass(frozen=True)
class ModelFit:
    terms: tuple[str, ...]  # "intercept" first when present
    coefficients: tuple[float, ...]
    std_errors: tuple[float, ...]
    t_stats: tuple[float, ...]
    p_values: tuple[float, ...]
    r_squared: float
    n_observations: int
    dof: int
    excluded_rows: int = 0

    def to_dict(self, digits: Optional[int] = 6) -> dict:
        rnd = (lambda v: v) if digits is None else (lambda v: _sig(v, digits))
        return {
            "terms": list(self.terms),
            "coefficients": [rnd(v) for v in self.coefficients],
            "std_errors": [rnd(v) for v in self.std_errors],
            "t_stats": [rnd(v) for v in self.t_stats],
            "p_values": [rnd(v) for v in self.p_values],
            "r_squared": rnd(self.r_squared),
            "n_observations": self.n_observations,
            "dof": self.dof,
            "excluded_rows": self.excluded_rows,
        }


def _sig(v: float, digits: int) -> float:
    if v == 0 or not math.isfinite(v):
        return v
    return float(f"{v:.{digits}g}")


def fit_ols(
    X: np.ndarray,
    y: Sequence[float],
    include_intercept: bool = True,
    term_names: Optional[Sequence[str]] = None,
) -> ModelFit:
    """Least-squares fit via QR with internal z-scoring of predictors.

    Raises on rank deficiency, naming the offending column.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2:
        raise InferenceError("X must be 2-d")
    n, p = X.shape
    if term_names is None:
        term_names = [f"x{i + 1}" for i in range(p)]
    n_terms = p + (1 if include_intercept else 0)
    if n <= n_terms:
        raise InferenceError(
            f"underdetermined system: {n} rows for {n_terms} terms"
        )

    mu = X.mean(axis=0)
    sigma = X.std(axis=0, ddof=0)
    for j, s in enumerate(sigma):
        if s == 0.0:
            if include_intercept:
                raise InferenceError(f"rank deficiency: column {term_names[j]!r} is constant")
            sigma[j] = 1.0
            mu[j] = 0.0
    if not include_intercept:
        mu = np.zeros(p)
        sigma = np.ones(p)
    Z = (X - mu) / sigma
    if include_intercept:
        A = np.column_stack([np.ones(n), Z])
        names = ["intercept", *term_names]
    else:
        A = Z
        names = list(term_names)

    Q, R = np.linalg.qr(A)
    diag = np.abs(np.diag(R))
    tol = max(n, A.shape[1]) * np.finfo(float).eps * (diag.max() if diag.size else 1.0)
    for j, d in enumerate(diag):
        if d <= tol:
            raise InferenceError(
                f"rank deficiency: column {names[j]!r} is collinear with earlier columns"
            )
    beta_std = np.linalg.solve(R, Q.T @ y)
    resid = y - A @ beta_std
    rss = float(resid @ resid)
    dof = n - A.shape[1]
    s2 = rss / dof
    Rinv = np.linalg.solve(R, np.eye(R.shape[0]))
    cov_std = s2 * (Rinv @ Rinv.T)

    # map standardized coefficients back to original units
    k = A.shape[1]
    T = np.eye(k)
    if include_intercept:
        for j in range(p):
            T[j + 1, j + 1] = 1.0 / sigma[j]
            T[0, j + 1] = -mu[j] / sigma[j]
    else:
        for j in range(p):
            T[j, j] = 1.0 / sigma[j]
    beta = T @ beta_std
    cov = T @ cov_std @ T.T
    se = np.sqrt(np.diag(cov))

    t_stats = beta / se
    p_values = [two_sided_p(float(t), dof) for t in t_stats]
    if include_intercept:
        tss = float(((y - y.mean()) ** 2).sum())
    else:
        tss = float((y ** 2).sum())
    r_squared = 1.0 - rss / tss if tss > 0 else 1.0
    return ModelFit(
        terms=tuple(names),
        coefficients=tuple(float(b) for b in beta),
        std_errors=tuple(float(s) for s in se),
        t_stats=tuple(float(t) for t in t_stats),
        p_values=tuple(p_values),
        r_squared=r_squared,
        n_observations=n,
        dof=dof,
    )


def run_inference(spec: ModelSpec, rows: Sequence[Mapping[str, float]]) -> ModelFit:
    """Fit the spec against a joined county table (feature vector + context rows).

    Rows missing any referenced field, or carrying a non-finite value, are
    excluded and counted in the result.
    """
    fields = [spec.dependent, *spec.predictors]
    if rows:
        known = set(rows[0].keys())
        unknown = [f for f in fields if f not in known]
        if unknown:
            raise InferenceError(f"unknown field name(s): {unknown}")
    kept: list[list[float]] = []
    excluded = 0
    for row in rows:
        vals = []
        ok = True
        for f in fields:
            v = row.get(f)
            if v is None or not math.isfinite(float(v)):
                ok = False
                break
            vals.append(float(v))
        if ok:
            kept.append(vals)
        else:
            excluded += 1
    n_terms = len(spec.predictors) + (1 if spec.include_intercept else 0)
    if len(kept) < n_terms + 2:
        raise InferenceError(
            f"too few rows: {len(kept)} usable for {n_terms} terms"
        )
    data = np.asarray(kept)
    fit = fit_ols(
        data[:, 1:],
        data[:, 0],
        include_intercept=spec.include_intercept,
        term_names=list(spec.predictors),
    )
    return ModelFit(**{**fit.__dict__, "excluded_rows": excluded})
