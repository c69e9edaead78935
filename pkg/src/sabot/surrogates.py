"""Radial basis function surrogates: fit, predict, and cross-validated
model selection.

``RBFSurrogate`` follows the scikit-learn estimator convention (``fit`` /
``predict`` / ``get_params``) so it composes with the wider ecosystem; the
ensemble trains one model per problem output on archive data only.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .errors import AllCandidatesFailed, DegenerateData, DimensionMismatch, ModelNotFitted, SingularSystem

KERNELS = ("cubic", "gaussian", "thin_plate")
TAILS = ("none", "constant", "linear")

# nugget escalation ladder tried in order before giving up
_NUGGET_LADDER = (1e-8, 1e-4)


def _kernel_matrix(r: np.ndarray, kernel: str, shape: float) -> np.ndarray:
    if kernel == "cubic":
        return r**3
    if kernel == "gaussian":
        return np.exp(-((r / shape) ** 2))
    if kernel == "thin_plate":
        with np.errstate(divide="ignore", invalid="ignore"):
            phi = np.where(r > 0, r**2 * np.log(np.where(r > 0, r, 1.0)), 0.0)
        return phi
    raise ValueError(f"unknown kernel {kernel!r}")


def _tail_matrix(X: np.ndarray, tail: str) -> np.ndarray:
    n = X.shape[0]
    if tail == "none":
        return np.empty((n, 0))
    if tail == "constant":
        return np.ones((n, 1))
    if tail == "linear":
        return np.hstack([np.ones((n, 1)), X])
    raise ValueError(f"unknown tail {tail!r}")


class RBFSurrogate(BaseEstimator, RegressorMixin):
    """Interpolating RBF model with a polynomial tail and optional nugget.

    Inputs are min-max normalized to [0, 1]^d and outputs standardized before
    the augmented system is solved. With nugget 0 the model reproduces its
    training outputs at the training inputs.

    Parameters
    ----------
    kernel : {"cubic", "gaussian", "thin_plate"}
        Radial basis. The gaussian shape parameter is set from the median
        pairwise distance of the normalized training inputs.
    tail : {"none", "constant", "linear"}
        Polynomial tail appended to the kernel expansion.
    nugget : float
        Diagonal regularization. On a singular system the fit retries with
        1e-8 then 1e-4 before raising SingularSystem.
    """

    def __init__(self, kernel: str = "cubic", tail: str = "linear", nugget: float = 0.0):
        self.kernel = kernel
        self.tail = tail
        self.nugget = nugget

    def fit(self, X, y):
        X = check_array(X, dtype=float)
        y = np.asarray(y, dtype=float).ravel()
        if X.shape[0] != y.size:
            raise DimensionMismatch(f"{X.shape[0]} rows but {y.size} targets")
        if X.shape[0] < 2 or len(np.unique(X, axis=0)) < 2:
            raise DegenerateData("need at least 2 distinct training rows")
        if not np.all(np.isfinite(y)):
            raise DegenerateData("non-finite training outputs")

        lo = X.min(axis=0)
        hi = X.max(axis=0)
        span = np.where(hi > lo, hi - lo, 1.0)
        Xn = (X - lo) / span

        mu = y.mean()
        sigma = y.std()
        if sigma == 0.0:
            sigma = 1.0
        yn = (y - mu) / sigma

        r = cdist(Xn, Xn)
        off_diag = r[np.triu_indices_from(r, k=1)]
        positive = off_diag[off_diag > 0]
        shape = float(np.median(positive)) if positive.size else 1.0

        Phi = _kernel_matrix(r, self.kernel, shape)
        P = _tail_matrix(Xn, self.tail)
        n, t = Phi.shape[0], P.shape[1]
        rhs = np.concatenate([yn, np.zeros(t)])

        coeffs = None
        for nugget in (self.nugget, *_NUGGET_LADDER):
            if nugget < self.nugget:
                continue
            A = np.zeros((n + t, n + t))
            A[:n, :n] = Phi + nugget * np.eye(n)
            A[:n, n:] = P
            A[n:, :n] = P.T
            try:
                sol = np.linalg.solve(A, rhs)
                # iterative refinement; the kernel block can be poorly
                # conditioned with near-coincident points
                for _ in range(2):
                    residual = rhs - A @ sol
                    sol = sol + np.linalg.solve(A, residual)
            except np.linalg.LinAlgError:
                continue
            if np.all(np.isfinite(sol)):
                coeffs = sol
                self.nugget_used_ = nugget
                break
        if coeffs is None:
            raise SingularSystem("interpolation system singular after nugget escalation")

        self.weights_ = coeffs[:n]
        self.tail_coef_ = coeffs[n:]
        self.X_train_ = Xn
        self.input_lo_ = lo
        self.input_span_ = span
        self.output_mean_ = mu
        self.output_std_ = sigma
        self.shape_ = shape
        # mean nearest-neighbor spacing, the length scale of the
        # distance-based uncertainty proxy
        r_nn = r + np.diag(np.full(n, np.inf))
        self.nn_spacing_ = float(np.mean(r_nn.min(axis=1)))
        self.cv_error_ = getattr(self, "cv_error_", 0.0)
        return self

    def _normalize(self, X):
        X = check_array(X, dtype=float)
        if X.shape[1] != self.X_train_.shape[1]:
            raise DimensionMismatch(
                f"query width {X.shape[1]} != training width {self.X_train_.shape[1]}"
            )
        return (X - self.input_lo_) / self.input_span_

    def predict(self, X, return_uncertainty: bool = False):
        check_is_fitted(self, "weights_")
        Xn = self._normalize(X)
        r = cdist(Xn, self.X_train_)
        mean = _kernel_matrix(r, self.kernel, self.shape_) @ self.weights_
        mean = mean + _tail_matrix(Xn, self.tail) @ self.tail_coef_
        mean = mean * self.output_std_ + self.output_mean_
        if not return_uncertainty:
            return mean
        d_min = r.min(axis=1)
        ell = max(self.nn_spacing_, 1e-12)
        unc = self.cv_error_ * (1.0 - np.exp(-d_min / ell))
        return mean, unc


def select_model(X, y, candidates, seed: int = 0) -> tuple[dict, float]:
    """Pick the candidate configuration with the lowest k-fold CV RMSE.

    Folds (k = min(10, n)) come from a fixed permutation derived from the
    seed, so selection is deterministic. Ties break by candidate list order;
    candidates whose fits fail are skipped.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    n = len(y)
    if n < 5:
        raise DegenerateData("model selection needs at least 5 samples")
    if not candidates:
        raise AllCandidatesFailed("empty candidate list")

    k = min(10, n)
    perm = np.random.default_rng(seed).permutation(n)
    folds = [perm[i::k] for i in range(k)]

    best_cfg, best_err = None, np.inf
    for cfg in candidates:
        sq_errors = []
        failed = False
        for fold in folds:
            train = np.setdiff1d(np.arange(n), fold)
            try:
                model = RBFSurrogate(**cfg).fit(X[train], y[train])
                pred = model.predict(X[fold])
            except (SingularSystem, DegenerateData):
                failed = True
                break
            sq_errors.append((pred - y[fold]) ** 2)
        if failed:
            continue
        rmse = float(np.sqrt(np.concatenate(sq_errors).mean()))
        if np.isfinite(rmse) and rmse < best_err:
            best_cfg, best_err = cfg, rmse
    if best_cfg is None:
        raise AllCandidatesFailed("every candidate configuration failed to fit")
    return best_cfg, best_err


DEFAULT_CANDIDATES = (
    {"kernel": "cubic", "tail": "linear", "nugget": 0.0},
    {"kernel": "thin_plate", "tail": "linear", "nugget": 0.0},
    {"kernel": "gaussian", "tail": "constant", "nugget": 0.0},
)


class SurrogateEnsemble:
    """One fitted surrogate per problem output (objectives then constraints)."""

    def __init__(self, candidates=DEFAULT_CANDIDATES, seed: int = 0):
        self.candidates = [dict(c) for c in candidates]
        self.seed = seed
        self.objective_models: list[RBFSurrogate] = []
        self.constraint_models: list[RBFSurrogate] = []
        self.fitted = False
        self._selected: dict[str, tuple[dict, float]] = {}
        self._selection_n = 0

    def fit(self, X, F, G=None, reuse_selection: bool = False):
        """Fit one model per output; cross-validated kernel selection is
        re-run from scratch unless ``reuse_selection`` holds and the data has
        grown less than 50% since the last selection."""
        X = np.asarray(X, dtype=float)
        F = np.asarray(F, dtype=float).reshape(len(X), -1)
        G = np.asarray(G, dtype=float).reshape(len(X), -1) if G is not None and np.size(G) else None
        reuse = (
            reuse_selection
            and self._selected
            and self._selection_n > 0
            and len(X) < 1.5 * self._selection_n
        )

        def fit_output(key, y):
            if reuse and key in self._selected:
                cfg, err = self._selected[key]
            elif len(self.candidates) > 1 and len(y) >= 5:
                cfg, err = select_model(X, y, self.candidates, seed=self.seed)
                self._selected[key] = (cfg, err)
            else:
                cfg, err = self.candidates[0], 0.0
                self._selected[key] = (cfg, err)
            model = RBFSurrogate(**cfg).fit(X, y)
            model.cv_error_ = err
            return model

        if not reuse:
            self._selection_n = len(X)
        self.objective_models = [fit_output(f"f{j}", F[:, j]) for j in range(F.shape[1])]
        self.constraint_models = (
            [fit_output(f"g{j}", G[:, j]) for j in range(G.shape[1])] if G is not None else []
        )
        self.fitted = True
        return self

    def predict(self, X):
        """Means and uncertainties for all outputs: (F, G, U_f, U_g)."""
        if not self.fitted:
            raise ModelNotFitted("ensemble not fitted")
        X = np.asarray(X, dtype=float)
        cols = [m.predict(X, return_uncertainty=True) for m in self.objective_models]
        F = np.column_stack([c[0] for c in cols])
        U_f = np.column_stack([c[1] for c in cols])
        if self.constraint_models:
            gcols = [m.predict(X, return_uncertainty=True) for m in self.constraint_models]
            G = np.column_stack([c[0] for c in gcols])
            U_g = np.column_stack([c[1] for c in gcols])
        else:
            G, U_g = None, None
        return F, G, U_f, U_g
