"""Linear decision heads applied to extracted feature vectors.

Each head follows the same minimal contract: ``fit(X, y)`` returns the head
itself, ``predict_proba(X)`` returns one probability row per sample whose
entries are nonnegative and sum to one, and ``classes_`` lists the label
values in column order.  Binary trainers extend to multiclass problems via
one-vs-rest with probability renormalization.
"""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateLabels, InvalidHyper, SingularCovariance


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def softmax(scores: np.ndarray) -> np.ndarray:
    """Row-wise softmax at unit temperature."""
    s = np.asarray(scores, dtype=float)
    s = s - s.max(axis=-1, keepdims=True)
    e = np.exp(s)
    return e / e.sum(axis=-1, keepdims=True)


def _check_labels(y: np.ndarray) -> np.ndarray:
    classes = np.unique(y)
    if classes.size < 2:
        raise DegenerateLabels("need at least two classes to train a head")
    return classes


class _Standardizer:
    """Per-feature centering and scaling, with a floor on the scale."""

    def fit(self, x: np.ndarray) -> "_Standardizer":
        self.mean_ = x.mean(axis=0)
        sd = x.std(axis=0)
        self.scale_ = np.where(sd > 1e-12, sd, 1.0)
        return self

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (x - self.mean_) / self.scale_


class _OneVsRestMixin:
    """Multiclass support for binary trainers.

    ``fit`` dispatches to ``_fit_binary`` directly for two classes; for more
    it trains one binary copy per class against the rest and renormalizes
    the per-class sigmoid scores into a probability simplex.
    """

    def fit(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y)
        self.classes_ = _check_labels(y)
        if self.classes_.size == 2:
            self._fit_binary(x, np.where(y == self.classes_[1], 1.0, -1.0))
            self._ovr = None
        else:
            self._ovr = []
            for c in self.classes_:
                sub = self._clone()
                sub._fit_binary(x, np.where(y == c, 1.0, -1.0))
                self._ovr.append(sub)
        return self

    def predict_proba(self, x):
        x = np.asarray(x, dtype=float)
        if self._ovr is None:
            p1 = self._binary_proba(x)
            return np.column_stack([1.0 - p1, p1])
        scores = np.column_stack([sub._binary_proba(x) for sub in self._ovr])
        total = scores.sum(axis=1, keepdims=True)
        uniform = np.full_like(scores, 1.0 / scores.shape[1])
        return np.where(total > 0, scores / np.where(total > 0, total, 1.0), uniform)

    def predict(self, x):
        return self.classes_[np.argmax(self.predict_proba(x), axis=1)]


class LdaHead(_OneVsRestMixin):
    """Linear discriminant analysis with a pooled within-class covariance.

    ``shrinkage=None`` inverts the pooled covariance directly and raises
    :class:`SingularCovariance` when it is numerically singular;
    ``shrinkage="lw"`` applies automatic Ledoit-Wolf shrinkage first.  The
    decision boundary passes through the midpoint of the class means and
    probabilities come from a logistic link on the signed distance.
    """

    def __init__(self, shrinkage: str | None = None):
        if shrinkage not in (None, "lw"):
            raise InvalidHyper(f"unknown LDA shrinkage {shrinkage!r}")
        self.shrinkage = shrinkage

    def _clone(self):
        return LdaHead(self.shrinkage)

    def _fit_binary(self, x, t):
        mu0 = x[t < 0].mean(axis=0)
        mu1 = x[t > 0].mean(axis=0)
        centered = np.where((t < 0)[:, None], x - mu0, x - mu1)
        sw = self._within_class_cov(centered)
        w = np.linalg.solve(sw, mu1 - mu0)
        self.coef_ = w
        self.intercept_ = -0.5 * float(w @ (mu0 + mu1))

    def _within_class_cov(self, centered):
        n = centered.shape[0]
        if self.shrinkage == "lw":
            from ..dsp import _ledoit_wolf

            return _ledoit_wolf(centered.T)
        sw = centered.T @ centered / max(n - 2, 1)
        w = np.linalg.eigvalsh(sw)
        if w[0] <= 1e-12 * max(w[-1], 0.0) or w[-1] <= 0.0:
            raise SingularCovariance(
                "within-class covariance is singular; use shrinkage"
            )
        return sw

    def decision_values(self, x):
        return np.asarray(x, dtype=float) @ self.coef_ + self.intercept_

    def _binary_proba(self, x):
        return sigmoid(self.decision_values(x))


class LogRegHead(_OneVsRestMixin):
    """Logistic regression with an elastic-net penalty.

    Minimizes  ``mean log-loss + strength * (l1_ratio * |w|_1
    + (1 - l1_ratio)/2 * |w|_2^2)``  over standardized features by proximal
    gradient descent with backtracking line search.  The intercept is not
    penalized.  Iteration stops when the step norm falls below 1e-7 or
    after 5000 iterations, whichever comes first.
    """

    MAX_ITER = 5000
    STEP_TOL = 1e-7

    def __init__(self, strength: float = 0.01, l1_ratio: float = 0.0):
        if strength < 0:
            raise InvalidHyper("penalty strength must be nonnegative")
        if not 0.0 <= l1_ratio <= 1.0:
            raise InvalidHyper("l1_ratio must lie in [0, 1]")
        self.strength = strength
        self.l1_ratio = l1_ratio

    def _clone(self):
        return LogRegHead(self.strength, self.l1_ratio)

    def _smooth_loss(self, z, t, w, b):
        margins = t * (z @ w + b)
        loss = float(np.mean(np.logaddexp(0.0, -margins)))
        ridge = self.strength * (1.0 - self.l1_ratio)
        return loss + 0.5 * ridge * float(w @ w)

    def _smooth_grad(self, z, t, w, b):
        margins = t * (z @ w + b)
        coef = -t * sigmoid(-margins) / t.size
        gw = z.T @ coef + self.strength * (1.0 - self.l1_ratio) * w
        return gw, float(coef.sum())

    def _fit_binary(self, x, t):
        self._scaler = _Standardizer().fit(x)
        z = self._scaler.transform(x)
        n_features = z.shape[1]
        w = np.zeros(n_features)
        b = 0.0
        l1 = self.strength * self.l1_ratio
        eta = 1.0
        for _ in range(self.MAX_ITER):
            f0 = self._smooth_loss(z, t, w, b)
            gw, gb = self._smooth_grad(z, t, w, b)
            while True:
                w_new = w - eta * gw
                w_new = np.sign(w_new) * np.maximum(np.abs(w_new) - eta * l1, 0.0)
                b_new = b - eta * gb
                dw, db = w_new - w, b_new - b
                quad = f0 + gw @ dw + gb * db + (dw @ dw + db * db) / (2.0 * eta)
                if self._smooth_loss(z, t, w_new, b_new) <= quad + 1e-12:
                    break
                eta *= 0.5
            step = float(np.sqrt(dw @ dw + db * db))
            w, b = w_new, b_new
            if step < self.STEP_TOL:
                break
            eta *= 1.25
        self._w, self._b = w, b
        self.coef_ = w / self._scaler.scale_
        self.intercept_ = b - float((w / self._scaler.scale_) @ self._scaler.mean_)

    def decision_values(self, x):
        return np.asarray(x, dtype=float) @ self.coef_ + self.intercept_

    def _binary_proba(self, x):
        return sigmoid(self.decision_values(x))


class LinearMarginHead(_OneVsRestMixin):
    """Large-margin linear classifier trained on the hinge loss.

    Minimizes  ``1/(2 C N) * |w|^2 + mean hinge``  by averaged projected
    subgradient descent over a fixed budget of 200 epochs with
    seed-controlled shuffling, then calibrates probabilities with a
    logistic fit on the training decision values.  Smaller ``C`` means
    stronger regularization and shrinks the weights toward zero.
    """

    N_EPOCHS = 200

    def __init__(self, c: float = 1.0, seed: int = 0):
        if c <= 0:
            raise InvalidHyper("C must be positive")
        self.c = c
        self.seed = seed

    def _clone(self):
        return LinearMarginHead(self.c, self.seed)

    def _fit_binary(self, x, t):
        self._scaler = _Standardizer().fit(x)
        z = self._scaler.transform(x)
        n, d = z.shape
        lam = 1.0 / (self.c * n)
        radius = 1.0 / np.sqrt(lam)
        rng = np.random.default_rng(self.seed)
        w = np.zeros(d)
        b = 0.0
        w_sum = np.zeros(d)
        b_sum = 0.0
        step_count = 0
        for _ in range(self.N_EPOCHS):
            for i in rng.permutation(n):
                step_count += 1
                eta = 1.0 / (lam * step_count)
                margin = t[i] * (z[i] @ w + b)
                w *= 1.0 - eta * lam
                if margin < 1.0:
                    w += eta * t[i] * z[i]
                    b += eta * t[i]
                norm = float(np.linalg.norm(w))
                if norm > radius:
                    w *= radius / norm
                w_sum += w
                b_sum += b
        self._w = w_sum / step_count
        self._b = b_sum / step_count
        self.coef_ = self._w / self._scaler.scale_
        self.intercept_ = self._b - float(
            (self._w / self._scaler.scale_) @ self._scaler.mean_
        )
        d_train = z @ self._w + self._b
        self._platt_a, self._platt_b = _platt_fit(d_train, t)

    def decision_values(self, x):
        return np.asarray(x, dtype=float) @ self.coef_ + self.intercept_

    def _binary_proba(self, x):
        return sigmoid(self._platt_a * self.decision_values(x) + self._platt_b)


def _platt_fit(d: np.ndarray, t: np.ndarray, n_iter: int = 50) -> tuple[float, float]:
    """Fit p = sigmoid(a d + b) to binary targets by damped Newton.

    A small quadratic penalty keeps the slope finite when the decision
    values separate the classes perfectly.
    """
    y = (t > 0).astype(float)
    a, b = 1.0, 0.0
    ridge = 1e-6
    for _ in range(n_iter):
        p = sigmoid(a * d + b)
        g = np.array([np.sum((p - y) * d) + ridge * a, np.sum(p - y) + ridge * b])
        wgt = np.maximum(p * (1.0 - p), 1e-12)
        h = np.array(
            [
                [np.sum(wgt * d * d) + ridge, np.sum(wgt * d)],
                [np.sum(wgt * d), np.sum(wgt) + ridge],
            ]
        )
        try:
            delta = np.linalg.solve(h, g)
        except np.linalg.LinAlgError:
            break
        a -= delta[0]
        b -= delta[1]
        if float(np.abs(delta).max()) < 1e-10:
            break
    return float(a), float(b)
