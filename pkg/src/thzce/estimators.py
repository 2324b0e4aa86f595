"""Channel estimators with a scikit-learn style fit/predict surface.

All estimators consume complex observation rows Y of shape (n_samples,
num_pilots) and produce complex channel rows of shape (n_samples,
num_antennas).  ``score`` returns the negated NMSE in dB so that, as
elsewhere in the ecosystem, larger is better.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .config import TrainConfig
from .dataset import Dataset
from .errors import EstimationError
from .metrics import nmse_db
from .nn import (
    ModelSpec,
    init_params,
    load_model,
    predict as nn_predict,
    save_model,
    train as nn_train,
)
from .nn.specs import ARCHS
from .observation import inverse_preprocess, preprocess
from .pilots import PilotMatrix
from .rng import STREAM_TRAIN_INIT, derive
from .validation import as_complex_matrix, check_paired

_MAX_PILOT_CONDITION = 1e12


def ls_estimate(y: np.ndarray, pilots: PilotMatrix) -> np.ndarray:
    """Least-squares channel estimate y @ pinv(Phi) (rows in, rows out)."""
    y2 = as_complex_matrix(y, "y", n_cols=pilots.num_pilots)
    estimate = y2 @ _guarded_pinv(pilots.phi)
    return estimate[0] if np.asarray(y).ndim == 1 else estimate


def _guarded_pinv(phi: np.ndarray) -> np.ndarray:
    singular = np.linalg.svd(phi, compute_uv=False)
    if singular[-1] == 0 or singular[0] / singular[-1] > _MAX_PILOT_CONDITION:
        raise EstimationError(
            f"pilot matrix is rank deficient (condition number > {_MAX_PILOT_CONDITION:g})"
        )
    return np.linalg.pinv(phi)


@dataclass(frozen=True)
class MmseStatistics:
    """Second-order statistics backing the linear-MMSE estimator."""

    cross_cov: np.ndarray  # (N, M): E[conj(H)^T y]
    obs_cov: np.ndarray    # (M, M): E[conj(y)^T y], Hermitian PSD
    sample_count: int


def fit_mmse(train) -> MmseStatistics:
    """Estimate LMMSE statistics from training observations.

    ``train`` is either a :class:`Dataset` (its training split is used) or a
    ``(Y, H)`` pair of aligned arrays.  Diagonal loading is applied later, at
    solve time, by :func:`mmse_estimate`.
    """
    if isinstance(train, Dataset):
        y, h = train.train_arrays()
    else:
        y, h = train
    y = as_complex_matrix(y, "Y")
    h = as_complex_matrix(h, "H")
    check_paired(y, h)
    count = y.shape[0]
    if count < 2 * y.shape[1]:
        warnings.warn(
            f"fitting LMMSE statistics from {count} samples for {y.shape[1]} pilot "
            "dimensions; at least 2x as many samples are recommended",
            UserWarning,
            stacklevel=2,
        )
    obs_cov = y.conj().T @ y / count
    cross_cov = h.conj().T @ y / count
    return MmseStatistics(cross_cov=cross_cov, obs_cov=obs_cov, sample_count=count)


def mmse_estimate(y: np.ndarray, stats: MmseStatistics, ridge_scale: float = 1e-6) -> np.ndarray:
    """Linear-MMSE channel estimate from fitted statistics."""
    m = stats.obs_cov.shape[0]
    y2 = as_complex_matrix(y, "y", n_cols=m)
    ridge = ridge_scale * float(np.trace(stats.obs_cov).real) / m
    system = stats.obs_cov + ridge * np.eye(m)
    try:
        weights = np.linalg.solve(system, stats.cross_cov.conj().T)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - ridge prevents this
        raise EstimationError(f"regularized LMMSE system is singular: {exc}") from exc
    estimate = y2 @ weights
    return estimate[0] if np.asarray(y).ndim == 1 else estimate


def predict_channel(estimator, sample) -> np.ndarray:
    """Channel estimate for one :class:`~thzce.observation.ObservationSample`.

    Convenience wrapper over ``estimator.predict`` returning a length-N
    complex vector for a single observation.
    """
    return np.asarray(estimator.predict(sample.received[np.newaxis, :]))[0]


class ChannelFeaturizer(BaseEstimator, TransformerMixin):
    """Stateless transformer between complex observations and real features."""

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        return preprocess(as_complex_matrix(X, "X"))

    def inverse_transform(self, X):
        return inverse_preprocess(np.asarray(X, dtype=np.float64))


class _ChannelEstimatorMixin:
    def score(self, Y, H) -> float:
        """Negated NMSE (dB) of the predictions on (Y, H); larger is better."""
        return -nmse_db(as_complex_matrix(H, "H"), self.predict(Y))


class LeastSquaresEstimator(_ChannelEstimatorMixin, BaseEstimator):
    """Pseudo-inverse estimator; ``fit`` only precomputes the pilot inverse."""

    def __init__(self, pilots: PilotMatrix | None = None):
        self.pilots = pilots

    def fit(self, Y=None, H=None):
        if self.pilots is None:
            raise EstimationError("LeastSquaresEstimator needs a pilot matrix")
        self.pinv_ = _guarded_pinv(self.pilots.phi)
        return self

    def predict(self, Y) -> np.ndarray:
        if not hasattr(self, "pinv_"):
            self.fit()
        y = as_complex_matrix(Y, "Y", n_cols=self.pilots.num_pilots)
        return y @ self.pinv_


class LmmseEstimator(_ChannelEstimatorMixin, BaseEstimator):
    """Linear-MMSE estimator with empirically fitted second-order statistics."""

    def __init__(self, ridge_scale: float = 1e-6):
        self.ridge_scale = ridge_scale

    def fit(self, Y, H):
        self.stats_ = fit_mmse((Y, H))
        return self

    def predict(self, Y) -> np.ndarray:
        if not hasattr(self, "stats_"):
            raise EstimationError("LmmseEstimator.predict called before fit")
        return mmse_estimate(
            as_complex_matrix(Y, "Y"), self.stats_, ridge_scale=self.ridge_scale
        )


class NeuralChannelEstimator(_ChannelEstimatorMixin, BaseEstimator):
    """Sequence-model estimator trained on (observation, channel) pairs.

    ``arch`` selects bilstm-gru, lstm or dnn.  ``hidden_units=None`` defaults
    the recurrent width to the antenna count.  A tail fraction of the training
    pairs is held out as the early-stopping validation split.

    When ``pilots`` is given, observations are first mapped back to the
    antenna domain through the pilot pseudo-inverse, so the sequence fed to
    the model is antenna-aligned with the target channel (one timestep per
    real/imaginary channel component).  This is what lets the recurrent
    models act as per-antenna denoisers; on raw pilot-domain mixtures they
    converge far too slowly to be competitive.  Without ``pilots`` the raw
    observation features are used as-is.
    """

    def __init__(
        self,
        arch: str = "bilstm-gru",
        pilots: PilotMatrix | None = None,
        hidden_units: int | None = None,
        dnn_hidden: tuple[int, ...] | None = None,
        learning_rate: float = 0.001,
        batch_size: int = 16,
        max_epochs: int = 100,
        patience: int = 10,
        validation_fraction: float = 0.1,
        seed: int = 0,
    ):
        self.arch = arch
        self.pilots = pilots
        self.hidden_units = hidden_units
        self.dnn_hidden = dnn_hidden
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.patience = patience
        self.validation_fraction = validation_fraction
        self.seed = seed

    def _train_config(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate,
            batch_size=self.batch_size,
            max_epochs=self.max_epochs,
            patience=self.patience,
            seed=self.seed,
        )

    def _features(self, y: np.ndarray) -> np.ndarray:
        if self.pilots is None:
            return preprocess(y)
        if y.shape[1] != self.pilots.num_pilots:
            raise EstimationError(
                f"observations have {y.shape[1]} pilots, matrix expects "
                f"{self.pilots.num_pilots}"
            )
        if not hasattr(self, "pilot_pinv_"):
            self.pilot_pinv_ = _guarded_pinv(self.pilots.phi)
        return preprocess(y @ self.pilot_pinv_)

    def fit(self, Y, H):
        if self.arch not in ARCHS:
            raise EstimationError(f"unknown arch {self.arch!r}; choose from {ARCHS}")
        y = as_complex_matrix(Y, "Y")
        h = as_complex_matrix(H, "H")
        check_paired(y, h)
        if not 0.0 < self.validation_fraction < 1.0:
            raise EstimationError("validation_fraction must lie in (0, 1)")

        features = self._features(y)
        targets = preprocess(h)
        hidden = self.hidden_units if self.hidden_units is not None else h.shape[1]
        kwargs = {}
        if self.dnn_hidden is not None:
            kwargs["dnn_hidden"] = tuple(self.dnn_hidden)
        self.spec_ = ModelSpec(
            arch=self.arch,
            seq_len=features.shape[1],
            output_dim=targets.shape[1],
            hidden_units=int(hidden),
            **kwargs,
        )

        n_val = max(1, math.ceil(self.validation_fraction * len(features)))
        if n_val >= len(features):
            raise EstimationError("not enough samples to carve out a validation split")
        x_tr, x_va = features[:-n_val], features[-n_val:]
        t_tr, t_va = targets[:-n_val], targets[-n_val:]

        init_rng = derive(self.seed, STREAM_TRAIN_INIT)
        params0 = init_params(self.spec_, init_rng)
        self.params_, self.history_ = nn_train(
            self.spec_, params0, x_tr, t_tr, x_va, t_va, self._train_config()
        )
        return self

    def predict(self, Y) -> np.ndarray:
        if not hasattr(self, "params_"):
            raise EstimationError("NeuralChannelEstimator.predict called before fit")
        y = as_complex_matrix(Y, "Y")
        features = self._features(y)
        if features.shape[1] != self.spec_.seq_len:
            raise EstimationError(
                f"observation length {y.shape[1]} does not match the fitted "
                f"model (seq_len {self.spec_.seq_len})"
            )
        pred = nn_predict(self.params_, self.spec_, features)
        return inverse_preprocess(pred)

    def save(self, path) -> None:
        if not hasattr(self, "params_"):
            raise EstimationError("nothing to save: estimator is not fitted")
        save_model(path, self.spec_, self.params_)

    @classmethod
    def from_checkpoint(cls, path, pilots: PilotMatrix | None = None) -> "NeuralChannelEstimator":
        """Rebuild a fitted estimator from a checkpoint file."""
        spec, params = load_model(path)
        est = cls(arch=spec.arch, pilots=pilots, hidden_units=spec.hidden_units,
                  dnn_hidden=spec.dnn_hidden)
        est.spec_ = spec
        est.params_ = params
        est.history_ = {}
        return est
