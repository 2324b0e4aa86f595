import numpy as np
import pytest
from sklearn.base import clone

from thzce.config import ScenarioConfig
from thzce.dataset import generate_dataset
from thzce.errors import EstimationError
from thzce.estimators import (
    ChannelFeaturizer,
    LeastSquaresEstimator,
    LmmseEstimator,
    NeuralChannelEstimator,
)
from thzce.metrics import nmse_db
from thzce.rng import crandn, derive


@pytest.fixture(scope="module")
def tiny_dataset():
    cfg = ScenarioConfig(num_antennas=8, num_pilots=8, pn_var_tx=2e-4, pn_var_rx=2e-4, seed=13)
    return generate_dataset(cfg, 200, snr_db=10.0)


class TestSklearnCompat:
    def test_get_set_params(self):
        est = NeuralChannelEstimator(arch="lstm", hidden_units=4, max_epochs=5)
        params = est.get_params()
        assert params["arch"] == "lstm"
        est.set_params(max_epochs=7)
        assert est.max_epochs == 7

    def test_clone(self, tiny_dataset):
        est = LeastSquaresEstimator(pilots=tiny_dataset.pilots)
        cloned = clone(est)
        np.testing.assert_array_equal(cloned.pilots.phi, tiny_dataset.pilots.phi)
        assert not hasattr(cloned, "pinv_")

        neural = NeuralChannelEstimator(arch="dnn", hidden_units=3, seed=4)
        assert clone(neural).get_params() == neural.get_params()

    def test_score_is_negated_nmse(self, tiny_dataset):
        y_te, h_te = tiny_dataset.test_arrays()
        est = LeastSquaresEstimator(pilots=tiny_dataset.pilots).fit()
        assert est.score(y_te, h_te) == pytest.approx(-nmse_db(h_te, est.predict(y_te)))


class TestFeaturizer:
    def test_roundtrip(self):
        y = crandn(derive(0, 0), 6, 5)
        feat = ChannelFeaturizer()
        x = feat.fit_transform(y)
        assert x.shape == (6, 10)
        assert x.dtype == np.float64
        np.testing.assert_array_equal(feat.inverse_transform(x), y)


class TestValidation:
    def test_predict_before_fit(self, tiny_dataset):
        with pytest.raises(EstimationError):
            LmmseEstimator().predict(tiny_dataset.y)
        with pytest.raises(EstimationError):
            NeuralChannelEstimator().predict(tiny_dataset.y)

    def test_ls_requires_pilots(self):
        with pytest.raises(EstimationError):
            LeastSquaresEstimator().fit()

    def test_column_mismatch(self, tiny_dataset):
        est = LeastSquaresEstimator(pilots=tiny_dataset.pilots).fit()
        with pytest.raises(ValueError):
            est.predict(np.zeros((3, 5), dtype=complex))

    def test_nonfinite_rejected(self, tiny_dataset):
        est = LeastSquaresEstimator(pilots=tiny_dataset.pilots).fit()
        bad = np.zeros((2, 8), dtype=complex)
        bad[0, 0] = np.nan
        with pytest.raises(ValueError):
            est.predict(bad)

    def test_paired_length_mismatch(self, tiny_dataset):
        with pytest.raises(ValueError):
            LmmseEstimator().fit(tiny_dataset.y[:10], tiny_dataset.h[:5])

    def test_neural_observation_length_checked(self, tiny_dataset):
        est = NeuralChannelEstimator(
            arch="dnn", pilots=tiny_dataset.pilots, hidden_units=4, max_epochs=2, seed=0
        )
        est.fit(*tiny_dataset.train_arrays())
        with pytest.raises(EstimationError):
            est.predict(np.zeros((2, 12), dtype=complex))


class TestPredictChannel:
    def test_single_sample_vector(self, tiny_dataset):
        from thzce.estimators import predict_channel

        est = LeastSquaresEstimator(pilots=tiny_dataset.pilots).fit()
        sample = tiny_dataset.samples[0]
        estimate = predict_channel(est, sample)
        assert estimate.shape == (tiny_dataset.num_antennas,)

    def test_zero_output_head_gives_zero_db(self, tiny_dataset):
        from thzce.estimators import predict_channel

        est = NeuralChannelEstimator(
            arch="bilstm-gru", pilots=tiny_dataset.pilots, hidden_units=4,
            max_epochs=1, seed=0,
        )
        est.fit(*tiny_dataset.train_arrays())
        est.params_["head.w"] = np.zeros_like(est.params_["head.w"])
        est.params_["head.b"] = np.zeros_like(est.params_["head.b"])
        sample = tiny_dataset.samples[-1]
        estimate = predict_channel(est, sample)
        np.testing.assert_array_equal(estimate, np.zeros_like(sample.truth))
        assert nmse_db(sample.truth, estimate) == 0.0


class TestNeuralEstimator:
    def test_fit_predict_shapes(self, tiny_dataset):
        est = NeuralChannelEstimator(
            arch="dnn", pilots=tiny_dataset.pilots, hidden_units=4, max_epochs=3, seed=0
        )
        est.fit(*tiny_dataset.train_arrays())
        y_te, h_te = tiny_dataset.test_arrays()
        pred = est.predict(y_te)
        assert pred.shape == h_te.shape
        assert pred.dtype == np.complex128

    def test_checkpoint_roundtrip(self, tiny_dataset, tmp_path):
        est = NeuralChannelEstimator(
            arch="lstm", pilots=tiny_dataset.pilots, hidden_units=4, max_epochs=2, seed=1
        )
        est.fit(*tiny_dataset.train_arrays())
        path = tmp_path / "model.thzm"
        est.save(path)
        revived = NeuralChannelEstimator.from_checkpoint(path, pilots=tiny_dataset.pilots)
        y_te, _ = tiny_dataset.test_arrays()
        np.testing.assert_array_equal(revived.predict(y_te), est.predict(y_te))

    def test_antenna_domain_transform_used(self, tiny_dataset):
        # with pilots the model consumes the pilot-inverse image of y
        est = NeuralChannelEstimator(
            arch="dnn", pilots=tiny_dataset.pilots, hidden_units=4, max_epochs=2, seed=1
        )
        y_tr, h_tr = tiny_dataset.train_arrays()
        feats = est.fit(y_tr, h_tr)._features(y_tr[:3])
        manual = y_tr[:3] @ np.linalg.pinv(tiny_dataset.pilots.phi)
        np.testing.assert_allclose(feats[:, :8], manual.real, atol=1e-12)
        np.testing.assert_allclose(feats[:, 8:], manual.imag, atol=1e-12)
