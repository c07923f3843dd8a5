import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from hypergiant import predict, sample_hnp
from hypergiant.estimators import (ComponentOrderTransformer, GiantComponentModel,
                                   LinearResponseRegressor)
from hypergiant.theory import ModelParams


def test_giant_component_model_matches_predict():
    m = GiantComponentModel(d=2, c=2.0).fit()
    g = predict(ModelParams.from_c(10_000, 2, 2.0))
    assert m.predict([10_000])[0] == pytest.approx(g.mu)
    assert m.predict_variance([10_000])[0] == pytest.approx(g.sigma2)
    assert m.get_params() == {"c": 2.0, "d": 2, "tol": 1e-12}
    assert clone(m).get_params() == m.get_params()
    with pytest.raises(NotFittedError):
        GiantComponentModel().predict([10])


def test_component_order_transformer():
    hs = [sample_hnp(50, 2, 0.05, seed=i) for i in range(3)]
    x = ComponentOrderTransformer().fit_transform(hs)
    assert x.shape == (3, 3)
    assert np.all(x[:, 0] >= x[:, 2])
    xn = ComponentOrderTransformer(normalize=True).fit_transform(hs)
    assert np.allclose(xn * 50, x)
    with pytest.raises(TypeError):
        ComponentOrderTransformer().fit_transform([1, 2])


def test_linear_response_regressor(rng):
    x = np.repeat([900, 950, 1000, 1050, 1100], 400)
    y = 5 + 0.25 * (x - 1000) + rng.normal(0, 2, x.size)
    reg = LinearResponseRegressor(mu1=1000).fit(x, y)
    assert reg.coef_[0] == pytest.approx(0.25, abs=0.02)
    assert reg.intercept_ == pytest.approx(5, abs=0.3)
    assert reg.predict([1000])[0] == pytest.approx(reg.intercept_)
    assert reg.score(x, y) > 0.8
    with pytest.raises(ValueError):
        LinearResponseRegressor().fit([1, 2], [1])
