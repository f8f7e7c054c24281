"""Model family: design construction, solving, transforms, fit/predict."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greycast.accumulation import accumulate, inverse_accumulate
from greycast.datasets import load_bundled
from greycast.errors import (
    DevelopmentCoefficientOutOfRange,
    ModelFileError,
    SingularDesign,
    TooFewSamples,
    VariantOrderConflict,
    ZeroDevelopmentCoefficient,
)
from greycast.models import (
    BaseParams,
    FittedModel,
    ModelVariant,
    OptParams,
    alpha_gap,
    build_design,
    discretization_gap,
    fit,
    optimize_params,
    predict,
    solve_least_squares,
    time_response,
)


def response_series(alpha, beta, gamma, x0, n):
    """Independent evaluation of the closed-form accumulated response."""
    ks = np.arange(1, n + 1)
    out = (
        (x0 - beta / alpha + beta / alpha**2 - gamma / alpha) * np.exp(-alpha * (ks - 1))
        + beta / alpha * ks
        - beta / alpha**2
        + gamma / alpha
    )
    out[0] = x0
    return out


def synthetic_raw(r, alpha, beta, gamma, x0, n):
    return inverse_accumulate(response_series(alpha, beta, gamma, x0, n), r)


def base_from_opt(alpha, beta, gamma):
    """Invert the optimised-parameter transform (used as a test oracle)."""
    a = 2 * (math.exp(alpha) - 1) / (math.exp(alpha) + 1)
    b = a * beta / alpha
    c = a / alpha * (gamma - b / a) + b / a
    return a, b, c


def out_of_range_raw(a=3.0, b=0.1, c=0.2, n=8):
    """Series whose exact least-squares development coefficient is ``a``.

    Built from the discrete recursion (1 + a/2) x(k) = (1 - a/2) x(k-1)
    + b(2k-1)/2 + c, so the regression recovers (a, b, c) with zero
    residual; |a| >= 2 then trips the optimised transform.
    """
    xr = [1.0]
    for k in range(2, n + 1):
        xr.append(((1 - a / 2) * xr[-1] + b * (2 * k - 1) / 2 + c) / (1 + a / 2))
    return inverse_accumulate(np.array(xr), 1.0)


class TestBuildDesign:
    def test_hand_computed_rows(self):
        # cumsum of [1,2,3,4] is [1,3,6,10]; z = 2, 4.5, 8; diffs = 2, 3, 4
        xr = accumulate([1, 2, 3, 4], 1)
        B, Y = build_design(xr, ModelVariant.FAGM11K, 4)
        np.testing.assert_allclose(
            B, [[-2.0, 1.5, 1.0], [-4.5, 2.5, 1.0], [-8.0, 3.5, 1.0]], atol=1e-15
        )
        np.testing.assert_allclose(Y, [2.0, 3.0, 4.0], atol=1e-15)

    def test_zero_slope_variant_drops_drift_column(self):
        xr = accumulate([1, 2, 3, 4], 1)
        B, _ = build_design(xr, ModelVariant.FAGM11, 4)
        np.testing.assert_allclose(B, [[-2.0, 1.0], [-4.5, 1.0], [-8.0, 1.0]], atol=1e-15)

    def test_zero_intercept_variant_drops_ones_column(self):
        xr = accumulate([1, 2, 3, 4], 1)
        B, _ = build_design(xr, ModelVariant.GM11K, 4)
        np.testing.assert_allclose(B, [[-2.0, 1.5], [-4.5, 2.5], [-8.0, 3.5]], atol=1e-15)

    @pytest.mark.parametrize("nu", [4, 6, 9])
    def test_row_count_is_nu_minus_one(self, nu):
        xr = accumulate(np.arange(1.0, 11.0), 1.3)
        B, Y = build_design(xr, ModelVariant.FAGMO11K, nu)
        assert B.shape == (nu - 1, 3)
        assert Y.shape == (nu - 1,)

    def test_too_few_samples(self):
        with pytest.raises(TooFewSamples):
            build_design([1.0, 2.0, 3.0], ModelVariant.GM11, 3)


class TestSolver:
    def test_consistent_system_has_tiny_residual(self):
        rng = np.random.default_rng(11)
        B = rng.normal(size=(6, 3))
        phi = rng.normal(size=3)
        got = solve_least_squares(B, B @ phi)
        assert np.linalg.norm(B @ got - B @ phi) < 1e-10

    def test_agrees_with_lstsq(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            B = rng.normal(size=(8, 3))
            Y = rng.normal(size=8)
            got = solve_least_squares(B, Y)
            want = np.linalg.lstsq(B, Y, rcond=None)[0]
            np.testing.assert_allclose(got, want, rtol=1e-8, atol=1e-10)

    def test_constant_series_degenerates_gracefully(self):
        # z is exactly affine in k, but the two-column reduced design is
        # still full rank: a ~ 0 with c ~ the constant level.
        xr = accumulate([5.0, 5.0, 5.0, 5.0], 1)
        B, Y = build_design(xr, ModelVariant.GM11, 4)
        a, c = solve_least_squares(B, Y)
        assert abs(a) < 1e-12
        assert c == pytest.approx(5.0, rel=1e-12)

    def test_dependent_columns_raise_singular(self):
        # accumulated series [1,2,3,4] makes z(k) == (2k-1)/2 exactly
        B, Y = build_design(np.array([1.0, 2.0, 3.0, 4.0]), ModelVariant.FAGM11K, 4)
        with pytest.raises(SingularDesign):
            solve_least_squares(B, Y)

    def test_recovers_transform_consistent_parameters(self):
        # data generated from the optimised response must regress to the
        # base triple whose transform reproduces the generating triple
        alpha, beta, gamma, x0 = 0.8, 2.5, 40.0, 1.3
        xr = response_series(alpha, beta, gamma, x0, 11)
        B, Y = build_design(xr, ModelVariant.FAGMO11K, 11)
        a, b, c = solve_least_squares(B, Y)
        opt = optimize_params(BaseParams(a, b, c))
        assert opt.alpha == pytest.approx(alpha, abs=1e-6)
        assert opt.beta == pytest.approx(beta, abs=1e-6)
        assert opt.gamma == pytest.approx(gamma, abs=1e-6)


class TestOptimizeParams:
    def test_alpha_gap_at_one(self):
        opt = optimize_params(BaseParams(1.0, 0.0, 0.0))
        assert abs((opt.alpha - 1.0) - 0.0986) < 5e-5  # ln 3 - 1

    def test_alpha_gap_at_tenth(self):
        opt = optimize_params(BaseParams(0.1, 0.0, 0.0))
        assert abs((opt.alpha - 0.1) - 0.0001) < 5e-5

    def test_defining_identities_hold(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            a = rng.uniform(-1.9, 1.9)
            if abs(a) < 1e-3:
                continue
            b, c = rng.uniform(-5, 5), rng.uniform(-100, 100)
            opt = optimize_params(BaseParams(a, b, c))
            assert abs((1 + a / 2) - (1 - a / 2) * math.exp(opt.alpha)) < 1e-12
            assert abs(opt.beta * a / opt.alpha - b) < 1e-12 * max(1.0, abs(b))

    def test_small_a_limit(self):
        # frozen from direct evaluation of the transform at a=0.01, b=2, c=5
        # (series check: alpha gap = a^3/12 + a^5/40 + ... = 8.33346e-8);
        # the gamma gap exceeds 1e-3 because c - b/a = -195 amplifies it
        opt = optimize_params(BaseParams(0.01, 2.0, 5.0))
        assert opt.alpha - 0.01 == pytest.approx(8.3334583e-08, rel=1e-6, abs=0)
        assert opt.beta - 2.0 == pytest.approx(1.6666917e-05, rel=1e-6, abs=0)
        assert opt.gamma - 5.0 == pytest.approx(-1.6250244e-03, rel=1e-6, abs=0)
        assert abs(opt.alpha - 0.01) < 1e-3
        assert abs(opt.beta - 2.0) < 1e-3
        assert abs(opt.gamma - 5.0) < 2e-3

    def test_gap_strictly_increasing_on_the_open_interval(self):
        grid = np.linspace(-1.95, 1.95, 200)
        gaps = [alpha_gap(a) for a in grid]
        assert all(g1 < g2 for g1, g2 in zip(gaps, gaps[1:]))

    def test_gamma_matches_simplified_identity(self):
        # cross-check: gamma - c == (alpha_gap(a) / a) * (c - b/a)
        for a, b, c in [(0.5, 2.0, 5.0), (-1.2, 1.0, 30.0), (1.7, 4.0, 80.0)]:
            opt = optimize_params(BaseParams(a, b, c))
            want = alpha_gap(a) / a * (c - b / a)
            assert opt.gamma - c == pytest.approx(want, rel=1e-9, abs=1e-12)

    def test_zero_development_coefficient(self):
        with pytest.raises(ZeroDevelopmentCoefficient):
            optimize_params(BaseParams(0.0, 1.0, 1.0))

    @pytest.mark.parametrize("a", [2.0, -2.0, 2.5, -3.0])
    def test_out_of_range(self, a):
        with pytest.raises(DevelopmentCoefficientOutOfRange):
            optimize_params(BaseParams(a, 1.0, 1.0))


class TestTimeResponse:
    def test_anchored_initial_value_is_exact(self):
        model = fit(load_bundled("nuclear").values, 1.1595, ModelVariant.FAGMO11K, 10)
        assert time_response(model, 1) == model.x0

    def test_pure_exponential_decay(self):
        model = FittedModel(
            variant=ModelVariant.FAGM11,
            r=1.0,
            base=BaseParams(math.log(2), 0.0, 0.0),
            opt=None,
            x0=1.0,
            nu=4,
            n_total=4,
            labels=(1, 2, 3, 4),
        )
        assert time_response(model, 3) == pytest.approx(0.25, rel=1e-12)

    def test_reproduces_generating_response(self):
        alpha, beta, gamma, x0, r = -0.6, 1.5, 25.0, 1.8, 0.9
        raw = synthetic_raw(r, alpha, beta, gamma, x0, 11)
        model = fit(raw, r, ModelVariant.FAGMO11K, 11)
        want = response_series(alpha, beta, gamma, x0, 20)
        got = time_response(model, np.arange(1, 21))
        np.testing.assert_allclose(got, want, rtol=1e-8)

    def test_rejects_index_below_one(self):
        model = fit(load_bundled("nuclear").values, 1.0, ModelVariant.GM11, 10)
        with pytest.raises(ValueError):
            time_response(model, 0)


class TestFit:
    def test_oilfield_reference_values(self):
        data = load_bundled("oilfield")
        model = fit(data.values, 0.4052, ModelVariant.FAGMO11K, 11, labels=data.labels)
        restored = predict(model, 0)
        assert restored[1] == pytest.approx(136.4573, rel=1e-3)
        assert restored[10] == pytest.approx(519.5393, rel=1e-3)

    def test_nuclear_reference_value(self):
        data = load_bundled("nuclear")
        model = fit(data.values, 1.1595, ModelVariant.FAGMO11K, 10)
        assert predict(model, 0)[1] == pytest.approx(15.0891, rel=1e-3)

    def test_exact_parameter_recovery(self):
        raw = synthetic_raw(0.7, 0.45, 3.0, 60.0, 1.2, 11)
        model = fit(raw, 0.7, ModelVariant.FAGMO11K, 11)
        eps = (
            (model.opt.alpha - 0.45) ** 2
            + (model.opt.beta - 3.0) ** 2
            + (model.opt.gamma - 60.0) ** 2
        )
        assert eps < 1e-6

    def test_order_locked_variant_rejects_fractional_order(self):
        data = load_bundled("nuclear")
        for variant in (ModelVariant.GM11, ModelVariant.GM11K, ModelVariant.GM11KC,
                        ModelVariant.ONGM11K):
            with pytest.raises(VariantOrderConflict):
                fit(data.values, 0.5, variant, 10)

    def test_too_few_samples(self):
        with pytest.raises(TooFewSamples):
            fit([1.0, 2.0, 3.0, 4.0, 5.0], 1.0, ModelVariant.GM11, 3)
        with pytest.raises(TooFewSamples):
            fit([1.0, 2.0, 3.0, 4.0], 1.0, ModelVariant.GM11, 6)

    def test_singular_design_propagates(self):
        with pytest.raises(SingularDesign):
            fit([1.0, 1.0, 1.0, 1.0], 1.0, ModelVariant.FAGM11K, 4)

    def test_out_of_range_coefficient_propagates(self):
        raw = out_of_range_raw(a=3.0)
        # the plain variant fits fine and recovers a = 3 exactly
        plain = fit(raw, 1.0, ModelVariant.GM11KC, raw.size)
        assert plain.base.a == pytest.approx(3.0, rel=1e-9)
        with pytest.raises(DevelopmentCoefficientOutOfRange):
            fit(raw, 1.0, ModelVariant.ONGM11K, raw.size)

    def test_label_length_checked(self):
        with pytest.raises(ValueError):
            fit([1.0, 2.0, 3.0, 4.0], 1.0, ModelVariant.GM11, 4, labels=(1, 2))


class TestPredict:
    def test_oilfield_forecast_values(self):
        data = load_bundled("oilfield")
        model = fit(data.values[:11], 0.4052, ModelVariant.FAGMO11K, 11)
        restored = predict(model, 3)
        for got, want in zip(restored[11:], (550.1281, 579.5714, 608.0086)):
            assert got == pytest.approx(want, rel=1e-3)

    def test_nuclear_extrapolation(self):
        data = load_bundled("nuclear")
        model = fit(data.values, 1.1595, ModelVariant.FAGMO11K, 10)
        assert predict(model, 3)[14] == pytest.approx(123.3723, rel=1e-3)

    def test_round_trips_synthetic_data(self):
        raw = synthetic_raw(1.3, -0.9, 2.2, 45.0, 1.6, 11)
        model = fit(raw, 1.3, ModelVariant.FAGMO11K, 11)
        np.testing.assert_allclose(predict(model, 0), raw, rtol=1e-8)

    @pytest.mark.parametrize("variant", list(ModelVariant))
    def test_first_restored_value_is_anchored(self, variant):
        rng = np.random.default_rng(17)
        raw = np.sort(rng.uniform(1, 50, size=9))
        r = 1.0 if variant.order_locked else 0.7
        model = fit(raw, r, variant, 9)
        assert predict(model, 2)[0] == raw[0]

    def test_negative_horizon_rejected(self):
        model = fit(load_bundled("nuclear").values, 1.0, ModelVariant.GM11, 10)
        with pytest.raises(ValueError):
            predict(model, -1)


class TestDiscretizationGap:
    def test_optimised_parameters_cancel_the_gap(self):
        model = fit(load_bundled("nuclear").values, 1.1595, ModelVariant.FAGMO11K, 10)
        assert all(abs(discretization_gap(model, k)) < 1e-10 for k in range(2, 21))

    def test_plain_fit_leaves_a_gap_at_large_alpha(self):
        raw = synthetic_raw(1.0, 1.5, 2.0, 50.0, 1.5, 11)
        model = fit(raw, 1.0, ModelVariant.GM11KC, 11)
        assert max(abs(discretization_gap(model, k)) for k in range(2, 12)) > 1e-3

    def test_gap_shrinks_with_the_development_coefficient(self):
        maxima = []
        for a in (0.5, 0.1, 0.01):
            model = FittedModel(
                variant=ModelVariant.GM11KC,
                r=1.0,
                base=BaseParams(a, 2.0, 5.0),
                opt=None,
                x0=1.5,
                nu=10,
                n_total=10,
                labels=tuple(range(1, 11)),
            )
            maxima.append(max(abs(discretization_gap(model, k)) for k in range(2, 11)))
        assert maxima[0] > maxima[1] > maxima[2]

    def test_rejects_k_below_two(self):
        model = fit(load_bundled("nuclear").values, 1.0, ModelVariant.GM11, 10)
        with pytest.raises(ValueError):
            discretization_gap(model, 1)


class TestReductions:
    def test_ongm_is_fagmo_at_order_one(self):
        data = load_bundled("settlement")
        a = fit(data.values, 1.0, ModelVariant.ONGM11K, 11)
        b = fit(data.values, 1.0, ModelVariant.FAGMO11K, 11)
        assert a.base == b.base
        assert a.opt == b.opt
        np.testing.assert_array_equal(predict(a, 2), predict(b, 2))

    def test_gm11_is_fagm11_at_order_one(self):
        data = load_bundled("nuclear")
        a = fit(data.values, 1.0, ModelVariant.GM11, 10)
        b = fit(data.values, 1.0, ModelVariant.FAGM11, 10)
        assert a.base == b.base
        np.testing.assert_array_equal(predict(a, 0), predict(b, 0))

    def test_gm11kc_is_fagm11k_at_order_one(self):
        data = load_bundled("nuclear")
        a = fit(data.values, 1.0, ModelVariant.GM11KC, 10)
        b = fit(data.values, 1.0, ModelVariant.FAGM11K, 10)
        assert a.base == b.base


finite_floats = st.floats(allow_nan=False, allow_infinity=False)


class TestSerialization:
    def _model(self, **overrides):
        fields = dict(
            variant=ModelVariant.FAGMO11K,
            r=1.1595,
            base=BaseParams(-0.1145923, 0.35521, 1.882),
            opt=OptParams(-0.1147, 0.3555, 1.8834),
            x0=12.4,
            nu=10,
            n_total=12,
            labels=tuple(range(2006, 2018)),
        )
        fields.update(overrides)
        return FittedModel(**fields)

    def test_round_trip_through_file(self, tmp_path):
        data = load_bundled("nuclear")
        model = fit(data.values, 1.1595, ModelVariant.FAGMO11K, 10, labels=data.labels)
        path = tmp_path / "model.json"
        model.save(path)
        assert FittedModel.load(path) == model

    @settings(max_examples=60, deadline=None)
    @given(r=st.floats(min_value=1e-6, max_value=10), a=finite_floats, b=finite_floats,
           c=finite_floats, x0=finite_floats)
    def test_floats_round_trip_exactly(self, r, a, b, c, x0):
        model = self._model(r=r, base=BaseParams(a, b, c), opt=None,
                            variant=ModelVariant.FAGM11K, x0=x0)
        back = FittedModel.from_dict(model.to_dict())
        assert back.r == model.r and back.base == model.base and back.x0 == model.x0

    def test_unoptimised_variant_serializes_null_transform(self):
        doc = self._model(variant=ModelVariant.FAGM11K, opt=None).to_dict()
        assert doc["alpha"] is None and doc["beta"] is None and doc["gamma"] is None

    def test_rejects_bad_documents(self):
        good = self._model().to_dict()
        for breakage in (
            {"schema_version": 2},
            {"variant": "nope"},
            {"nu": 2},
            {"labels": [1, 2]},
            {"alpha": None},  # optimised variant must carry the transform
        ):
            doc = dict(good)
            doc.update(breakage)
            with pytest.raises(ModelFileError):
                FittedModel.from_dict(doc)

    def test_rejects_non_json_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ModelFileError):
            FittedModel.load(path)

    def test_order_search_info_survives(self, tmp_path):
        model = self._model().with_order_search({"objective": "rmspe", "objective_value": 3.3})
        path = tmp_path / "m.json"
        model.save(path)
        assert FittedModel.load(path).order_search == model.order_search
