import numpy as np
import pytest

from adialearn.evolver import Schedule
from adialearn.ham_space import HamiltonianVector
from adialearn.learning import (
    EncodingBlock,
    LearningModel,
    TrainConfig,
    VariationalBlock,
    batch_predict_ideal,
    build_track,
    classify,
    loss,
    parameter_shift_gradient,
    predict_adiabatic,
    predict_ideal,
    train,
)
from adialearn.su_basis import build_su_basis
from adialearn.tasks import (
    CASE1_REFERENCE_WEIGHTS,
    CASE2_REFERENCE_WEIGHTS,
    Dataset,
    case1_model,
    case2_model,
    gen_case1,
    gen_case2,
)

EX = np.array([1.0, 0.0, 0.0])
EY = np.array([0.0, 1.0, 0.0])
EZ = np.array([0.0, 0.0, 1.0])


def single_axis_model(axis):
    basis = build_su_basis(2)
    return LearningModel(
        basis=basis,
        n0=HamiltonianVector(np.array([0.0, 0.0, -1.0]), basis),
        units=((EncodingBlock(()), VariationalBlock((axis,))),),
        observable=basis.generators[2],
    )


class TestModelValidation:
    def test_reference_shapes(self):
        m1 = case1_model()
        assert m1.parameter_count == 9
        assert m1.input_dim == 1
        m2 = case2_model()
        assert m2.parameter_count == 9
        assert m2.input_dim == 2

    def test_encoding_layout_must_repeat(self):
        basis = build_su_basis(2)
        n0 = HamiltonianVector(np.array([0.0, 0.0, -1.0]), basis)
        var = VariationalBlock((EZ,))
        with pytest.raises(ValueError):
            LearningModel(basis=basis, n0=n0,
                          units=((EncodingBlock(((EX, 0),)), var),
                                 (EncodingBlock(((EY, 0),)), var)),
                          observable=basis.generators[2])

    def test_observable_must_be_hermitian(self):
        basis = build_su_basis(2)
        n0 = HamiltonianVector(np.array([0.0, 0.0, -1.0]), basis)
        with pytest.raises(ValueError):
            LearningModel(basis=basis, n0=n0,
                          units=((EncodingBlock(()), VariationalBlock((EZ,))),),
                          observable=np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_variational_block_nonempty(self):
        with pytest.raises(ValueError):
            VariationalBlock(())

    def test_encoding_feature_index(self):
        with pytest.raises(ValueError):
            EncodingBlock(((EX, -1),))


class TestBuildTrack:
    def test_case1_structure(self):
        model = case1_model()
        w = CASE1_REFERENCE_WEIGHTS
        track = build_track(model, 0.35, w)
        assert len(track) == 12
        for u in range(3):
            enc = track[4 * u]
            assert np.array_equal(enc.axis, EX)
            assert enc.angle == pytest.approx(0.35)
            for j, axis in enumerate((EZ, EY, EZ)):
                step = track[4 * u + 1 + j]
                assert np.array_equal(step.axis, axis)
                assert step.angle == pytest.approx(w[3 * u + j])

    def test_case2_structure(self):
        track = build_track(case2_model(), [0.2, -0.4],
                            CASE2_REFERENCE_WEIGHTS)
        assert len(track) == 15
        assert np.array_equal(track[0].axis, EZ)
        assert track[0].angle == pytest.approx(0.2)
        assert np.array_equal(track[1].axis, EY)
        assert track[1].angle == pytest.approx(-0.4)

    def test_weight_length_checked(self):
        with pytest.raises(ValueError):
            build_track(case1_model(), 0.1, np.zeros(8))

    def test_input_length_checked(self):
        with pytest.raises(ValueError):
            build_track(case2_model(), [0.1], np.zeros(9))

    def test_reuploading_changes_with_unit_order(self):
        model = case1_model()
        w = np.array([0.3, -0.2, 0.9, 0.1, 0.5, -0.7, 0.2, 0.4, -0.1])
        permuted = np.concatenate([w[3:6], w[0:3], w[6:9]])
        assert predict_ideal(model, 0.4, w) != pytest.approx(
            predict_ideal(model, 0.4, permuted), abs=1e-6)


class TestPredict:
    def test_z_only_model_is_constant(self):
        model = single_axis_model(EZ)
        for w in (-1.2, 0.0, 2.8):
            assert predict_ideal(model, [], [w]) == pytest.approx(1.0,
                                                                  abs=1e-12)

    def test_y_rotation_closed_form(self):
        model = single_axis_model(EY)
        for w in np.linspace(-3.0, 3.0, 7):
            assert predict_ideal(model, [], [w]) == pytest.approx(np.cos(w),
                                                                  abs=1e-12)

    def test_reference_point(self):
        value = predict_ideal(case1_model(), 0.0, CASE1_REFERENCE_WEIGHTS)
        assert value == pytest.approx(-0.4727092786215205, abs=1e-12)

    def test_bounded_readout(self):
        rng = np.random.default_rng(30)
        model = case1_model()
        for _ in range(20):
            value = predict_ideal(model, rng.uniform(-1, 1),
                                  rng.uniform(-np.pi, np.pi, 9))
            assert abs(value) <= 1.0 + 1e-10

    def test_batch_matches_scalar(self):
        model = case2_model()
        rng = np.random.default_rng(31)
        feats = rng.uniform(-1.0, 1.0, size=(9, 2))
        w = rng.uniform(-np.pi, np.pi, 9)
        batch = batch_predict_ideal(model, feats, w)
        scalar = [predict_ideal(model, row, w) for row in feats]
        assert np.abs(batch - np.asarray(scalar)).max() < 1e-12

    def test_adiabatic_approaches_ideal(self):
        model = case1_model()
        w = CASE1_REFERENCE_WEIGHTS
        ideal = predict_ideal(model, 0.0, w)
        fast, _ = predict_adiabatic(model, 0.0, w, Schedule(g=200.0), stride=0)
        assert abs(fast - ideal) <= 1e-3

    def test_adiabatic_roughness_over_grid(self):
        # observed behavior at g = 20: readouts track the ideal ones to
        # about 0.05 on average; the worst gaps sit near the decision
        # boundary and stay below 0.2 (frozen from a converged reference run)
        model = case1_model()
        w = CASE1_REFERENCE_WEIGHTS
        ds = gen_case1(100)
        ideal = batch_predict_ideal(model, ds.features, w)
        adia = np.array([
            predict_adiabatic(model, row, w, Schedule(g=20.0), stride=0)[0]
            for row in ds.features])
        delta = np.abs(adia - ideal)
        assert delta.mean() <= 0.05
        assert delta.max() <= 0.2

    def test_d3_model_runs(self):
        basis = build_su_basis(3)
        coords = np.zeros(8)
        coords[2] = -1.0
        axis = np.zeros(8)
        axis[1] = 1.0
        model = LearningModel(
            basis=basis,
            n0=HamiltonianVector(coords, basis),
            units=((EncodingBlock(()), VariationalBlock((axis,))),),
            observable=basis.generators[2],
        )
        value = predict_ideal(model, [], [0.7])
        assert np.isfinite(value)


class TestClassifyLoss:
    def test_classify_threshold(self):
        assert classify(-1.0) == 0
        assert classify(0.0) == 0
        assert classify(1e-9) == 1
        with pytest.raises(ValueError):
            classify(np.nan)

    def test_loss_zero_for_perfect_fit(self):
        model = single_axis_model(EZ)
        ds = Dataset(np.zeros((3, 1)), np.ones(3, dtype=int))
        assert loss(model, ds, [0.4]) == pytest.approx(0.0, abs=1e-24)

    def test_loss_unit_for_zero_readout(self):
        model = single_axis_model(EY)
        ds = Dataset(np.zeros((1, 1)), np.ones(1, dtype=int))
        assert loss(model, ds, [np.pi / 2]) == pytest.approx(1.0, abs=1e-12)

    def test_loss_matches_per_sample_route(self):
        model = case1_model()
        ds = gen_case1(11, mode="random", seed=5)
        w = np.linspace(-1.0, 1.0, 9)
        by_hand = sum(
            (predict_ideal(model, x, w) - (1.0 if lab == 1 else -1.0)) ** 2
            for x, lab in zip(ds.features[:, 0], ds.labels))
        assert loss(model, ds, w) == pytest.approx(by_hand, abs=1e-12)

    def test_loss_rejects_empty_dataset(self):
        model = case1_model()
        ds = gen_case1(3)
        empty = type("DS", (), {"features": np.zeros((0, 1)),
                                "labels": np.zeros(0, dtype=int)})
        with pytest.raises(ValueError):
            loss(model, empty, np.zeros(9))

    def test_case2_reference_baseline(self):
        # frozen regression value: reference weights on the seed-21 set
        model = case2_model()
        ds = gen_case2(200, seed=21)
        assert loss(model, ds, CASE2_REFERENCE_WEIGHTS) == pytest.approx(
            84.44598036925241, abs=1e-9)
        preds = batch_predict_ideal(model, ds.features,
                                    CASE2_REFERENCE_WEIGHTS)
        acc = np.mean((preds > 0.0).astype(int) == ds.labels)
        assert acc == pytest.approx(0.915, abs=1e-12)


class TestTrain:
    def test_budget_validation(self):
        with pytest.raises(ValueError):
            TrainConfig(budget=0)
        with pytest.raises(ValueError):
            TrainConfig(method="bfgs")

    def test_small_budget_improves(self):
        model = case1_model()
        ds = gen_case1(20, mode="random", seed=11)
        w, report = train(model, ds, TrainConfig(budget=300))
        assert report.evaluations <= 300 + 1
        assert report.final_loss < report.initial_loss
        assert report.improved
        assert report.accuracy >= 0.9
        assert report.history.shape == (report.evaluations,)
        assert report.final_loss == pytest.approx(report.history.min())
        # reported weights reproduce the reported loss
        assert loss(model, ds, w) == pytest.approx(report.final_loss,
                                                   abs=1e-12)

    def test_deterministic(self):
        model = case1_model()
        ds = gen_case1(20, mode="random", seed=11)
        w1, r1 = train(model, ds, TrainConfig(budget=120))
        w2, r2 = train(model, ds, TrainConfig(budget=120))
        assert np.array_equal(w1, w2)
        assert np.array_equal(r1.history, r2.history)

    def test_budget_one_reports_no_progress(self):
        model = case1_model()
        ds = gen_case1(10)
        w, report = train(model, ds, TrainConfig(budget=1))
        assert report.evaluations == 1
        assert not report.improved
        assert np.array_equal(w, np.zeros(9))

    def test_explicit_initial_weights(self):
        model = case1_model()
        ds = gen_case1(10)
        w0 = CASE1_REFERENCE_WEIGHTS
        _, report = train(model, ds, TrainConfig(initial=w0, budget=50))
        assert report.initial_loss == pytest.approx(loss(model, ds, w0),
                                                    abs=1e-12)

    def test_restarts_consume_budget(self):
        model = case1_model()
        ds = gen_case1(10)
        _, report = train(model, ds, TrainConfig(budget=90, restarts=2,
                                                 seed=3))
        assert report.evaluations <= 91

    def test_nelder_mead_backend(self):
        model = case1_model()
        ds = gen_case1(20, mode="random", seed=11)
        _, report = train(model, ds, TrainConfig(budget=300,
                                                 method="nelder-mead"))
        assert report.method == "nelder-mead"
        assert report.final_loss < report.initial_loss


class TestParameterShift:
    def test_constant_model_zero_gradient(self):
        model = single_axis_model(EZ)
        assert parameter_shift_gradient(model, [], [0.3], 0) == pytest.approx(
            0.0, abs=1e-12)

    def test_y_rotation_closed_form(self):
        model = single_axis_model(EY)
        for w in np.linspace(-2.0, 2.0, 5):
            grad = parameter_shift_gradient(model, [], [w], 0)
            assert grad == pytest.approx(-np.sin(w), abs=1e-12)

    def test_matches_finite_differences(self):
        model = case1_model()
        w = np.asarray(CASE1_REFERENCE_WEIGHTS)
        h = 1e-5
        for idx in range(9):
            shift = parameter_shift_gradient(model, 0.7, w, idx)
            wp = w.copy()
            wm = w.copy()
            wp[idx] += h
            wm[idx] -= h
            fd = (predict_ideal(model, 0.7, wp)
                  - predict_ideal(model, 0.7, wm)) / (2.0 * h)
            assert shift == pytest.approx(fd, abs=1e-6)

    def test_index_validation(self):
        model = case1_model()
        with pytest.raises(ValueError):
            parameter_shift_gradient(model, 0.1, np.zeros(9), 9)

    def test_rejects_higher_dimensions(self):
        basis = build_su_basis(3)
        coords = np.zeros(8)
        coords[2] = -1.0
        axis = np.zeros(8)
        axis[1] = 1.0
        model = LearningModel(
            basis=basis,
            n0=HamiltonianVector(coords, basis),
            units=((EncodingBlock(()), VariationalBlock((axis,))),),
            observable=basis.generators[2],
        )
        with pytest.raises(ValueError):
            parameter_shift_gradient(model, [], [0.2], 0)
