"""Smoke tests for the python bindings."""

import numpy as np
import pytest

import adadiff


def test_solve_decreases_the_objective():
    a, b, _ = adadiff.gen_synthetic(60, 8, nnz=4, seed=3)
    result = adadiff.solve(np.asarray(a), list(b), "logistic-l2",
                           policy="adagrad-diff", eta=1.0, budget=200,
                           sigma=1e-4)
    obj = result["objective"]
    assert obj[0] == pytest.approx(np.log(2.0), rel=1e-12)  # starts at zero
    assert obj[-1] < obj[0]
    assert not result["aborted"]
    assert result["diff_sq_tail_fraction"] < 0.5


def test_solve_is_deterministic():
    a, b, _ = adadiff.gen_synthetic(30, 5, nnz=2, seed=9)
    r1 = adadiff.solve(np.asarray(a), list(b), "logistic-l2", budget=50)
    r2 = adadiff.solve(np.asarray(a), list(b), "logistic-l2", budget=50)
    assert r1["objective"] == r2["objective"]
    assert np.array_equal(r1["final_iterate"], r2["final_iterate"])


def test_prox_l1_soft_thresholds():
    out = adadiff.prox_l1(np.array([0.5, -0.1, 2.0]), 0.2, 1.0,
                          np.array([1.0, 1.0, 2.0]))
    assert out == pytest.approx([0.3, 0.0, 1.9])


def test_prox_signed_box_clips():
    out = adadiff.prox_signed_box(np.array([0.9, 0.9]), [1.0, -1.0], 4)
    assert out == pytest.approx([0.25, 0.0])


def test_libsvm_round_trip():
    a, b, _ = adadiff.gen_synthetic(10, 6, nnz=3, seed=4)
    text = adadiff.serialize_libsvm(np.asarray(a), list(b))
    a2, b2 = adadiff.parse_libsvm(text, dim_override=6)
    assert np.allclose(a, a2)
    assert list(b) == list(b2)


def test_two_moons_and_kernel():
    points, labels = adadiff.gen_two_moons(20, 0.05, seed=2)
    assert np.asarray(points).shape == (20, 2)
    assert abs(sum(labels)) <= 1
    kernel = adadiff.gaussian_kernel(np.asarray(points), width=1.0)
    assert np.allclose(np.diag(kernel), 1.0)
    assert np.allclose(kernel, kernel.T)


def test_svm_dual_stays_feasible():
    points, labels = adadiff.gen_two_moons(30, 0.1, seed=7)
    kernel = adadiff.gaussian_kernel(np.asarray(points), width=1.0)
    result = adadiff.solve_svm_dual(kernel, list(labels), eta=0.002,
                                    budget=20, lambda_=1e-3)
    alpha = np.asarray(result["final_iterate"])
    signed = np.asarray(labels) * alpha
    assert np.all(signed >= -1e-15)
    assert np.all(signed <= 1.0 / 30 + 1e-15)
