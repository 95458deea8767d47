import numpy as np
import pytest

from ledcma.objective import (
    BudgetExhausted,
    ConfigurationError,
    led_wrap,
    make_intrinsic,
    optimum_point,
    random_rotation,
)


def test_known_values_at_optima():
    for fid in range(1, 10):
        n_eff = 4
        fn = make_intrinsic(fid, n_eff)
        assert fn(optimum_point(fid, n_eff)) == pytest.approx(0.0, abs=1e-12)


def test_positive_near_optimum():
    rng = np.random.default_rng(0)
    for fid in range(1, 10):
        fn = make_intrinsic(fid, 4)
        base = optimum_point(fid, 4)
        for _ in range(50):
            x = base + rng.uniform(-0.5, 0.5, 4)
            if np.allclose(x, base):
                continue
            assert fn(x) > 0.0


def test_hand_evaluations():
    assert make_intrinsic(2, 2)(np.array([1.0, 1.0])) == pytest.approx(1_000_001.0)
    assert make_intrinsic(6, 2)(np.array([1.0, -1.0])) == pytest.approx(10_010.0)
    assert make_intrinsic(7, 2)(np.array([2.0, 3.0])) == pytest.approx(304.0)
    # different powers: exponents 2 and 6 at n_eff=2
    assert make_intrinsic(3, 2)(np.array([2.0, 2.0])) == pytest.approx(np.sqrt(4.0 + 64.0))
    # rastrigin at (0.5, 0): 0.25 + 10*(1-cos(pi)) = 20.25
    assert make_intrinsic(9, 2)(np.array([0.5, 0.0])) == pytest.approx(20.25)


def test_minimum_n_eff_enforced():
    for fid in (2, 3, 5, 6, 7, 8):
        with pytest.raises(ConfigurationError):
            make_intrinsic(fid, 1)
    for fid in (1, 4, 9):
        assert make_intrinsic(fid, 1)(np.zeros(1)) == pytest.approx(0.0)
    with pytest.raises(ConfigurationError):
        make_intrinsic(10, 4)


def test_rotation_is_proper_orthonormal():
    rng = np.random.default_rng(4)
    assert np.array_equal(random_rotation(1, rng), np.array([[1.0]]))
    for n in (2, 5, 20):
        r = random_rotation(n, rng)
        assert np.max(np.abs(r @ r.T - np.eye(n))) < 1e-12
        assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-9)


def test_rotation_depends_on_seed():
    a = random_rotation(3, np.random.default_rng(1))
    b = random_rotation(3, np.random.default_rng(2))
    assert np.linalg.norm(a - b) > 0.0


def test_wrap_drops_redundant_coordinates():
    problem = led_wrap(make_intrinsic(1, 2), 3, budget=100)
    assert problem.evaluate(np.array([1.0, 2.0, 5.0])) == pytest.approx(5.0)


def test_wrap_45_degree_rotation():
    c = np.sqrt(0.5)
    rotation = np.array([[c, c], [-c, c]])
    problem = led_wrap(make_intrinsic(1, 1), 2, rotation=rotation, budget=10)
    assert problem.evaluate(np.array([1.0, 1.0])) == pytest.approx(2.0)


def test_redundant_subspace_invariance():
    rng = np.random.default_rng(8)
    n_total, n_eff = 6, 2
    problem = led_wrap(make_intrinsic(1, n_eff), n_total,
                       rng=np.random.default_rng(99), budget=10_000)
    r = problem.rotation
    for _ in range(1000):
        x = rng.standard_normal(n_total)
        tail = np.zeros(n_total)
        tail[n_eff:] = rng.standard_normal(n_total - n_eff)
        delta = r.T @ tail
        a = problem.evaluate(x)
        b = problem.evaluate(x + delta)
        # equality is exact in exact arithmetic; rotation round-off leaves
        # only relative noise
        assert b == pytest.approx(a, rel=1e-9, abs=1e-12)


def test_redundant_invariance_exact_without_rotation():
    problem = led_wrap(make_intrinsic(1, 2), 4, budget=1000)
    rng = np.random.default_rng(12)
    for _ in range(100):
        x = rng.standard_normal(4)
        shifted = x.copy()
        shifted[2:] += rng.standard_normal(2)
        assert problem.evaluate(x) == problem.evaluate(shifted)


def test_eval_count_and_best_tracking():
    problem = led_wrap(make_intrinsic(1, 2), 2, budget=10)
    x = np.array([1.0, 1.0])
    assert problem.eval_count == 0
    first = problem.evaluate(x)
    assert problem.eval_count == 1
    second = problem.evaluate(x)
    assert problem.eval_count == 2
    assert first == second
    for target in (3.0, 1.0, 2.0):
        problem.evaluate(np.array([np.sqrt(target), 0.0]))
    assert problem.best_f == pytest.approx(1.0)


def test_budget_enforced_before_evaluation():
    problem = led_wrap(make_intrinsic(1, 2), 2, budget=3)
    xs = np.ones((2, 2))
    problem.evaluate_batch(xs)
    with pytest.raises(BudgetExhausted):
        problem.evaluate_batch(xs)
    # the point that fit within the budget was still counted
    assert problem.eval_count == 3
    with pytest.raises(BudgetExhausted):
        problem.evaluate(np.ones(2))
    assert problem.eval_count == 3


def test_wrap_rejects_too_small_total_dimension():
    with pytest.raises(ConfigurationError):
        led_wrap(make_intrinsic(1, 4), 2, budget=10)


def test_alignment_norms_ideal_basis():
    rng = np.random.default_rng(31)
    problem = led_wrap(make_intrinsic(1, 2), 4, rng=rng, budget=10)
    # basis equal to the transposed rotation aligns the first n_eff columns
    # exactly with the effective subspace
    norms = problem.effective_alignment_norms(problem.rotation.T)
    assert np.allclose(norms, [1.0, 1.0, 0.0, 0.0], atol=1e-12)


def test_alignment_norms_identity():
    problem = led_wrap(make_intrinsic(1, 1), 3, budget=10)
    norms = problem.effective_alignment_norms(np.eye(3))
    assert np.allclose(norms, [1.0, 0.0, 0.0])


def test_alignment_norms_squares_sum_to_n_eff():
    from ledcma.linalg import orthonormalize
    rng = np.random.default_rng(44)
    problem = led_wrap(make_intrinsic(1, 3), 7, rng=rng, budget=10)
    basis = orthonormalize(rng.standard_normal((7, 7)))
    norms = problem.effective_alignment_norms(basis)
    assert np.all(norms <= 1.0 + 1e-9)
    assert np.sum(norms**2) == pytest.approx(3.0, abs=1e-9)


def test_alignment_norms_dimension_mismatch():
    problem = led_wrap(make_intrinsic(1, 2), 4, budget=10)
    with pytest.raises(ValueError, match="dimension"):
        problem.effective_alignment_norms(np.eye(3))
