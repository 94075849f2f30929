from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from pydantic import ValidationError

from src.discrepancy import (DilationAverager, DiscrepancyEstimate, LambdaRange, TruncationPolicy, budget_partition,
                             body_for_sigma, cassels_check, classify, count_in, half_plane_annulus, lattice_count,
                             mc_discrepancy, parseval_discrepancy, tail_bound)
from src.discrepancy.parseval import RAY_CACHE_SIZE
from src.errors import DomainError
from src.geometry import BodySpec, make_body
from src.pointsets import GeneratorSpec, PointSet, generate, grid, grid_shape_for_sigma

SMALL_POLICY = TruncationPolicy(initial_radius=8, growth=1.5, max_radius=32)


@pytest.fixture(scope="module")
def disk():
    return make_body(BodySpec(kind="disk", r=0.25))


@pytest.fixture(scope="module")
def square():
    return make_body(BodySpec(kind="axis_square", side=0.5))


def _single_point_value(area, lo=0.0, hi=1.0):
    """Average over lambda of a - a^2 with a = lambda^2 |C|"""
    return area * (hi ** 3 - lo ** 3) / 3.0 - area ** 2 * (hi ** 5 - lo ** 5) / 5.0


def test_count_in_examples(disk, square):
    assert count_in(square, 1.0, (0.1, 0.1), PointSet(np.array([[0.1, 0.1]]))) == 1
    copies = PointSet(np.tile([0.3, 0.7], (5, 1)))
    assert count_in(square, 0.5, (0.3, 0.7), copies) == 5
    assert count_in(disk, 1.0, (0.125, 0.125), grid(4, 4)) == 4
    assert count_in(disk, 0.5, (0.125, 0.125), grid(4, 4)) == 0


def test_count_in_wraps_around_the_torus(square):
    points = PointSet(np.array([[0.95, 0.02]]))
    assert count_in(square, 1.0, (0.05, 0.98), points) == 1


def test_count_in_rejects_bad_dilation(disk):
    with pytest.raises(DomainError):
        count_in(disk, 3.0, (0.0, 0.0), grid(2, 2))
    with pytest.raises(DomainError):
        count_in(disk, -0.1, (0.0, 0.0), grid(2, 2))


def test_lambda_range_validation():
    assert LambdaRange.parse("0.5:1").length == 0.5
    with pytest.raises(ValidationError):
        LambdaRange(lo=0.6, hi=0.5)
    with pytest.raises(ValidationError):
        LambdaRange(lo=0.0, hi=1.5)


def test_embedding_rejects_off_center_body():
    shifted = make_body(BodySpec(kind="disk", r=0.25, center=(0.3, 0.0)))
    with pytest.raises(DomainError):
        LambdaRange().check_embedding(shifted)
    with pytest.raises(DomainError):
        parseval_discrepancy(shifted, grid(2, 2))


def test_truncation_policy():
    assert list(TruncationPolicy(initial_radius=8, growth=2, max_radius=32).radii()) == [8, 16, 32]
    assert list(TruncationPolicy(initial_radius=8, growth=1.5, max_radius=20).radii()) == [8, 12, 18, 20]
    with pytest.raises(ValidationError):
        TruncationPolicy(initial_radius=2)
    with pytest.raises(ValidationError):
        TruncationPolicy(growth=1.0)
    with pytest.raises(ValidationError):
        TruncationPolicy(initial_radius=64, max_radius=32)


def test_estimate_rejects_negative_values():
    with pytest.raises(DomainError):
        DiscrepancyEstimate(value=-1.0, engine="mc")
    estimate = DiscrepancyEstimate(value=1.0, engine="parseval", tail_bound=0.5)
    assert estimate.error == 0.5
    assert "std_error" not in estimate.to_dict()


def test_mc_is_reproducible(disk):
    points = grid(4, 4)
    a = mc_discrepancy(disk, points, samples=2000, seed=5)
    b = mc_discrepancy(disk, points, samples=2000, seed=5, threads=3, block_size=300)
    assert a.value == mc_discrepancy(disk, points, samples=2000, seed=5).value
    assert a.seed == 5 and a.engine == "mc"
    assert a.std_error > 0.0
    assert b.samples == 2000
    with pytest.raises(ValueError):
        mc_discrepancy(disk, points, samples=50)


def test_mc_single_point_matches_closed_form(square):
    estimate = mc_discrepancy(square, PointSet(np.array([[0.3, 0.6]])), samples=40_000, seed=17)
    exact = _single_point_value(square.area)
    assert abs(estimate.value - exact) <= 5.0 * estimate.std_error


def test_parseval_single_point_matches_closed_form(square):
    policy = TruncationPolicy(initial_radius=8, growth=1.5, max_radius=48)
    estimate = parseval_discrepancy(square, PointSet(np.array([[0.3, 0.6]])), policy=policy)
    exact = _single_point_value(square.area)
    assert estimate.value == pytest.approx(exact, rel=0.02)
    assert estimate.value <= exact * (1.0 + 1e-9)
    assert estimate.value + estimate.tail_bound >= exact
    assert estimate.config["path"] == "dense"


def test_sparse_and_dense_paths_agree(disk):
    points = grid(4, 2)
    averager = DilationAverager(disk, LambdaRange())
    sparse = parseval_discrepancy(disk, points, policy=SMALL_POLICY, averager=averager)
    dense = parseval_discrepancy(disk, points, policy=SMALL_POLICY, sparse=False, averager=averager)
    assert sparse.config["path"] == "sparse"
    assert dense.config["path"] == "dense"
    assert sparse.value == pytest.approx(dense.value, rel=1e-9)


def test_parseval_is_translation_invariant(disk):
    points = generate(GeneratorSpec(kind="uniform", n=20, seed=8))
    averager = DilationAverager(disk, LambdaRange())
    base = parseval_discrepancy(disk, points, policy=SMALL_POLICY, averager=averager)
    moved = parseval_discrepancy(disk, points.translated((0.41, 0.77)), policy=SMALL_POLICY, averager=averager)
    assert moved.value == pytest.approx(base.value, rel=1e-9)


def test_annuli_are_recorded_in_order(disk):
    estimate = parseval_discrepancy(disk, grid(3, 3), policy=SMALL_POLICY)
    radii = [a["radius"] for a in estimate.annuli]
    assert radii == sorted(radii)
    assert all(a["contribution"] >= 0.0 for a in estimate.annuli)
    assert estimate.value == pytest.approx(sum(a["contribution"] for a in estimate.annuli), rel=1e-12)
    assert estimate.radius == radii[-1]


def test_flag_when_cap_is_reached(disk):
    policy = TruncationPolicy(initial_radius=8, max_radius=8)
    estimate = parseval_discrepancy(disk, grid(2, 2), policy=policy)
    assert estimate.flagged


def test_parseval_argument_checks(disk, square):
    averager = DilationAverager(square, LambdaRange())
    with pytest.raises(ValueError):
        parseval_discrepancy(disk, grid(2, 2), averager=averager)
    with pytest.raises(ValueError):
        parseval_discrepancy(disk, PointSet(np.array([[0.2, 0.2]])), sparse=True)


def test_phi_respects_symmetries(disk):
    c_sigma = body_for_sigma(0.75)
    averager = DilationAverager(c_sigma, LambdaRange())
    ms = np.array([[3, 5], [-3, -5], [3, -5], [-3, 5]])
    values = averager.phi(ms)
    np.testing.assert_allclose(values, values[0], rtol=1e-12)
    assert len(averager) == 1

    round_one = DilationAverager(disk, LambdaRange())
    pair = round_one.phi(np.array([[3, 4], [5, 0]]))
    assert pair[0] == pair[1]


def test_phi_is_shared_safely_between_threads():
    c_sigma = body_for_sigma(0.75)
    ms = half_plane_annulus(0.0, 12.0)
    expected = DilationAverager(c_sigma, LambdaRange()).phi(ms)

    shared = DilationAverager(c_sigma, LambdaRange(), threads=4)
    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(shared.phi, [ms, ms[::-1], ms[::2], ms]))
    np.testing.assert_allclose(results[0], expected, rtol=1e-12)
    np.testing.assert_allclose(results[1], expected[::-1], rtol=1e-12)
    np.testing.assert_allclose(results[2], expected[::2], rtol=1e-12)
    assert len(shared) == len({tuple(k) for k in shared.fold(ms).tolist()})
    assert shared._ray_integral.cache_info().maxsize == RAY_CACHE_SIZE


def test_half_plane_annulus_covers_each_pair_once():
    ms = half_plane_annulus(0.0, 5.0)
    keys = {tuple(m) for m in ms}
    assert len(keys) == len(ms)
    assert all((-a, -b) not in keys for a, b in keys)
    assert 2 * len(ms) == lattice_count(5.0) - 1
    sparse = half_plane_annulus(0.0, 20.0, K=4, L=6)
    assert np.all(sparse[:, 0] % 4 == 0) and np.all(sparse[:, 1] % 6 == 0)


def test_tail_bound_behaviour(disk, square):
    points = grid(4, 4)
    lam = LambdaRange()
    near, far = tail_bound(disk, points, lam, 16.0), tail_bound(disk, points, lam, 64.0)
    assert np.isfinite(near) and far < near
    assert np.isfinite(tail_bound(square, points, lam, 16.0, sparse=True))
    hexagon = make_body(BodySpec(kind="regular_polygon", k=6, circumradius=0.3))
    assert tail_bound(hexagon, points, lam, 16.0) == np.inf


def test_lattice_count():
    assert lattice_count(0.5) == 1
    assert lattice_count(1.0) == 5
    assert lattice_count(2.0) == 13


def test_cassels_on_grid():
    report = cassels_check(grid(4, 4), 8.0)
    assert report["lhs"] == 12 * 256.0
    assert report["core_count"] == 13
    assert report["pass"]


def test_cassels_on_single_point():
    report = cassels_check(PointSet(np.array([[0.4, 0.1]])), 10.0)
    assert report["lhs"] == pytest.approx(lattice_count(10.0) - 13, rel=1e-9)
    assert report["pass"]
    with pytest.raises(ValueError):
        cassels_check(grid(2, 2), 2.0)


def test_classify_regimes():
    ms = np.array([[10, 5], [1, 16], [10, 16]])
    assert classify(ms, 0.75).tolist() == [1, 3, 2]
    assert classify(np.array([[1, 8], [2, 8]]), 1.0).tolist() == [1, 2]


def test_budget_partition_sums_to_parseval():
    sigma = 0.75
    body = body_for_sigma(sigma)
    lam = LambdaRange()
    averager = DilationAverager(body, lam)
    K, L = grid_shape_for_sigma(256, sigma)
    report = budget_partition(sigma, K, L, 64.0, lam, averager)
    assert report["S_G1"] + report["S_G2"] + report["S_G3"] == pytest.approx(report["total"], rel=1e-12)

    policy = TruncationPolicy(initial_radius=64, max_radius=64)
    estimate = parseval_discrepancy(body, grid(K, L), lam, policy, averager=averager)
    assert report["total"] == pytest.approx(estimate.value, rel=1e-12)
    assert report["N"] == K * L
