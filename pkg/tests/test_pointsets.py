import numpy as np
import pytest
from pydantic import ValidationError

from src.errors import DomainError
from src.pointsets import (GeneratorSpec, PointSet, exp_sum, exp_sum_box, exp_sums, generate, grid, grid_for_sigma,
                           grid_shape_for_sigma, read_points, write_points)


def _frequencies(radius=6):
    r = np.arange(-radius, radius + 1)
    return np.stack(np.meshgrid(r, r, indexing="ij"), axis=-1).reshape(-1, 2)


def test_grid_closed_form_matches_direct_sum():
    points = grid(4, 3)
    ms = _frequencies()
    np.testing.assert_allclose(exp_sums(points, ms), exp_sums(points, ms, direct=True), atol=1e-9)
    assert exp_sum(points, (4, 3)) == 12.0
    assert exp_sum(points, (1, 0)) == 0.0


def test_grid_for_sigma_shapes():
    points, K, L, N = grid_for_sigma(1024, 1.0)
    assert (K, L, N) == (64, 16, 1024)
    assert points.structure == (64, 16)
    assert grid_shape_for_sigma(4096, 0.5) == (64, 64)
    with pytest.raises(DomainError):
        grid_shape_for_sigma(100, 0.4)


def test_random_generators_are_seeded():
    spec = GeneratorSpec(kind="uniform", n=50, seed=12345)
    np.testing.assert_array_equal(generate(spec).points, generate(spec).points)
    assert not np.array_equal(generate(spec).points, generate(spec.with_seed(12346)).points)

    drawn = generate(GeneratorSpec(kind="jittered", k=4, l=5))
    assert drawn.seed is not None
    again = generate(GeneratorSpec(kind="jittered", k=4, l=5, seed=drawn.seed))
    np.testing.assert_array_equal(drawn.points, again.points)


def test_jittered_points_stay_in_their_cells():
    points = generate(GeneratorSpec(kind="jittered", k=4, l=5, seed=7)).points
    cells = np.floor(points * np.array([4, 5])).astype(int)
    assert len({tuple(c) for c in cells}) == 20


def test_generator_spec_validation():
    with pytest.raises(ValidationError):
        GeneratorSpec(kind="uniform")
    with pytest.raises(ValidationError):
        GeneratorSpec(kind="uniform", n=3, seed=-1)


def test_point_coordinates_must_lie_in_unit_square():
    with pytest.raises(DomainError):
        PointSet(np.array([[0.5, 1.0]]))
    with pytest.raises(DomainError):
        PointSet(np.empty((0, 2)))
    with pytest.raises(DomainError):
        PointSet(np.zeros((3, 2)), structure=(2, 2))


def test_translation_keeps_exponential_sum_modulus():
    points = generate(GeneratorSpec(kind="uniform", n=40, seed=3))
    moved = points.translated((0.37, 0.81))
    assert moved.N == points.N
    ms = _frequencies(4)
    np.testing.assert_allclose(np.abs(exp_sums(moved, ms)), np.abs(exp_sums(points, ms)), atol=1e-9)
    assert grid(3, 3).translated((0.1, 0.1)).structure is None


def test_exp_sum_box_matches_exp_sums():
    points = generate(GeneratorSpec(kind="uniform", n=30, seed=11))
    box = exp_sum_box(points, 5)
    for m in ((0, 0), (3, -2), (-5, 5), (1, 4)):
        assert box[m[0] + 5, m[1] + 5] == pytest.approx(exp_sum(points, m), abs=1e-9)
    assert box[5, 5] == pytest.approx(30.0)


def test_points_file_round_trip(tmp_path):
    points = generate(GeneratorSpec(kind="uniform", n=25, seed=99))
    path = write_points(tmp_path / "points.csv", points)
    back = read_points(path)
    np.testing.assert_array_equal(back.points, points.points)
    assert back.seed == 99
    assert back.generator["kind"] == "uniform"

    g = read_points(write_points(tmp_path / "grid.csv", grid(3, 2)))
    assert g.structure == (3, 2)


def test_grid_tag_must_match_the_grid():
    rng = np.random.default_rng(4)
    with pytest.raises(DomainError):
        PointSet(rng.random((36, 2)), structure=(6, 6))
    shuffled = grid(6, 6).points[rng.permutation(36)]
    assert PointSet(shuffled, structure=(6, 6)).structure == (6, 6)


def test_read_points_rejects_mislabelled_grid(tmp_path):
    path = write_points(tmp_path / "grid.csv", grid(3, 2))
    lines = path.read_text().splitlines()
    data = [i for i, line in enumerate(lines) if not line.startswith("#")]
    lines[data[0]] = "0.5,0.25"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(DomainError):
        read_points(path)
