import numpy as np
import pytest

from dmpkit import (
    AffineMap,
    Gains,
    NullTransformError,
    ValidationError,
    conjugate_gains,
    inverse,
    rotation_between,
    rotodilatation,
)


class TestRotationBetween:
    def test_identity_for_equal_vectors(self):
        rot = rotation_between(np.array([1.0, 0.0, 0.0]), np.array([1.0, 0.0, 0.0]))
        assert np.array_equal(rot, np.eye(3))

    def test_parallel_scaled_vectors_give_exact_identity(self):
        u = np.array([0.3, -1.2, 0.7])
        rot = rotation_between(u, 5.0 * u)
        assert np.array_equal(rot, np.eye(3))

    def test_planar_quarter_turn(self):
        rot = rotation_between(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        assert rot == pytest.approx(np.array([[0.0, -1.0], [1.0, 0.0]]), abs=1e-14)

    def test_plane_rotation_fixes_complement(self):
        rot = rotation_between(np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]))
        assert rot @ np.array([1.0, 0.0, 0.0]) == pytest.approx([0.0, 1.0, 0.0], abs=1e-12)
        assert rot @ np.array([0.0, 0.0, 1.0]) == pytest.approx([0.0, 0.0, 1.0], abs=1e-12)

    @pytest.mark.parametrize("dim", [2, 3, 6])
    def test_postconditions_over_random_pairs(self, dim):
        rng = np.random.default_rng(dim)
        eye = np.eye(dim)
        for _ in range(1000):
            u = rng.standard_normal(dim)
            v = rng.standard_normal(dim)
            rot = rotation_between(u, v)
            assert np.max(np.abs(rot.T @ rot - eye)) < 1e-10
            assert np.linalg.det(rot) == pytest.approx(1.0, abs=1e-10)
            u_hat = u / np.linalg.norm(u)
            v_hat = v / np.linalg.norm(v)
            assert np.max(np.abs(rot @ u_hat - v_hat)) < 1e-10

    def test_antiparallel_is_deterministic_half_turn(self):
        u = np.array([1.0, 0.0, 0.0])
        rot = rotation_between(u, -u)
        assert np.max(np.abs(rot.T @ rot - np.eye(3))) < 1e-12
        assert np.linalg.det(rot) == pytest.approx(1.0, abs=1e-12)
        assert rot @ u == pytest.approx(-u, abs=1e-12)

    def test_near_antiparallel_stays_orthogonal(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            u = rng.standard_normal(4)
            w = rng.standard_normal(4)
            v = -u + 1e-8 * w
            rot = rotation_between(u, v)
            assert np.all(np.isfinite(rot))
            assert np.max(np.abs(rot.T @ rot - np.eye(4))) < 1e-10
            assert np.linalg.det(rot) == pytest.approx(1.0, abs=1e-10)

    def test_zero_vector_rejected(self):
        with pytest.raises(ValidationError):
            rotation_between(np.zeros(3), np.array([1.0, 0.0, 0.0]))


class TestRotodilatation:
    def test_identical_chords_identity(self):
        amap = rotodilatation(
            np.array([1.0, 2.0]), np.array([3.0, 4.0]), np.array([1.0, 2.0]), np.array([3.0, 4.0])
        )
        assert amap.scale == pytest.approx(1.0)
        assert amap.matrix == pytest.approx(np.eye(2), abs=1e-12)

    def test_quarter_turn_with_doubling(self):
        amap = rotodilatation(
            np.zeros(2), np.array([1.0, 0.0]), np.zeros(2), np.array([0.0, 2.0])
        )
        assert amap.scale == pytest.approx(2.0)
        assert amap.matrix == pytest.approx(np.array([[0.0, -2.0], [2.0, 0.0]]), abs=1e-12)

    def test_chord_mapping_identity_over_random_pairs(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            x0, g, x0n, gn = rng.standard_normal((4, 3))
            amap = rotodilatation(x0, g, x0n, gn)
            assert amap.matrix @ (g - x0) == pytest.approx(gn - x0n, abs=1e-10)

    def test_null_chord_raises(self):
        p = np.array([1.0, 1.0])
        with pytest.raises(NullTransformError):
            rotodilatation(p, p, np.zeros(2), np.ones(2))
        with pytest.raises(NullTransformError):
            rotodilatation(np.zeros(2), np.ones(2), p, p)


class TestConjugateGains:
    def test_scalar_gains_unchanged(self):
        gains = Gains.critically_damped(150.0, 3)
        amap = rotodilatation(
            np.zeros(3), np.array([1.0, 0.0, 0.0]), np.zeros(3), np.array([0.0, 0.0, 2.0])
        )
        k_mat, d_mat = conjugate_gains(gains, amap)
        assert np.array_equal(k_mat, np.diag(gains.elastic))
        assert np.array_equal(d_mat, np.diag(gains.damping))

    def test_quarter_turn_swaps_distinct_gains(self):
        # S diag(1,2) S^{-1} for the 90-degree rotation equals diag(2,1).
        gains = Gains(elastic=np.array([5.0, 5.0]), damping=np.array([1.0, 2.0]))
        rot = np.array([[0.0, -1.0], [1.0, 0.0]])
        amap = AffineMap(matrix=rot, scale=1.0, rotation=rot)
        _, d_mat = conjugate_gains(gains, amap)
        assert d_mat == pytest.approx(np.diag([2.0, 1.0]), abs=1e-12)

    def test_identity_map_returns_diagonals(self):
        gains = Gains(elastic=np.array([10.0, 20.0]), damping=np.array([2.0, 4.0]))
        k_mat, d_mat = conjugate_gains(gains, AffineMap.identity(2))
        assert k_mat == pytest.approx(np.diag([10.0, 20.0]), abs=1e-12)
        assert d_mat == pytest.approx(np.diag([2.0, 4.0]), abs=1e-12)


class TestInverse:
    def test_identity_inverse(self):
        amap = AffineMap.identity(4)
        assert np.array_equal(inverse(amap).matrix, np.eye(4))

    def test_quarter_turn_doubled(self):
        amap = rotodilatation(
            np.zeros(2), np.array([1.0, 0.0]), np.zeros(2), np.array([0.0, 2.0])
        )
        assert inverse(amap).matrix == pytest.approx(
            np.array([[0.0, 0.5], [-0.5, 0.0]]), abs=1e-12
        )

    def test_inverse_composition_over_random_maps(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            x0, g, x0n, gn = rng.standard_normal((4, 3))
            amap = rotodilatation(x0, g, x0n, gn)
            prod = inverse(amap).matrix @ amap.matrix
            assert np.max(np.abs(prod - np.eye(3))) < 1e-12

    def test_seeded_scaled_rotation(self):
        rng = np.random.default_rng(42)
        q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
        if np.linalg.det(q) < 0:
            q[:, 0] = -q[:, 0]
        amap = AffineMap(matrix=3.0 * q, scale=3.0, rotation=q)
        assert np.max(np.abs(inverse(amap).matrix @ amap.matrix - np.eye(5))) < 1e-12


class TestAffineMapInvariants:
    def test_factorization_checked(self):
        with pytest.raises(ValidationError):
            AffineMap(matrix=2.0 * np.eye(2), scale=1.0, rotation=np.eye(2))

    def test_rotation_must_be_orthogonal(self):
        bad = np.array([[1.0, 0.1], [0.0, 1.0]])
        with pytest.raises(ValidationError):
            AffineMap(matrix=bad, scale=1.0, rotation=bad)

    def test_reflection_rejected(self):
        refl = np.diag([1.0, -1.0])
        with pytest.raises(ValidationError):
            AffineMap(matrix=refl, scale=1.0, rotation=refl)

    def test_apply_on_point_array(self):
        amap = rotodilatation(
            np.zeros(2), np.array([1.0, 0.0]), np.zeros(2), np.array([0.0, 2.0])
        )
        pts = np.array([[1.0, 0.0], [0.0, 1.0]])
        assert amap.apply(pts) == pytest.approx(np.array([[0.0, 2.0], [-2.0, 0.0]]))
