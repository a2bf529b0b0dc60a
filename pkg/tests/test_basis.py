import numpy as np
import pytest

from dmpkit import (
    BasisFamily,
    BasisSet,
    DegenerateCoverageError,
    ValidationError,
    eval_basis,
    forcing_row,
    make_basis,
    make_centers,
    make_widths,
    support_interval,
)

ALL_FAMILIES = [
    "gaussian",
    "truncated_gaussian",
    "mollifier",
    "wendland_2",
    "wendland_3",
    "wendland_4",
    "wendland_5",
    "wendland_6",
    "wendland_7",
    "wendland_8",
]


class TestCenters:
    def test_endpoints(self):
        c = make_centers(1, 4.0, 1.0)
        assert c[0] == 1.0
        assert c[1] == pytest.approx(np.exp(-4.0), rel=1e-15)

    def test_first_center_always_one(self):
        for n in (0, 1, 5, 40):
            assert make_centers(n, 2.3, 1.7)[0] == 1.0

    def test_interior_value_against_high_precision(self):
        # exp(-4/9) evaluated at 30 decimal digits.
        c = make_centers(9, 4.0, 1.0)
        assert c[1] == pytest.approx(0.641180388429954582251520479131, rel=1e-15)

    def test_strictly_decreasing_and_equispaced_in_time(self):
        c = make_centers(12, 4.0, 1.5)
        assert np.all(np.diff(c) < 0.0)
        t_back = -np.log(c) / 4.0
        assert np.allclose(np.diff(t_back), 1.5 / 12, rtol=1e-12)

    def test_rejects_nonpositive_parameters(self):
        with pytest.raises(ValidationError):
            make_centers(5, -1.0, 1.0)
        with pytest.raises(ValidationError):
            make_centers(5, 1.0, 0.0)


class TestWidths:
    def test_compact_reciprocal_gap_rule(self):
        widths = make_widths(BasisFamily("mollifier"), np.array([1.0, 0.5, 0.25]))
        assert widths == pytest.approx([2.0, 2.0, 4.0])

    def test_gaussian_squared_gap_rule(self):
        widths = make_widths(BasisFamily("gaussian"), np.array([1.0, 0.5, 0.25]))
        assert widths == pytest.approx([4.0, 16.0, 16.0])

    def test_last_gaussian_width_copied(self):
        centers = make_centers(17, 4.0, 1.0)
        widths = make_widths(BasisFamily("gaussian"), centers)
        assert widths[-1] == widths[-2]

    def test_first_compact_width_copied(self):
        centers = make_centers(17, 4.0, 1.0)
        widths = make_widths(BasisFamily("wendland_5"), centers)
        assert widths[0] == widths[1]

    def test_zero_gap_rejected(self):
        with pytest.raises(ValidationError):
            make_widths(BasisFamily("gaussian"), np.array([1.0, 0.5, 0.5]))


class TestEvaluation:
    def test_gaussian_peak_is_one(self):
        bset = make_basis("gaussian", 9, 4.0, 1.0)
        for i in (0, 4, 9):
            assert eval_basis(bset, i, bset.centers[i]) == 1.0

    def test_mollifier_peak(self):
        bset = make_basis("mollifier", 9, 4.0, 1.0)
        assert eval_basis(bset, 3, bset.centers[3]) == pytest.approx(np.exp(-1.0), rel=1e-15)

    def test_mollifier_zero_outside_support(self):
        bset = make_basis("mollifier", 9, 4.0, 1.0)
        radius = 1.0 / bset.widths[2]
        assert eval_basis(bset, 2, bset.centers[2] + radius) == 0.0
        assert eval_basis(bset, 2, bset.centers[2] + 1.001 * radius) == 0.0

    def test_wendland4_polynomial_value(self):
        # (1 - 1/2)^4 (4 * 1/2 + 1) = 3/16, expanded symbolically.
        bset = make_basis("wendland_4", 9, 4.0, 1.0)
        s = bset.centers[2] + 0.5 / bset.widths[2]
        assert eval_basis(bset, 2, s) == pytest.approx(3.0 / 16.0, rel=1e-15)

    def test_index_out_of_range(self):
        bset = make_basis("gaussian", 5, 4.0, 1.0)
        with pytest.raises(ValidationError):
            eval_basis(bset, 6, 0.5)
        with pytest.raises(ValidationError):
            support_interval(bset, -1)


class TestSupports:
    def test_gaussian_support_whole_line(self):
        bset = make_basis("gaussian", 5, 4.0, 1.0)
        assert support_interval(bset, 2) == (-np.inf, np.inf)

    def test_truncated_gaussian_one_sided(self):
        family = BasisFamily("truncated_gaussian", trunc_kappa=0.3 * np.sqrt(4.0))
        bset = BasisSet(
            family=family, centers=np.array([1.0, 0.5]), widths=np.array([4.0, 4.0])
        )
        lo, hi = support_interval(bset, 1)
        assert lo == -np.inf
        assert hi == pytest.approx(0.8, rel=1e-12)

    def test_compact_interval(self):
        bset = BasisSet(
            family=BasisFamily("mollifier"),
            centers=np.array([1.0, 0.5]),
            widths=np.array([2.0, 2.0]),
        )
        assert support_interval(bset, 1) == pytest.approx((0.0, 1.0))

    @pytest.mark.parametrize("family", ["mollifier", "wendland_2", "wendland_8"])
    def test_compact_support_iff_zero(self, family):
        bset = make_basis(family, 15, 4.0, 1.0)
        grid = np.linspace(np.exp(-4.0), 1.0, 2000)
        for i in (0, 5, 12, 15):
            lo, hi = support_interval(bset, i)
            values = eval_basis(bset, i, grid)
            outside = (grid <= lo) | (grid >= hi)
            assert np.all(values[outside] == 0.0)
            inside = (grid > lo + 1e-9) & (grid < hi - 1e-9)
            assert np.all(values[inside] > 0.0)


class TestRegularityWitnesses:
    def test_mollifier_flat_at_boundary(self):
        # Finite-difference first and second derivatives vanish approaching
        # the support edge from inside, consistent with smoothness.
        bset = make_basis("mollifier", 9, 4.0, 1.0)
        i = 3
        lo, hi = support_interval(bset, i)
        h = 1e-5
        for edge in (lo, hi):
            x = edge - 3e-4 if edge == hi else edge + 3e-4
            f = lambda v: eval_basis(bset, i, v)
            d1 = (f(x + h) - f(x - h)) / (2 * h)
            d2 = (f(x + h) - 2 * f(x) + f(x - h)) / h**2
            assert abs(d1) < 1e-3
            assert abs(d2) < 1e-1

    def test_truncated_gaussian_jump(self):
        kappa = 0.7
        family = BasisFamily("truncated_gaussian", trunc_kappa=kappa)
        bset = BasisSet(
            family=family,
            centers=np.array([1.0, 0.5]),
            widths=np.array([9.0, 9.0]),
        )
        _, hi = support_interval(bset, 1)
        inside = eval_basis(bset, 1, hi - 1e-12)
        outside = eval_basis(bset, 1, hi + 1e-12)
        assert outside == 0.0
        assert inside == pytest.approx(np.exp(-0.5 * kappa**2), rel=1e-6)
        assert inside > 0.1


class TestForcingRow:
    def test_single_basis_row_is_phase(self):
        bset = make_basis("gaussian", 0, 4.0, 1.0)
        assert forcing_row(bset, 0.7) == pytest.approx([0.7])

    def test_single_basis_biased_row(self):
        bset = make_basis("mollifier", 0, 4.0, 1.0, biased=True)
        assert forcing_row(bset, 0.7) == pytest.approx([0.7, 1.0])

    def test_two_equal_bases_split_evenly(self):
        bset = BasisSet(
            family=BasisFamily("mollifier"),
            centers=np.array([1.0, 0.5]),
            widths=np.array([1.5, 1.5]),
        )
        s = 0.75  # equidistant from both centers, inside both supports
        row = forcing_row(bset, s)
        assert row == pytest.approx([s / 2, s / 2])

    @pytest.mark.parametrize("family", ALL_FAMILIES)
    @pytest.mark.parametrize("n", [5, 17, 50, 200])
    def test_positive_coverage_on_phase_range(self, family, n):
        from dmpkit import basis_matrix

        bset = make_basis(family, n, 4.0, 1.0)
        grid = np.linspace(np.exp(-4.0), 1.0, 3000)
        sums = basis_matrix(bset, grid).sum(axis=1)
        assert np.all(sums > 0.0)

    def test_unbiased_rows_sum_to_phase(self):
        bset = make_basis("gaussian", 20, 4.0, 1.0)
        grid = np.linspace(np.exp(-4.0), 1.0, 500)
        rows = forcing_row(bset, grid)
        assert np.max(np.abs(rows.sum(axis=1) - grid)) < 1e-12

    def test_vanishing_coverage_raises(self):
        bset = make_basis("mollifier", 10, 4.0, 1.0)
        with pytest.raises(DegenerateCoverageError):
            forcing_row(bset, 1e-9)  # far below every support


class TestConstruction:
    def test_unknown_family_rejected(self):
        with pytest.raises(ValidationError):
            BasisFamily("wendland_9")
        with pytest.raises(ValidationError):
            BasisFamily("triangle")

    def test_centers_must_start_at_one(self):
        with pytest.raises(ValidationError):
            BasisSet(
                family=BasisFamily("gaussian"),
                centers=np.array([0.9, 0.5]),
                widths=np.array([1.0, 1.0]),
            )

    def test_param_count(self):
        assert make_basis("gaussian", 10, 4.0, 1.0).param_count == 11
        assert make_basis("gaussian", 10, 4.0, 1.0, biased=True).param_count == 22
