import numpy as np
import pytest

from homoglab.errors import GridMismatch, ZeroReference
from homoglab.metrics import (
    CurveRecord,
    p1_interpolate,
    relative_errors,
    restrict_to_reference,
)


def nodal(n, fn):
    t = np.linspace(0.0, 1.0, n + 1)
    return fn(t[:, None], t[None, :])


class TestInterpolate:
    def test_linear_fields_reproduced_exactly(self):
        v = nodal(7, lambda x, y: 2.0 * x - 3.0 * y + 0.5)
        pts = np.random.default_rng(0).uniform(0.0, 1.0, (2, 400))
        got = p1_interpolate(v, pts[0], pts[1])
        want = 2.0 * pts[0] - 3.0 * pts[1] + 0.5
        assert np.allclose(got, want, atol=1e-13)

    def test_nodes_reproduced(self):
        v = np.random.default_rng(1).normal(size=(6, 6))
        t = np.linspace(0.0, 1.0, 6)
        got = p1_interpolate(v, t[:, None], t[None, :])
        assert np.allclose(got, v, atol=1e-14)

    def test_hat_center_value_respects_triangulation(self):
        # Single hat at the center node of a 2x2 grid; the square centers sit
        # on the triangulation diagonals, where the hat takes value 1/2.
        v = np.zeros((3, 3))
        v[1, 1] = 1.0
        assert p1_interpolate(v, 0.25, 0.25) == pytest.approx(0.5)
        assert p1_interpolate(v, 0.75, 0.75) == pytest.approx(0.5)
        # In the off-diagonal squares the split diagonal misses the center
        # node, so their centers sit on an edge between two zero nodes.
        assert p1_interpolate(v, 0.25, 0.75) == pytest.approx(0.0)
        assert p1_interpolate(v, 0.75, 0.25) == pytest.approx(0.0)

    def test_triangle_side_selection(self):
        # Field equal to x on lower triangles only distinguishable from y on
        # upper ones via the diagonal rule.
        v = np.array([[0.0, 0.0], [1.0, 1.0]])
        assert p1_interpolate(v, 0.7, 0.2) == pytest.approx(0.7)
        assert p1_interpolate(v, 0.2, 0.7) == pytest.approx(0.2)

    def test_bad_shape(self):
        with pytest.raises(GridMismatch):
            p1_interpolate(np.zeros((3, 4)), 0.5, 0.5)


class TestRestrict:
    def test_identity_when_grids_match(self):
        v = np.random.default_rng(2).normal(size=(9, 9))
        out = restrict_to_reference(v, 8)
        assert np.array_equal(out, v)
        assert out is not v

    def test_shared_nodes_exact(self):
        v = np.random.default_rng(3).normal(size=(5, 5))
        out = restrict_to_reference(v, 16)
        assert out.shape == (17, 17)
        assert np.allclose(out[::4, ::4], v, atol=1e-14)

    def test_linear_exact_after_refinement(self):
        v = nodal(4, lambda x, y: x + 2.0 * y)
        out = restrict_to_reference(v, 32)
        assert np.allclose(out, nodal(32, lambda x, y: x + 2.0 * y), atol=1e-13)

    def test_rejects_reference_coarser_than_input(self):
        with pytest.raises(GridMismatch):
            restrict_to_reference(np.zeros((9, 9)), 4)


class TestRelativeErrors:
    def test_exact_match_is_zero(self):
        u = nodal(16, lambda x, y: np.sin(x) + y)
        assert relative_errors(u, u) == (0.0, 0.0)

    def test_constant_shift(self):
        u = np.full((17, 17), 2.0)
        e2, einf = relative_errors(u + 0.5, u)
        assert e2 == pytest.approx(0.25, abs=1e-12)
        assert einf == pytest.approx(0.25, abs=1e-12)

    def test_scale_invariance(self):
        rng = np.random.default_rng(4)
        u = rng.normal(size=(17, 17)) + 3.0
        y = u + rng.normal(0.0, 0.1, size=(17, 17))
        assert relative_errors(y, u) == pytest.approx(
            relative_errors(7.0 * y, 7.0 * u), abs=1e-12
        )

    def test_homogeneity_in_perturbation(self):
        u = np.full((9, 9), 1.0)
        d = np.random.default_rng(5).normal(size=(9, 9))
        e2a, einfa = relative_errors(u + d, u)
        e2b, einfb = relative_errors(u + 2.0 * d, u)
        assert e2b == pytest.approx(2.0 * e2a, rel=1e-12)
        assert einfb == pytest.approx(2.0 * einfa, rel=1e-12)

    def test_spike_infinity_norm(self):
        u = np.full((9, 9), 1.0)
        y = u.copy()
        y[4, 4] += 1.0
        e2, einf = relative_errors(y, u)
        assert einf == pytest.approx(1.0)
        # One interior node carries trapezoid weight (1/8)^2.
        assert e2 == pytest.approx(1.0 / 8.0, abs=1e-12)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(6)
        u = rng.normal(size=(9, 9)) + 5.0
        y1 = u + rng.normal(0.0, 0.1, size=(9, 9))
        y2 = u + rng.normal(0.0, 0.1, size=(9, 9))
        mid = 0.5 * (y1 + y2)
        e2_mid, _ = relative_errors(mid, u)
        e2_1, _ = relative_errors(y1, u)
        e2_2, _ = relative_errors(y2, u)
        assert e2_mid <= 0.5 * (e2_1 + e2_2) + 1e-12

    def test_zero_reference(self):
        with pytest.raises(ZeroReference):
            relative_errors(np.ones((5, 5)), np.zeros((5, 5)))

    def test_shape_mismatch(self):
        with pytest.raises(GridMismatch):
            relative_errors(np.ones((5, 5)), np.ones((6, 6)))


def test_curve_record_fields():
    rec = CurveRecord(0.125, "c2", "L2", 0.01, meta="n=8")
    assert rec.h == 0.125 and rec.curve == "c2" and rec.meta == "n=8"
