import numpy as np
import pytest

from homoglab.coeff1d import PiecewiseConstantCoeff1D, Rhs1D
from homoglab.bytestream import open_stream
from homoglab.coeff1d import build_coeff_1d
from homoglab.errors import (
    DegenerateGrid,
    GridMismatch,
    NonpositiveCoefficient,
    OutOfDomain,
)
from homoglab.oned import (
    EffectiveField1D,
    ExtensionSpec1D,
    correct_1d,
    derivative_at_nodes,
    errors_1d,
    solve_exact_1d,
)

UNIT = PiecewiseConstantCoeff1D(np.array([0.25, 0.75]), np.array([1.0]))
# 1 on [0, 0.125), 0.5 on [0.125, 0.25), 1 beyond: one resolved period for
# the hand-computed corrector below.
TWO_VALUE = PiecewiseConstantCoeff1D(np.array([0.125, 0.25]), np.array([0.5]))


class TestExtensionSpec:
    def test_window_centers(self):
        assert ExtensionSpec1D("c", 0.02).xhat(0.3) == pytest.approx(0.3)
        assert ExtensionSpec1D("d", 0.02, 2).xhat(0.3049) == pytest.approx(0.305)
        assert ExtensionSpec1D("d", 0.01, 1).xhat(0.005) == pytest.approx(0.005)

    def test_labels(self):
        assert ExtensionSpec1D("c", 0.01).label() == "C"
        assert ExtensionSpec1D("d", 0.01, 4).label() == "D4"

    def test_validation(self):
        with pytest.raises(ValueError):
            ExtensionSpec1D("x", 0.01)
        with pytest.raises(ValueError):
            ExtensionSpec1D("c", -0.01)
        with pytest.raises(ValueError):
            ExtensionSpec1D("d", 0.01, 0)


class TestAveraged:
    def test_two_value_window_harmonic_mean(self):
        # Window [0, 0.25]: half at 1, half at 0.5 -> harmonic mean 2/3.
        field = EffectiveField1D.build(TWO_VALUE, ExtensionSpec1D("d", 0.25, 1))
        assert field.averaged(0.1) == pytest.approx(2.0 / 3.0, abs=1e-14)

    def test_constant_window(self):
        field = EffectiveField1D.build(UNIT, ExtensionSpec1D("c", 0.02))
        x = np.linspace(0.0, 1.0, 11)
        assert np.allclose(field.averaged(x), 1.0, atol=1e-14)

    def test_harmonic_bounds(self):
        coeff = build_coeff_1d("a1", open_stream())
        field = EffectiveField1D.build(coeff, ExtensionSpec1D("c", 0.016))
        x = np.random.default_rng(1).uniform(0.0, 1.0, 2000)
        a_eff = field.averaged(x)
        lo, hi = 0.001, 1.001
        assert np.all(a_eff >= lo - 1e-12) and np.all(a_eff <= hi + 1e-12)

    def test_aligned_periodic_gives_constant_average(self):
        # Period 0.05 (two alternating 0.025 segments) sampled with a window
        # of exactly one period: the harmonic mean is position independent.
        bp = 0.25 + 0.025 * np.arange(21)
        vals = np.tile([0.2, 0.8], 10)
        coeff = PiecewiseConstantCoeff1D(bp, vals)
        field = EffectiveField1D.build(coeff, ExtensionSpec1D("c", 0.05))
        x = np.linspace(0.3, 0.7, 57)
        a_eff = field.averaged(x)
        assert np.max(a_eff) - np.min(a_eff) < 1e-13

    def test_extension_kinds_agree_at_cell_centers(self):
        coeff = build_coeff_1d("a2", open_stream())
        eb = 0.008
        for k in (1, 2, 4):
            spec_d = ExtensionSpec1D("d", eb, k)
            centers = spec_d.xhat(np.linspace(0.1, 0.9, 41))
            fd = EffectiveField1D.build(coeff, spec_d)
            fc = EffectiveField1D.build(coeff, ExtensionSpec1D("c", eb))
            assert np.allclose(fd.averaged(centers), fc.averaged(centers), atol=1e-12)

    def test_continuous_extension_is_continuous(self):
        # A(.) is Lipschitz for the sliding window, so the largest grid jump
        # should shrink proportionally under refinement (unlike the genuine
        # jumps of the cellwise extension).
        coeff = build_coeff_1d("a2", open_stream())
        field = EffectiveField1D.build(coeff, ExtensionSpec1D("c", 0.008))
        coarse = np.max(np.abs(np.diff(field.averaged(np.linspace(0.2, 0.8, 20001)))))
        fine = np.max(np.abs(np.diff(field.averaged(np.linspace(0.2, 0.8, 80001)))))
        assert fine < 0.5 * coarse

    def test_discrete_extension_is_cellwise_constant(self):
        coeff = build_coeff_1d("a2", open_stream())
        spec = ExtensionSpec1D("d", 0.008, 2)
        field = EffectiveField1D.build(coeff, spec)
        # Points in the interior of one cell share a window.
        cell_lo = spec.h * 100
        x = cell_lo + spec.h * np.linspace(0.05, 0.95, 7)
        vals = field.averaged(x)
        assert np.max(vals) - np.min(vals) == 0.0

    def test_window_leaving_domain(self):
        field = EffectiveField1D.build(UNIT, ExtensionSpec1D("c", 3.0))
        with pytest.raises(OutOfDomain):
            field.averaged(0.5)


class TestCorrector:
    def test_hand_computed_values(self):
        field = EffectiveField1D.build(TWO_VALUE, ExtensionSpec1D("d", 0.25, 1))
        # Slope (A/a - 1)/eps_bar = -4/3 on [0, 0.125), +4/3 after; zero-mean
        # shift is +1/12.
        assert field.corrector(0.0) == pytest.approx(1.0 / 12.0, abs=1e-13)
        assert field.corrector(0.0625) == pytest.approx(0.0, abs=1e-13)
        assert field.corrector(0.125) == pytest.approx(-1.0 / 12.0, abs=1e-13)

    def test_zero_for_constant_coefficient(self):
        field = EffectiveField1D.build(UNIT, ExtensionSpec1D("c", 0.02))
        x = np.linspace(0.0, 1.0, 101)
        assert np.allclose(field.corrector(x), 0.0, atol=1e-12)

    def test_zero_mean_over_cell(self):
        coeff = build_coeff_1d("a2", open_stream())
        spec = ExtensionSpec1D("d", 0.008, 1)
        field = EffectiveField1D.build(coeff, spec)
        cell_lo = spec.h * 62
        x = np.linspace(cell_lo, cell_lo + spec.h, 4001)
        w = field.corrector(x)
        # Quadrature on a grid that misses the kinks limits the accuracy.
        assert np.trapezoid(w, x) / spec.h == pytest.approx(0.0, abs=1e-4)


class TestSolve:
    def test_poisson_unit_coefficient(self):
        sol = solve_exact_1d(lambda x: np.ones_like(x), Rhs1D("f2"), 0.0, 0.0, 100001)
        want = 2.0 * sol.nodes * (1.0 - sol.nodes)
        assert np.max(np.abs(sol.u - want)) < 1e-10

    def test_poisson_scaled_coefficient(self):
        sol = solve_exact_1d(
            lambda x: np.full_like(x, 2.0), Rhs1D("f2"), 0.0, 0.0, 100001
        )
        mid = (sol.n_sol - 1) // 2
        assert sol.u[mid] == pytest.approx(0.25, abs=1e-10)

    def test_boundary_values_and_flux_constancy(self):
        coeff = build_coeff_1d("a2", open_stream())
        sol = solve_exact_1d(coeff, Rhs1D("f3"), 0.0, 1.0, 200001)
        assert sol.u[0] == 0.0
        assert sol.u[-1] == pytest.approx(1.0, abs=1e-12)
        mids = 0.5 * (sol.nodes[:-1] + sol.nodes[1:])
        flux = coeff(mids) * sol.du - Rhs1D("f3").F(mids)
        assert np.max(np.abs(flux - sol.flux_const)) < 1e-10

    def test_degenerate_grid(self):
        with pytest.raises(DegenerateGrid):
            solve_exact_1d(lambda x: np.ones_like(x), Rhs1D("f2"), 0.0, 0.0, 1)

    def test_nonpositive_coefficient(self):
        with pytest.raises(NonpositiveCoefficient):
            solve_exact_1d(lambda x: -np.ones_like(x), Rhs1D("f2"), 0.0, 0.0, 100)

    def test_derivative_at_nodes_linear(self):
        sol = solve_exact_1d(lambda x: np.ones_like(x), Rhs1D("f2"), 0.0, 0.0, 1001)
        du = derivative_at_nodes(sol)
        # u = 2x(1-x) -> u' = 2 - 4x exactly at interior nodes.
        want = 2.0 - 4.0 * sol.nodes
        assert np.max(np.abs(du[1:-1] - want[1:-1])) < 1e-10


class TestCorrectAndErrors:
    def test_correction_is_identity_for_constant_coefficient(self):
        field = EffectiveField1D.build(UNIT, ExtensionSpec1D("c", 0.02))
        sol = solve_exact_1d(field.averaged, Rhs1D("f2"), 0.0, 0.0, 2001)
        assert np.allclose(correct_1d(sol, field), sol.u, atol=1e-13)

    def test_correction_magnitude_bound(self):
        coeff = build_coeff_1d("a2", open_stream())
        field = EffectiveField1D.build(coeff, ExtensionSpec1D("c", 0.008))
        sol = solve_exact_1d(field.averaged, Rhs1D("f1"), 0.0, 0.0, 20001)
        hat = correct_1d(sol, field)
        du = derivative_at_nodes(sol)
        w = field.corrector(sol.nodes)
        bound = 0.008 * np.max(np.abs(du)) * np.max(np.abs(w))
        assert np.max(np.abs(hat - sol.u)) <= bound * (1.0 + 1e-12)

    def test_errors_constant_shift(self):
        u = np.sin(np.linspace(0.0, 3.0, 501))
        e2, einf = errors_1d(u + 0.25, u)
        assert e2 == pytest.approx(0.25, abs=1e-12)
        assert einf == pytest.approx(0.25, abs=1e-12)

    def test_errors_sine_norms(self):
        x = np.linspace(0.0, 1.0, 200001)
        e2, einf = errors_1d(np.sin(np.pi * x), np.zeros_like(x))
        assert e2 == pytest.approx(np.sqrt(0.5), abs=1e-8)
        assert einf == pytest.approx(1.0, abs=1e-10)

    def test_errors_grid_mismatch(self):
        with pytest.raises(GridMismatch):
            errors_1d(np.zeros(5), np.zeros(6))
