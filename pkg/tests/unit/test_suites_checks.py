"""
Unit tests for the suite checks on small grids.

Tests cover:
1. Exact identities pass at their default tolerances on a small grid
2. Case names and tables produced by each suite
3. Seeded checks are reproducible
4. --L adds a row to the residual-vs-L table
5. Refinement ratios over three grids and the vector-mode exponent of the solver
"""

from __future__ import annotations

import pytest

from neck_lab.core.types import CaseStatus, ModeKind
from neck_lab.inputs.schemas import SuiteConfig
from neck_lab.spectral.killing import killing_exponent
from neck_lab.spectral.modes import ModeCoefficient
from neck_lab.suites import bryant, cmc, cones4d, heat, lichnerowicz, symmetry, warped


def _statuses(cases: list) -> dict[str, CaseStatus]:
    return {case.name: case.status for case in cases}


class TestExactIdentities:
    """Checks whose measurements sit at roundoff level."""

    @pytest.mark.parametrize(
        "check",
        [
            warped.check_cylinder_identities,
            warped.check_cylinder_operator,
            heat.check_boundary_vanishing,
            heat.check_kernel_mass,
            heat.check_boundary_bound,
            symmetry.check_structure_constants,
            symmetry.check_procrustes,
            lichnerowicz.check_mode_residuals,
            lichnerowicz.check_identity,
            cmc.check_newton,
        ],
    )
    def test_check_passes(self, check, small_config: SuiteConfig) -> None:
        """Every case of the check passes."""
        cases = check(small_config)
        assert cases
        failed = [(case.name, case.measured, case.detail) for case in cases if not case.passed]
        assert failed == []


class TestCaseNames:
    """Names of the cases each check reports."""

    def test_warped_names_per_dimension(self, small_config: SuiteConfig) -> None:
        """Three cylinder identities per configured dimension."""
        names = list(_statuses(warped.check_cylinder_identities(small_config)))
        assert names == [
            "warped.scalar_n4",
            "warped.reference_scalar_n4",
            "warped.reference_radius_n4",
            "warped.scalar_n5",
            "warped.reference_scalar_n5",
            "warped.reference_radius_n5",
        ]

    def test_cone_names_per_phi(self, small_config: SuiteConfig) -> None:
        """One margin case per Phi plus the rate inequalities."""
        names = set(_statuses(cones4d.check_cones(small_config)))
        assert {"cones4d.cone_margin_phi1", "cones4d.cone_margin_phi10"} <= names

    def test_neutral_names(self, small_config: SuiteConfig) -> None:
        """omega_bar, beta_bar and the growing mode each get a case."""
        names = set(_statuses(lichnerowicz.check_neutral(small_config)))
        assert names == {
            "lichnerowicz.neutral_omega_bar",
            "lichnerowicz.neutral_beta_bar",
            "lichnerowicz.neutral_growing",
        }

    def test_glue_ratio_per_consecutive_epsilon(self, small_config: SuiteConfig) -> None:
        """Three epsilons give two ratios, each expected to be 10."""
        cases = symmetry.check_glue_linearity(small_config)
        assert [case.name for case in cases] == ["symmetry.glue_ratio_1", "symmetry.glue_ratio_2"]
        assert all(case.expected == pytest.approx(10.0) for case in cases)


class TestLichnerowiczRates:
    """Refinement ratios and fitted exponents of the mode solver."""

    def test_convergence_names_per_ratio(self, small_config: SuiteConfig) -> None:
        """Three grids give two ratios per kind, each expected to be 4."""
        names = [case.name for case in lichnerowicz.check_convergence(small_config)]
        assert names[:2] == ["lichnerowicz.convergence_omega_1", "lichnerowicz.convergence_omega_2"]
        assert len(names) == 2 * len(lichnerowicz.MANUFACTURED)

    def test_both_refinement_ratios_near_four(self) -> None:
        """Each halving of dz and dt divides the omega error by 4 within 0.3."""
        mode = ModeCoefficient(4, ModeKind.OMEGA, lichnerowicz.MANUFACTURED[ModeKind.OMEGA])
        ratios, _ = lichnerowicz.refinement_ratios(mode)
        assert len(ratios) == 2
        assert ratios == [pytest.approx(4.0, abs=0.3)] * 2

    @pytest.mark.parametrize("n", [4, 6])
    def test_vector_exponent_from_trajectory(self, n: int) -> None:
        """The evolved z-independent vector mode grows like (-t)^{-(n-3)/(2(n-2))}."""
        slope = lichnerowicz.vector_trajectory_exponent(n)
        assert slope == pytest.approx(killing_exponent(n), abs=1e-6)

    def test_vector_exponent_sees_the_potential(self) -> None:
        """The fitted slope follows the dimension, so it comes from the evolved potential."""
        assert lichnerowicz.vector_trajectory_exponent(5) != pytest.approx(
            lichnerowicz.vector_trajectory_exponent(4), abs=1e-3
        )


class TestReproducibility:
    """Seeded checks repeat exactly."""

    def test_trace_identity_repeats(self, small_config: SuiteConfig) -> None:
        """Two runs with one seed measure the same value."""
        first = cones4d.check_trace_identity(small_config)
        second = cones4d.check_trace_identity(small_config)
        assert [case.measured for case in first] == [case.measured for case in second]

    def test_representation_depends_on_seed(self, small_config: SuiteConfig) -> None:
        """A different seed draws different initial data."""
        other = small_config.model_copy(update={"seed": small_config.seed + 1})
        first = heat.check_representation(small_config)[0].measured
        second = heat.check_representation(other)[0].measured
        assert first != second


class TestTables:
    """Plot data attached to cases."""

    def test_bryant_table(self, small_config: SuiteConfig) -> None:
        """The conserved-quantity case carries the (z, phi, f, R) profile."""
        cases = {case.name: case for case in bryant.check_normalization(small_config)}
        table = cases["bryant.conserved"].table
        assert table is not None
        assert list(table.columns) == ["z", "phi", "f", "R"]

    def test_convergence_table_on_chi(self, small_config: SuiteConfig) -> None:
        """Only the chi convergence case carries its trajectory."""
        cases = lichnerowicz.check_convergence(small_config)
        with_table = [case.name for case in cases if case.table is not None]
        assert with_table == ["lichnerowicz.convergence_chi_1"]

    @pytest.mark.slow
    def test_extra_length_adds_row(self, small_config: SuiteConfig) -> None:
        """--L 80 appends L = 80 to the residual-vs-L table."""
        config = small_config.model_copy(update={"length": 80.0})
        cases = {case.name: case for case in lichnerowicz.check_profile_decay(config)}
        table = cases["lichnerowicz.profile_decay"].table
        assert table is not None
        assert table["L"].tolist() == [20.0, 40.0, 80.0]
