from dataclasses import replace

import numpy as np
import pytest

from octoarm import ArmScenario, FluidParams, SolverSettings, StrainField, residual, solve_static, tension_sweep
from octoarm.loads import weight
from octoarm.rod import reconstruct, section_properties
from octoarm.solver import tension_steps


def quiet(scenario):
    return replace(scenario, gravity=False, include_fluid=False)


class TestResidual:
    def test_reference_state_without_loads(self, default_scenario):
        res = residual(StrainField.reference(201), quiet(default_scenario), 0.0)
        assert res.max_equilibrium == 0.0
        assert np.abs(res.beta).max() == 0.0

    def test_gravity_only_residual_is_weight_density(self, default_scenario):
        scen = replace(default_scenario, include_fluid=False)
        g, mat = scen.geometry, scen.material
        sf = StrainField.reference(g.node_count)
        res = residual(sf, scen, 0.0)
        _, w = weight(reconstruct(g, sf), sf, g, mat)
        area_ref = section_properties(g, 1.0)[0][0]
        scale = g.length_m / (mat.young_modulus_Pa * area_ref)
        np.testing.assert_allclose(res.translation[:-1] / scale, 0.5 * (w[1:] + w[:-1]), rtol=1e-12)

    def test_converged_solution_has_small_residual(self, default_sweep, default_scenario):
        result, _ = default_sweep
        t, sol = list(result)[20]
        res = residual(sol.strain_field, default_scenario, t)
        assert res.max_equilibrium < default_scenario.solver.tol_residual


class TestSolveStatic:
    def test_zero_load_identity(self, default_scenario):
        sol = solve_static(quiet(default_scenario), 0.0)
        assert sol.diagnostics.converged and sol.diagnostics.iterations <= 2
        ref = StrainField.reference(201)
        np.testing.assert_array_equal(sol.strain_field.stacked(), ref.stacked())
        np.testing.assert_array_equal(sol.configuration.position[:, 1], 0.0)

    def test_relaxation_does_not_change_answer(self):
        base = ArmScenario(solver=SolverSettings(node_count=101))
        tips = [
            solve_static(replace(base, solver=replace(base.solver, relaxation=w)), 12.0).tip_position_m
            for w in (0.3, 0.8)
        ]
        np.testing.assert_allclose(tips[0], tips[1], atol=1e-9)

    def test_iteration_cap_returns_flagged_best_iterate(self, default_scenario):
        scen = replace(default_scenario, solver=replace(default_scenario.solver, max_iterations=3))
        sol = solve_static(scen, 20.0)
        assert not sol.diagnostics.converged
        assert sol.diagnostics.iterations <= 3

    def test_initial_guess_must_match_grid(self, default_scenario):
        with pytest.raises(ValueError):
            solve_static(default_scenario, 1.0, StrainField.reference(11))

    @pytest.mark.slow
    def test_grid_refinement(self, default_sweep):
        result, _ = default_sweep
        coarse = result.solutions[-1].tip_position_m
        fine = solve_static(ArmScenario(solver=SolverSettings(node_count=401)), 20.0).tip_position_m
        assert np.linalg.norm(fine - coarse) / np.linalg.norm(fine) < 5e-3


class TestSweep:
    def test_steps(self):
        assert len(tension_steps(0.0, 20.0, 0.5)) == 41
        with pytest.raises(ValueError):
            tension_steps(1.0, 0.0, 0.5)

    def test_default_sweep_converges(self, default_sweep):
        result, _ = default_sweep
        assert result.converged and len(result) == 41
        assert max(sol.diagnostics.iterations for sol in result.solutions) < 100

    def test_tip_rises_with_tension(self, default_sweep):
        heights = default_sweep[0].tip_heights()
        assert np.all(np.diff(heights) > 0)

    def test_faster_flow_lowers_tip_at_high_tension(self, default_sweep, fast_flow_sweep):
        slow, fast = default_sweep[0], fast_flow_sweep[0]
        tensions = np.array(slow.tensions)
        high = tensions >= 9.0
        assert np.all(fast.tip_heights()[high] < slow.tip_heights()[high])

    def test_cold_start_threads_match_warm_start(self, default_scenario, default_sweep):
        cold = replace(default_scenario, solver=replace(default_scenario.solver, warm_start=False))
        result = tension_sweep(cold, (9.0, 10.0), 0.5, max_workers=3)
        warm = {t: sol for t, sol in default_sweep[0]}
        for t, sol in result:
            np.testing.assert_allclose(sol.tip_position_m, warm[t].tip_position_m, atol=1e-9)

    def test_strict_sweep_stops_at_first_failure(self, default_scenario):
        scen = replace(default_scenario, solver=replace(default_scenario.solver, max_iterations=2))
        result = tension_sweep(scen, (5.0, 6.0), 0.5, strict=True)
        assert result.partial and len(result) == 1 and not result.converged

    def test_no_fluid_no_gravity_matches_quiet_arm(self, default_scenario):
        sol = solve_static(quiet(default_scenario), 10.0)
        assert sol.diagnostics.converged
        assert sol.tip_height_m > 0


class TestFluidScenario:
    def test_fluid_params_flow_into_loads(self, default_scenario):
        scen = replace(default_scenario, fluid=FluidParams(free_stream_mps=0.0), gravity=False)
        sol = solve_static(scen, 0.0)
        assert sol.diagnostics.iterations <= 2
