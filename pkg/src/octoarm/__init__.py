"""Static equilibrium of a tapered soft arm bent by a coiled polymer muscle."""

from .errors import CoilModelError, IntegrationDiverged, ModelDomainError, SingularConstraintError
from .loads import FluidParams, HydrostaticMode, LoadField, TcamLayout, TcamSegment, assemble_loads
from .rod import (
    Configuration,
    MaterialParams,
    RodGeometry,
    StrainField,
    det_deformation_gradient,
    reconstruct,
    tractions_from_strains,
)
from .scenario import ScenarioError, ScenarioFile, parse_scenario, parse_scenario_text
from .solver import (
    ArmScenario,
    EquilibriumSolution,
    SolverSettings,
    SweepResult,
    residual,
    solve_static,
    tension_sweep,
)
from .tcam import (
    TcamParams,
    contraction_response,
    integrate_temperature,
    linearization_coefficient,
    mech_state,
    tension,
)

__version__ = "0.1.0"
