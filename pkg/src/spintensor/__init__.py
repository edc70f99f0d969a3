"""Spin-tensor calculus over four-dimensional charts.

Chiral (2-component) and Dirac (4-component) spin-tensor component
arithmetic, the double cover of the restricted Lorentz group, frame
fields with their transition machinery, and construction of the unique
metric spinor connection from a metric/tetrad scenario.  Everything the
library claims is checkable as a numerical residual; the test suite and
the CLI both drive the same verifiers.
"""

from .tensor_core import (
    TensorSignature,
    SpinTensorValue,
    MetricMatrices,
    tau,
    contract,
    raise_lower,
    outer,
)
from .lorentz_cover import PauliBasis, LorentzMatrix, phi, random_sl2c
from .frames import (
    Chart,
    ScalarField,
    MatrixField,
    FrameField,
    StructuralConstants,
    FrameTransition,
    ThetaParameters,
    lie_derivative,
    structural_constants,
    theta_parameters,
    transform_components,
)
from .chiral import (
    ChiralConstants,
    ChiralScenario,
    SpinorConnection,
    SpinTensorField,
    canonical_chiral_constants,
    covariant_derivative,
    build_chiral_metric_connection,
    verify_chiral_identities,
    verify_chiral_concordance,
    transform_connection,
)
from .dirac import (
    DiracConstants,
    DiracFrameKind,
    canonical_dirac_constants,
    embed_chiral_frame,
    frame_inversion,
    classify_frame,
    verify_dirac_identities,
)
from .dirac_connection import (
    ChiralitySplit,
    DiracScenario,
    chirality_split,
    build_dirac_metric_connection,
    restrict_to_chiral,
    verify_dirac_concordance,
)
from .scenarios import (
    ScenarioSpec,
    SpecError,
    bundled_scenario,
    bundled_scenario_names,
    chiral_scenario_from_spec,
    dirac_scenario_from_spec,
    load_scenario_spec,
)
from .cli import ResidualReport, parse_expression, run

__version__ = "0.1.0"

__all__ = [
    "TensorSignature",
    "SpinTensorValue",
    "MetricMatrices",
    "tau",
    "contract",
    "raise_lower",
    "outer",
    "PauliBasis",
    "LorentzMatrix",
    "phi",
    "random_sl2c",
    "Chart",
    "ScalarField",
    "MatrixField",
    "FrameField",
    "StructuralConstants",
    "FrameTransition",
    "ThetaParameters",
    "lie_derivative",
    "structural_constants",
    "theta_parameters",
    "transform_components",
    "ChiralConstants",
    "ChiralScenario",
    "SpinorConnection",
    "SpinTensorField",
    "canonical_chiral_constants",
    "covariant_derivative",
    "build_chiral_metric_connection",
    "verify_chiral_identities",
    "verify_chiral_concordance",
    "transform_connection",
    "DiracConstants",
    "DiracFrameKind",
    "canonical_dirac_constants",
    "embed_chiral_frame",
    "frame_inversion",
    "classify_frame",
    "verify_dirac_identities",
    "ChiralitySplit",
    "DiracScenario",
    "chirality_split",
    "build_dirac_metric_connection",
    "restrict_to_chiral",
    "verify_dirac_concordance",
    "ScenarioSpec",
    "SpecError",
    "bundled_scenario",
    "bundled_scenario_names",
    "chiral_scenario_from_spec",
    "dirac_scenario_from_spec",
    "load_scenario_spec",
    "ResidualReport",
    "parse_expression",
    "run",
]
