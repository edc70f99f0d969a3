"""Scenario catalog: spec files, deformations and oracles.

A scenario spec is a JSON document describing a chart, a coordinate
metric, an optional tangent frame and torsion (all as expression
grids), sample points, tolerances and an optional seeded frame
deformation.  Loaders turn specs into ChiralScenario / DiracScenario
objects; the deformation helpers produce smooth seeded transitions as
matrix exponentials of low-degree polynomial matrix fields.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from scipy.linalg import expm

from .chiral import ChiralScenario
from .dirac_connection import DiracScenario
from .expressions import ParseError
from .frames import Chart, FrameField, FrameTransition, MatrixField, matmul_fields
from .tensor_core import SpinTensorValue, TensorSignature
from .frames import transform_components

SPEC_SCHEMA = "scenario-spec/1"

DEFAULT_TOLERANCES = {"identity": 1e-12, "concordance": 1e-6, "covariance": 1e-5}


class SpecError(ValueError):
    """Malformed scenario spec (bad file, schema, field or expression)."""


@dataclass
class ScenarioSpec:
    """Validated scenario description."""

    name: str
    mode: str  # "chiral" | "dirac" | "both"
    metric: object  # "minkowski" or 4x4 grid of expression strings
    frame: object = None  # None (identity) or 4x4 grid of expressions
    torsion: object = None
    sample_points: list = field(default_factory=list)
    fd_step: float = 1e-4
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    seed: int = 0
    deform: dict = None

    @property
    def modes(self):
        return ("chiral", "dirac") if self.mode == "both" else (self.mode,)


def load_scenario_spec(source) -> ScenarioSpec:
    """Load and validate a spec from a path, JSON text or dict."""
    if isinstance(source, dict):
        data = source
    else:
        try:
            with open(source, "r", encoding="utf-8") as handle:
                data = json.load(handle)
        except OSError as exc:
            raise SpecError(f"cannot read spec: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SpecError(f"spec is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SpecError("spec must be a JSON object")
    if data.get("schema") != SPEC_SCHEMA:
        raise SpecError(f"spec schema must be {SPEC_SCHEMA!r}, got {data.get('schema')!r}")
    name = data.get("name")
    if not isinstance(name, str) or not name:
        raise SpecError("spec needs a non-empty 'name'")
    mode = data.get("mode", "both")
    if mode not in ("chiral", "dirac", "both"):
        raise SpecError("mode must be 'chiral', 'dirac' or 'both'")
    metric = data.get("metric", "minkowski")
    if metric != "minkowski":
        _require_grid(metric, (4, 4), "metric")
    frame = data.get("frame")
    if frame is not None:
        _require_grid(frame, (4, 4), "frame")
    torsion = data.get("torsion")
    if torsion is not None:
        _require_grid(torsion, (4, 4, 4), "torsion")
    points = data.get("sample_points")
    if not isinstance(points, list) or not points:
        raise SpecError("spec needs a non-empty 'sample_points' list")
    for p in points:
        if not (isinstance(p, list) and len(p) == 4):
            raise SpecError("each sample point must be a list of 4 numbers")
    fd_step = float(data.get("fd_step", 1e-4))
    if not 0.0 < fd_step <= 1e-1:
        raise SpecError("fd_step must lie in (0, 0.1]")
    tolerances = dict(DEFAULT_TOLERANCES)
    tolerances.update(data.get("tolerances", {}))
    deform = data.get("deform")
    if deform is not None and not isinstance(deform, dict):
        raise SpecError("'deform' must be an object")
    spec = ScenarioSpec(
        name=name,
        mode=mode,
        metric=metric,
        frame=frame,
        torsion=torsion,
        sample_points=[[float(c) for c in p] for p in points],
        fd_step=fd_step,
        tolerances=tolerances,
        seed=int(data.get("seed", 0)),
        deform=deform,
    )
    # fail fast on bad expressions
    try:
        _metric_field(spec)
        _frame_field(spec)
        _torsion_field(spec)
    except ParseError as exc:
        raise SpecError(f"bad expression in spec: {exc}") from exc
    return spec


def _require_grid(grid, shape, label):
    arr = np.asarray(grid, dtype=object)
    if arr.shape != shape:
        raise SpecError(f"{label} must be a {'x'.join(map(str, shape))} array")
    for cell in arr.ravel():
        if not isinstance(cell, (str, int, float)):
            raise SpecError(f"{label} entries must be numbers or expression strings")


def bundled_scenario_names():
    package = resources.files("spintensor") / "scenarios"
    return sorted(p.name[:-5] for p in package.iterdir() if p.name.endswith(".json"))


def bundled_scenario(name) -> ScenarioSpec:
    package = resources.files("spintensor") / "scenarios"
    target = package / f"{name}.json"
    if not target.is_file():
        raise SpecError(
            f"unknown bundled scenario {name!r}; have {bundled_scenario_names()}"
        )
    return load_scenario_spec(json.loads(target.read_text(encoding="utf-8")))


# --- fields from specs -----------------------------------------------


def _metric_field(spec: ScenarioSpec) -> MatrixField:
    if spec.metric == "minkowski":
        return MatrixField.constant(np.diag([1.0, -1.0, -1.0, -1.0]))
    return MatrixField.from_expressions(spec.metric)


def _frame_field(spec: ScenarioSpec) -> FrameField:
    if spec.frame is None:
        return FrameField.coordinate()
    return FrameField.from_expressions(spec.frame)


def _torsion_field(spec: ScenarioSpec):
    if spec.torsion is None:
        return None
    return MatrixField.from_expressions(spec.torsion)


def frame_metric_field(g_coord: MatrixField, frame: FrameField) -> MatrixField:
    """Frame components of a coordinate metric: U^T g U with partials."""
    u = frame.components
    return matmul_fields(matmul_fields(_transpose_field(u), g_coord), u)


def _transpose_field(mat: MatrixField) -> MatrixField:
    if mat.partials is not None:
        return MatrixField(
            lambda p: mat(p).T, partials=lambda a, p: mat.partial(a, p).T
        )
    return MatrixField(lambda p: mat(p).T)


def chart_from_spec(spec: ScenarioSpec) -> Chart:
    return Chart(sample_points=spec.sample_points, fd_step=spec.fd_step)


def chiral_scenario_from_spec(spec: ScenarioSpec) -> ChiralScenario:
    scenario = _base_scenario(spec, ChiralScenario)
    if spec.deform:
        trans = spec_transition(spec, spinor_dim=2)
        scenario = deform_scenario(scenario, trans)
    return scenario


def dirac_scenario_from_spec(spec: ScenarioSpec) -> DiracScenario:
    scenario = _base_scenario(spec, DiracScenario)
    if spec.deform:
        chiral_trans = spec_transition(spec, spinor_dim=2)
        trans = embedded_dirac_transition(chiral_trans)
        scenario = deform_scenario(scenario, trans)
    return scenario


def _base_scenario(spec: ScenarioSpec, cls):
    chart = chart_from_spec(spec)
    frame = _frame_field(spec)
    g = frame_metric_field(_metric_field(spec), frame)
    torsion = _torsion_field(spec)
    return cls.canonical(chart, g=g, frame=frame, torsion=torsion)


def spec_transition(spec: ScenarioSpec, spinor_dim=2) -> FrameTransition:
    deform = spec.deform or {}
    return random_transition(
        seed=int(deform.get("seed", spec.seed)),
        spinor_dim=spinor_dim,
        scale=float(deform.get("scale", 0.15)),
        tangent=bool(deform.get("tangent", True)),
    )


# --- seeded smooth transitions ---------------------------------------


def _polynomial_exp_field(rng, dim, scale, real):
    """exp of a degree-1 polynomial matrix field: smooth, invertible."""

    def draw():
        raw = rng.standard_normal((dim, dim))
        if not real:
            raw = raw + 1j * rng.standard_normal((dim, dim))
        return scale * raw

    const = draw()
    linear = [0.5 * draw() for _ in range(4)]

    def evaluate(point):
        mat = const.copy()
        for a in range(4):
            mat = mat + float(point[a]) * linear[a]
        return expm(mat)

    return MatrixField(evaluate)


def random_transition(seed, spinor_dim=2, scale=0.15, tangent=True) -> FrameTransition:
    """Seeded smooth frame transition (tangent + spinor parts)."""
    rng = np.random.default_rng(seed)
    spin = _polynomial_exp_field(rng, spinor_dim, scale, real=False)
    if tangent:
        tan = _polynomial_exp_field(rng, 4, scale, real=True)
    else:
        tan = MatrixField.constant(np.eye(4))
    return FrameTransition(tan, spin, spinor_dim=spinor_dim)


def embedded_dirac_transition(chiral: FrameTransition) -> FrameTransition:
    """Lift a chiral transition to the Dirac bundle.

    The spinor part becomes blockdiag(Ss, (Ss^dagger)^-1): the last two
    Dirac frame vectors are the barred dual co-frame, which transforms
    with the conjugate inverse transpose.  This keeps the canonical
    spin-metric block layout, the chirality operator and the pairing
    intact, so the deformed frame stays canonically chiral.
    """
    if chiral.spinor_dim != 2:
        raise ValueError("expected a chiral transition")

    def spin(point):
        top = np.asarray(chiral.Ss(point), dtype=complex)
        out = np.zeros((4, 4), dtype=complex)
        out[:2, :2] = top
        out[2:, 2:] = np.linalg.inv(top.conj().T)
        return out

    return FrameTransition(chiral.S, MatrixField(spin), spinor_dim=4)


# --- scenario deformation --------------------------------------------


def deform_scenario(scenario, trans: FrameTransition):
    """Scenario as seen from the frame deformed by the transition.

    Every structure field is re-expressed with transform_components;
    the frame field itself picks up the tangent transition on the
    right.
    """
    if trans.spinor_dim != scenario.spinor_dim:
        raise ValueError("transition spinor dimension does not match scenario")
    new_frame = FrameField(matmul_fields(scenario.frame.components, trans.S))

    def moved(mat, signature):
        def evaluate(point):
            value = SpinTensorValue(signature, np.asarray(mat(point), dtype=complex))
            return transform_components(value, trans, point, "forward").components

        return MatrixField(evaluate)

    sdim = scenario.spinor_dim
    g = MatrixField(
        lambda p: np.real(
            moved(scenario.g, TensorSignature(n=2, spinor_dim=sdim))(p)
        )
    )
    d = moved(scenario.d, TensorSignature(beta=2, spinor_dim=sdim))
    dbar = moved(scenario.dbar, TensorSignature(gamma=2, spinor_dim=sdim))
    torsion = None
    if scenario.torsion is not None:
        torsion = MatrixField(
            lambda p: np.real(
                moved(scenario.torsion, TensorSignature(m=1, n=2, spinor_dim=sdim))(p)
            )
        )
    chart = scenario.chart
    if isinstance(scenario, DiracScenario):
        gamma = moved(
            scenario.gamma, TensorSignature(alpha=1, beta=1, n=1, spinor_dim=4)
        )
        h = moved(scenario.H, TensorSignature(alpha=1, beta=1, spinor_dim=4))
        dd = moved(scenario.D, TensorSignature(beta=1, gamma=1, spinor_dim=4))
        return DiracScenario(
            chart, new_frame, g, d=d, dbar=dbar, gamma=gamma, H=h, D=dd, torsion=torsion
        )
    big_g = moved(scenario.G, TensorSignature(alpha=1, nu=1, n=1, spinor_dim=2))
    return ChiralScenario(
        chart, new_frame, g, d=d, dbar=dbar, G=big_g, torsion=torsion
    )


# --- independent cross-check -----------------------------------------


def coordinate_christoffel(g_coord: MatrixField, point, step=1e-4):
    """Plain finite-difference Christoffel symbols of a coordinate metric.

    Gamma[i, k, j] with derivative direction i; deliberately computed
    from raw central differences of the metric entries, independent of
    the frame/Lie-derivative machinery, to serve as an oracle.
    """
    point = np.asarray(point, dtype=float)
    g = np.real(np.asarray(g_coord(point)))
    ginv = np.linalg.inv(g)
    dg = np.empty((4, 4, 4))
    for a in range(4):
        offset = np.zeros(4)
        offset[a] = step
        plus = np.real(np.asarray(g_coord(point + offset)))
        minus = np.real(np.asarray(g_coord(point - offset)))
        dg[a] = (plus - minus) / (2.0 * step)
    return 0.5 * np.einsum(
        "kr,ijr->ikj", ginv, dg.transpose(0, 1, 2)
    ) + 0.5 * np.einsum("kr,jri->ikj", ginv, dg) - 0.5 * np.einsum(
        "kr,rij->ikj", ginv, dg
    )
