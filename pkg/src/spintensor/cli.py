"""Command-line front end: scenario ingestion and residual reports.

Subcommands: verify-identities (constant identity suites, no scenario
needed), build-connection (coefficient tables at the sample points),
concordance (covariant-constancy residual suites), covariance (seeded
frame-deformation transformation-law check) and all.

Exit codes: 0 every check passed, 1 a numerical check failed, 2 the
spec could not be read or parsed.  Flags may also be set through
environment variables with the SPINTENSOR_ prefix (SPINTENSOR_SPEC,
SPINTENSOR_OUT, SPINTENSOR_SEED, SPINTENSOR_FD_STEP,
SPINTENSOR_TOL_SCALE, SPINTENSOR_FORMAT); explicit flags win.

Report schema "residual-report/1": a JSON object with schema, name,
subcommand, seed, timestamp, overall_pass and a checks object mapping
check names to {max_residual, tolerance, passed, points_evaluated}.
Reports are deterministic for a fixed spec and seed up to the
timestamp field.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .chiral import (
    build_chiral_metric_connection,
    canonical_chiral_constants,
    transform_connection,
    verify_chiral_concordance,
    verify_chiral_identities,
)
from .dirac import (
    canonical_dirac_constants,
    embed_chiral_frame,
    frame_inversion,
    verify_dirac_identities,
)
from .dirac_connection import (
    build_dirac_metric_connection,
    chirality_split,
    restrict_to_chiral,
    verify_dirac_concordance,
)
from .expressions import ParseError
from .frames import ScalarField, theta_parameters
from .scenarios import (
    ScenarioSpec,
    SpecError,
    bundled_scenario,
    bundled_scenario_names,
    chiral_scenario_from_spec,
    coordinate_christoffel,
    deform_scenario,
    dirac_scenario_from_spec,
    load_scenario_spec,
    random_transition,
    _metric_field,
)

REPORT_SCHEMA = "residual-report/1"
ENV_PREFIX = "SPINTENSOR_"

SUBCOMMANDS = (
    "verify-identities",
    "build-connection",
    "concordance",
    "covariance",
    "all",
)


def parse_expression(text: str) -> ScalarField:
    """Scalar field over x0..x3 from a DSL expression string."""
    return ScalarField.from_expression(text)


@dataclass
class ResidualReport:
    """Accumulated residual checks for one CLI invocation."""

    name: str
    subcommand: str
    seed: int = 0
    checks: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)

    def record(self, check, max_residual, tolerance, points_evaluated):
        self.checks[check] = {
            "max_residual": float(max_residual),
            "tolerance": float(tolerance),
            "passed": bool(max_residual <= tolerance),
            "points_evaluated": int(points_evaluated),
        }

    def merge(self, other: "ResidualReport"):
        self.checks.update(other.checks)
        self.tables.update(other.tables)

    @property
    def overall_pass(self):
        return all(entry["passed"] for entry in self.checks.values())

    def failing(self):
        return [name for name, entry in self.checks.items() if not entry["passed"]]

    def to_dict(self):
        out = {
            "schema": REPORT_SCHEMA,
            "name": self.name,
            "subcommand": self.subcommand,
            "seed": self.seed,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()),
            "overall_pass": self.overall_pass,
            "checks": self.checks,
        }
        if self.tables:
            out["tables"] = self.tables
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self):
        lines = [f"residual report: {self.name} [{self.subcommand}] seed={self.seed}"]
        width = max((len(k) for k in self.checks), default=0)
        for check in sorted(self.checks):
            entry = self.checks[check]
            status = "PASS" if entry["passed"] else "FAIL"
            lines.append(
                f"  {status}  {check:<{width}}  max={entry['max_residual']:.3e}"
                f"  tol={entry['tolerance']:.1e}  points={entry['points_evaluated']}"
            )
        lines.append(f"overall: {'PASS' if self.overall_pass else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _complex_table(arr):
    arr = np.asarray(arr)
    if np.iscomplexobj(arr):
        return {"re": np.real(arr).tolist(), "im": np.imag(arr).tolist()}
    return {"re": arr.tolist(), "im": np.zeros_like(arr, dtype=float).tolist()}


# --- subcommand bodies ------------------------------------------------


def run_verify_identities(report: ResidualReport, tol_scale=1.0):
    """Constant identity suites, canonically and after P/T/PT inversions."""
    tol = 1e-12 * tol_scale
    chiral = canonical_chiral_constants()
    for check, value in verify_chiral_identities(chiral).items():
        report.record(f"chiral-{check}", value, tol, 1)
    dirac = canonical_dirac_constants()
    for check, value in verify_dirac_identities(dirac).items():
        report.record(f"dirac-{check}", value, tol, 1)
    # chirality_split and embed_chiral_frame raise on any violated
    # identity; a clean return means residual 0 on their whole suites.
    chirality_split(dirac)
    report.record("dirac-chirality-split-suite", 0.0, tol, 1)
    embed_chiral_frame()
    report.record("dirac-chiral-embedding-suite", 0.0, tol, 1)
    origin = (0.0, 0.0, 0.0, 0.0)
    for kind in ("P", "T", "PT"):
        moved = dirac.transform(frame_inversion(kind), origin)
        for check, value in verify_dirac_identities(moved).items():
            report.record(f"dirac-after-{kind}-{check}", value, tol, 1)


def run_build_connection(spec: ScenarioSpec, report: ResidualReport, fd_step=None):
    """Emit coefficient tables at every sample point.

    When the spec uses the coordinate frame, a raw finite-difference
    Christoffel table is emitted next to the tangent coefficients and
    their agreement is recorded as a check.
    """
    has_oracle = spec.frame is None and not spec.deform
    g_coord = _metric_field(spec) if has_oracle else None
    for mode in spec.modes:
        if mode == "chiral":
            scenario = chiral_scenario_from_spec(spec)
            build = build_chiral_metric_connection
        else:
            scenario = dirac_scenario_from_spec(spec)
            build = build_dirac_metric_connection
        entries = []
        worst = 0.0
        for point in scenario.chart.sample_points:
            conn = build(scenario, point, fd_step=fd_step)
            entry = {
                "point": list(point),
                "tangent": np.real(np.asarray(conn.Gamma)).tolist(),
                "spinor": _complex_table(conn.A),
                "conjugate-spinor": _complex_table(conn.Abar),
            }
            if has_oracle:
                oracle = coordinate_christoffel(
                    g_coord, point, step=scenario.fd_step(fd_step)
                )
                entry["tangent-oracle"] = np.asarray(oracle).tolist()
                worst = max(worst, float(np.max(np.abs(conn.Gamma - oracle))))
            entries.append(entry)
        report.tables[f"{mode}-connection"] = entries
        if has_oracle:
            report.record(
                f"{mode}-tangent-oracle",
                worst,
                1e-5,
                len(scenario.chart.sample_points),
            )


def run_concordance(spec: ScenarioSpec, report: ResidualReport, fd_step=None, tol_scale=1.0):
    tol = spec.tolerances["concordance"] * tol_scale
    npoints = len(spec.sample_points)
    for mode in spec.modes:
        if mode == "chiral":
            scenario = chiral_scenario_from_spec(spec)
            residuals = verify_chiral_concordance(
                lambda p: build_chiral_metric_connection(scenario, p, fd_step=fd_step),
                scenario,
                fd_step=fd_step,
            )
        else:
            scenario = dirac_scenario_from_spec(spec)
            residuals = verify_dirac_concordance(
                lambda p: build_dirac_metric_connection(scenario, p, fd_step=fd_step),
                scenario,
                fd_step=fd_step,
            )
        for check, value in residuals.items():
            report.record(f"{mode}-{check}", value, tol, npoints)


def run_covariance(spec: ScenarioSpec, report: ResidualReport, seed=None, fd_step=None, tol_scale=1.0):
    """Transformation-law round trip under a seeded smooth deformation.

    The connection built directly in the deformed frame, mapped back
    through the transformation law with theta-parameters, must agree
    with the connection built in the original frame.
    """
    tol = spec.tolerances["covariance"] * tol_scale
    base_seed = spec.seed if seed is None else seed
    base = chiral_scenario_from_spec(spec)
    step = base.fd_step(fd_step)
    worst = 0.0
    npoints = 0
    for offset in range(3):
        trans = random_transition(seed=base_seed + offset, spinor_dim=2)
        moved = deform_scenario(base, trans)
        for point in base.chart.sample_points:
            conn_moved = build_chiral_metric_connection(moved, point, fd_step=fd_step)
            conn_base = build_chiral_metric_connection(base, point, fd_step=fd_step)
            theta = theta_parameters(trans, base.frame, point, fd_step=step)
            back = transform_connection(conn_moved, trans, theta, point)
            worst = max(
                worst,
                float(np.max(np.abs(back.Gamma - conn_base.Gamma))),
                float(np.max(np.abs(back.A - conn_base.A))),
                float(np.max(np.abs(back.Abar - conn_base.Abar))),
            )
            npoints += 1
    report.record("chiral-transformation-law", worst, tol, npoints)
    if "dirac" in spec.modes:
        dirac = dirac_scenario_from_spec(spec)
        worst = 0.0
        npoints = 0
        for point in dirac.chart.sample_points:
            conn = build_dirac_metric_connection(dirac, point, fd_step=fd_step)
            if spec.deform:
                # deformed embedded frames keep the block layout, so the
                # restriction is still exact; the restriction residual is
                # the covariance statement for the Dirac bundle here.
                restricted = restrict_to_chiral(conn, tol=1e-6)
            else:
                restricted = restrict_to_chiral(conn)
            chiral_conn = build_chiral_metric_connection(
                chiral_scenario_from_spec(spec), point, fd_step=fd_step
            )
            worst = max(worst, float(np.max(np.abs(restricted.A - chiral_conn.A))))
            npoints += 1
        report.record("dirac-chiral-restriction", worst, tol, npoints)


# --- orchestration ----------------------------------------------------


def run(subcommand, spec_path=None, seed=None, fd_step=None, tol_scale=1.0,
        out=None, fmt="json", stream=None):
    """Execute one subcommand; returns the process exit code."""
    stream = stream if stream is not None else sys.stdout
    if subcommand not in SUBCOMMANDS:
        print(f"unknown subcommand {subcommand!r}", file=sys.stderr)
        return 2
    try:
        spec = None
        if subcommand != "verify-identities" or spec_path is not None:
            if spec_path is None:
                if subcommand == "verify-identities":
                    pass
                else:
                    raise SpecError(f"subcommand {subcommand!r} needs --spec")
            else:
                spec = _resolve_spec(spec_path)
        name = spec.name if spec is not None else "canonical-constants"
        report = ResidualReport(
            name=name,
            subcommand=subcommand,
            seed=(seed if seed is not None else (spec.seed if spec else 0)),
        )
        if subcommand in ("verify-identities", "all"):
            run_verify_identities(report, tol_scale=tol_scale)
        if subcommand in ("build-connection", "all") and spec is not None:
            run_build_connection(spec, report, fd_step=fd_step)
        if subcommand in ("concordance", "all") and spec is not None:
            run_concordance(spec, report, fd_step=fd_step, tol_scale=tol_scale)
        if subcommand in ("covariance", "all") and spec is not None:
            run_covariance(spec, report, seed=seed, fd_step=fd_step, tol_scale=tol_scale)
        if subcommand in ("build-connection", "concordance", "covariance") and spec is None:
            raise SpecError(f"subcommand {subcommand!r} needs --spec")
    except (SpecError, ParseError) as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return 2
    payload = report.to_json() if fmt == "json" else report.to_text()
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(payload)
    else:
        stream.write(payload)
    if not report.overall_pass:
        failing = ", ".join(report.failing())
        print(f"failed checks: {failing}", file=sys.stderr)
        return 1
    return 0


def _resolve_spec(spec_path) -> ScenarioSpec:
    if isinstance(spec_path, ScenarioSpec):
        return spec_path
    text = str(spec_path)
    if not text.endswith(".json") and not os.path.exists(text):
        return bundled_scenario(text)
    return load_scenario_spec(text)


def _env_default(name, cast, fallback):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except ValueError:
        return fallback


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spintensor",
        description="Build metric spinor connections and report identity residuals.",
        epilog=(
            "Bundled scenarios: " + ", ".join(bundled_scenario_names()) + ". "
            "Environment overrides: SPINTENSOR_SPEC, SPINTENSOR_OUT, "
            "SPINTENSOR_SEED, SPINTENSOR_FD_STEP, SPINTENSOR_TOL_SCALE, "
            "SPINTENSOR_FORMAT."
        ),
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument(
        "--spec",
        default=_env_default("SPEC", str, None),
        help="scenario spec path or bundled scenario name",
    )
    parser.add_argument("--out", default=_env_default("OUT", str, None),
                        help="write the report here instead of stdout")
    parser.add_argument("--seed", type=int, default=_env_default("SEED", int, None))
    parser.add_argument("--fd-step", type=float,
                        default=_env_default("FD_STEP", float, None))
    parser.add_argument("--tol-scale", type=float,
                        default=_env_default("TOL_SCALE", float, 1.0))
    parser.add_argument("--format", choices=("json", "text"),
                        default=_env_default("FORMAT", str, "json"))
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return run(
        args.subcommand,
        spec_path=args.spec,
        seed=args.seed,
        fd_step=args.fd_step,
        tol_scale=args.tol_scale,
        out=args.out,
        fmt=args.format,
    )


if __name__ == "__main__":
    sys.exit(main())
