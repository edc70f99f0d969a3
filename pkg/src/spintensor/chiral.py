"""Chiral spin-tensor constants and the metric spinor connection.

Canonical structure data: the antisymmetric 2x2 spin-metric d, its
conjugate dbar, and the mixed symbols G linking tangent vectors to
spinor bilinears (the slices of G with the tangent index fixed are the
Pauli matrices).  The builder produces the unique connection (Gamma, A,
Abar) annihilating g, d, dbar and G; concordance verifiers turn every
defining property into a residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frames import (
    DEFAULT_FD_STEP,
    Chart,
    FrameField,
    FrameTransition,
    MatrixField,
    ThetaParameters,
    lie_matrix,
    structural_constants,
)
from .lorentz_cover import MINKOWSKI, PAULI
from .tensor_core import (
    BARRED,
    SPINOR,
    TANGENT,
    MetricMatrices,
    SpinTensorValue,
    TensorSignature,
    apply_matrix,
)

D_CHIRAL = np.array([[0, 1], [-1, 0]], dtype=complex)

# G[i, ibar, q]: both-upper mixed symbols, equal to sigma_q[i, ibar]
G_UPPER = np.transpose(np.asarray(PAULI.sigma), (1, 2, 0)).copy()


@dataclass(frozen=True)
class ChiralConstants:
    """Canonical chiral structure matrices and their companions."""

    d_lower: np.ndarray
    d_upper: np.ndarray
    dbar_lower: np.ndarray
    dbar_upper: np.ndarray
    G_upper: np.ndarray  # [i, ibar, q]
    G_lower: np.ndarray  # [q, i, ibar]
    g_lower: np.ndarray
    g_upper: np.ndarray

    def metrics(self) -> MetricMatrices:
        return MetricMatrices(
            g_lower=self.g_lower,
            g_upper=self.g_upper,
            d_lower=self.d_lower,
            d_upper=self.d_upper,
            dbar_lower=self.dbar_lower,
            dbar_upper=self.dbar_upper,
        )


def compute_g_lower_symbols(g_upper_mixed, g_upper, d_lower, dbar_lower):
    """Both-lower mixed symbols from the both-upper ones.

    G^q_{i ibar} = sum_{j jbar k} G^{j jbar}_k g^{kq} d_{ji} dbar_{jbar ibar}.
    """
    return np.einsum(
        "jbk,kq,ji,bc->qic", g_upper_mixed, g_upper, d_lower, dbar_lower
    )


def canonical_chiral_constants() -> ChiralConstants:
    d_lower = D_CHIRAL.copy()
    d_upper = np.linalg.inv(d_lower)
    dbar_lower = np.conj(d_lower)
    dbar_upper = np.linalg.inv(dbar_lower)
    g_lower = MINKOWSKI.copy()
    g_upper = MINKOWSKI.copy()
    g_lower_symbols = compute_g_lower_symbols(G_UPPER, g_upper, d_lower, dbar_lower)
    constants = ChiralConstants(
        d_lower=d_lower,
        d_upper=d_upper,
        dbar_lower=dbar_lower,
        dbar_upper=dbar_upper,
        G_upper=G_UPPER.copy(),
        G_lower=g_lower_symbols,
        g_lower=g_lower,
        g_upper=g_upper,
    )
    residuals = verify_chiral_identities(constants)
    worst = max(residuals.values())
    if worst != 0.0:
        raise AssertionError(f"canonical chiral identity suite residual {worst}")
    return constants


def verify_chiral_identities(constants: ChiralConstants) -> dict:
    """Residuals of the mixed-symbol identity suite.

    All identities hold exactly (Gaussian-integer entries) on the
    canonical tables and to rounding on consistently transformed ones.
    """
    gu = constants.G_upper
    gl = constants.G_lower
    g = constants.g_lower
    ginv = constants.g_upper
    d = constants.d_lower
    du = constants.d_upper
    db = constants.dbar_lower
    dbu = constants.dbar_upper

    def residual(lhs, rhs):
        return float(np.max(np.abs(lhs - rhs)))

    out = {}
    # reality: G^{i ibar}_q = conj(G^{ibar i}_q), same for the lower symbols
    out["g-symbol-reality"] = max(
        residual(gu, np.conj(gu.transpose(1, 0, 2))),
        residual(gl, np.conj(gl.transpose(0, 2, 1))),
    )
    # lower symbols re-derived from the upper ones
    out["g-symbol-lowering"] = residual(
        gl, compute_g_lower_symbols(gu, ginv, d, db)
    )
    # sum_pq g_pq G^p G^q = 2 d dbar
    out["spin-metric-from-symbols"] = residual(
        np.einsum("pq,pix,qjy->ijxy", g, gl, gl),
        2.0 * np.einsum("ij,xy->ijxy", d, db),
    )
    # sum d dbar G G = 2 g
    out["metric-from-symbols"] = residual(
        np.einsum("ij,xy,ixp,jyq->pq", d, db, gu, gu), 2.0 * g
    )
    # upper-index versions of the two above
    out["spin-metric-upper-from-symbols"] = residual(
        np.einsum("pq,ixp,jyq->ijxy", ginv, gu, gu),
        2.0 * np.einsum("ij,xy->ijxy", du, dbu),
    )
    out["metric-upper-from-symbols"] = residual(
        np.einsum("ij,xy,pix,qjy->pq", du, dbu, gl, gl), 2.0 * ginv
    )
    # trace orthogonality and completeness
    out["symbol-trace-orthogonality"] = residual(
        np.einsum("ixp,qix->qp", gu, gl), 2.0 * np.eye(4)
    )
    out["symbol-completeness"] = residual(
        np.einsum("ixq,qjy->ijxy", gu, gl),
        2.0 * np.einsum("ij,xy->ijxy", np.eye(2), np.eye(2)),
    )
    return out


# --- scenarios and fields --------------------------------------------


@dataclass
class SpinTensorField:
    """Spin-tensor-valued field: one signature, array-valued components."""

    signature: TensorSignature
    components: MatrixField

    @classmethod
    def constant(cls, signature, array):
        return cls(signature, MatrixField.constant(np.asarray(array, dtype=complex)))

    def at(self, point) -> SpinTensorValue:
        return SpinTensorValue(self.signature, self.components(point))


class ChiralScenario:
    """Everything needed to build and test a chiral metric connection.

    g holds the frame components of the metric (coordinate metric
    contracted with the frame when the frame is non-holonomic); d, dbar
    and G are the spinor structure component fields, canonical constants
    by default and deformed only through frame transitions.
    """

    spinor_dim = 2

    def __init__(self, chart: Chart, frame: FrameField, g: MatrixField,
                 d=None, dbar=None, G=None, torsion=None):
        self.chart = chart
        self.frame = frame
        self.g = g
        self.d = d if d is not None else MatrixField.constant(D_CHIRAL)
        self.dbar = dbar if dbar is not None else MatrixField.constant(np.conj(D_CHIRAL))
        if G is not None:
            self.G = G
        else:
            # The mixed symbols are tied to g by the structure identities;
            # in a non-orthonormal frame they carry the orthonormal factor
            # of g on the tangent slot instead of staying canonical.
            from .tetrads import derived_symbol_field

            self.G = derived_symbol_field(g, G_UPPER)
        self.torsion = torsion
        self.validate()

    @classmethod
    def canonical(cls, chart: Chart, g=None, frame=None, torsion=None):
        frame = frame if frame is not None else FrameField.coordinate()
        g = g if g is not None else MatrixField.constant(MINKOWSKI)
        return cls(chart, frame, g, torsion=torsion)

    def validate(self):
        for point in self.chart.sample_points:
            gval = np.asarray(self.g(point))
            if np.max(np.abs(gval - gval.T)) > 1e-10:
                raise ValueError(f"metric is not symmetric at {point}")
            eigs = np.linalg.eigvalsh(np.real(gval))
            if not (np.sum(eigs > 0) == 1 and np.sum(eigs < 0) == 3):
                raise ValueError(f"metric signature is not (+,-,-,-) at {point}")
            self.frame(point)  # det check
            if self.torsion is not None:
                t = np.asarray(self.torsion(point))
                if np.max(np.abs(t + t.transpose(0, 2, 1))) > 1e-12:
                    raise ValueError(f"torsion is not antisymmetric at {point}")

    def fd_step(self, override=None):
        return self.chart.fd_step if override is None else override

    def torsion_at(self, point):
        if self.torsion is None:
            return np.zeros((4, 4, 4))
        return np.asarray(self.torsion(point), dtype=float)


@dataclass(frozen=True)
class SpinorConnection:
    """Connection coefficient arrays at one point.

    Gamma[i, k, j] is the tangent coefficient with derivative direction
    i, upper index k and lower index j; A[r, i, j] / Abar[r, i, j] are
    the spinor and conjugate-spinor coefficient matrices per direction.
    """

    Gamma: np.ndarray
    A: np.ndarray
    Abar: np.ndarray
    spinor_dim: int = 2

    def __post_init__(self):
        for name, shape in (
            ("Gamma", (4, 4, 4)),
            ("A", (4, self.spinor_dim, self.spinor_dim)),
            ("Abar", (4, self.spinor_dim, self.spinor_dim)),
        ):
            arr = np.asarray(getattr(self, name), dtype=complex).copy()
            if arr.shape != shape:
                raise ValueError(f"{name} must have shape {shape}")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @classmethod
    def zero(cls, spinor_dim=2):
        return cls(
            np.zeros((4, 4, 4)),
            np.zeros((4, spinor_dim, spinor_dim)),
            np.zeros((4, spinor_dim, spinor_dim)),
            spinor_dim=spinor_dim,
        )


def metric_tangent_connection(scenario, point, fd_step=None) -> np.ndarray:
    """Tangent coefficients Gamma[i, k, j] of the metric connection.

    Gamma^k_ij = sum_r g^{kr}/2 (L_i g_jr + L_j g_ri - L_r g_ij)
               + c^k_ij/2
               - sum_rs g^{kr} (c^s_ir/2) g_sj - sum_rs g^{kr} (c^s_jr/2) g_si
               + T^k_ij/2
               - sum_rs g^{kr} (T^s_ir/2) g_sj - sum_rs g^{kr} (T^s_jr/2) g_si
    with c the structural constants of the frame and T the torsion.
    """
    step = scenario.fd_step(fd_step)
    g = np.real(np.asarray(scenario.g(point)))
    ginv = np.linalg.inv(g)
    lg = np.stack(
        [np.real(lie_matrix(scenario.g, scenario.frame, r, point, step)) for r in range(4)]
    )  # lg[r, a, b] = L_r(g)_{ab}
    c = structural_constants(scenario.frame, point, step).c
    t = scenario.torsion_at(point)

    gamma = 0.5 * (
        np.einsum("kr,ijr->ikj", ginv, lg)
        + np.einsum("kr,jri->ikj", ginv, lg)
        - np.einsum("kr,rij->ikj", ginv, lg)
    )
    # c enters with the bracket order [frame_i, frame_j]; the sign is
    # pinned by torsion-freeness asym(Gamma) = c, not by metric
    # compatibility (the c-part is g-antisymmetric on its own).
    gamma += 0.5 * np.einsum("kij->ikj", c)
    gamma -= 0.5 * np.einsum("kr,sir,sj->ikj", ginv, c, g)
    gamma -= 0.5 * np.einsum("kr,sjr,si->ikj", ginv, c, g)
    gamma += 0.5 * np.einsum("kij->ikj", t)
    gamma -= 0.5 * np.einsum("kr,sir,sj->ikj", ginv, t, g)
    gamma -= 0.5 * np.einsum("kr,sjr,si->ikj", ginv, t, g)
    return gamma


def build_chiral_metric_connection(
    scenario: ChiralScenario, point, fd_step=None, reality_tol=1e-9
) -> SpinorConnection:
    """The unique connection annihilating g, d, dbar and G.

    The spinor coefficients come from contracting the tangent
    coefficients with the mixed symbols:

    A^i_rj    = 1/4 sum G^{i sbar}_p Gamma^p_rq G^q_{j sbar}
              - 1/4 sum L_r(G^{i sbar}_q) G^q_{j sbar}
              - 1/4 (sum L_r(dbar_{jbar ibar}) dbar^{ibar jbar}) delta^i_j
    Abar^ibar_r jbar mirrors this with the barred slot of G and the
    unbarred spin-metric trace.  For real metric data Abar = conj(A).
    """
    step = scenario.fd_step(fd_step)
    gamma = metric_tangent_connection(scenario, point, fd_step=step)

    g = np.real(np.asarray(scenario.g(point)))
    ginv = np.linalg.inv(g)
    gu = np.asarray(scenario.G(point), dtype=complex)
    d = np.asarray(scenario.d(point), dtype=complex)
    db = np.asarray(scenario.dbar(point), dtype=complex)
    du = np.linalg.inv(d)
    dbu = np.linalg.inv(db)
    gl = compute_g_lower_symbols(gu, ginv, d, db)

    lgu = np.stack([lie_matrix(scenario.G, scenario.frame, r, point, step) for r in range(4)])
    ld = np.stack([lie_matrix(scenario.d, scenario.frame, r, point, step) for r in range(4)])
    ldb = np.stack([lie_matrix(scenario.dbar, scenario.frame, r, point, step) for r in range(4)])

    eye = np.eye(2, dtype=complex)
    a = 0.25 * np.einsum("ibp,rpq,qjb->rij", gu, gamma, gl)
    a -= 0.25 * np.einsum("ribq,qjb->rij", lgu, gl)
    a -= 0.25 * np.einsum("rji,ij,ab->rab", ldb, dbu, eye)

    abar = 0.25 * np.einsum("sip,rpq,qsj->rij", gu, gamma, gl)
    abar -= 0.25 * np.einsum("rsiq,qsj->rij", lgu, gl)
    abar -= 0.25 * np.einsum("rji,ij,ab->rab", ld, du, eye)

    scale = 1.0 + np.max(np.abs(a))
    if np.max(np.abs(abar - np.conj(a))) > reality_tol * scale:
        raise AssertionError("conjugate spinor coefficients are not the conjugate of A")
    return SpinorConnection(gamma, a, abar, spinor_dim=2)


def covariant_derivative(
    x: SpinTensorField, conn: SpinorConnection, scenario, point, fd_step=None
) -> SpinTensorValue:
    """Covariant derivative of a spin-tensor field at one point.

    Returns the type (..|..|m, n+1) value whose last axis is the
    derivative direction: the Lie-derivative term plus +A / -A on
    contravariant / covariant spinor slots, +Abar / -Abar on barred
    slots and +Gamma / -Gamma on tangent slots.
    """
    sig = x.signature
    if sig.spinor_dim != conn.spinor_dim:
        raise ValueError("field and connection spinor dimensions differ")
    step = scenario.fd_step(fd_step)
    arr = np.asarray(x.components(point), dtype=complex)
    out = np.stack(
        [lie_matrix(x.components, scenario.frame, r, point, step) for r in range(4)],
        axis=-1,
    ).astype(complex)
    coeff = {SPINOR: conn.A, BARRED: conn.Abar, TANGENT: conn.Gamma}
    for axis, (family, up) in enumerate(sig.slots):
        mats = coeff[family]
        for r in range(4):
            if up:
                out[..., r] += apply_matrix(arr, axis, mats[r], "left")
            else:
                out[..., r] -= apply_matrix(arr, axis, mats[r], "right")
    new_sig = TensorSignature(
        alpha=sig.alpha, beta=sig.beta, nu=sig.nu, gamma=sig.gamma,
        m=sig.m, n=sig.n + 1, spinor_dim=sig.spinor_dim,
    )
    return SpinTensorValue(new_sig, out)


def verify_chiral_concordance(
    conn_at, scenario: ChiralScenario, points=None, fd_step=None
) -> dict:
    """Residual report for the chiral concordance conditions.

    conn_at is either a single SpinorConnection (used at every point)
    or a callable point -> SpinorConnection.  Residuals: max absolute
    covariant derivative of g, d, dbar, G, the metric trace condition
    sum g^{qp} nabla_r g_{qp}, and the symbol-sandwich condition
    sum G nabla g G + (i<->j) = 0.
    """
    points = points if points is not None else scenario.chart.sample_points
    step = scenario.fd_step(fd_step)
    fields = {
        "metric": SpinTensorField(TensorSignature(n=2), scenario.g),
        "spin-metric": SpinTensorField(TensorSignature(beta=2), scenario.d),
        "conjugate-spin-metric": SpinTensorField(TensorSignature(gamma=2), scenario.dbar),
        "mixed-symbols": SpinTensorField(TensorSignature(alpha=1, nu=1, n=1), scenario.G),
    }
    out = {f"nabla-{name}": 0.0 for name in fields}
    out["metric-trace"] = 0.0
    out["symbol-sandwich"] = 0.0
    for point in points:
        conn = conn_at(point) if callable(conn_at) else conn_at
        grads = {}
        for name, fld in fields.items():
            grad = covariant_derivative(fld, conn, scenario, point, fd_step=step)
            grads[name] = grad.components
            out[f"nabla-{name}"] = max(out[f"nabla-{name}"], float(np.max(np.abs(grad.components))))
        g = np.real(np.asarray(scenario.g(point)))
        ginv = np.linalg.inv(g)
        dg = grads["metric"]  # [q, p, r]
        trace = np.einsum("qp,qpr->r", ginv, dg)
        out["metric-trace"] = max(out["metric-trace"], float(np.max(np.abs(trace))))
        gu = np.asarray(scenario.G(point), dtype=complex)
        d = np.asarray(scenario.d(point), dtype=complex)
        db = np.asarray(scenario.dbar(point), dtype=complex)
        gl = compute_g_lower_symbols(gu, ginv, d, db)
        sandwich = np.einsum("aix,abr,bjy->ixjyr", gl, dg, gl) + np.einsum(
            "ajx,abr,biy->ixjyr", gl, dg, gl
        )
        out["symbol-sandwich"] = max(out["symbol-sandwich"], float(np.max(np.abs(sandwich))))
    return out


def transform_connection(
    conn: SpinorConnection, trans: FrameTransition, theta: ThetaParameters, point
) -> SpinorConnection:
    """Map a tilde-frame connection to the untilde frame.

    Gamma^k_ij = sum S^k_a T^b_j T^c_i tilde-Gamma^a_cb + theta^k_ij,
    with the spinor transitions and vartheta for A and their conjugates
    for Abar.  theta must be computed with Lie derivatives along the
    untilde frame.
    """
    s = np.asarray(trans.S(point), dtype=float)
    t = np.asarray(trans.T(point), dtype=float)
    ss = np.asarray(trans.Ss(point), dtype=complex)
    ts = np.asarray(trans.Ts(point), dtype=complex)
    gamma = np.einsum("ka,bj,ci,cab->ikj", s, t, t, conn.Gamma) + theta.theta
    a = np.einsum("ka,bj,ci,cab->ikj", ss, ts, t.astype(complex), conn.A) + theta.vartheta
    abar = (
        np.einsum("ka,bj,ci,cab->ikj", np.conj(ss), np.conj(ts), t.astype(complex), conn.Abar)
        + np.conj(theta.vartheta)
    )
    return SpinorConnection(gamma, a, abar, spinor_dim=conn.spinor_dim)
