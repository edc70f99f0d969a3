"""Dirac-bundle constants, identity suite, frame kinds and inversions.

The Dirac bundle is the direct sum of a chiral bundle and its Hermitian
conjugate.  In a canonically orthonormal chiral frame the structure
constants are: the 4x4 spin-metric d, the chirality operator H, the
Hermitian pairing D and the gamma-symbols whose fixed-tangent-index
slices are the Dirac matrices.  Frame kinds (orthonormal / chiral /
self-adjoint and their "anti" twins) are decided by exact matrix match,
and the P/T/PT inversions are constant spinor transitions between them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chiral import G_UPPER
from .frames import FrameTransition, transform_components
from .lorentz_cover import MINKOWSKI
from .tensor_core import MetricMatrices, SpinTensorValue, TensorSignature, tau

D_DIRAC = np.array(
    [
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
        [0, 0, 0, -1],
        [0, 0, 1, 0],
    ],
    dtype=complex,
)

H_DIRAC = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)

DD_DIRAC = np.array(
    [
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
    ],
    dtype=complex,
)

# gamma[a, b, m]: upper spinor index a, lower spinor index b, tangent m;
# gamma[:, :, m] is the m-th Dirac matrix
GAMMA = np.zeros((4, 4, 4), dtype=complex)
GAMMA[:, :, 0] = [
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [1, 0, 0, 0],
    [0, 1, 0, 0],
]
GAMMA[:, :, 1] = [
    [0, 0, 0, 1],
    [0, 0, 1, 0],
    [0, -1, 0, 0],
    [-1, 0, 0, 0],
]
GAMMA[:, :, 2] = [
    [0, 0, 0, -1j],
    [0, 0, 1j, 0],
    [0, 1j, 0, 0],
    [-1j, 0, 0, 0],
]
GAMMA[:, :, 3] = [
    [0, 0, 1, 0],
    [0, 0, 0, -1],
    [-1, 0, 0, 0],
    [0, 1, 0, 0],
]


@dataclass(frozen=True)
class DiracConstants:
    """Structure matrices of one Dirac frame with derived companions."""

    d_lower: np.ndarray
    d_upper: np.ndarray
    dbar_lower: np.ndarray
    dbar_upper: np.ndarray
    H: np.ndarray
    D_lower: np.ndarray  # D[i, ibar]
    D_upper: np.ndarray
    gamma: np.ndarray  # [a, b, m], lower tangent index
    gamma_inv: np.ndarray  # [a, b, m], raised tangent index
    gamma_herm_upper: np.ndarray  # [i, ibar, m]: both spinor indices upper
    gamma_herm_lower: np.ndarray  # [i, ibar, m]: spinor lower, tangent upper
    g_lower: np.ndarray
    g_upper: np.ndarray

    @classmethod
    def from_primary(cls, d_lower, H, D_lower, gamma, g_lower):
        d_lower = np.asarray(d_lower, dtype=complex)
        H = np.asarray(H, dtype=complex)
        D_lower = np.asarray(D_lower, dtype=complex)
        gamma = np.asarray(gamma, dtype=complex)
        g_lower = np.asarray(g_lower, dtype=float)
        d_upper = np.linalg.inv(d_lower)
        dbar_lower = np.conj(d_lower)
        dbar_upper = np.linalg.inv(dbar_lower)
        g_upper = np.linalg.inv(g_lower)
        # raised tangent index: gamma^{am}_b = sum_k gamma^a_{bk} g^{km}
        gamma_inv = np.einsum("abk,km->abm", gamma, g_upper)
        # D^{i ibar} = sum d^{ia} D_{a abar} dbar^{abar ibar}
        D_upper = np.einsum("ia,ab,bj->ij", d_upper, D_lower, dbar_upper)
        # gamma^{i ibar}_m = sum_a gamma^i_{am} D^{a ibar}
        gamma_herm_upper = np.einsum("iam,aj->ijm", gamma, D_upper)
        # gamma^m_{i ibar} = sum_a gamma^{am}_i D_{a ibar}
        gamma_herm_lower = np.einsum("aim,aj->ijm", gamma_inv, D_lower)
        return cls(
            d_lower=d_lower,
            d_upper=d_upper,
            dbar_lower=dbar_lower,
            dbar_upper=dbar_upper,
            H=H,
            D_lower=D_lower,
            D_upper=D_upper,
            gamma=gamma,
            gamma_inv=gamma_inv,
            gamma_herm_upper=gamma_herm_upper,
            gamma_herm_lower=gamma_herm_lower,
            g_lower=g_lower,
            g_upper=g_upper,
        )

    def metrics(self) -> MetricMatrices:
        return MetricMatrices(
            g_lower=self.g_lower,
            g_upper=self.g_upper,
            d_lower=self.d_lower,
            d_upper=self.d_upper,
            dbar_lower=self.dbar_lower,
            dbar_upper=self.dbar_upper,
        )

    def transform(self, trans: FrameTransition, point=(0.0, 0.0, 0.0, 0.0)):
        """Constants of the frame reached through a spinor transition.

        Primary matrices are re-expressed per their signatures; derived
        companions are rebuilt, which keeps all inverse relations exact.
        """
        d_sig = TensorSignature(beta=2, spinor_dim=4)
        h_sig = TensorSignature(alpha=1, beta=1, spinor_dim=4)
        dd_sig = TensorSignature(beta=1, gamma=1, spinor_dim=4)
        gamma_sig = TensorSignature(alpha=1, beta=1, n=1, spinor_dim=4)
        g_sig = TensorSignature(n=2, spinor_dim=4)
        moved = {
            "d_lower": transform_components(
                SpinTensorValue(d_sig, self.d_lower), trans, point
            ).components,
            "H": transform_components(
                SpinTensorValue(h_sig, self.H), trans, point
            ).components,
            "D_lower": transform_components(
                SpinTensorValue(dd_sig, self.D_lower), trans, point
            ).components,
            "gamma": transform_components(
                SpinTensorValue(gamma_sig, self.gamma), trans, point
            ).components,
            "g_lower": np.real(
                transform_components(
                    SpinTensorValue(g_sig, self.g_lower), trans, point
                ).components
            ),
        }
        return DiracConstants.from_primary(
            moved["d_lower"], moved["H"], moved["D_lower"], moved["gamma"], moved["g_lower"]
        )


def canonical_dirac_constants() -> DiracConstants:
    constants = DiracConstants.from_primary(
        D_DIRAC, H_DIRAC, DD_DIRAC, GAMMA, MINKOWSKI
    )
    residuals = verify_dirac_identities(constants)
    worst = max(residuals.values())
    if worst != 0.0:
        raise AssertionError(f"canonical Dirac identity suite residual {worst}")
    return constants


def verify_dirac_identities(constants: DiracConstants) -> dict:
    """Residuals of the full Dirac identity suite.

    Exactly zero on the canonical tables (Gaussian-integer entries);
    still zero to rounding after any consistent frame transform.
    """
    d = constants.d_lower
    du = constants.d_upper
    h = constants.H
    dd = constants.D_lower
    ddu = constants.D_upper
    gm = constants.gamma
    gi = constants.gamma_inv
    ghu = constants.gamma_herm_upper
    ghl = constants.gamma_herm_lower
    g = constants.g_lower.astype(complex)
    ginv = constants.g_upper.astype(complex)
    eye = np.eye(4, dtype=complex)

    def residual(lhs, rhs=None):
        diff = lhs if rhs is None else lhs - rhs
        return float(np.max(np.abs(diff)))

    out = {}
    # {gamma_i, gamma_j} = 2 g_ij
    anti = np.einsum("abi,bcj->acij", gm, gm) + np.einsum("abj,bci->acij", gm, gm)
    out["gamma-anticommutator"] = residual(anti, 2.0 * np.einsum("ij,ac->acij", g, eye))
    # sum gamma d d gamma = 4 g
    out["gamma-spin-metric-trace"] = residual(
        np.einsum("abi,ae,bh,ehj->ij", gm, d, du, gm), 4.0 * g
    )
    # sum gamma^a_{bi} d_{ae} d^{bh} = gamma^h_{ei}
    out["gamma-spin-metric-conjugation"] = residual(
        np.einsum("abi,ae,bh->hei", gm, d, du), gm
    )
    # tangent raise consistency (gamma_inv definition re-derived)
    out["gamma-tangent-raise"] = residual(
        gi, np.einsum("abk,km->abm", gm, ginv)
    )
    # sum gamma^h_{ej} gamma^{ei}_h = 4 delta^i_j
    out["gamma-inverse-trace"] = residual(
        np.einsum("hej,ehi->ij", gm, gi), 4.0 * eye
    )
    # sum gamma^{ai}_b d_{ae} d^{bh} = gamma^{hi}_e
    out["gamma-inverse-spin-metric-conjugation"] = residual(
        np.einsum("abi,ae,bh->hei", gi, d, du), gi
    )
    # sum gamma^{ai}_b d d gamma^{ej}_h = 4 g^{ij}
    out["gamma-inverse-spin-metric-trace"] = residual(
        np.einsum("abi,ae,bh,ehj->ij", gi, d, du, gi), 4.0 * ginv
    )
    # gamma_m H + H gamma_m = 0
    out["gamma-chirality-anticommutation"] = residual(
        np.einsum("abm,bc->acm", gm, h) + np.einsum("ab,bcm->acm", h, gm)
    )
    # sum d_{ab} H^b_c = sum H^b_a d_{bc}
    out["spin-metric-chirality-symmetry"] = residual(d @ h, h.T @ d)
    # sum D_{i abar} conj(H^abar_ibar) = -sum H^a_i D_{a ibar}
    out["pairing-chirality-antisymmetry"] = residual(dd @ np.conj(h), -(h.T @ dd))
    # completeness: sum_mn gamma gamma g^{mn} = dd - HH + dd-part - HdHd
    rhs = (
        np.einsum("ah,eb->abeh", eye, eye)
        - np.einsum("ah,eb->abeh", h, h)
        + np.einsum("ae,bh->abeh", du, d)
        - np.einsum("ar,re,bs,sh->abeh", h, du, d, h)
    )
    out["gamma-completeness-lower"] = residual(
        np.einsum("abm,ehn,mn->abeh", gm, gm, ginv), rhs
    )
    out["gamma-completeness-upper"] = residual(
        np.einsum("abm,ehn,mn->abeh", gi, gi, g), rhs
    )
    out["gamma-completeness-mixed"] = residual(
        np.einsum("abm,ehm->abeh", gi, gm), rhs
    )
    # pairing inverse relations
    out["pairing-inverse"] = max(
        residual(np.einsum("ja,ia->ij", dd, ddu), eye),
        residual(np.einsum("aj,ai->ji", dd, ddu), eye),
    )
    # hermitian gamma constructions re-derived
    out["hermitian-gamma-upper-construction"] = residual(
        ghu, np.einsum("iam,aj->ijm", gm, ddu)
    )
    out["hermitian-gamma-lower-construction"] = residual(
        ghl, np.einsum("aim,aj->ijm", gi, dd)
    )
    # hermitian gamma reality: each fixed-m slice is Hermitian
    out["hermitian-gamma-reality"] = max(
        residual(ghu, np.conj(ghu.transpose(1, 0, 2))),
        residual(ghl, np.conj(ghl.transpose(1, 0, 2))),
    )
    # sum D_{i abar} conj(gamma^abar_{ibar m}) = sum gamma^a_{im} D_{a ibar}
    out["pairing-gamma-symmetry"] = residual(
        np.einsum("ia,abm->ibm", dd, np.conj(gm)),
        np.einsum("aim,ab->ibm", gm, dd),
    )
    # sum d_{ia} gamma^a_{jm} = -sum gamma^a_{im} d_{aj}
    out["spin-metric-gamma-antisymmetry"] = residual(
        np.einsum("ia,ajm->ijm", d, gm), -np.einsum("aim,aj->ijm", gm, d)
    )
    # chirality operator algebra
    out["chirality-involution"] = residual(h @ h, eye)
    out["chirality-square-trace"] = residual(np.trace(h @ h), 4.0)
    out["chirality-tracelessness"] = residual(np.trace(h), 0.0)
    # sum H^q_b d^{ba} = sum d^{qb} H^a_b
    out["chirality-spin-metric-upper-symmetry"] = residual(h @ du, du @ h.T)
    # pairing is invariant under the bar-swap involution (Hermitian matrix)
    dd_value = SpinTensorValue(TensorSignature(beta=1, gamma=1, spinor_dim=4), dd)
    out["pairing-bar-swap-invariance"] = residual(
        tau(dd_value).components, dd_value.components
    )
    return out


@dataclass(frozen=True)
class DiracFrameKind:
    """Frame classification along the three structure matrices."""

    orthonormality: str  # "ortho" | "anti-ortho"
    chirality: str  # "chiral" | "anti-chiral"
    adjointness: str  # "self-adjoint" | "anti-self-adjoint"


def classify_frame(d_lower, H, D_lower) -> DiracFrameKind:
    """Classify a Dirac frame by exact match against the reference matrices."""

    def pick(matrix, reference, positive, negative):
        matrix = np.asarray(matrix, dtype=complex)
        if np.array_equal(matrix, reference):
            return positive
        if np.array_equal(matrix, -reference):
            return negative
        raise ValueError("matrix matches neither reference sign")

    return DiracFrameKind(
        orthonormality=pick(d_lower, D_DIRAC, "ortho", "anti-ortho"),
        chirality=pick(H, H_DIRAC, "chiral", "anti-chiral"),
        adjointness=pick(D_lower, DD_DIRAC, "self-adjoint", "anti-self-adjoint"),
    )


_INVERSIONS = {
    # frame swap: new frame vector i is column i in the old frame
    "P": np.array(
        [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=complex
    ),
    "T": np.array(
        [[0, 0, -1j, 0], [0, 0, 0, -1j], [1j, 0, 0, 0], [0, 1j, 0, 0]], dtype=complex
    ),
    "PT": np.diag([1j, 1j, -1j, -1j]).astype(complex),
}


def frame_inversion(kind: str) -> FrameTransition:
    """Constant spinor transition for the P, T or PT frame inversion."""
    if kind not in _INVERSIONS:
        raise ValueError("kind must be one of 'P', 'T', 'PT'")
    return FrameTransition.constant(Ss=_INVERSIONS[kind], spinor_dim=4)


def embed_chiral_frame() -> dict:
    """Canonical embedding of a chiral frame into the Dirac bundle.

    Frame vectors 1, 2 are the chiral frame; vectors 3, 4 are the
    barred dual co-frame.  Asserts the block layout of the embedded
    structure matrices: the Dirac spin-metric splits into the chiral
    spin-metric and its negated inverse-transpose block, and the
    top-right gamma blocks are exactly the chiral mixed symbols.
    """
    constants = canonical_dirac_constants()
    d2 = np.array([[0, 1], [-1, 0]], dtype=complex)
    expected_d = np.zeros((4, 4), dtype=complex)
    expected_d[:2, :2] = d2
    expected_d[2:, 2:] = -d2
    if not np.array_equal(constants.d_lower, expected_d):
        raise AssertionError("embedded spin-metric does not have the chiral block layout")
    if not np.array_equal(constants.H, np.diag([1, 1, -1, -1]).astype(complex)):
        raise AssertionError("chirality operator is not the block sign matrix")
    # top-right gamma block carries the chiral mixed symbols through the
    # dual-frame pairing; bottom-left is the tangent-raised conjugate
    if not np.array_equal(constants.gamma[:2, 2:, :], G_UPPER):
        raise AssertionError("gamma top-right blocks do not match the chiral symbols")
    expected_bottom = np.einsum("mq,jiq->ijm", constants.g_upper, np.conj(G_UPPER))
    if not np.array_equal(constants.gamma[2:, :2, :], expected_bottom):
        raise AssertionError("gamma bottom-left blocks do not match the paired symbols")
    kind = classify_frame(constants.d_lower, constants.H, constants.D_lower)
    if kind != DiracFrameKind("ortho", "chiral", "self-adjoint"):
        raise AssertionError("embedded frame does not classify canonically")
    return {
        "d": constants.d_lower,
        "H": constants.H,
        "D": constants.D_lower,
        "gamma": constants.gamma,
        "kind": kind,
    }
