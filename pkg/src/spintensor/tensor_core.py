"""Multi-index spin-tensor component containers and index arithmetic.

A spin-tensor of type (alpha,beta|nu,gamma|m,n) carries alpha
contravariant and beta covariant spinor indices, nu/gamma barred spinor
indices and m/n tangent indices.  Components are stored densely in the
canonical axis order

    (contravariant spinor, covariant spinor,
     contravariant barred, covariant barred,
     contravariant tangent, covariant tangent).

Spinor indices run 1..spinor_dim in the public accessors (0-based in
storage), tangent indices run 0..3 everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TANGENT_DIM = 4

# index families, in canonical storage order of their (up, down) blocks
SPINOR = "spinor"
BARRED = "barred"
TANGENT = "tangent"


@dataclass(frozen=True)
class TensorSignature:
    """Type (alpha,beta|nu,gamma|m,n) of a spin-tensor."""

    alpha: int = 0
    beta: int = 0
    nu: int = 0
    gamma: int = 0
    m: int = 0
    n: int = 0
    spinor_dim: int = 2

    def __post_init__(self):
        for count in (self.alpha, self.beta, self.nu, self.gamma, self.m, self.n):
            if count < 0:
                raise ValueError("index counts must be non-negative")
        if self.spinor_dim not in (2, 4):
            raise ValueError("spinor_dim must be 2 or 4")

    @property
    def slots(self):
        """Canonical list of (family, is_contravariant) per axis."""
        return (
            [(SPINOR, True)] * self.alpha
            + [(SPINOR, False)] * self.beta
            + [(BARRED, True)] * self.nu
            + [(BARRED, False)] * self.gamma
            + [(TANGENT, True)] * self.m
            + [(TANGENT, False)] * self.n
        )

    @property
    def shape(self):
        dims = []
        for family, _ in self.slots:
            dims.append(TANGENT_DIM if family == TANGENT else self.spinor_dim)
        return tuple(dims)

    @property
    def rank(self):
        return self.alpha + self.beta + self.nu + self.gamma + self.m + self.n

    def counts(self):
        return {
            (SPINOR, True): self.alpha,
            (SPINOR, False): self.beta,
            (BARRED, True): self.nu,
            (BARRED, False): self.gamma,
            (TANGENT, True): self.m,
            (TANGENT, False): self.n,
        }

    def with_counts(self, counts):
        return TensorSignature(
            alpha=counts[(SPINOR, True)],
            beta=counts[(SPINOR, False)],
            nu=counts[(BARRED, True)],
            gamma=counts[(BARRED, False)],
            m=counts[(TANGENT, True)],
            n=counts[(TANGENT, False)],
            spinor_dim=self.spinor_dim,
        )

    def block_start(self, family, contravariant):
        """First axis index of the (family, variance) block."""
        start = 0
        for fam, up in (
            (SPINOR, True),
            (SPINOR, False),
            (BARRED, True),
            (BARRED, False),
            (TANGENT, True),
            (TANGENT, False),
        ):
            if (fam, up) == (family, contravariant):
                return start
            start += self.counts()[(fam, up)]
        raise KeyError((family, contravariant))


@dataclass(frozen=True)
class SpinTensorValue:
    """Dense complex component array of one spin-tensor at one point."""

    signature: TensorSignature
    components: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.components, dtype=complex)
        if arr.shape != self.signature.shape:
            raise ValueError(
                f"component shape {arr.shape} does not match "
                f"signature shape {self.signature.shape}"
            )
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "components", arr)

    def entry(self, *indices):
        """Component accessor: spinor indices 1-based, tangent 0-based."""
        slots = self.signature.slots
        if len(indices) != len(slots):
            raise ValueError(f"expected {len(slots)} indices, got {len(indices)}")
        raw = []
        for idx, (family, _) in zip(indices, slots):
            raw.append(idx if family == TANGENT else idx - 1)
        return complex(self.components[tuple(raw)])

    def __eq__(self, other):
        if not isinstance(other, SpinTensorValue):
            return NotImplemented
        return self.signature == other.signature and np.array_equal(
            self.components, other.components
        )


@dataclass(frozen=True)
class MetricMatrices:
    """Metric data used for raising/lowering all three index families."""

    g_lower: np.ndarray
    g_upper: np.ndarray
    d_lower: np.ndarray
    d_upper: np.ndarray
    dbar_lower: np.ndarray
    dbar_upper: np.ndarray

    def __post_init__(self):
        for name in ("g_lower", "g_upper", "d_lower", "d_upper", "dbar_lower", "dbar_upper"):
            arr = np.asarray(getattr(self, name))
            arr = arr.astype(float if name.startswith("g") else complex)
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if np.max(np.abs(self.g_upper @ self.g_lower - np.eye(TANGENT_DIM))) > 1e-12:
            raise ValueError("g_upper is not the inverse of g_lower")
        for low, up in ((self.d_lower, self.d_upper), (self.dbar_lower, self.dbar_upper)):
            if np.max(np.abs(low @ up - np.eye(low.shape[0]))) > 1e-12:
                raise ValueError("spin-metric upper is not the inverse of lower")
        if not np.allclose(self.dbar_lower, np.conj(self.d_lower), atol=1e-12):
            raise ValueError("dbar_lower must be the conjugate of d_lower")

    @classmethod
    def from_lower(cls, g_lower, d_lower):
        g_lower = np.asarray(g_lower, dtype=float)
        d_lower = np.asarray(d_lower, dtype=complex)
        dbar_lower = np.conj(d_lower)
        return cls(
            g_lower=g_lower,
            g_upper=np.linalg.inv(g_lower),
            d_lower=d_lower,
            d_upper=np.linalg.inv(d_lower),
            dbar_lower=dbar_lower,
            dbar_upper=np.linalg.inv(dbar_lower),
        )

    @property
    def spinor_dim(self):
        return self.d_lower.shape[0]


def tau(x: SpinTensorValue) -> SpinTensorValue:
    """Semilinear involution exchanging barred and unbarred spinor blocks.

    The result of type (nu,gamma|alpha,beta|m,n) takes its unbarred
    components from the conjugated barred components of the argument and
    vice versa; tangent slots are untouched.
    """
    sig = x.signature
    new_sig = TensorSignature(
        alpha=sig.nu,
        beta=sig.gamma,
        nu=sig.alpha,
        gamma=sig.beta,
        m=sig.m,
        n=sig.n,
        spinor_dim=sig.spinor_dim,
    )
    u_up = list(range(0, sig.alpha))
    u_down = list(range(sig.alpha, sig.alpha + sig.beta))
    b_up = list(range(sig.alpha + sig.beta, sig.alpha + sig.beta + sig.nu))
    b_down = list(
        range(sig.alpha + sig.beta + sig.nu, sig.alpha + sig.beta + sig.nu + sig.gamma)
    )
    tangent = list(range(sig.alpha + sig.beta + sig.nu + sig.gamma, sig.rank))
    perm = b_up + b_down + u_up + u_down + tangent
    return SpinTensorValue(new_sig, np.conj(np.transpose(x.components, perm)))


def outer(x: SpinTensorValue, y: SpinTensorValue) -> SpinTensorValue:
    """Tensor product, re-sorted into canonical slot order.

    Within each (family, variance) block the slots of x precede those
    of y.
    """
    sx, sy = x.signature, y.signature
    if sx.spinor_dim != sy.spinor_dim:
        raise ValueError("spinor dimensions differ")
    counts = {key: sx.counts()[key] + sy.counts()[key] for key in sx.counts()}
    new_sig = sx.with_counts(counts)
    raw = np.tensordot(x.components, y.components, axes=0)
    # raw axis order: x blocks then y blocks; interleave per block
    perm = []
    for fam, up in (
        (SPINOR, True),
        (SPINOR, False),
        (BARRED, True),
        (BARRED, False),
        (TANGENT, True),
        (TANGENT, False),
    ):
        xs = sx.block_start(fam, up)
        perm.extend(range(xs, xs + sx.counts()[(fam, up)]))
        ys = sy.block_start(fam, up)
        perm.extend(range(sx.rank + ys, sx.rank + ys + sy.counts()[(fam, up)]))
    return SpinTensorValue(new_sig, np.transpose(raw, perm))


def contract(x: SpinTensorValue, slot_a: int, slot_b: int) -> SpinTensorValue:
    """Sum a contravariant slot against a covariant slot of the same family.

    Slots are 0-based axis positions in the canonical storage order.
    """
    slots = x.signature.slots
    fam_a, up_a = slots[slot_a]
    fam_b, up_b = slots[slot_b]
    if fam_a != fam_b:
        raise ValueError(f"cannot contract {fam_a} slot with {fam_b} slot")
    if not (up_a and not up_b):
        raise ValueError("slot_a must be contravariant and slot_b covariant")
    counts = x.signature.counts()
    counts[(fam_a, True)] -= 1
    counts[(fam_a, False)] -= 1
    new_sig = x.signature.with_counts(counts)
    return SpinTensorValue(new_sig, np.trace(x.components, axis1=slot_a, axis2=slot_b))


def _family_metric(metrics: MetricMatrices, family, direction):
    table = {
        (TANGENT, "raise"): metrics.g_upper,
        (TANGENT, "lower"): metrics.g_lower,
        (SPINOR, "raise"): metrics.d_upper,
        (SPINOR, "lower"): metrics.d_lower,
        (BARRED, "raise"): metrics.dbar_upper,
        (BARRED, "lower"): metrics.dbar_lower,
    }
    return table[(family, direction)]


def raise_lower(
    x: SpinTensorValue, slot: int, metrics: MetricMatrices, direction: str
) -> SpinTensorValue:
    """Raise or lower one slot with the metric of its index family.

    The contraction rule is new_j = sum_i X_i M[i, j] with M the upper
    metric for raising and the lower metric for lowering; with the
    convention sum_q d_{iq} d^{qj} = delta_i^j this makes raise after
    lower the identity.  The moved slot lands at the end of its
    destination block.
    """
    if direction not in ("raise", "lower"):
        raise ValueError("direction must be 'raise' or 'lower'")
    slots = x.signature.slots
    family, up = slots[slot]
    if direction == "raise" and up:
        raise ValueError("slot is already contravariant")
    if direction == "lower" and not up:
        raise ValueError("slot is already covariant")
    if family != TANGENT and x.signature.spinor_dim != metrics.spinor_dim:
        raise ValueError("metric spinor dimension mismatch")
    metric = _family_metric(metrics, family, direction)
    counts = x.signature.counts()
    counts[(family, up)] -= 1
    counts[(family, not up)] += 1
    new_sig = x.signature.with_counts(counts)
    moved = np.tensordot(x.components, metric, axes=([slot], [0]))
    # tensordot leaves the new index last; put it at the end of its block
    dest = new_sig.block_start(family, not up) + counts[(family, not up)] - 1
    return SpinTensorValue(new_sig, np.moveaxis(moved, -1, dest))


def apply_matrix(arr: np.ndarray, axis: int, matrix: np.ndarray, side: str) -> np.ndarray:
    """Contract one axis of arr with a matrix, keeping axis position.

    side 'left':  new_i = sum_a M[i, a] arr[..a..]
    side 'right': new_j = sum_a arr[..a..] M[a, j]
    """
    if side == "left":
        out = np.tensordot(matrix, arr, axes=([1], [axis]))
        return np.moveaxis(out, 0, axis)
    if side == "right":
        out = np.tensordot(arr, matrix, axes=([axis], [0]))
        return np.moveaxis(out, -1, axis)
    raise ValueError("side must be 'left' or 'right'")
