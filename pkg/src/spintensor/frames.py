"""Charts, frame fields, derivative providers and frame transitions.

A Chart fixes coordinates x0..x3, sample points and a finite-difference
step.  Scalar and matrix fields evaluate at chart points and expose
partial derivatives: analytic closures when available, central finite
differences otherwise.  Frame fields give the expansion of a tangent
frame in the coordinate frame; transitions between frames carry the
tangent pair (S, T) and the spinor pair (Ss, Ts) together with their
theta-parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .expressions import Expression
from .tensor_core import (
    BARRED,
    SPINOR,
    TANGENT,
    SpinTensorValue,
    apply_matrix,
)

DEFAULT_FD_STEP = 1e-4


@dataclass(frozen=True)
class Chart:
    """Coordinate chart with sample points and FD step."""

    sample_points: tuple = ()
    fd_step: float = DEFAULT_FD_STEP
    coordinate_names: tuple = ("x0", "x1", "x2", "x3")

    def __post_init__(self):
        if not 0.0 < self.fd_step <= 1e-1:
            raise ValueError("fd_step must lie in (0, 0.1]")
        points = tuple(tuple(float(c) for c in p) for p in self.sample_points)
        for p in points:
            if len(p) != 4:
                raise ValueError("sample points must be 4-vectors")
        object.__setattr__(self, "sample_points", points)


class ScalarField:
    """Complex scalar field with optional analytic partials.

    partials, when given, is a callable (a, point) -> d f / d x^a.
    """

    def __init__(self, evaluator, partials=None):
        self.evaluator = evaluator
        self.partials = partials

    @classmethod
    def constant(cls, value):
        value = complex(value)
        return cls(lambda point: value, partials=lambda a, point: 0.0)

    @classmethod
    def from_expression(cls, expr):
        if isinstance(expr, str):
            expr = Expression.parse(expr)
        return cls(expr, partials=lambda a, point: expr.partial(a)(point))

    def __call__(self, point):
        return self.evaluator(point)

    def partial(self, a, point, fd_step=DEFAULT_FD_STEP):
        if self.partials is not None:
            return self.partials(a, point)
        shifted = np.asarray(point, dtype=float)
        step = np.zeros(4)
        step[a] = fd_step
        return (self.evaluator(shifted + step) - self.evaluator(shifted - step)) / (
            2.0 * fd_step
        )


class MatrixField:
    """Array-valued field (any shape) with optional analytic partials."""

    def __init__(self, func, partials=None):
        self.func = func
        self.partials = partials

    @classmethod
    def constant(cls, array):
        array = np.asarray(array)
        zero = np.zeros_like(array, dtype=complex if np.iscomplexobj(array) else float)
        return cls(lambda point: array, partials=lambda a, point: zero)

    @classmethod
    def from_expressions(cls, grid):
        """Build from a nested list of DSL strings / Expressions / numbers."""
        grid = np.asarray(grid, dtype=object)
        shape = grid.shape
        flat = []
        for cell in grid.ravel():
            if isinstance(cell, str):
                flat.append(Expression.parse(cell))
            elif isinstance(cell, Expression):
                flat.append(cell)
            else:
                value = float(cell)
                flat.append(value)

        def evaluate(point):
            out = np.empty(len(flat))
            for k, cell in enumerate(flat):
                out[k] = cell(point) if isinstance(cell, Expression) else cell
            return out.reshape(shape)

        def partials(a, point):
            out = np.zeros(len(flat))
            for k, cell in enumerate(flat):
                if isinstance(cell, Expression):
                    out[k] = cell.partial(a)(point)
            return out.reshape(shape)

        return cls(evaluate, partials=partials)

    def __call__(self, point):
        return np.asarray(self.func(point))

    def partial(self, a, point, fd_step=DEFAULT_FD_STEP):
        if self.partials is not None:
            return np.asarray(self.partials(a, point))
        shifted = np.asarray(point, dtype=float)
        step = np.zeros(4)
        step[a] = fd_step
        plus = np.asarray(self.func(shifted + step))
        minus = np.asarray(self.func(shifted - step))
        return (plus - minus) / (2.0 * fd_step)


def matmul_fields(left: MatrixField, right: MatrixField) -> MatrixField:
    """Pointwise matrix product; analytic partials via the product rule."""

    def evaluate(point):
        return left(point) @ right(point)

    if left.partials is not None and right.partials is not None:

        def partials(a, point):
            return left.partial(a, point) @ right(point) + left(point) @ right.partial(
                a, point
            )

        return MatrixField(evaluate, partials=partials)
    return MatrixField(evaluate)


def inverse_field(mat: MatrixField) -> MatrixField:
    """Pointwise matrix inverse; d(M^-1) = -M^-1 (dM) M^-1."""

    def evaluate(point):
        return np.linalg.inv(mat(point))

    if mat.partials is not None:

        def partials(a, point):
            inv = np.linalg.inv(mat(point))
            return -inv @ mat.partial(a, point) @ inv

        return MatrixField(evaluate, partials=partials)

    return MatrixField(evaluate)


class FrameField:
    """Expansion U[j, i] of frame vector i in the coordinate frame.

    Column i holds the coordinate components of the i-th frame vector.
    """

    def __init__(self, components: MatrixField, det_floor=1e-8):
        self.components = components
        self.det_floor = det_floor

    @classmethod
    def coordinate(cls):
        return cls(MatrixField.constant(np.eye(4)))

    @classmethod
    def from_expressions(cls, grid):
        return cls(MatrixField.from_expressions(grid))

    def __call__(self, point):
        mat = np.asarray(self.components(point), dtype=float)
        if abs(np.linalg.det(mat)) <= self.det_floor:
            raise ValueError(f"frame is singular at {tuple(point)}")
        return mat

    def partial(self, a, point, fd_step=DEFAULT_FD_STEP):
        return self.components.partial(a, point, fd_step)


@dataclass(frozen=True)
class StructuralConstants:
    """Commutator coefficients c[k, i, j] of a frame at one point."""

    c: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.c, dtype=float).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "c", arr)
        if np.max(np.abs(arr + arr.transpose(0, 2, 1))) != 0.0:
            raise ValueError("structural constants must be antisymmetric in i, j")


def lie_derivative(f: ScalarField, frame: FrameField, i: int, point, fd_step=DEFAULT_FD_STEP):
    """Derivative of a scalar along the i-th frame vector."""
    if not 0 <= i <= 3:
        raise ValueError("frame index must be in 0..3")
    u = frame(point)
    total = 0.0
    for j in range(4):
        if u[j, i] != 0.0:
            total += u[j, i] * f.partial(j, point, fd_step)
    return total


def lie_matrix(mat: MatrixField, frame: FrameField, i: int, point, fd_step=DEFAULT_FD_STEP):
    """Entrywise derivative of an array field along frame vector i."""
    u = frame(point)
    total = None
    for j in range(4):
        if u[j, i] != 0.0:
            term = u[j, i] * mat.partial(j, point, fd_step)
            total = term if total is None else total + term
    if total is None:
        total = np.zeros_like(np.asarray(mat(point), dtype=complex))
    return total


def structural_constants(frame: FrameField, point, fd_step=DEFAULT_FD_STEP) -> StructuralConstants:
    """Commutator coefficients of the frame at one point.

    [U_i, U_j]^m = sum_a (U^a_i d_a U^m_j - U^a_j d_a U^m_i), expanded
    back in the frame itself.
    """
    u = frame(point)
    du = np.stack([frame.partial(a, point, fd_step) for a in range(4)])  # du[a, m, i]
    bracket = np.einsum("ai,amj->mij", u, du) - np.einsum("aj,ami->mij", u, du)
    u_inv = np.linalg.inv(u)
    c = np.einsum("km,mij->kij", u_inv, bracket)
    c = 0.5 * (c - c.transpose(0, 2, 1))  # kill FD asymmetry noise exactly
    return StructuralConstants(c)


class FrameTransition:
    """Tangent and spinor transition matrix fields between two frames.

    S maps tilde frame labels to untilde expansions (tilde frame vector
    i is sum_j S[j, i] times untilde frame vector j); T is its pointwise
    inverse.  Ss/Ts are the spinor analogues of dimension spinor_dim.
    """

    def __init__(self, S: MatrixField, Ss: MatrixField, spinor_dim=2, T=None, Ts=None):
        self.S = S
        self.T = inverse_field(S) if T is None else T
        self.Ss = Ss
        self.Ts = inverse_field(Ss) if Ts is None else Ts
        self.spinor_dim = spinor_dim

    @classmethod
    def identity(cls, spinor_dim=2):
        return cls(
            MatrixField.constant(np.eye(4)),
            MatrixField.constant(np.eye(spinor_dim, dtype=complex)),
            spinor_dim=spinor_dim,
        )

    @classmethod
    def constant(cls, S=None, Ss=None, spinor_dim=None):
        if Ss is None and spinor_dim is None:
            spinor_dim = 2
        if Ss is None:
            Ss = np.eye(spinor_dim, dtype=complex)
        Ss = np.asarray(Ss, dtype=complex)
        if spinor_dim is None:
            spinor_dim = Ss.shape[0]
        if S is None:
            S = np.eye(4)
        return cls(
            MatrixField.constant(np.asarray(S, dtype=float)),
            MatrixField.constant(Ss),
            spinor_dim=spinor_dim,
        )

    def check_inverses(self, point, tol=1e-10):
        for a, b, dim in (
            (self.S, self.T, 4),
            (self.Ss, self.Ts, self.spinor_dim),
        ):
            if np.max(np.abs(a(point) @ b(point) - np.eye(dim))) > tol:
                raise ValueError("transition inverse pair is inconsistent")


@dataclass(frozen=True)
class ThetaParameters:
    """Inhomogeneous connection-transformation terms at one point.

    theta[i, k, j] is the tangent parameter with upper index k and
    lower indices (i, j); vartheta is the spinor analogue.
    """

    theta: np.ndarray
    vartheta: np.ndarray


def theta_parameters(
    trans: FrameTransition, frame: FrameField, point, fd_step=DEFAULT_FD_STEP
) -> ThetaParameters:
    """Theta-parameters of a transition relative to a frame.

    theta^k_ij = sum_a S^k_a L_i(T^a_j); the equivalent form
    -sum_a L_i(S^k_a) T^a_j must agree to 1e-6 (it does exactly for
    exact inverse pairs; the check guards inconsistent inputs).
    """
    trans.check_inverses(point)
    out = []
    for s_field, t_field in ((trans.S, trans.T), (trans.Ss, trans.Ts)):
        s = s_field(point)
        t = t_field(point)
        l_t = np.stack([lie_matrix(t_field, frame, i, point, fd_step) for i in range(4)])
        l_s = np.stack([lie_matrix(s_field, frame, i, point, fd_step) for i in range(4)])
        first = np.einsum("ka,iaj->ikj", s, l_t)
        second = -np.einsum("ika,aj->ikj", l_s, t)
        if np.max(np.abs(first - second)) > 1e-6:
            raise ValueError("theta-parameter forms disagree; transition pair inconsistent")
        out.append(first)
    return ThetaParameters(theta=out[0], vartheta=out[1])


def transform_components(
    x: SpinTensorValue, trans: FrameTransition, point, direction="forward"
) -> SpinTensorValue:
    """Re-express spin-tensor components in the other frame.

    forward: from untilde to tilde components (Ts on contravariant
    spinor slots, Ss on covariant, conjugates on barred slots, T on
    contravariant tangent, S on covariant tangent).  backward is the
    inverse map.
    """
    if x.signature.spinor_dim != trans.spinor_dim:
        raise ValueError("signature and transition spinor dimensions differ")
    s = np.asarray(trans.S(point), dtype=complex)
    t = np.asarray(trans.T(point), dtype=complex)
    ss = np.asarray(trans.Ss(point), dtype=complex)
    ts = np.asarray(trans.Ts(point), dtype=complex)
    if direction == "backward":
        s, t = t, s
        ss, ts = ts, ss
    elif direction != "forward":
        raise ValueError("direction must be 'forward' or 'backward'")
    arr = np.asarray(x.components, dtype=complex)
    for axis, (family, up) in enumerate(x.signature.slots):
        if family == SPINOR:
            arr = (
                apply_matrix(arr, axis, ts, "left")
                if up
                else apply_matrix(arr, axis, ss, "right")
            )
        elif family == BARRED:
            arr = (
                apply_matrix(arr, axis, np.conj(ts), "left")
                if up
                else apply_matrix(arr, axis, np.conj(ss), "right")
            )
        elif family == TANGENT:
            arr = (
                apply_matrix(arr, axis, t, "left")
                if up
                else apply_matrix(arr, axis, s, "right")
            )
    return SpinTensorValue(x.signature, arr)
