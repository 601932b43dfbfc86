"""Spin correlations of two spin-1/2 fermions in two distant regions.

The single-particle space is spin (x) location, four dimensional, with basis
``(up R, down R, up L, down L)``: index ``2 * location + spin`` where
``R = 0, L = 1`` and ``up = 0, down = 1``. A measurement of spin along ``a``
in region R and along ``b`` in region L is described, for identical
particles, by the exchange-symmetric operator

    sigma.a P_R (x) sigma.b P_L  +  sigma.b P_L (x) sigma.a P_R
"""
from dataclasses import dataclass
import enum
import math
import warnings

import numpy as np

from .errors import CertificationError, DimensionError, ValidationError
from .states import Statistics, TwoParticleState

DIM = 4
_P_R = np.diag([1.0, 0.0]).astype(np.complex128)
_P_L = np.diag([0.0, 1.0]).astype(np.complex128)
_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)
#: beyond this many (a, c) x (b, c) evaluations a scan warns about its cost
SCAN_COST_WARNING = 5e7


class ExampleState(enum.Enum):
    PRODUCT_LIKE = "product-like"
    EPR_BOHM = "epr-bohm"


@dataclass(frozen=True)
class Direction:
    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = math.sqrt(self.x**2 + self.y**2 + self.z**2)
        if abs(norm - 1.0) > 1e-9:
            raise ValidationError(f"direction ({self.x}, {self.y}, {self.z}) is not a unit vector")

    @classmethod
    def from_angle(cls, degrees):
        """Unit vector in the x-z plane, ``degrees`` measured from z towards x."""
        t = math.radians(degrees)
        return cls(math.sin(t), 0.0, math.cos(t))

    @classmethod
    def from_spherical(cls, polar_deg, azimuth_deg):
        t, f = math.radians(polar_deg), math.radians(azimuth_deg)
        return cls(math.sin(t) * math.cos(f), math.sin(t) * math.sin(f), math.cos(t))

    def as_array(self):
        return np.array([self.x, self.y, self.z])

    def plane_angle(self):
        """Angle in degrees from z towards x, in ``[0, 360)``."""
        return math.degrees(math.atan2(self.x, self.z)) % 360.0


@dataclass(frozen=True)
class BellSetting:
    a: Direction
    b: Direction
    c: Direction
    d: Direction

    @classmethod
    def from_angles(cls, a, b, c, d):
        return cls(*(Direction.from_angle(t) for t in (a, b, c, d)))

    def angles(self):
        return tuple(v.plane_angle() for v in (self.a, self.b, self.c, self.d))


def build_example_state(kind):
    """The two reference states.

    ``PRODUCT_LIKE``: ``(|up R>|down L> - |down L>|up R>) / sqrt(2)``, the
    antisymmetrization of a product state.
    ``EPR_BOHM``: ``(|up down> - |down up>) (x) (|R L> + |L R>) / 2``.
    """
    kind = ExampleState(kind)
    c = np.zeros((DIM, DIM), dtype=np.complex128)
    up_r, down_r, up_l, down_l = range(DIM)
    if kind is ExampleState.PRODUCT_LIKE:
        c[up_r, down_l] = 1.0 / math.sqrt(2.0)
        c[down_l, up_r] = -1.0 / math.sqrt(2.0)
    else:
        c[up_r, down_l] = 0.5
        c[up_l, down_r] = 0.5
        c[down_r, up_l] = -0.5
        c[down_l, up_r] = -0.5
    return TwoParticleState(DIM, Statistics.FERMION, c)


def spin_along(direction):
    """``sigma . n`` on the spin factor."""
    n = direction.as_array() if isinstance(direction, Direction) else np.asarray(direction, float)
    return n[0] * _PAULI[0] + n[1] * _PAULI[1] + n[2] * _PAULI[2]


def correlation_operator(a, b):
    """16 x 16 operator whose expectation is ``E(a, b)``."""
    right = np.kron(_P_R, spin_along(a))
    left = np.kron(_P_L, spin_along(b))
    return np.kron(right, left) + np.kron(left, right)


def _check_state(state):
    if state.dim != DIM:
        raise DimensionError(
            f"spin correlations need the 4-dimensional spin x location space, got dim={state.dim}")


def correlation(state, a, b):
    """Mean product of the spin outcomes along ``a`` in R and ``b`` in L."""
    _check_state(state)
    psi = state.vector()
    value = np.vdot(psi, correlation_operator(a, b) @ psi)
    if abs(value.imag) > 1e-10:
        raise CertificationError(f"correlation has imaginary part {value.imag:.3e}")
    return float(value.real)


def correlation_tensor(state):
    """``T`` with ``E(a, b) = a @ T @ b`` (the operator is bilinear in a, b)."""
    _check_state(state)
    psi = state.vector()
    basis = np.eye(3)
    t = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            t[i, j] = np.vdot(psi, correlation_operator(basis[i], basis[j]) @ psi).real
    return t


def chsh(state, setting):
    """``|E(a,b) - E(a,c)| + |E(b,d) + E(c,d)|``; local models stay at or below 2."""
    s = setting
    return (abs(correlation(state, s.a, s.b) - correlation(state, s.a, s.c))
            + abs(correlation(state, s.b, s.d) + correlation(state, s.c, s.d)))


def _grid(grid_steps, sphere):
    if not sphere:
        return [Direction.from_angle(360.0 * k / grid_steps) for k in range(grid_steps)]
    return [Direction.from_spherical(180.0 * i / grid_steps, 360.0 * j / grid_steps)
            for i in range(grid_steps + 1) for j in range(grid_steps)]


def chsh_scan(state, grid_steps, sphere=False, atol=1e-12):
    """Exhaustive CHSH maximization over a grid of measurement directions.

    By default the directions are ``grid_steps`` equally spaced angles in the
    x-z plane. With ``sphere=True`` a polar x azimuth grid covering the
    sphere is used, which is far more expensive.

    Given ``b`` and ``c`` the two CHSH terms decouple, so the maximum is taken
    over ``a`` and ``d`` separately for every ``(b, c)``. Values within
    ``atol`` of the maximum are ties; among them the lexicographically
    smallest grid index tuple ``(a, b, c, d)`` wins.

    Returns
    -------
    (float, BellSetting)
    """
    if int(grid_steps) != grid_steps or grid_steps < 4:
        raise ValidationError("grid_steps must be an integer >= 4")
    grid_steps = int(grid_steps)
    dirs = _grid(grid_steps, sphere)
    n = len(dirs)
    if float(n) ** 3 > SCAN_COST_WARNING:
        warnings.warn(f"CHSH scan over {n} directions needs ~{2 * n**3:.2e} evaluations",
                      stacklevel=2)
    vecs = np.array([v.as_array() for v in dirs])
    e = vecs @ correlation_tensor(state) @ vecs.T

    first = np.empty((n, n))
    first_arg = np.empty((n, n), dtype=int)
    second = np.empty((n, n))
    second_arg = np.empty((n, n), dtype=int)
    for b in range(n):
        # rows: a, cols: c
        t1 = np.abs(e[:, b, None] - e)
        first[b] = t1.max(axis=0)
        first_arg[b] = np.argmax(t1 >= first[b] - atol, axis=0)
        # rows: c, cols: d
        t2 = np.abs(e[b][None, :] + e)
        second[b] = t2.max(axis=1)
        second_arg[b] = np.argmax(t2 >= second[b][:, None] - atol, axis=1)

    total = first + second
    best = float(total.max())
    bs, cs = np.nonzero(total >= best - atol)
    a, b, c, d = min((int(first_arg[b, c]), int(b), int(c), int(second_arg[b, c]))
                     for b, c in zip(bs, cs))
    return best, BellSetting(dirs[a], dirs[b], dirs[c], dirs[d])
