"""Stationary 1D Helmholtz scattering on piecewise-constant profiles.

Solves A'' + s*u(x) A = 0 where u is a PotentialProfile and s > 0 an overall
energy scale multiplying the stored profile (the omega^2 knob of the optical
convention; s = 1 uses the profile as stored). Scattering states carry unit
incident amplitude, exp(+i k x) from the left or exp(-i k x) from the right,
with absolute phase anchored at x = 0.

Instead of multiplying per-slab transfer matrices (which overflows and loses
precision across evanescent regions), the solver assembles one banded linear
system of interface matching conditions over per-slab exponential bases
anchored at opposite slab ends. Every matrix entry is then bounded by 1 in
magnitude for evanescent slabs, so deep tunneling needs no renormalization.

``unit_cell_transfer_matrix`` still exposes the classic (A, A') transfer
matrix of a cell for band-structure work; its entries grow like cosh of the
evanescent depth, which is fine for the in-band use it serves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from . import _kernels
from .errors import PhysicsError
from .potential import PotentialProfile, eval_u

__all__ = [
    "FieldSample",
    "PiecewiseField",
    "ScatteringState",
    "CellMatrix",
    "BlochResult",
    "solve_scattering",
    "field_at",
    "current",
    "initial_value_field",
    "unit_cell_transfer_matrix",
    "bloch_state",
]

# Slabs with |s*u| below this times the overall u scale use the linear basis.
U_TINY_REL = 1e-14


@dataclass(frozen=True)
class FieldSample:
    """Field value and spatial derivative at one point."""

    x: float
    a: complex
    da: complex


@dataclass(frozen=True, eq=False)
class PiecewiseField:
    """Closed-form solution of the Helmholtz equation, region by region.

    Evaluation arrays follow the layout documented in ``_kernels``: one row
    per region (left half-space, slabs, right half-space), exponential or
    linear basis per region. Evaluation is exact, not interpolated.
    """

    profile: PotentialProfile
    energy_scale: float
    edges: np.ndarray
    kind: np.ndarray
    kappa: np.ndarray
    anch1: np.ndarray
    anch2: np.ndarray
    ca: np.ndarray
    cb: np.ndarray

    @property
    def k_scale(self) -> float:
        """Asymptotic wavenumber magnitude, used as a flux yardstick."""
        return float(max(abs(self.kappa[0]), abs(self.kappa[-1])))

    def field_many(self, xs) -> tuple[np.ndarray, np.ndarray]:
        xs = np.ascontiguousarray(xs, dtype=np.float64)
        return _kernels.eval_field(
            xs, self.edges, self.kind, self.kappa, self.anch1, self.anch2, self.ca, self.cb
        )

    def field_at(self, x: float) -> FieldSample:
        a, da = self.field_many(np.array([float(x)]))
        return FieldSample(float(x), complex(a[0]), complex(da[0]))


@dataclass(frozen=True, eq=False)
class ScatteringState:
    """One-sided scattering solution with unit incident amplitude.

    t and r are complex transmission and reflection amplitudes in the
    absolute-phase convention above; j is the conserved current, positive
    for left incidence and negative for right incidence. k_in (k_out) is the
    asymptotic wavenumber on the incidence (transmission) side.
    """

    profile: PotentialProfile
    energy_scale: float
    incidence: str
    t: complex
    r: complex
    j: float
    k_in: float
    k_out: float
    field: PiecewiseField

    def field_at(self, x: float) -> FieldSample:
        return self.field.field_at(x)

    def field_many(self, xs):
        return self.field.field_many(xs)

    @property
    def k_scale(self) -> float:
        return self.field.k_scale


def _check_energy_scale(profile: PotentialProfile, energy_scale: float) -> None:
    if not np.isfinite(energy_scale) or energy_scale <= 0:
        raise PhysicsError(
            "energy scale must be positive and finite so the asymptotic "
            f"wavenumbers k = sqrt(scale*u) stay propagating, got {energy_scale!r}"
        )


def _region_arrays(profile: PotentialProfile, energy_scale: float):
    """Per-region basis layout: (edges, kind, kappa, anch1, anch2, u_eff)."""
    bp = profile.breakpoints
    u_eff = energy_scale * profile.u_values
    u_tiny = U_TINY_REL * float(np.max(np.abs(u_eff)))
    n_slab = len(profile.slabs)
    kind = np.zeros(n_slab + 2, dtype=np.int64)
    kappa = np.sqrt(u_eff.astype(np.complex128))
    anch1 = np.zeros(n_slab + 2)
    anch2 = np.zeros(n_slab + 2)
    for i in range(n_slab):
        anch1[i + 1] = bp[i]
        anch2[i + 1] = bp[i + 1]
        if abs(u_eff[i + 1]) <= u_tiny:
            kind[i + 1] = 1
            kappa[i + 1] = 0.0
    return bp, kind, kappa, anch1, anch2, u_eff


def _basis_at(x, j, kind, kappa, anch1, anch2):
    """(phi1, phi2, phi1', phi2') of region j's basis at x."""
    if kind[j] == 0:
        k = kappa[j]
        e1 = np.exp(1j * k * (x - anch1[j]))
        e2 = np.exp(-1j * k * (x - anch2[j]))
        return e1, e2, 1j * k * e1, -1j * k * e2
    return 1.0 + 0j, (x - anch1[j]) + 0j, 0.0 + 0j, 1.0 + 0j


def solve_scattering(
    profile: PotentialProfile,
    energy_scale: float = 1.0,
    incidence: str = "left",
) -> ScatteringState:
    """Solve the scattering problem for one-sided unit-amplitude incidence.

    Parameters
    ----------
    profile : PotentialProfile
    energy_scale : float
        Positive multiplier on the stored profile, u_eff = energy_scale * u.
    incidence : {'left', 'right'}

    Returns
    -------
    ScatteringState
        Exact per-region solution; field continuity at the interfaces holds
        to solver roundoff and flux satisfies k_out|t|^2 + k_in|r|^2 = k_in.
    """
    if incidence not in ("left", "right"):
        raise PhysicsError(f"incidence must be 'left' or 'right', got {incidence!r}")
    _check_energy_scale(profile, energy_scale)
    edges, kind, kappa, anch1, anch2, _ = _region_arrays(profile, energy_scale)
    k_l = float(kappa[0].real)
    k_r = float(kappa[-1].real)
    n_slab = len(profile.slabs)

    if n_slab == 0:
        # homogeneous medium: the incident wave passes unchanged
        ca = np.array([1.0 + 0j if incidence == "left" else 0.0j])
        cb = np.array([0.0j if incidence == "left" else 1.0 + 0j])
        fld = PiecewiseField(
            profile, energy_scale, edges, kind[:1], kappa[:1], anch1[:1], anch2[:1], ca, cb
        )
        j = k_l if incidence == "left" else -k_l
        return ScatteringState(
            profile, energy_scale, incidence, 1.0 + 0j, 0.0j, j, k_l, k_l, fld
        )

    n = 2 * n_slab + 2
    ab = np.zeros((5, n), dtype=np.complex128)  # banded storage, l = u = 2
    rhs = np.zeros(n, dtype=np.complex128)

    def put(i, jcol, v):
        ab[2 + i - jcol, jcol] = v

    x0, xn = edges[0], edges[-1]
    # column 0 is the unknown left half-space coefficient of exp(-i k_l x),
    # column n-1 the right half-space coefficient of exp(+i k_r x)
    e_l = np.exp(-1j * k_l * x0)
    p1, p2, d1, d2 = _basis_at(x0, 1, kind, kappa, anch1, anch2)
    put(0, 0, e_l)
    put(0, 1, -p1)
    put(0, 2, -p2)
    put(1, 0, -1j * k_l * e_l)
    put(1, 1, -d1)
    put(1, 2, -d2)
    if incidence == "left":
        inc = np.exp(1j * k_l * x0)
        rhs[0] = -inc
        rhs[1] = -1j * k_l * inc

    for i in range(1, n_slab):
        x = edges[i]
        p1, p2, d1, d2 = _basis_at(x, i, kind, kappa, anch1, anch2)
        q1, q2, f1, f2 = _basis_at(x, i + 1, kind, kappa, anch1, anch2)
        put(2 * i, 2 * i - 1, p1)
        put(2 * i, 2 * i, p2)
        put(2 * i, 2 * i + 1, -q1)
        put(2 * i, 2 * i + 2, -q2)
        put(2 * i + 1, 2 * i - 1, d1)
        put(2 * i + 1, 2 * i, d2)
        put(2 * i + 1, 2 * i + 1, -f1)
        put(2 * i + 1, 2 * i + 2, -f2)

    e_r = np.exp(1j * k_r * xn)
    p1, p2, d1, d2 = _basis_at(xn, n_slab, kind, kappa, anch1, anch2)
    put(2 * n_slab, 2 * n_slab - 1, p1)
    put(2 * n_slab, 2 * n_slab, p2)
    put(2 * n_slab, 2 * n_slab + 1, -e_r)
    put(2 * n_slab + 1, 2 * n_slab - 1, d1)
    put(2 * n_slab + 1, 2 * n_slab, d2)
    put(2 * n_slab + 1, 2 * n_slab + 1, -1j * k_r * e_r)
    if incidence == "right":
        inc = np.exp(-1j * k_r * xn)
        rhs[2 * n_slab] = inc
        rhs[2 * n_slab + 1] = -1j * k_r * inc

    coef = solve_banded((2, 2), ab, rhs)

    if incidence == "left":
        r, t = complex(coef[0]), complex(coef[-1])
        ca = np.concatenate([[1.0 + 0j], coef[1:-1:2], [t]])
        cb = np.concatenate([[r], coef[2:-1:2], [0.0j]])
        j = k_r * abs(t) ** 2
        k_in, k_out = k_l, k_r
    else:
        t, r = complex(coef[0]), complex(coef[-1])
        ca = np.concatenate([[0.0j], coef[1:-1:2], [r]])
        cb = np.concatenate([[t], coef[2:-1:2], [1.0 + 0j]])
        j = -k_l * abs(t) ** 2
        k_in, k_out = k_r, k_l

    fld = PiecewiseField(profile, energy_scale, edges, kind, kappa, anch1, anch2, ca, cb)
    return ScatteringState(profile, energy_scale, incidence, t, r, j, k_in, k_out, fld)


def field_at(field, x: float) -> FieldSample:
    """Field sample at x from any field-like object (state or evaluator)."""
    return field.field_at(x)


def current(field, x: float) -> float:
    """Probability/energy current Im(A* A') at x. Constant in x for a solution."""
    s = field.field_at(x)
    return float(np.imag(np.conj(s.a) * s.da))


def initial_value_field(
    profile: PotentialProfile,
    energy_scale: float,
    x0: float,
    a0: complex,
    da0: complex,
) -> PiecewiseField:
    """Exact solution with prescribed value and derivative at x0.

    Marches the (A, A') pair outward from x0 through the region interfaces,
    converting to each region's local basis in closed form. Used for Bloch
    states and other non-scattering boundary conditions. Unlike the
    scattering solve this propagates growth through evanescent regions
    faithfully, so expect exponentially large values where the solution
    really does grow.
    """
    _check_energy_scale(profile, energy_scale)
    if not (np.isfinite(a0) and np.isfinite(da0)):
        raise PhysicsError("initial values must be finite")
    edges, kind, kappa, anch1, anch2, _ = _region_arrays(profile, energy_scale)
    n_reg = len(kind) if len(profile.slabs) else 1
    ca = np.zeros(n_reg, dtype=np.complex128)
    cb = np.zeros(n_reg, dtype=np.complex128)

    def to_coef(j, x, a, da):
        if kind[j] == 0:
            k = kappa[j]
            e1 = np.exp(1j * k * (x - anch1[j]))
            e2 = np.exp(-1j * k * (x - anch2[j]))
            return (a + da / (1j * k)) / (2 * e1), (a - da / (1j * k)) / (2 * e2)
        return a - da * (x - anch1[j]), da

    def to_vals(j, x):
        p1, p2, d1, d2 = _basis_at(x, j, kind, kappa, anch1, anch2)
        return ca[j] * p1 + cb[j] * p2, ca[j] * d1 + cb[j] * d2

    j0 = int(np.searchsorted(edges, x0, side="right"))
    ca[j0], cb[j0] = to_coef(j0, x0, complex(a0), complex(da0))
    for j in range(j0, n_reg - 1):
        a, da = to_vals(j, edges[j])
        ca[j + 1], cb[j + 1] = to_coef(j + 1, edges[j], a, da)
    for j in range(j0, 0, -1):
        a, da = to_vals(j, edges[j - 1])
        ca[j - 1], cb[j - 1] = to_coef(j - 1, edges[j - 1], a, da)

    if len(profile.slabs) == 0:
        return PiecewiseField(
            profile, energy_scale, edges, kind[:1], kappa[:1], anch1[:1], anch2[:1], ca, cb
        )
    return PiecewiseField(profile, energy_scale, edges, kind, kappa, anch1, anch2, ca, cb)


@dataclass(frozen=True, eq=False)
class CellMatrix:
    """Transfer matrix of one cell in the (A, A') representation.

    Maps (A, A') at x_left to (A, A') at x_left + cell_length. Real entries
    with unit determinant (up to roundoff that grows like cosh^2 of the
    evanescent depth for deeply tunneling cells).
    """

    entries: np.ndarray
    cell_length: float
    x_left: float

    @property
    def half_trace(self) -> float:
        return float(0.5 * (self.entries[0, 0] + self.entries[1, 1]))

    @property
    def det(self) -> float:
        m = self.entries
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def unit_cell_transfer_matrix(
    profile: PotentialProfile, cell: tuple[float, float], energy_scale: float = 1.0
) -> CellMatrix:
    """Accumulate the cell transfer matrix over [cell[0], cell[1]].

    The cell is partitioned by the profile breakpoints; each constant piece
    contributes the closed-form 2x2 block (cos, sin/k / -k sin, cos), its
    cosh/sinh analogue for evanescent pieces, or the shear matrix of the
    u = 0 limit.
    """
    _check_energy_scale(profile, energy_scale)
    a, b = float(cell[0]), float(cell[1])
    if not (np.isfinite(a) and np.isfinite(b)) or b <= a:
        raise PhysicsError(f"degenerate cell {cell!r}, need finite left < right")
    bp = profile.breakpoints
    inner = bp[(bp > a) & (bp < b)]
    cuts = np.concatenate([[a], inner, [b]])
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    us = np.ascontiguousarray(energy_scale * eval_u(profile, mids), dtype=np.float64)
    widths = np.ascontiguousarray(np.diff(cuts))
    u_tiny = U_TINY_REL * energy_scale * profile.u_scale
    entries = _kernels.transfer_accumulate(us, widths, u_tiny)
    return CellMatrix(entries, b - a, a)


@dataclass(frozen=True)
class BlochResult:
    """Outcome of the Bloch condition for one cell matrix.

    in_band is True when |half_trace| <= 1; then theta in (-pi, pi] is the
    phase advance per cell of the positive-current Bloch solution and start
    holds its (A, A') seed at the cell's left edge. In a gap theta and start
    are None and growth = |larger eigenvalue| > 1 quantifies the per-cell
    amplification instead.
    """

    in_band: bool
    theta: float | None
    start: tuple[complex, complex] | None
    half_trace: float
    growth: float | None


def bloch_state(cell_matrix: CellMatrix) -> BlochResult:
    """Eigen-decompose one period of a locally periodic profile.

    Inside a band the unimodular eigenpair exp(+-i theta) is resolved by
    current: the returned eigenvector carries Im(A* A') > 0 (rightward),
    so seeding ``initial_value_field`` with it gives A(x + L) =
    exp(i theta) A(x). At a band edge (|half_trace| = 1) the eigenvector is
    a zero-current standing wave and theta is 0 or pi.
    """
    m = cell_matrix.entries
    half = cell_matrix.half_trace
    if abs(half) > 1.0:
        growth = abs(half) + np.sqrt(half * half - 1.0)
        return BlochResult(False, None, None, half, float(growth))

    theta = float(np.arccos(np.clip(half, -1.0, 1.0)))
    lam = np.exp(1j * theta)
    # eigenvector of the better-conditioned row
    if abs(m[0, 1]) >= abs(m[1, 0]):
        v = np.array([m[0, 1], lam - m[0, 0]], dtype=np.complex128)
    else:
        v = np.array([lam - m[1, 1], m[1, 0]], dtype=np.complex128)
    jv = float(np.imag(np.conj(v[0]) * v[1]))
    vnorm2 = float(np.abs(v[0]) ** 2 + np.abs(v[1]) ** 2)
    if jv < -1e-14 * vnorm2:
        theta = -theta
        v = np.conj(v)
    # deterministic normalization: largest component becomes exactly 1
    pivot = v[0] if abs(v[0]) >= abs(v[1]) else v[1]
    v = v / pivot
    return BlochResult(True, theta, (complex(v[0]), complex(v[1])), half, None)
