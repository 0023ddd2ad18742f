"""Piecewise-constant potential profiles and their local symmetries.

A profile is a contiguous run of constant slabs embedded between two
homogeneous half-spaces. Units are dimensionless: the stored value u(x) is
the squared local wavenumber at the reference energy, so u = E - V in the
matter-wave convention (2m/hbar^2 = 1) or u = n^2 at omega = 1 in the
optical convention (c = 1). Both asymptotic values must be positive
(propagating far field); slab values may take any finite real value,
including u <= 0 (evanescent regions).

Local symmetries are affine maps F(x) = sigma*x + rho with sigma = -1
(inversion through alpha = rho/2) or sigma = +1 (translation by rho).
``symmetry_set`` computes the exact maximal subdomain where
u(x) == u(F(x)), using breakpoint arithmetic rather than sampling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PhysicsError

__all__ = [
    "Slab",
    "PotentialProfile",
    "SymmetryTransform",
    "Domain",
    "build_profile",
    "eval_u",
    "transform_point",
    "transform_interval",
    "bounding_box",
    "symmetry_set",
]

# Relative tolerance for "same u value" when none is supplied.
TOL_U_REL = 1e-12
# Bounding box padding, in units of the mean slab width.
PAD_WIDTHS = 2.0
# Cuts closer than this (absolute, coordinates are O(1..10) here) are merged.
CUT_MERGE = 1e-12


@dataclass(frozen=True)
class Slab:
    """One constant piece of the potential: u on [x_left, x_left + width)."""

    x_left: float
    width: float
    u: float


@dataclass(frozen=True)
class PotentialProfile:
    """Contiguous slabs between two propagating half-spaces.

    Attributes
    ----------
    slabs : tuple of Slab
        Sorted, contiguous (each starts where the previous one ends).
    u_left, u_right : float
        Asymptotic values for x below the first / above the last breakpoint.
        Strictly positive.
    """

    slabs: tuple[Slab, ...]
    u_left: float
    u_right: float

    @property
    def breakpoints(self) -> np.ndarray:
        """All slab edges, ascending. Empty for a homogeneous profile."""
        if not self.slabs:
            return np.empty(0)
        xs = [s.x_left for s in self.slabs]
        last = self.slabs[-1]
        xs.append(last.x_left + last.width)
        return np.asarray(xs)

    @property
    def u_values(self) -> np.ndarray:
        """Region values left-to-right: u_left, slab values, u_right."""
        return np.asarray(
            [self.u_left] + [s.u for s in self.slabs] + [self.u_right]
        )

    @property
    def u_scale(self) -> float:
        return float(np.max(np.abs(self.u_values)))

    @property
    def scatterer(self) -> tuple[float, float]:
        """Extent of the non-asymptotic part (first to last breakpoint)."""
        bp = self.breakpoints
        if bp.size == 0:
            return (0.0, 0.0)
        return (float(bp[0]), float(bp[-1]))


def build_profile(slabs, u_left: float, u_right: float) -> PotentialProfile:
    """Validate and assemble a profile.

    Parameters
    ----------
    slabs : iterable of Slab or (x_left, width, u) triples
    u_left, u_right : float
        Asymptotic values, must be positive and finite.

    Raises
    ------
    PhysicsError
        Non-positive asymptotics (the far field must stay propagating,
        "asymptotically positive" medium), overlap or gap between slabs,
        non-positive slab width, or non-finite values.
    """
    norm = []
    for s in slabs:
        if not isinstance(s, Slab):
            s = Slab(*s)
        norm.append(s)
    norm.sort(key=lambda s: s.x_left)

    for v, name in ((u_left, "u_left"), (u_right, "u_right")):
        if not np.isfinite(v):
            raise PhysicsError(f"{name} must be finite, got {v!r}")
        if v <= 0:
            raise PhysicsError(
                f"asymptotic value must be positive (asymptotically "
                f"propagating medium required), got {name}={v!r}"
            )
    for s in norm:
        if not (np.isfinite(s.x_left) and np.isfinite(s.width) and np.isfinite(s.u)):
            raise PhysicsError(f"non-finite slab {s}")
        if s.width <= 0:
            raise PhysicsError(f"slab width must be positive, got {s}")
    for i in range(1, len(norm)):
        end = norm[i - 1].x_left + norm[i - 1].width
        nxt = norm[i]
        if abs(end - nxt.x_left) > CUT_MERGE * max(1.0, abs(end)):
            kind = "gap" if nxt.x_left > end else "overlap"
            raise PhysicsError(
                f"slabs must be contiguous, {kind} between x={end} and "
                f"x={nxt.x_left} (fill gaps with explicit background slabs)"
            )
        # snap to exact contiguity so breakpoint arithmetic stays clean
        norm[i] = Slab(end, nxt.width, nxt.u)
    if not norm and u_left != u_right:
        raise PhysicsError(
            "a profile without slabs has no breakpoint to anchor a step, "
            "u_left and u_right must then be equal"
        )
    return PotentialProfile(tuple(norm), float(u_left), float(u_right))


def eval_u(profile: PotentialProfile, x):
    """Potential value at x (scalar or array), right-continuous at breakpoints."""
    bp = profile.breakpoints
    vals = profile.u_values
    idx = np.searchsorted(bp, x, side="right")
    out = vals[idx]
    if np.isscalar(x):
        return float(out)
    return out


@dataclass(frozen=True)
class SymmetryTransform:
    """Affine map F(x) = sigma*x + rho with sigma in {-1, +1}.

    sigma = -1 is an inversion through alpha = rho/2 (its own inverse),
    sigma = +1 a translation by rho.
    """

    sigma: int
    rho: float

    def __post_init__(self):
        if self.sigma not in (-1, 1):
            raise PhysicsError(f"sigma must be -1 or +1, got {self.sigma!r}")
        if not np.isfinite(self.rho):
            raise PhysicsError(f"rho must be finite, got {self.rho!r}")

    @classmethod
    def inversion(cls, alpha: float) -> "SymmetryTransform":
        return cls(-1, 2.0 * alpha)

    @classmethod
    def translation(cls, shift: float) -> "SymmetryTransform":
        return cls(1, float(shift))

    @property
    def is_inversion(self) -> bool:
        return self.sigma == -1

    @property
    def alpha(self) -> float:
        """Inversion center rho/2; asking a translation for one is a bug."""
        if self.sigma != -1:
            raise PhysicsError("only inversions have a center alpha")
        return self.rho / 2.0

    def apply(self, x):
        return self.sigma * x + self.rho

    def inverse(self) -> "SymmetryTransform":
        if self.sigma == -1:
            return self
        return SymmetryTransform(1, -self.rho)

    def __str__(self):
        if self.sigma == -1:
            return f"inversion(alpha={self.alpha:g})"
        return f"translation(shift={self.rho:g})"


def transform_point(transform: SymmetryTransform, x):
    """Image of x under the transform, x_bar = sigma*x + rho."""
    return transform.apply(x)


def transform_interval(transform: SymmetryTransform, interval) -> tuple[float, float]:
    """Image of a closed interval, endpoints reordered for inversions."""
    a, b = interval
    fa, fb = transform.apply(a), transform.apply(b)
    return (fa, fb) if fa <= fb else (fb, fa)


@dataclass(frozen=True)
class Domain:
    """Union of disjoint closed intervals, sorted ascending.

    Intervals are maximal: adjacent or overlapping input intervals are merged
    by the constructors that produce Domains.
    """

    intervals: tuple[tuple[float, float], ...]

    @property
    def is_empty(self) -> bool:
        return len(self.intervals) == 0

    @property
    def measure(self) -> float:
        return float(sum(b - a for a, b in self.intervals))

    @property
    def components(self) -> tuple[tuple[float, float], ...]:
        return self.intervals

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return any(a - tol <= x <= b + tol for a, b in self.intervals)

    def intersect(self, other: "Domain") -> "Domain":
        out = []
        for a, b in self.intervals:
            for c, d in other.intervals:
                lo, hi = max(a, c), min(b, d)
                if lo < hi:
                    out.append((lo, hi))
        return Domain(tuple(out))

    def transform(self, transform: SymmetryTransform) -> "Domain":
        imgs = sorted(transform_interval(transform, iv) for iv in self.intervals)
        return Domain(tuple(imgs))


def merge_intervals(intervals, gap_tol: float = 0.0) -> tuple[tuple[float, float], ...]:
    """Merge overlapping or near-touching intervals into maximal ones."""
    ivs = sorted((float(a), float(b)) for a, b in intervals if b > a)
    out: list[list[float]] = []
    for a, b in ivs:
        if out and a <= out[-1][1] + gap_tol:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


def bounding_box(profile: PotentialProfile, pad: float | None = None) -> tuple[float, float]:
    """Analysis window: scatterer extent padded into both half-spaces.

    Default pad is PAD_WIDTHS times the mean slab width; a homogeneous
    profile gets the fixed window [-1, 1].
    """
    bp = profile.breakpoints
    if bp.size == 0:
        half = pad if pad is not None else 1.0
        return (-half, half)
    if pad is None:
        pad = PAD_WIDTHS * float(bp[-1] - bp[0]) / len(profile.slabs)
    return (float(bp[0] - pad), float(bp[-1] + pad))


def _default_tol_u(profile: PotentialProfile) -> float:
    return TOL_U_REL * profile.u_scale


def symmetry_set(
    profile: PotentialProfile,
    transform: SymmetryTransform,
    tol_u: float | None = None,
    pad: float | None = None,
) -> Domain:
    """Exact maximal domain inside the bounding box where u(x) = u(F(x)).

    The box is partitioned by the profile breakpoints together with the
    F-preimages of breakpoints; on each elementary interval both u(x) and
    u(F(x)) are constant, so one midpoint comparison per interval decides
    membership exactly. Adjacent members are merged. Interval endpoints are
    therefore exact breakpoint arithmetic, not grid positions.

    Parameters
    ----------
    tol_u : float, optional
        Equality tolerance for u values; default TOL_U_REL * max|u|.
    pad : float, optional
        Bounding box padding, see ``bounding_box``.
    """
    if tol_u is None:
        tol_u = _default_tol_u(profile)
    lo, hi = bounding_box(profile, pad)
    bp = profile.breakpoints
    # preimage of a breakpoint b under F: x = sigma*(b - rho)
    pre = transform.sigma * (bp - transform.rho)
    cuts = np.concatenate([[lo, hi], bp, pre])
    cuts = np.sort(cuts[(cuts >= lo) & (cuts <= hi)])
    keep = np.concatenate([[True], np.diff(cuts) > CUT_MERGE])
    cuts = cuts[keep]
    if cuts[-1] < hi:
        cuts = np.append(cuts, hi)

    mids = 0.5 * (cuts[:-1] + cuts[1:])
    member = np.abs(eval_u(profile, mids) - eval_u(profile, transform.apply(mids))) <= tol_u
    ivs = [(cuts[i], cuts[i + 1]) for i in range(len(mids)) if member[i]]
    return Domain(merge_intervals(ivs, gap_tol=CUT_MERGE))
