"""Detection of local-symmetry domains and complete decompositions.

Candidate transforms come from breakpoint arithmetic: a symmetry domain
whose interior contains a breakpoint must map breakpoints to breakpoints,
so inversion centers are midpoints of breakpoint pairs and translation
shifts are breakpoint differences. Structural detection intersects each
candidate with its exact symmetry set; field-based detection instead scans
the constancy of the invariant currents q(x), q_tilde(x) of a solved field
on a grid, which localizes symmetry boundaries (and defects) to one grid
step without knowing the potential.

A complete local-symmetry decomposition tiles the scatterer left to right
with detected domains. A non-gapped translation piece covers its source
plus image (the field in one period determines the rest), an inversion or
gapped piece covers its own domain only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PhysicsError, ZeroCurrentError
from .invariants import InvariantPair, N_SAMPLES, _pair_values, invariant_pair
from .potential import (
    Domain,
    PotentialProfile,
    SymmetryTransform,
    bounding_box,
    symmetry_set,
    transform_interval,
)
from .solver import solve_scattering

__all__ = [
    "FindingComponent",
    "SymmetryFinding",
    "ClsPiece",
    "ClsDecomposition",
    "candidate_transforms",
    "detect",
    "field_based_detect",
    "cls_decompose",
    "cls_constraint_check",
]

# minimum reported component width, relative to the scatterer width
MIN_WIDTH_REL = 1e-6
# rho values closer than this are the same candidate
RHO_MERGE = 1e-12
# grid points per bounding box when no step is given
GRID_POINTS = 2048
# window length (grid points) for the field-based constancy spread
SPREAD_WINDOW = 5
# default scaled spread tolerance for field-based detection
FIELD_TOL = 1e-6


@dataclass(frozen=True)
class FindingComponent:
    """One connected symmetry domain: source interval, image, and kind.

    kind is 'global' (covers the whole analysis box), 'gapped' (image
    disjoint from source) or 'non-gapped' (image overlaps or touches).
    """

    interval: tuple[float, float]
    image: tuple[float, float]
    kind: str

    @property
    def width(self) -> float:
        return self.interval[1] - self.interval[0]


@dataclass(frozen=True)
class SymmetryFinding:
    """All domains of one transform that passed the width filter."""

    transform: SymmetryTransform
    components: tuple[FindingComponent, ...]

    @property
    def max_width(self) -> float:
        return max(c.width for c in self.components)


def _min_width(profile: PotentialProfile, min_width: float | None) -> float:
    lo, hi = profile.scatterer
    return MIN_WIDTH_REL * (hi - lo) if min_width is None else float(min_width)


def _dedupe(values: np.ndarray) -> list[float]:
    if values.size == 0:
        return []
    values = np.sort(values)
    tol = RHO_MERGE * max(1.0, float(np.max(np.abs(values))))
    out = [float(values[0])]
    for v in values[1:]:
        if v - out[-1] > tol:
            out.append(float(v))
    return out


def candidate_transforms(
    profile: PotentialProfile,
    tol_u: float | None = None,
    min_width: float | None = None,
    pad: float | None = None,
) -> list[SymmetryTransform]:
    """Enumerate transforms that could carry a symmetry domain.

    All inversions through breakpoint-pair midpoints and all translations
    by positive breakpoint differences, deduplicated, keeping only those
    whose exact symmetry set has a component at least min_width wide.
    Complete for piecewise-constant profiles: any domain wider than a slab
    must map interior breakpoints onto breakpoints.
    """
    bp = profile.breakpoints
    if bp.size == 0:
        raise PhysicsError("candidate enumeration needs at least one slab")
    width = _min_width(profile, min_width)
    i, j = np.triu_indices(len(bp))
    rho_inv = _dedupe(bp[i] + bp[j])
    diff = bp[j] - bp[i]
    rho_tr = _dedupe(diff[diff > 0])
    out = []
    for sigma, rhos in ((-1, rho_inv), (1, rho_tr)):
        for rho in rhos:
            f = SymmetryTransform(sigma, rho)
            dom = symmetry_set(profile, f, tol_u, pad)
            if any(b - a >= width for a, b in dom.intervals):
                out.append(f)
    return out


def _classify(interval, image, box, tol: float) -> str:
    a, b = interval
    if a <= box[0] + tol and b >= box[1] - tol:
        return "global"
    ia, ib = image
    if ib < a - tol or ia > b + tol:
        return "gapped"
    return "non-gapped"


def _sort_findings(findings: list[SymmetryFinding]) -> list[SymmetryFinding]:
    return sorted(
        findings,
        key=lambda f: (-f.max_width, f.transform.sigma, f.transform.rho),
    )


def detect(
    profile: PotentialProfile,
    tol_u: float | None = None,
    min_width: float | None = None,
    pad: float | None = None,
) -> list[SymmetryFinding]:
    """Structural detection: exact symmetry sets of all candidates.

    Component endpoints are exact breakpoint arithmetic. Findings are
    sorted by their widest component, descending.
    """
    width = _min_width(profile, min_width)
    box = bounding_box(profile, pad)
    tol = RHO_MERGE * max(1.0, abs(box[0]), abs(box[1]))
    findings = []
    for f in candidate_transforms(profile, tol_u, min_width, pad):
        dom = symmetry_set(profile, f, tol_u, pad)
        comps = []
        for iv in dom.intervals:
            if iv[1] - iv[0] < width:
                continue
            image = transform_interval(f, iv)
            comps.append(FindingComponent(iv, image, _classify(iv, image, box, tol)))
        if comps:
            findings.append(SymmetryFinding(f, tuple(comps)))
    return _sort_findings(findings)


def _window_spread(values: np.ndarray, window: int) -> np.ndarray:
    """Range (max - min) of real plus imaginary part over sliding windows."""
    sw = np.lib.stride_tricks.sliding_window_view(values, window)
    return (sw.real.max(axis=1) - sw.real.min(axis=1)) + (
        sw.imag.max(axis=1) - sw.imag.min(axis=1)
    )


def field_based_detect(
    field,
    candidates,
    grid_step: float | None = None,
    tol: float = FIELD_TOL,
    pad: float | None = None,
    min_width: float | None = None,
) -> list[SymmetryFinding]:
    """Detect symmetry domains from invariant-current constancy alone.

    For each candidate transform, q(x) and q_tilde(x) are evaluated on a
    uniform grid over the analysis box; a grid point belongs to a domain
    when the spread of both over a window of SPREAD_WINDOW points ending or
    starting at it stays below tol * scale (one-sided windows keep the
    boundary resolution at one grid step). Maximal qualifying runs wider
    than min_width become components.

    Agrees with structural ``detect`` up to one grid step wherever the
    potential contrast is resolvable at the given tolerance.
    """
    profile = field.profile
    lo, hi = bounding_box(profile, pad)
    if grid_step is None:
        grid_step = (hi - lo) / GRID_POINTS
    if not np.isfinite(grid_step) or grid_step <= 0:
        raise PhysicsError(f"grid step must be positive, got {grid_step!r}")
    n = int(np.floor((hi - lo) / grid_step)) + 1
    if n < 2 * SPREAD_WINDOW:
        raise PhysicsError(
            f"degenerate grid: {n} points in the box, need {2 * SPREAD_WINDOW}"
        )
    xs = lo + grid_step * np.arange(n)
    width = _min_width(profile, min_width)
    box = (xs[0], xs[-1])

    findings = []
    for f in candidates:
        q, qt, j, a2 = _pair_values(field, f, xs)
        k_scale = getattr(field, "k_scale", 1.0)
        scale = max(float(np.mean(np.abs(j))), float(np.mean(a2)) * k_scale)
        s = _window_spread(q, SPREAD_WINDOW) + _window_spread(qt, SPREAD_WINDOW)
        # s[i] covers points [i, i + W - 1]; left/right one-sided spreads
        big = np.full(SPREAD_WINDOW - 1, np.inf)
        left = np.concatenate([big, s])
        right = np.concatenate([s, big])
        ok = np.minimum(left, right) <= tol * scale
        comps = []
        start = None
        for i in range(n + 1):
            inside = i < n and ok[i]
            if inside and start is None:
                start = i
            elif not inside and start is not None:
                iv = (float(xs[start]), float(xs[i - 1]))
                if iv[1] - iv[0] >= width:
                    image = transform_interval(f, iv)
                    comps.append(
                        FindingComponent(iv, image, _classify(iv, image, box, grid_step))
                    )
                start = None
        if comps:
            findings.append(SymmetryFinding(f, tuple(comps)))
    return _sort_findings(findings)


@dataclass(frozen=True)
class ClsPiece:
    """One tile of a complete decomposition.

    domain is the symmetry component itself; extent is the stretch of axis
    the piece accounts for (domain plus image for a non-gapped translation,
    where the invariant mapping generates the image cells from the source).
    """

    domain: tuple[float, float]
    extent: tuple[float, float]
    transform: SymmetryTransform
    pair: InvariantPair


@dataclass(frozen=True)
class ClsDecomposition:
    """Greedy left-to-right tiling of the scatterer by symmetry domains."""

    pieces: tuple[ClsPiece, ...]
    covered: bool
    scatterer: tuple[float, float]


def _extent(component: FindingComponent, tol: float) -> tuple[float, float]:
    a, b = component.interval
    ia, ib = component.image
    if ib < a - tol or ia > b + tol:
        return (a, b)
    return (min(a, ia), max(b, ib))


def cls_decompose(
    profile: PotentialProfile,
    tol_u: float | None = None,
    *,
    energy_scale: float = 1.0,
    incidence: str = "left",
    n_samples: int = N_SAMPLES,
    min_width: float | None = None,
    pad: float | None = None,
) -> ClsDecomposition:
    """Tile the scatterer with detected symmetry domains, greedily.

    From the current frontier (starting at the left scatterer edge) the
    piece whose extent starts there and reaches farthest wins; ties prefer
    inversions over translations, then the smaller |rho|. Pieces carry
    their invariant pair for a left-incidence state at the given energy
    scale. covered=False reports an honest dead end (greedy, not optimal).
    """
    lo, hi = profile.scatterer
    if hi <= lo:
        raise PhysicsError("decomposition needs a profile with slabs")
    tie = 1e-9 * max(1.0, hi - lo)
    pool = []
    for finding in detect(profile, tol_u, min_width, pad):
        for comp in finding.components:
            ext = _extent(comp, tie)
            pool.append((ext, comp, finding.transform))

    pieces_raw = []
    frontier = lo
    covered = True
    while frontier < hi - tie:
        eligible = [
            (ext, comp, f)
            for ext, comp, f in pool
            if abs(ext[0] - frontier) <= tie and ext[1] > frontier + tie
        ]
        if not eligible:
            covered = False
            break
        ext, comp, f = min(
            eligible,
            key=lambda e: (-e[0][1], e[2].sigma, abs(e[2].rho), e[2].rho),
        )
        pieces_raw.append((ext, comp, f))
        frontier = ext[1]

    state = solve_scattering(profile, energy_scale, incidence)
    pieces = tuple(
        ClsPiece(
            domain=comp.interval,
            extent=ext,
            transform=f,
            pair=invariant_pair(state, f, Domain((comp.interval,)), n_samples),
        )
        for ext, comp, f in pieces_raw
    )
    return ClsDecomposition(pieces, covered, (lo, hi))


def cls_constraint_check(pieces, tol_j: float = 1e-9) -> list[float]:
    """Cross-piece consistency residuals of a decomposition's invariants.

    All pieces must come from the same field (their currents j must agree,
    since j is global). When every piece shares one sigma, returns
    |ratio - 1| for each adjacent pair, where ratio is the quotient of
    successive (|q|^2 - |q_tilde|^2) values; that difference equals
    -sigma j^2 on every piece, so the ratios are exactly 1. For mixed
    sigmas the common quantity is j^2 itself and the returned values are
    each piece's scaled sum-rule residual. Fewer than two pieces: [].
    """
    pairs = [p.pair if isinstance(p, ClsPiece) else p for p in pieces]
    if len(pairs) < 2:
        return []
    js = np.array([p.j for p in pairs])
    scale = max(max(p.scale for p in pairs), 1e-300)
    if float(np.max(js) - np.min(js)) > tol_j * scale:
        raise PhysicsError(
            "pieces carry different currents, they are not from one field"
        )
    sigmas = {p.sigma for p in pairs}
    if len(sigmas) == 1:
        diffs = [abs(p.q) ** 2 - abs(p.q_tilde) ** 2 for p in pairs]
        floor = 1e-10 * scale**2
        if any(abs(d) <= floor for d in diffs):
            raise ZeroCurrentError(
                "|q|^2 - |q_tilde|^2 vanishes (zero-current state), "
                "the ratio constraint is undefined"
            )
        return [abs(b / a - 1.0) for a, b in zip(diffs, diffs[1:])]
    return [
        abs(abs(p.q_tilde) ** 2 - abs(p.q) ** 2 - p.sigma * p.j**2) / p.scale**2
        for p in pairs
    ]
