"""Invariant non-local currents of locally symmetric scattering fields.

For a field A solving A'' + u A = 0 and an affine map F(x) = sigma*x + rho
under which u is locally symmetric (u(x) = u(F(x)) on a domain D), two
sesquilinear combinations of the field at x and at x_bar = F(x) are constant
in x across each connected component of D:

    q       = (sigma * A(x) A'(x_bar) - A(x_bar) A'(x)) / 2i
    q_tilde = (sigma * A*(x) A'(x_bar) - A(x_bar) A'*(x)) / 2i

Convention that matters: A'(x_bar) is the derivative function evaluated at
the mapped point, d A / d x at x = x_bar. It is NOT the derivative of the
composition A(F(x)), which would contribute an extra factor sigma and is not
an invariant. Together with the ordinary current j = Im(A* A') they satisfy
|q_tilde|^2 - |q|^2 = sigma * j^2, and they translate the field across the
domain without re-solving:

    A(x_bar) = (q_tilde A(x) - q A*(x)) / j

which degenerates exactly when j = 0 (ZeroCurrentError). When q = 0 and
j != 0 the state is an eigenstate of the symmetry operation with unimodular
eigenvalue q_tilde / j; the translation case yields the Bloch phase, the
inversion case a parity character.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PhysicsError, ZeroCurrentError
from .potential import Domain, SymmetryTransform

__all__ = [
    "InvariantPair",
    "q_at",
    "qtilde_at",
    "invariant_pair",
    "sum_rule_residual",
    "map_field",
    "eigenvalue_check",
    "bloch_phase",
    "parity_character",
]

# |j| below EPS_J_REL * scale counts as zero current.
EPS_J_REL = 1e-10
# default samples per domain component (endpoints plus interior)
N_SAMPLES = 17
# default scaled constancy tolerance
CONSTANCY_TOL = 1e-9


def _eval_many(field, xs: np.ndarray):
    try:
        return field.field_many(xs)
    except AttributeError:
        a = np.empty(len(xs), dtype=np.complex128)
        da = np.empty(len(xs), dtype=np.complex128)
        for i, x in enumerate(xs):
            s = field.field_at(float(x))
            a[i] = s.a
            da[i] = s.da
        return a, da


def _pair_values(field, transform: SymmetryTransform, xs: np.ndarray):
    """(q_i, qtilde_i, j_i, |a_i|^2) at each sample point."""
    a, da = _eval_many(field, xs)
    ab, dab = _eval_many(field, transform.apply(xs))
    sg = transform.sigma
    q = (sg * a * dab - ab * da) / 2j
    qt = (sg * np.conj(a) * dab - ab * np.conj(da)) / 2j
    j = np.imag(np.conj(a) * da)
    return q, qt, j, np.abs(a) ** 2


def q_at(field, transform: SymmetryTransform, x: float) -> complex:
    """Invariant q at one point (constant across a symmetry component)."""
    q, _, _, _ = _pair_values(field, transform, np.array([float(x)]))
    return complex(q[0])


def qtilde_at(field, transform: SymmetryTransform, x: float) -> complex:
    """Invariant q_tilde at one point."""
    _, qt, _, _ = _pair_values(field, transform, np.array([float(x)]))
    return complex(qt[0])


@dataclass(frozen=True)
class InvariantPair:
    """Sampled invariants of one transform over one domain.

    q and q_tilde are sample means; constancy_residual is the worst scaled
    deviation of any sample from those means, and constant flags whether it
    stayed below the tolerance passed to ``invariant_pair``. scale is the
    common yardstick max(|q|, |q_tilde|, |j|, typical |A|^2 * k).
    """

    transform: SymmetryTransform
    domain: Domain
    q: complex
    q_tilde: complex
    j: float
    scale: float
    constancy_residual: float
    constant: bool

    @property
    def sigma(self) -> int:
        return self.transform.sigma


def _field_k_scale(field, a, da) -> float:
    k = getattr(field, "k_scale", None)
    if k is not None:
        return float(k)
    a2 = float(np.mean(np.abs(a) ** 2))
    if a2 == 0.0:
        return 1.0
    return float(np.sqrt(np.mean(np.abs(da) ** 2) / a2))


def invariant_pair(
    field,
    transform: SymmetryTransform,
    domain: Domain,
    n_samples: int = N_SAMPLES,
    tol: float = CONSTANCY_TOL,
) -> InvariantPair:
    """Sample q and q_tilde across a domain and average them.

    Each connected component of the domain is sampled at n_samples points
    (both endpoints plus a uniform interior). Non-constancy above tol is
    recorded in the result, not raised: a large constancy_residual is the
    broken-symmetry diagnostic, not a failure of the computation.

    Raises
    ------
    PhysicsError
        Empty domain or n_samples < 2.
    """
    if domain.is_empty:
        raise PhysicsError("invariant_pair needs a non-empty domain")
    if n_samples < 2:
        raise PhysicsError(f"need at least 2 samples per component, got {n_samples}")
    xs = np.concatenate([np.linspace(a, b, n_samples) for a, b in domain.intervals])
    q, qt, j, a2 = _pair_values(field, transform, xs)
    a, da = _eval_many(field, xs)
    q_mean = complex(np.mean(q))
    qt_mean = complex(np.mean(qt))
    j_mean = float(np.mean(j))
    k_scale = _field_k_scale(field, a, da)
    scale = max(
        abs(q_mean), abs(qt_mean), abs(j_mean), float(np.mean(a2)) * k_scale
    )
    if scale == 0.0:
        scale = 1.0
    resid = float(np.max(np.abs(q - q_mean) + np.abs(qt - qt_mean))) / scale
    return InvariantPair(
        transform=transform,
        domain=domain,
        q=q_mean,
        q_tilde=qt_mean,
        j=j_mean,
        scale=scale,
        constancy_residual=resid,
        constant=bool(resid <= tol),
    )


def sum_rule_residual(pair: InvariantPair) -> float:
    """|  |q_tilde|^2 - |q|^2 - sigma j^2  |, zero for exact invariants."""
    return float(
        abs(abs(pair.q_tilde) ** 2 - abs(pair.q) ** 2 - pair.sigma * pair.j**2)
    )


def map_field(pair: InvariantPair, sample) -> complex:
    """Translate one field sample to the transformed point.

    Returns A(x_bar) = (q_tilde * A(x) - q * A*(x)) / j for x_bar =
    sigma*x + rho, valid whenever x lies in the pair's domain (including
    gapped domains whose image is far away).

    Raises
    ------
    ZeroCurrentError
        |j| <= EPS_J_REL * scale; zero-current states carry no one-sided
        flux and the two counter-propagating pieces cannot be disentangled.
    """
    if abs(pair.j) <= EPS_J_REL * pair.scale:
        raise ZeroCurrentError(
            f"current j={pair.j:.3e} is below the floor "
            f"{EPS_J_REL * pair.scale:.3e}, the amplitude mapping degenerates"
        )
    return complex((pair.q_tilde * sample.a - pair.q * np.conj(sample.a)) / pair.j)


def eigenvalue_check(pair: InvariantPair, tol: float = 1e-8) -> complex | None:
    """Symmetry eigenvalue q_tilde / j when the state is an eigenstate.

    Returns None unless |q| <= tol * scale with usable current. When it
    applies, the eigenvalue must be unimodular; deviation beyond tolerance
    means the inputs are inconsistent and raises.
    """
    if abs(pair.j) <= EPS_J_REL * pair.scale:
        return None
    if abs(pair.q) > tol * pair.scale:
        return None
    lam = pair.q_tilde / pair.j
    if abs(abs(lam) - 1.0) > max(tol, 100 * EPS_J_REL):
        raise PhysicsError(
            f"eigenvalue |{lam!r}| deviates from the unit circle, "
            "inconsistent invariant pair"
        )
    return complex(lam)


def bloch_phase(pair: InvariantPair, tol: float = 1e-8) -> float:
    """Phase advance per translation, arg(q_tilde / j) in (-pi, pi].

    Requires a translation pair in the eigenstate regime (q = 0 within
    tolerance). The returned phase equals theta = k L of the corresponding
    Bloch state; note exp(i theta) is defined only modulo the branch choice,
    so comparisons should treat theta and theta +- pi carefully when only
    |half_trace| is known.
    """
    if pair.sigma != 1:
        raise PhysicsError("bloch_phase needs a translation transform")
    if abs(pair.j) <= EPS_J_REL * pair.scale:
        raise ZeroCurrentError("zero-current state has no propagation phase")
    if abs(pair.q) > tol * pair.scale:
        raise PhysicsError(
            f"|q|={abs(pair.q):.3e} exceeds {tol * pair.scale:.3e}, "
            "not a translation eigenstate"
        )
    theta = float(np.angle(pair.q_tilde / pair.j))
    if theta <= -np.pi:
        theta = np.pi
    return theta


def parity_character(field, alpha: float, grid, tol: float = 1e-8) -> str:
    """Classify a field as 'even', 'odd', or 'none' about the point alpha.

    Compares A(2 alpha - x) against +-A(x) on the supplied grid and checks
    the pointwise markers: an even state has A'(alpha) = 0, an odd state
    A(alpha) = 0. Both the grid comparison and the marker must agree.
    """
    xs = np.asarray(grid, dtype=np.float64)
    if xs.size == 0:
        raise PhysicsError("parity_character needs a non-empty grid")
    a, da = _eval_many(field, xs)
    am, _ = _eval_many(field, 2.0 * alpha - xs)
    s_a = float(np.max(np.abs(np.concatenate([a, am]))))
    s_da = float(np.max(np.abs(da)))
    if s_a == 0.0:
        return "none"
    s0 = field.field_at(float(alpha))
    even_ok = (
        float(np.max(np.abs(am - a))) <= tol * s_a
        and abs(s0.da) <= tol * max(s_da, s_a)
    )
    odd_ok = (
        float(np.max(np.abs(am + a))) <= tol * s_a and abs(s0.a) <= tol * s_a
    )
    if even_ok and not odd_ok:
        return "even"
    if odd_ok and not even_ok:
        return "odd"
    return "none"
