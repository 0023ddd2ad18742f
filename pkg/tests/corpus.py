"""Randomized fixture profiles with constructed local symmetries.

Each generator plants exactly one symmetry of a known category and returns
(profile, transform, expected_domain_interval). Construction rules that
keep the planted domain from silently growing or shrinking:

* flanking slabs take values distinct from anything the mirror/translation
  pairing could match, so the symmetry set cannot extend past the plant;
* gap fillers are asymmetric (first and last gap values differ) so a gapped
  plant stays gapped;
* slab depths are capped so |kappa| * width <= ~2; deeper tunneling drives
  |t|^2 toward zero and the relative roundoff of every current-normalized
  quantity grows like eps / |t|^2.

Values are drawn from a shuffled comb of well-separated levels instead of
uniform floats, which makes accidental coincidences (two unrelated slabs
agreeing within tol_u) impossible by construction.
"""

from __future__ import annotations

import numpy as np

from locsym import Slab, SymmetryTransform, build_profile

U_BG = 1.0
# well separated, all kappa*w bounded for widths <= 1.1: sqrt(4.1) * 1.1 < 2.3
U_LEVELS = np.array([-1.5, -0.7, 0.3, 0.6, 1.7, 2.4, 3.1, 4.1])


def _draw(rng, n, forbid=()):
    """n values off the comb, jittered, none close to any value in forbid."""
    out = []
    while len(out) < n:
        v = float(rng.choice(U_LEVELS) + rng.uniform(-0.04, 0.04))
        if all(abs(v - f) > 0.1 for f in list(forbid) + out):
            out.append(v)
    return out


def _widths(rng, n):
    return [float(rng.uniform(0.3, 1.1)) for _ in range(n)]


def _assemble(chunks):
    """[(width, u), ...] -> profile starting at x = 0."""
    slabs = []
    x = 0.0
    for w, u in chunks:
        slabs.append(Slab(x, w, u))
        x += w
    return build_profile(slabs, U_BG, U_BG)


def mirror_chunk(rng, n_half=2, forbid=()):
    """Palindromic (width, u) chunk: w1 u1 | w2 u2 | w2 u2 | w1 u1 layout."""
    us = _draw(rng, n_half, forbid)
    ws = _widths(rng, n_half)
    left = list(zip(ws, us))
    return left + [(w, u) for w, u in reversed(left)]


def nongapped_inversion(rng):
    """Mirror block with one distinct noise slab on each side."""
    inner_forbid = [U_BG]
    core = mirror_chunk(rng, 2, inner_forbid)
    # flanks must differ from each other and from the core edges and bg,
    # otherwise the symmetry set leaks past the planted block
    edge_vals = [core[0][1], core[-1][1], U_BG]
    p, q = _draw(rng, 2, edge_vals)
    wp, wq = _widths(rng, 2)
    chunks = [(wp, p)] + core + [(wq, q)]
    profile = _assemble(chunks)
    start = wp
    width = sum(w for w, _ in core)
    alpha = start + width / 2.0
    return profile, SymmetryTransform.inversion(alpha), (start, start + width)


def gapped_inversion(rng):
    """Mirror pair of blocks separated by an asymmetric filler.

    Layout: noise | B | filler | reversed(B) | noise. The inversion through
    the filler center maps block 1 onto block 2 exactly; the filler itself
    is built asymmetric so the domain splits into the two gapped blocks
    (plus a thin legitimate component straddling alpha inside the middle
    filler slab, which is symmetric about its own center like any constant
    slab).
    """
    vals = _draw(rng, 3, [U_BG])
    ws = _widths(rng, 3)
    block = list(zip(ws, vals))
    f1, f2 = _draw(rng, 2, vals + [U_BG])
    wf1, wf2 = _widths(rng, 2)
    p, q = _draw(rng, 2, vals + [f1, f2, U_BG])
    wp, wq = _widths(rng, 2)
    filler = [(wf1, f1), (wf2, f2)]
    chunks = [(wp, p)] + block + filler + [(w, u) for w, u in reversed(block)] + [(wq, q)]
    profile = _assemble(chunks)
    b1_start = wp
    b1_width = sum(ws)
    gap = wf1 + wf2
    alpha = b1_start + b1_width + gap / 2.0
    return profile, SymmetryTransform.inversion(alpha), (b1_start, b1_start + b1_width)


def nongapped_translation(rng, n_cells=3):
    """Periodic block of n_cells identical two-slab cells, noisy flanks.

    The symmetry set of T(cell width) inside the block is the first
    n_cells - 1 cells (the last cell has no partner to map onto); its image
    touches it, so the component classifies as non-gapped.
    """
    u1, u2 = _draw(rng, 2, [U_BG])
    w1, w2 = _widths(rng, 2)
    cell = [(w1, u1), (w2, u2)]
    p, q = _draw(rng, 2, [u1, u2, U_BG])
    wp, wq = _widths(rng, 2)
    chunks = [(wp, p)] + cell * n_cells + [(wq, q)]
    profile = _assemble(chunks)
    period = w1 + w2
    start = wp
    dom = (start, start + period * (n_cells - 1))
    return profile, SymmetryTransform.translation(period), dom


def gapped_translation(rng):
    """Block, asymmetric filler, exact copy of the block: gapped T.

    T(shift) with shift = block width + filler width maps the first block
    onto its copy; the filler is asymmetric under that translation, and
    flanks are noise.
    """
    vals = _draw(rng, 3, [U_BG])
    ws = _widths(rng, 3)
    block = list(zip(ws, vals))
    f1, f2 = _draw(rng, 2, vals + [U_BG])
    wf = _widths(rng, 2)
    filler = [(wf[0], f1), (wf[1], f2)]
    p, q = _draw(rng, 2, vals + [f1, f2, U_BG])
    wp, wq = _widths(rng, 2)
    chunks = [(wp, p)] + block + filler + block + [(wq, q)]
    profile = _assemble(chunks)
    b_width = sum(ws)
    gap = wf[0] + wf[1]
    start = wp
    shift = b_width + gap
    return profile, SymmetryTransform.translation(shift), (start, start + b_width)


GENERATORS = {
    "nongapped_inversion": nongapped_inversion,
    "gapped_inversion": gapped_inversion,
    "nongapped_translation": nongapped_translation,
    "gapped_translation": gapped_translation,
}


def corpus(seed: int, per_category: int):
    """[(name, profile, transform, domain_interval), ...] across categories."""
    rng = np.random.default_rng(seed)
    out = []
    for name, gen in GENERATORS.items():
        for _ in range(per_category):
            profile, transform, dom = gen(rng)
            out.append((name, profile, transform, dom))
    return out


def random_profile(rng, n_slabs=None):
    """Unstructured random profile (no planted symmetry), bounded depth."""
    n = int(n_slabs if n_slabs is not None else rng.integers(1, 7))
    us = _draw(rng, n)
    ws = _widths(rng, n)
    return _assemble(list(zip(ws, us)))


def mirror_profile(rng, n_half=3):
    """Globally mirror-symmetric scatterer in the uniform background."""
    core = mirror_chunk(rng, n_half, [U_BG])
    profile = _assemble(core)
    width = sum(w for w, _ in core)
    return profile, SymmetryTransform.inversion(width / 2.0)
