"""Shared test helpers."""

from __future__ import annotations

import numpy as np
import pytest


class Superposition:
    """Linear combination of solved fields, still a solution of the wave
    equation, so every invariant machinery must accept it."""

    def __init__(self, states, coeffs):
        self.states = list(states)
        self.coeffs = [complex(c) for c in coeffs]
        self.k_scale = max(s.k_scale for s in self.states)

    def field_many(self, xs):
        xs = np.asarray(xs, dtype=np.float64)
        a = np.zeros(len(xs), dtype=np.complex128)
        da = np.zeros(len(xs), dtype=np.complex128)
        for c, s in zip(self.coeffs, self.states):
            ai, dai = s.field_many(xs)
            a += c * ai
            da += c * dai
        return a, da

    def field_at(self, x):
        a, da = self.field_many(np.array([float(x)]))
        from locsym.solver import FieldSample

        return FieldSample(float(x), complex(a[0]), complex(da[0]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def pointwise_invariants(field, transform, interval, n=17):
    """(q_i, qt_i, j_i, scale) evaluated directly from field samples."""
    xs = np.linspace(interval[0], interval[1], n)
    a, da = field.field_many(xs)
    ab, dab = field.field_many(transform.apply(xs))
    sg = transform.sigma
    q = (sg * a * dab - ab * da) / 2j
    qt = (sg * np.conj(a) * dab - ab * np.conj(da)) / 2j
    j = np.imag(np.conj(a) * da)
    k = getattr(field, "k_scale", 1.0)
    scale = max(
        float(np.mean(np.abs(q))),
        float(np.mean(np.abs(qt))),
        float(np.mean(np.abs(j))),
        float(np.mean(np.abs(a) ** 2)) * k,
    )
    return q, qt, j, (scale if scale > 0 else 1.0)
