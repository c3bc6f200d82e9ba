"""Minimal complex amplitude-vector kernel.

State vectors are plain complex128 numpy arrays of length n+1: coordinate
k (0-based k-1 for exemplar k) carries exemplar k's amplitude and the last
coordinate is the extra plane coordinate reserved for the distinguished
exemplar m.  Projectors are never materialized: :class:`ProjectorLayout`
encodes the fixed structure (rank-1 rays everywhere except a rank-2 plane
at m), so every evaluation is O(1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, OrthogonalityError, ValidationError

# Precondition bound for superposition inputs.
ORTHOGONALITY_PRECONDITION = 1e-6


@dataclass(frozen=True)
class ProjectorLayout:
    """Structural layout of the measurement projectors on C^(n+1).

    Projector k is the ray along canonical coordinate k for k != m and the
    plane spanned by coordinates {m, n+1} for k == m; together they resolve
    the identity.
    """

    n: int
    m: int

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}")
        if not 1 <= self.m <= self.n:
            raise ValidationError(f"m must be in 1..{self.n}, got {self.m}")

    @property
    def dimension(self) -> int:
        return self.n + 1


def as_state_vector(amplitudes) -> np.ndarray:
    """Coerce a sequence of complex amplitudes to a 1-D complex128 array."""
    vector = np.asarray(amplitudes, dtype=np.complex128)
    if vector.ndim != 1:
        raise DimensionError(f"state vector must be 1-D, got shape {vector.shape}")
    return vector


def inner_product(u, v) -> complex:
    """Hermitian inner product, conjugate-linear in the first argument."""
    u = as_state_vector(u)
    v = as_state_vector(v)
    if u.shape != v.shape:
        raise DimensionError(f"length mismatch: {u.shape[0]} vs {v.shape[0]}")
    return complex(np.vdot(u, v))


def norm(u) -> float:
    return float(np.linalg.norm(as_state_vector(u)))


def project_probability(layout: ProjectorLayout, k: int, u) -> float:
    """Quadratic form <u|P_k|u> for projector k of the layout.

    For a normalized vector this is the outcome probability of exemplar k;
    summed over k = 1..n it returns the squared norm.
    """
    u = as_state_vector(u)
    if u.shape[0] != layout.dimension:
        raise DimensionError(
            f"state vector has {u.shape[0]} coordinates, layout needs "
            f"{layout.dimension}"
        )
    if not 1 <= k <= layout.n:
        raise IndexError(f"projector index {k} out of range 1..{layout.n}")
    z = u[k - 1]
    probability = z.real * z.real + z.imag * z.imag
    if k == layout.m:
        z = u[layout.n]
        probability += z.real * z.real + z.imag * z.imag
    return float(probability)


def superpose_normalized(u, v) -> np.ndarray:
    """Normalized superposition (u + v)/sqrt(2) of two orthogonal unit vectors."""
    residual = abs(inner_product(u, v))
    if residual >= ORTHOGONALITY_PRECONDITION:
        raise OrthogonalityError(
            f"inputs are not orthogonal: |<u|v>| = {residual:.3e} "
            f">= {ORTHOGONALITY_PRECONDITION:.0e}",
            residual,
        )
    return (as_state_vector(u) + as_state_vector(v)) / math.sqrt(2.0)
