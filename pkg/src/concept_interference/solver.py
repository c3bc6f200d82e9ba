"""Construction of the interference model from a typicality table.

Given a validated table (three unit-sum columns mu_a, mu_b, mu_ab), the
model represents the two concepts as orthogonal unit vectors |A>, |B> in
C^(n+1) such that measuring the normalized superposition (|A>+|B>)/sqrt(2)
reproduces the mu_ab column exactly.  The construction runs in stages:

1. deviations       d_k = mu_ab_k - (mu_a_k + mu_b_k)/2, the part of the
                    combined probability that the classical average misses;
2. magnitudes       |lambda_k| = sqrt(mu_a_k * mu_b_k - d_k^2), the size of
                    exemplar k's imaginary contribution to <A|B>.  A
                    negative radicand means the data cannot be modeled and
                    is reported, not raised per-row;
3. sign assignment  a greedy pass over the magnitudes in decreasing order
                    (ties by index): the largest gets "+" and defines the
                    distinguished index m; each later entry gets "-"
                    whenever the running sum stays >= 0 after subtraction,
                    else "+".  The final running sum is in [0, |lambda_m|];
4. closing          c_m = sqrt((sum of off-m lambdas)^2 + d_m^2) /
                    sqrt(mu_a_m * mu_b_m), the single sub-unit coefficient
                    on exemplar m that cancels the leftover imaginary sum
                    and makes <A|B> = 0 exactly;
5. phases           cos(phi_k) = d_k / (c_k sqrt(mu_a_k mu_b_k)) with
                    c_k = 1 for k != m, the sign of phi_k copied from
                    lambda_k; beta_k = phi_k except beta_m = |phi_m|;
6. vectors          |A> real with coordinates sqrt(mu_a_k) and 0 in the
                    extra plane coordinate; |B> with coordinates
                    e^(i beta_k) sqrt(mu_b_k), scaled by c_m at m, and
                    sqrt(mu_b_m (1 - c_m^2)) in the plane coordinate.

Angles cross this module's boundary in degrees; trigonometry is done in
radians internally.  The whole pipeline is a pure function of the table:
two runs produce bit-identical results.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .dataset import TypicalityTable
from .errors import DegeneracyError, InfeasibilityError, ValidationError
from .hilbert import ProjectorLayout, inner_product, norm, project_probability

# Deviations within this of zero count as classical (no interference).
CLASSICAL_DEVIATION_TOLERANCE = 1e-12

# Rounding slack: c_m above 1 by more than this is an error, within it a clamp.
_CM_OVERSHOOT_SLACK = 1e-9

# Rounding slack for arccos arguments just outside [-1, 1].
_ARCCOS_CLAMP_SLACK = 1e-12


class Classification(enum.Enum):
    WEAKENING = "Weakening"
    STRENGTHENING = "Strengthening"
    CLASSICAL = "Classical"


@dataclass(frozen=True)
class FeasibilityReport:
    """Why (or that) the model is constructible for a table.

    ``infeasible_exemplars`` lists (index, radicand) pairs where the
    magnitude radicand mu_a*mu_b - deviation^2 went negative;
    ``cm_violation`` carries a closing coefficient that exceeded 1.
    """

    infeasible_exemplars: tuple[tuple[int, float], ...] = ()
    cm_violation: float | None = None

    @property
    def constructible(self) -> bool:
        return not self.infeasible_exemplars and self.cm_violation is None


@dataclass(frozen=True)
class VerificationReport:
    """Numerical residuals of a constructed model."""

    orthogonality_modulus: float
    norm_a_error: float
    norm_b_error: float
    max_reconstruction_error: float


@dataclass(frozen=True)
class SignStep:
    """One step of the greedy sign assignment (1-based exemplar index)."""

    index: int
    magnitude: float
    sign: int
    running_sum: float


@dataclass(frozen=True, eq=False)
class InterferenceSolution:
    """Complete fitted model for one table."""

    deviations: np.ndarray
    lambdas: np.ndarray
    phi_deg: np.ndarray
    beta_deg: np.ndarray
    c: np.ndarray
    m: int
    c_m: float
    vector_a: np.ndarray
    vector_b: np.ndarray
    residuals: VerificationReport

    @property
    def n(self) -> int:
        return len(self.deviations)


def compute_deviations(table: TypicalityTable) -> np.ndarray:
    """Per-exemplar gap between mu_ab and the classical average."""
    return table.mu_ab - 0.5 * (table.mu_a + table.mu_b)


def compute_lambda_magnitudes(
    table: TypicalityTable,
) -> tuple[np.ndarray, FeasibilityReport]:
    """Unsigned interference magnitudes plus a feasibility diagnosis.

    Infeasible rows (negative radicand) get NaN in the magnitude array and
    an (index, radicand) entry in the report; nothing is raised.
    """
    deviations = compute_deviations(table)
    radicands = table.mu_a * table.mu_b - deviations * deviations
    magnitudes = np.where(radicands >= 0.0, np.sqrt(np.abs(radicands)), np.nan)
    infeasible = tuple(
        (int(k) + 1, float(radicands[k])) for k in np.flatnonzero(radicands < 0.0)
    )
    return magnitudes, FeasibilityReport(infeasible_exemplars=infeasible)


def _checked_magnitudes(magnitudes) -> np.ndarray:
    mags = np.asarray(magnitudes, dtype=float)
    if mags.ndim != 1 or mags.size < 2:
        raise ValidationError(
            f"need a 1-D list of at least 2 magnitudes, got shape {mags.shape}"
        )
    if not np.all(np.isfinite(mags)) or np.any(mags < 0.0):
        raise ValidationError("magnitudes must be finite and nonnegative")
    return mags


def sign_assignment_trace(magnitudes) -> list[SignStep]:
    """Full greedy trace: visit order, chosen signs, running sums.

    Entries are visited in strictly decreasing magnitude (ties broken by
    ascending index).  The first entry gets "+"; each following entry gets
    "-" if the running sum stays >= 0 after subtraction, else "+".
    """
    mags = _checked_magnitudes(magnitudes)
    order = sorted(range(mags.size), key=lambda i: (-mags[i], i))
    first = order[0]
    running = float(mags[first])
    steps = [SignStep(first + 1, float(mags[first]), +1, running)]
    for i in order[1:]:
        if running - mags[i] >= 0.0:
            sign = -1
            running -= float(mags[i])
        else:
            sign = +1
            running += float(mags[i])
        steps.append(SignStep(i + 1, float(mags[i]), sign, running))
    return steps


def assign_signs(magnitudes) -> tuple[np.ndarray, int]:
    """Signs (+1/-1 per entry, table order) and the distinguished index m."""
    steps = sign_assignment_trace(magnitudes)
    signs = np.zeros(len(steps), dtype=int)
    for step in steps:
        signs[step.index - 1] = step.sign
    return signs, steps[0].index


def compute_cm(table: TypicalityTable, lambdas, m: int) -> float:
    """Closing coefficient on exemplar m that zeroes the imaginary sum.

    Raises InfeasibilityError when the coefficient exceeds 1 beyond
    rounding slack (the model cannot close) and DegeneracyError when it is
    exactly 0 (classically additive data: every deviation vanishes and the
    off-m lambdas cancel, so no interference model is needed).
    """
    lambdas = np.asarray(lambdas, dtype=float)
    n = table.n
    if lambdas.shape != (n,) or not np.all(np.isfinite(lambdas)):
        raise ValidationError("lambdas must be finite, one per exemplar")
    if not 1 <= m <= n:
        raise ValidationError(f"m must be in 1..{n}, got {m}")
    off_sum = math.fsum(lambdas[i] for i in range(n) if i != m - 1)
    deviation_m = float(compute_deviations(table)[m - 1])
    product_m = float(table.mu_a[m - 1] * table.mu_b[m - 1])
    if product_m <= 0.0:
        raise DegeneracyError(
            f"exemplar {m} has zero marginal probability product"
        )
    c_m = math.sqrt((off_sum * off_sum + deviation_m * deviation_m) / product_m)
    if c_m > 1.0 + _CM_OVERSHOOT_SLACK:
        raise InfeasibilityError(
            f"closing coefficient c_m = {c_m!r} exceeds 1: the signed "
            "magnitudes cannot be cancelled on exemplar "
            f"{m} ({table.names[m - 1]})",
            FeasibilityReport(cm_violation=c_m),
        )
    if c_m > 1.0:
        c_m = 1.0
    if c_m == 0.0:
        raise DegeneracyError(
            "classically additive data: all deviations are zero and the "
            "off-m magnitudes cancel exactly, so the closing coefficient "
            "vanishes and no interference model applies"
        )
    return c_m


def compute_phases(
    table: TypicalityTable, lambdas, m: int, c_m: float
) -> tuple[np.ndarray, np.ndarray]:
    """Interference phases phi_k and vector phases beta_k, in degrees.

    phi_k = sign(lambda_k) * arccos(d_k / (c_k sqrt(mu_a_k mu_b_k))) with
    c_k = 1 for k != m and c_m at m; beta equals phi except beta_m =
    |phi_m|.  Arguments within 1e-12 of the [-1, 1] boundary are clamped;
    farther outside is an infeasibility error.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    if not 0.0 < c_m <= 1.0:
        raise ValidationError(f"c_m must be in (0, 1], got {c_m!r}")
    deviations = compute_deviations(table)
    mu_a, mu_b = table.mu_a, table.mu_b
    phi = np.empty(table.n)
    for k in range(table.n):
        c_k = c_m if k == m - 1 else 1.0
        denominator = c_k * math.sqrt(mu_a[k] * mu_b[k])
        argument = deviations[k] / denominator
        if abs(argument) > 1.0 + _ARCCOS_CLAMP_SLACK:
            raise InfeasibilityError(
                f"exemplar {k + 1} ({table.names[k]}): phase cosine "
                f"{argument!r} lies outside [-1, 1]"
            )
        argument = min(1.0, max(-1.0, argument))
        angle = math.degrees(math.acos(argument))
        phi[k] = angle if lambdas[k] >= 0.0 else -angle
    beta = phi.copy()
    beta[m - 1] = abs(beta[m - 1])
    return phi, beta


def build_state_vectors(
    table: TypicalityTable, m: int, c_m: float, beta_deg
) -> tuple[np.ndarray, np.ndarray]:
    """Explicit concept vectors in C^(n+1).

    vector_a is real: sqrt(mu_a_k) per exemplar, 0 in the plane coordinate.
    vector_b carries e^(i beta_k) sqrt(mu_b_k) per exemplar, scaled by c_m
    at m, and the real remainder sqrt(mu_b_m (1 - c_m^2)) in the plane
    coordinate.  Both are unit vectors by construction.
    """
    beta = np.asarray(beta_deg, dtype=float)
    n = table.n
    vector_a = np.zeros(n + 1, dtype=np.complex128)
    vector_a[:n] = np.sqrt(table.mu_a)
    vector_b = np.zeros(n + 1, dtype=np.complex128)
    vector_b[:n] = np.sqrt(table.mu_b) * np.exp(1j * np.radians(beta))
    vector_b[m - 1] *= c_m
    vector_b[n] = math.sqrt(max(0.0, float(table.mu_b[m - 1]) * (1.0 - c_m * c_m)))
    return vector_a, vector_b


def measure_residuals(
    vector_a: np.ndarray,
    vector_b: np.ndarray,
    table: TypicalityTable,
    layout: ProjectorLayout,
) -> VerificationReport:
    """Residuals of a candidate vector pair against a table.

    Computes the orthogonality modulus |<A|B>|, both unit-norm errors, and
    the worst gap between mu_ab and the superposed-state projection; used
    both when a model is built and to re-check serialized models.
    """
    superposed = vector_a + vector_b
    mu_ab = table.mu_ab
    max_reconstruction = max(
        abs(0.5 * project_probability(layout, k, superposed) - mu_ab[k - 1])
        for k in range(1, layout.n + 1)
    )
    return VerificationReport(
        orthogonality_modulus=abs(inner_product(vector_a, vector_b)),
        norm_a_error=abs(norm(vector_a) - 1.0),
        norm_b_error=abs(norm(vector_b) - 1.0),
        max_reconstruction_error=float(max_reconstruction),
    )


def verify_solution(
    solution: InterferenceSolution,
    table: TypicalityTable,
    layout: ProjectorLayout | None = None,
) -> VerificationReport:
    """Recompute the model residuals from the vectors alone.

    On an exactly-normalized table every residual is < 1e-9; the report is
    sensitive to corruption (a 10-degree phase perturbation shows up as an
    orthogonality modulus above 1e-4).
    """
    if layout is None:
        layout = ProjectorLayout(table.n, solution.m)
    return measure_residuals(solution.vector_a, solution.vector_b, table, layout)


def classify_exemplars(
    solution: InterferenceSolution,
) -> list[tuple[int, Classification]]:
    """Per-exemplar interference effect, keyed by 1-based index.

    Weakening for deviation < 0, Strengthening for deviation > 0, Classical
    within 1e-12 of zero; equivalent (for k != m) to comparing |phi_k|
    against 90 degrees.
    """
    out = []
    for k, deviation in enumerate(solution.deviations, start=1):
        if deviation < -CLASSICAL_DEVIATION_TOLERANCE:
            label = Classification.WEAKENING
        elif deviation > CLASSICAL_DEVIATION_TOLERANCE:
            label = Classification.STRENGTHENING
        else:
            label = Classification.CLASSICAL
        out.append((k, label))
    return out


def solve(table: TypicalityTable) -> InterferenceSolution:
    """Run the full pipeline on a validated, normalized table.

    Raises InfeasibilityError (carrying the FeasibilityReport) when any
    magnitude radicand is negative or the closing coefficient exceeds 1,
    and DegeneracyError for classically additive data.  Never returns a
    partial model.
    """
    deviations = compute_deviations(table)
    magnitudes, feasibility = compute_lambda_magnitudes(table)
    if not feasibility.constructible:
        rows = ", ".join(
            f"{index} ({table.names[index - 1]})"
            for index, _ in feasibility.infeasible_exemplars
        )
        raise InfeasibilityError(
            "interference magnitude is undefined (negative radicand) for "
            f"exemplar(s) {rows}: the deviation exceeds the geometric mean "
            "of the marginals",
            feasibility,
        )
    signs, m = assign_signs(magnitudes)
    lambdas = signs * magnitudes
    c_m = compute_cm(table, lambdas, m)
    phi_deg, beta_deg = compute_phases(table, lambdas, m, c_m)
    vector_a, vector_b = build_state_vectors(table, m, c_m, beta_deg)
    c = np.ones(table.n)
    c[m - 1] = c_m
    residuals = measure_residuals(
        vector_a, vector_b, table, ProjectorLayout(table.n, m)
    )
    return InterferenceSolution(
        deviations=deviations,
        lambdas=lambdas,
        phi_deg=phi_deg,
        beta_deg=beta_deg,
        c=c,
        m=m,
        c_m=c_m,
        vector_a=vector_a,
        vector_b=vector_b,
        residuals=residuals,
    )
