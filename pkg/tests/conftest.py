import math
import sys
from pathlib import Path

import pytest
from hypothesis import assume
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from concept_interference import (
    DegeneracyError,
    ExemplarRecord,
    TypicalityTable,
    fruits_vegetables,
    solve,
    validate_and_normalize,
)

from reference_values import ORACLE_MU_A, ORACLE_MU_AB, ORACLE_MU_B


def solve_feasible(table):
    """Solve, skipping the measure-zero classically-additive draws."""
    try:
        return solve(table)
    except DegeneracyError:
        assume(False)


def make_table(mu_a, mu_b, mu_ab, names=None, **kwargs) -> TypicalityTable:
    names = names or [f"E{i + 1}" for i in range(len(mu_a))]
    records = tuple(
        ExemplarRecord(i + 1, names[i], float(a), float(b), float(ab))
        for i, (a, b, ab) in enumerate(zip(mu_a, mu_b, mu_ab))
    )
    return TypicalityTable(records=records, **kwargs)


@pytest.fixture(scope="session")
def raw_table():
    return fruits_vegetables()


@pytest.fixture(scope="session")
def reference_table(raw_table):
    return validate_and_normalize(raw_table)


@pytest.fixture(scope="session")
def reference_solution(reference_table):
    return solve(reference_table)


@pytest.fixture(scope="session")
def oracle_table():
    return validate_and_normalize(
        make_table(ORACLE_MU_A, ORACLE_MU_B, ORACLE_MU_AB)
    )


# ---------------------------------------------------------------------------
# hypothesis strategy: random tables whose interference model is feasible.
# mu_ab is built as average + bounded deviation, which keeps every radicand
# strictly positive and every entry a probability.
# ---------------------------------------------------------------------------

_WEIGHTS = st.floats(min_value=0.05, max_value=1.0, allow_nan=False)


def _normalized(values):
    total = math.fsum(values)
    return [v / total for v in values]


@st.composite
def feasible_tables(draw, min_n=2, max_n=9):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    mu_a = _normalized(draw(st.lists(_WEIGHTS, min_size=n, max_size=n)))
    mu_b = _normalized(draw(st.lists(_WEIGHTS, min_size=n, max_size=n)))
    angles = draw(
        st.lists(
            st.floats(min_value=0.0, max_value=2.0 * math.pi, allow_nan=False),
            min_size=n,
            max_size=n,
        )
    )
    shrink = draw(st.floats(min_value=0.0, max_value=0.9))

    geometric = [math.sqrt(a * b) for a, b in zip(mu_a, mu_b)]
    raw_dev = [g * math.cos(t) for g, t in zip(geometric, angles)]
    # Center the deviations (weighted by the geometric means) so the third
    # column still sums to 1, then shrink until every row stays strictly
    # feasible and every probability stays in [0, 1].
    weight_total = math.fsum(geometric)
    drift = math.fsum(raw_dev)
    centered = [
        d - (g / weight_total) * drift for d, g in zip(raw_dev, geometric)
    ]
    cap = 1.0
    for a, b, g, c in zip(mu_a, mu_b, geometric, centered):
        if c == 0.0:
            continue
        cap = min(cap, 0.9 * g / abs(c))
        headroom = 1.0 - 0.5 * (a + b)
        if c > 0.0:
            cap = min(cap, 0.9 * headroom / c)
    scale = shrink * cap
    mu_ab = [
        0.5 * (a + b) + scale * c for a, b, c in zip(mu_a, mu_b, centered)
    ]
    table = make_table(mu_a, mu_b, mu_ab)
    return validate_and_normalize(table)
