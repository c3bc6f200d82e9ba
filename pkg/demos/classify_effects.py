"""Split the bundled exemplars into weakening and strengthening effects.

An exemplar weakens the combination when its measured combined probability
falls below the classical average of the two concepts (phase beyond 90
degrees), and strengthens it when it lands above (phase inside 90 degrees).
"""

import numpy as np

from concept_interference import (
    Classification,
    classify_exemplars,
    fruits_vegetables,
    solve,
    validate_and_normalize,
)

table = validate_and_normalize(fruits_vegetables())
solution = solve(table)
labels = classify_exemplars(solution)
cos_phi = np.cos(np.radians(solution.phi_deg))

for wanted in (Classification.WEAKENING, Classification.STRENGTHENING):
    rows = [
        (cos_phi[k - 1], k) for k, label in labels if label is wanted
    ]
    rows.sort()  # most negative cosine = strongest weakening
    if wanted is Classification.STRENGTHENING:
        rows.reverse()
    print(f"{wanted.value} ({len(rows)}):")
    for cosine, k in rows:
        i = k - 1
        print(
            f"  {table.names[i]:<14} phi = {solution.phi_deg[i]:+9.4f} deg"
            f"   deviation = {solution.deviations[i]:+.4f}"
        )
    print()

for note in table.notes:
    print(f"note: {note}")
