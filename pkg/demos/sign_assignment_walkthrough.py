"""Step-by-step trace of the greedy sign assignment.

The magnitudes are visited largest-first; the largest opens with "+", and
every later entry subtracts when the running sum stays nonnegative,
otherwise it adds.  The leftover sum is what the closing coefficient on the
distinguished exemplar absorbs.
"""

from concept_interference import (
    compute_cm,
    compute_lambda_magnitudes,
    fruits_vegetables,
    sign_assignment_trace,
    validate_and_normalize,
)

table = validate_and_normalize(fruits_vegetables())
magnitudes, report = compute_lambda_magnitudes(table)
assert report.constructible

print(f"{'step':>4} {'exemplar':<14} {'|lambda|':>9} {'sign':>4} {'running sum':>12}")
print("-" * 48)
trace = sign_assignment_trace(magnitudes)
for step_number, step in enumerate(trace, start=1):
    print(
        f"{step_number:>4} {table.names[step.index - 1]:<14}"
        f" {step.magnitude:9.4f} {'+' if step.sign > 0 else '-':>4}"
        f" {step.running_sum:12.4f}"
    )

m = trace[0].index
lambdas = [0.0] * table.n
for step in trace:
    lambdas[step.index - 1] = step.sign * step.magnitude

print()
print(f"final running sum: {trace[-1].running_sum:.4f} (never negative)")
print(f"m = {m} ({table.names[m - 1]}), the largest magnitude")
print(f"c_m = {compute_cm(table, lambdas, m):.4f} absorbs the leftover sum")
