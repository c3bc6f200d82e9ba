"""Command-line pipeline: validate -> solve -> verify -> classify/render.

Exit codes: 0 success, 1 usage/I-O/validation error, 2 model infeasibility
(the report is still written in that case).  Same input and flags produce
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dataset import (
    DEFAULT_SUM_TOLERANCE,
    ExemplarRecord,
    TypicalityTable,
    parse_table,
    validate_and_normalize,
)
from .errors import (
    ConceptInterferenceError,
    DegeneracyError,
    InfeasibilityError,
)
from .hilbert import ProjectorLayout
from .solver import (
    InterferenceSolution,
    classify_exemplars,
    measure_residuals,
    solve,
)
from .thresholds import Thresholds
from .wavefield import (
    ConstantPhaseField,
    DEFAULT_CENTER_A,
    DEFAULT_CENTER_B,
    DEFAULT_RESOLUTION,
    default_window,
    fit_gaussian_fields,
    grid_to_csv,
    grid_to_pgm,
    interpolate_phase,
    place_exemplars,
    placements_to_csv,
    render_grids,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2

_RESIDUAL_THRESHOLD_KEYS = (
    ("orthogonality_modulus", "orthogonality"),
    ("norm_a_error", "norm"),
    ("norm_b_error", "norm"),
    ("max_reconstruction_error", "reconstruction"),
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; this tool reserves 2
    # for model infeasibility, so route usage problems through exit 1.
    def error(self, message):
        raise _UsageError(message)


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_ERROR


def _parse_floats(text: str, count: int, what: str) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != count:
        raise _UsageError(f"{what} needs {count} comma-separated numbers, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise _UsageError(f"non-numeric value in {what}: {text!r}") from None


def _load_normalized(path: str, tolerance: float) -> tuple[TypicalityTable, TypicalityTable]:
    """(raw, normalized) tables from a CSV path."""
    text = Path(path).read_text(encoding="utf-8")
    raw = parse_table(text)
    return raw, validate_and_normalize(raw, tolerance)


def complex_pairs(vector: np.ndarray) -> list[dict[str, float]]:
    return [{"re": float(z.real), "im": float(z.imag)} for z in vector]


def _dataset_block(raw: TypicalityTable) -> dict:
    return {
        "label_a": raw.label_a,
        "label_b": raw.label_b,
        "combination_label": raw.combination_label,
        "n": raw.n,
        "column_sums_raw": raw.column_sums(),
        "notes": list(raw.notes),
    }


def build_solve_report(
    raw: TypicalityTable,
    table: TypicalityTable,
    solution: InterferenceSolution,
) -> dict:
    """Full JSON-serializable report for a feasible model.

    All values are stored at full precision, so the report round-trips
    losslessly through its JSON encoding.
    """
    classification = dict(classify_exemplars(solution))
    exemplars = []
    for i, record in enumerate(table.records):
        exemplars.append(
            {
                "index": record.index,
                "name": record.name,
                "mu_a": record.mu_a,
                "mu_b": record.mu_b,
                "mu_ab": record.mu_ab,
                "average": 0.5 * (record.mu_a + record.mu_b),
                "deviation": float(solution.deviations[i]),
                "lambda": float(solution.lambdas[i]),
                "phi_deg": float(solution.phi_deg[i]),
                "beta_deg": float(solution.beta_deg[i]),
                "c": float(solution.c[i]),
                "classification": classification[record.index].value,
            }
        )
    residuals = solution.residuals
    return {
        "tool": {"name": "concept-interference", "version": __version__},
        "dataset": _dataset_block(raw),
        "exemplars": exemplars,
        "m": solution.m,
        "c_m": solution.c_m,
        "vector_a": complex_pairs(solution.vector_a),
        "vector_b": complex_pairs(solution.vector_b),
        "residuals": {
            "orthogonality_modulus": residuals.orthogonality_modulus,
            "norm_a_error": residuals.norm_a_error,
            "norm_b_error": residuals.norm_b_error,
            "max_reconstruction_error": residuals.max_reconstruction_error,
        },
        "feasibility": {
            "infeasible_exemplars": [],
            "cm_violation": None,
            "diagnostic": None,
        },
    }


def build_infeasible_report(
    raw: TypicalityTable,
    table: TypicalityTable,
    error: ConceptInterferenceError,
) -> dict:
    """Report for data the model cannot represent; no partial model inside."""
    report = getattr(error, "report", None)
    infeasible = []
    cm_violation = None
    if report is not None:
        cm_violation = report.cm_violation
        for index, radicand in report.infeasible_exemplars:
            infeasible.append(
                {
                    "index": index,
                    "name": table.names[index - 1],
                    "radicand": radicand,
                }
            )
    average = 0.5 * (table.mu_a + table.mu_b)
    deviation = table.mu_ab - average
    exemplars = [
        {
            "index": record.index,
            "name": record.name,
            "mu_a": record.mu_a,
            "mu_b": record.mu_b,
            "mu_ab": record.mu_ab,
            "average": float(average[i]),
            "deviation": float(deviation[i]),
        }
        for i, record in enumerate(table.records)
    ]
    return {
        "tool": {"name": "concept-interference", "version": __version__},
        "dataset": _dataset_block(raw),
        "exemplars": exemplars,
        "m": None,
        "c_m": None,
        "vector_a": None,
        "vector_b": None,
        "residuals": None,
        "feasibility": {
            "infeasible_exemplars": infeasible,
            "cm_violation": cm_violation,
            "diagnostic": str(error),
        },
    }


def _write_json(report: dict, output: str | None) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _run_solve(args) -> int:
    try:
        thresholds = Thresholds.from_env()
        raw, table = _load_normalized(args.input, args.tolerance)
    except (OSError, ConceptInterferenceError) as exc:
        return _fail(str(exc))
    try:
        solution = solve(table)
    except (InfeasibilityError, DegeneracyError) as exc:
        try:
            _write_json(build_infeasible_report(raw, table, exc), args.output)
        except OSError as io_exc:
            return _fail(str(io_exc))
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    try:
        _write_json(build_solve_report(raw, table, solution), args.output)
    except OSError as exc:
        return _fail(str(exc))
    residuals = solution.residuals
    over = [
        f"{key} = {getattr(residuals, key):.3e} > {getattr(thresholds, tkey):.0e}"
        for key, tkey in _RESIDUAL_THRESHOLD_KEYS
        if getattr(residuals, key) > getattr(thresholds, tkey)
    ]
    if over:
        print("model residuals over thresholds: " + "; ".join(over), file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _run_render(args) -> int:
    if args.resolution < 2:
        return _fail(f"resolution must be at least 2, got {args.resolution}")
    try:
        raw, table = _load_normalized(args.input, args.tolerance)
    except (OSError, ConceptInterferenceError) as exc:
        return _fail(str(exc))
    try:
        solution = solve(table)
    except (InfeasibilityError, DegeneracyError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    try:
        if args.centers is not None:
            x1, y1, x2, y2 = _parse_floats(args.centers, 4, "--centers")
            center_a, center_b = (x1, y1), (x2, y2)
        else:
            center_a, center_b = DEFAULT_CENTER_A, DEFAULT_CENTER_B
        field_a, field_b = fit_gaussian_fields(table, center_a, center_b)
        placements = place_exemplars(table, field_a, field_b)
        if args.phase_constant is not None:
            phase = ConstantPhaseField(args.phase_constant)
        else:
            phase = interpolate_phase(placements, solution.phi_deg)
        if args.window is not None:
            window = _parse_floats(args.window, 4, "--window")
        else:
            window = default_window(placements, field_a, field_b)
        grids = render_grids(
            field_a, field_b, phase, window, (args.resolution, args.resolution)
        )
    except (_UsageError, ConceptInterferenceError) as exc:
        return _fail(str(exc))
    out_dir = Path(args.output)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, grid in grids.items():
            (out_dir / f"{name}.csv").write_text(grid_to_csv(grid), encoding="utf-8")
            (out_dir / f"{name}.pgm").write_bytes(grid_to_pgm(grid))
        (out_dir / "placements.csv").write_text(
            placements_to_csv(placements), encoding="utf-8"
        )
    except OSError as exc:
        return _fail(str(exc))
    print(f"wrote {len(grids) * 2 + 1} files to {out_dir}")
    return EXIT_OK


def _run_classify(args) -> int:
    try:
        raw, table = _load_normalized(args.input, args.tolerance)
    except (OSError, ConceptInterferenceError) as exc:
        return _fail(str(exc))
    try:
        solution = solve(table)
    except (InfeasibilityError, DegeneracyError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE

    classification = classify_exemplars(solution)
    cos_phi = np.cos(np.radians(solution.phi_deg))
    sections = {"Weakening": [], "Strengthening": [], "Classical": []}
    for (index, label), cosine in zip(classification, cos_phi):
        sections[label.value].append((index, float(cosine)))
    # Strongest interference effect first: most negative cosine heads the
    # weakening list, most positive heads the strengthening list.
    sections["Weakening"].sort(key=lambda item: (item[1], item[0]))
    sections["Strengthening"].sort(key=lambda item: (-item[1], item[0]))
    sections["Classical"].sort()

    for title in ("Weakening", "Strengthening", "Classical"):
        rows = sections[title]
        if title == "Classical" and not rows:
            continue
        print(f"{title} ({len(rows)} exemplar(s)):")
        for index, _ in rows:
            i = index - 1
            print(
                f"  {table.names[i]:<16} phi = {solution.phi_deg[i]:>10.4f} deg"
                f"   deviation = {solution.deviations[i]:+.4f}"
            )
    for note in table.notes:
        print(f"note: {note}")
    return EXIT_OK


def _table_from_report(data: dict) -> TypicalityTable:
    dataset = data["dataset"]
    records = tuple(
        ExemplarRecord(
            index=row["index"],
            name=row["name"],
            mu_a=row["mu_a"],
            mu_b=row["mu_b"],
            mu_ab=row["mu_ab"],
        )
        for row in data["exemplars"]
    )
    return TypicalityTable(
        records=records,
        label_a=dataset["label_a"],
        label_b=dataset["label_b"],
        combination_label=dataset["combination_label"],
        notes=tuple(dataset.get("notes", ())),
    )


def _run_verify(args) -> int:
    try:
        thresholds = Thresholds.from_env()
        data = json.loads(Path(args.report).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError, ConceptInterferenceError) as exc:
        return _fail(str(exc))
    try:
        if data.get("vector_a") is None or data.get("vector_b") is None:
            return _fail("report carries no model vectors (infeasible run?)")
        table = _table_from_report(data)
        vector_a = np.array(
            [complex(p["re"], p["im"]) for p in data["vector_a"]]
        )
        vector_b = np.array(
            [complex(p["re"], p["im"]) for p in data["vector_b"]]
        )
        stored = {
            key: float(data["residuals"][key])
            for key, _ in _RESIDUAL_THRESHOLD_KEYS
        }
        layout = ProjectorLayout(table.n, int(data["m"]))
    except (KeyError, TypeError, ValueError) as exc:
        return _fail(f"malformed report: {exc!r}")

    recomputed = measure_residuals(vector_a, vector_b, table, layout)
    failures = []
    for key, threshold_key in _RESIDUAL_THRESHOLD_KEYS:
        value = getattr(recomputed, key)
        print(f"{key} = {value:.6e}")
        if abs(value - stored[key]) > 1e-12:
            failures.append(f"{key} differs from the stored value {stored[key]!r}")
        if value > getattr(thresholds, threshold_key):
            failures.append(
                f"{key} = {value:.3e} over threshold "
                f"{getattr(thresholds, threshold_key):.0e}"
            )
    if failures:
        for failure in failures:
            print(f"verification failed: {failure}", file=sys.stderr)
        return EXIT_INFEASIBLE
    print("model verified: residuals reproduced and under thresholds")
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="concept-interference",
        description=(
            "Fit a two-concept interference model to typicality data and "
            "render its interference landscapes."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve_p = sub.add_parser(
        "solve", help="fit the model and write a JSON solve report"
    )
    solve_p.add_argument("input", help="typicality table CSV")
    solve_p.add_argument(
        "-o", "--output", default=None, help="report path (default: stdout)"
    )
    solve_p.add_argument(
        "--tolerance",
        type=float,
        default=DEFAULT_SUM_TOLERANCE,
        help="column-sum tolerance for normalization (default %(default)s)",
    )
    solve_p.set_defaults(func=_run_solve)

    render_p = sub.add_parser(
        "render", help="render the interference landscapes as CSV + PGM grids"
    )
    render_p.add_argument("input", help="typicality table CSV")
    render_p.add_argument(
        "-o", "--output", default="landscapes", help="output directory"
    )
    render_p.add_argument(
        "--tolerance", type=float, default=DEFAULT_SUM_TOLERANCE
    )
    render_p.add_argument(
        "--centers",
        default=None,
        metavar="X1,Y1,X2,Y2",
        help=f"field centers (default "
        f"{DEFAULT_CENTER_A[0]},{DEFAULT_CENTER_A[1]},"
        f"{DEFAULT_CENTER_B[0]},{DEFAULT_CENTER_B[1]})",
    )
    render_p.add_argument(
        "--resolution",
        type=int,
        default=DEFAULT_RESOLUTION,
        metavar="N",
        help="pixels per side (default %(default)s)",
    )
    render_p.add_argument(
        "--window",
        default=None,
        metavar="XMIN,XMAX,YMIN,YMAX",
        help="world window (default: placements padded by 2 sigma)",
    )
    render_p.add_argument(
        "--phase-constant",
        dest="phase_constant",
        type=float,
        default=None,
        metavar="DEG",
        help="replace the interpolated phase field with a constant",
    )
    render_p.set_defaults(func=_run_render)

    classify_p = sub.add_parser(
        "classify", help="list weakening/strengthening exemplars"
    )
    classify_p.add_argument("input", help="typicality table CSV")
    classify_p.add_argument(
        "--tolerance", type=float, default=DEFAULT_SUM_TOLERANCE
    )
    classify_p.set_defaults(func=_run_classify)

    verify_p = sub.add_parser(
        "verify", help="re-check the residuals of a solve report"
    )
    verify_p.add_argument("report", help="JSON report produced by solve")
    verify_p.set_defaults(func=_run_verify)

    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    raise SystemExit(main())
