"""Score extraction output against ground truth, one record per figure.

Each record mirrors one row of a results table: whether a datafile was
produced, how many rows it holds versus the truth count, and whether the
recovered values agree with the truth on each axis within a tolerance
expressed as a fraction of that axis's value span.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import MissingTruth
from .pipeline import ExtractionReport, Status, read_csv_points

DEFAULT_TOLERANCE = 0.005  # fraction of axis span

Pair = tuple[float, float]


@dataclass(frozen=True)
class EvalRecord:
    figure_id: str
    data_extracted: bool
    n_extracted: int
    n_truth: int
    x_axis_correct: bool
    y_axis_correct: bool


def _spans(truth: list[Pair]) -> tuple[float, float]:
    xs = [p[0] for p in truth]
    ys = [p[1] for p in truth]
    return (max(xs) - min(xs) or 1.0, max(ys) - min(ys) or 1.0)


def match_points(truth: list[Pair], extracted: list[Pair],
                 spans: tuple[float, float]) -> list[tuple[int, int]]:
    """Greedy one-to-one nearest-neighbour matching in normalized space."""
    sx, sy = spans
    dists = []
    for ti, (tx, ty) in enumerate(truth):
        for ei, (ex, ey) in enumerate(extracted):
            d = math.hypot((tx - ex) / sx, (ty - ey) / sy)
            dists.append((d, ti, ei))
    dists.sort()
    used_t: set[int] = set()
    used_e: set[int] = set()
    matches = []
    for _, ti, ei in dists:
        if ti in used_t or ei in used_e:
            continue
        used_t.add(ti)
        used_e.add(ei)
        matches.append((ti, ei))
    return matches


def match_points_optimal(truth: list[Pair], extracted: list[Pair],
                         spans: tuple[float, float]) -> list[tuple[int, int]]:
    """Brute-force minimum-total-distance matching; small inputs only."""
    sx, sy = spans
    n, m = len(truth), len(extracted)
    k = min(n, m)
    best: tuple[float, list[tuple[int, int]]] | None = None
    for t_subset in itertools.combinations(range(n), k):
        for e_perm in itertools.permutations(range(m), k):
            total = sum(
                math.hypot((truth[ti][0] - extracted[ei][0]) / sx,
                           (truth[ti][1] - extracted[ei][1]) / sy)
                for ti, ei in zip(t_subset, e_perm))
            if best is None or total < best[0] - 1e-12:
                best = (total, list(zip(t_subset, e_perm)))
    return best[1] if best else []


def evaluate_figure(figure_id: str, extracted: list[Pair], truth: list[Pair],
                    data_extracted: bool,
                    tolerance: float = DEFAULT_TOLERANCE) -> EvalRecord:
    """Compare one figure's extracted points with its truth.

    An axis counts as correct only when every truth point has its own
    matched extracted point within tolerance on that axis; surplus
    extracted points (overlap recovery) do not hurt.
    """
    if not truth:
        raise MissingTruth(f"{figure_id}: empty truth")
    if not data_extracted or not extracted:
        return EvalRecord(figure_id, False, len(extracted), len(truth),
                          False, False)
    spans = _spans(truth)
    matches = match_points(truth, extracted, spans)
    all_matched = len(matches) == len(truth)
    x_ok = all_matched and all(
        abs(truth[ti][0] - extracted[ei][0]) <= tolerance * spans[0]
        for ti, ei in matches)
    y_ok = all_matched and all(
        abs(truth[ti][1] - extracted[ei][1]) <= tolerance * spans[1]
        for ti, ei in matches)
    return EvalRecord(figure_id, True, len(extracted), len(truth), x_ok, y_ok)


def aggregate(records: list[EvalRecord]) -> dict:
    n = len(records)
    extracted = sum(1 for r in records if r.data_extracted)
    both = sum(1 for r in records if r.x_axis_correct and r.y_axis_correct)
    return {
        "n_figures": n,
        "n_data_extracted": extracted,
        "n_both_axes_correct": both,
        "fraction_both_axes_correct": both / n if n else 0.0,
    }


TABLE_COLUMNS = ("figure", "data_extracted", "n_extracted", "n_truth",
                 "x_axis_correct", "y_axis_correct")


def render_table(records: list[EvalRecord]) -> str:
    """CSV table, one row per figure, columns in TABLE_COLUMNS order."""
    def cell(v: bool | int | str) -> str:
        if isinstance(v, bool):
            return "yes" if v else "no"
        return str(v)

    lines = [",".join(TABLE_COLUMNS)]
    for r in records:
        lines.append(",".join(cell(v) for v in (
            r.figure_id, r.data_extracted, r.n_extracted, r.n_truth,
            r.x_axis_correct, r.y_axis_correct)))
    return "\n".join(lines) + "\n"


def evaluate_output_tree(output_root: str | Path,
                         truth_root: str | Path | None = None,
                         tolerance: float = DEFAULT_TOLERANCE,
                         ) -> tuple[list[EvalRecord], dict]:
    """Evaluate every figure directory under an extraction output root.

    A figure directory holds ``report.json`` and ``figure.csv``; the truth
    file ``truth.csv`` is read from the same directory, or from the
    mirrored path under ``truth_root`` when given.  Raises MissingTruth.
    """
    output_root = Path(output_root)
    records: list[EvalRecord] = []
    for report_path in sorted(output_root.rglob("report.json")):
        fig_dir = report_path.parent
        report = ExtractionReport.from_json(
            report_path.read_text(encoding="utf-8"))
        csv_path = fig_dir / "figure.csv"
        extracted = ([ (row[0], row[1]) for row in read_csv_points(csv_path)]
                     if csv_path.is_file() else [])
        if truth_root is not None:
            truth_path = Path(truth_root) / fig_dir.relative_to(output_root) / "truth.csv"
        else:
            truth_path = fig_dir / "truth.csv"
        if not truth_path.is_file():
            raise MissingTruth(f"no truth file for {fig_dir}")
        truth = [(row[0], row[1]) for row in read_csv_points(truth_path)]
        figure_id = f"{report.tree_id}/figure{report.figure_index}"
        records.append(evaluate_figure(
            figure_id, extracted, truth,
            data_extracted=report.status is Status.OK and len(extracted) > 0,
            tolerance=tolerance))
    return records, aggregate(records)


def write_evaluation(records: list[EvalRecord], agg: dict,
                     destination: str | Path) -> None:
    dest = Path(destination)
    dest.mkdir(parents=True, exist_ok=True)
    (dest / "evaluation.csv").write_text(render_table(records), encoding="utf-8")
    (dest / "evaluation.json").write_text(
        json.dumps(agg, indent=2, sort_keys=True) + "\n", encoding="utf-8")
