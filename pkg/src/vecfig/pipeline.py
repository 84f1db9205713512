"""Corpus project model and the figure-to-CSV batch pipeline.

A corpus is a directory of per-document trees, each holding the source
document and one folder per clipped figure
(``<tree>/figures/figure<N>/figure.svg``).  The pipeline restructures raw
input folders into that layout, runs extraction per figure, and writes a
CSV, an annotated SVG and a JSON report next to each source figure.
"""

from __future__ import annotations

import concurrent.futures
import json
import re
import shutil
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from . import axis_detection, point_extraction, svg_model
from .axis_detection import AxisCalibration, AxisSide, PlotBox, TickLabel, TickMark
from .config import DEFAULT_CONFIG, PipelineConfig
from .errors import (BadFilter, CollocatedTicks, DestinationCollision,
                     InsufficientMatches, IoFailure, NoAxesFound, NoDataGlyphs,
                     NonlinearScale, TemplateGroupOutOfRange, TooFewTicks,
                     VecfigError)
from .point_extraction import DataPoint

ET.register_namespace("", svg_model.SVG_NS)
ET.register_namespace("xlink", svg_model.XLINK_NS)

FIGURE_DIR_RE = re.compile(r"^figure(\d+)$")
DEFAULT_FIGURE_FILTER = r"^.*figures/figure(\d+)/figure(_\d+)?\.svg$"


class Status(Enum):
    OK = "ok"
    NO_AXES = "no_axes"
    NONLINEAR_SCALE = "nonlinear_scale"
    TOO_FEW_TICKS = "too_few_ticks"
    RASTER_BODY = "raster_body"
    NO_DATA_GLYPHS = "no_data_glyphs"
    PARSE_ERROR = "parse_error"


@dataclass(frozen=True)
class CTree:
    id: str
    root: Path
    fulltext: Path | None
    figures: list[tuple[int, Path]]  # (figure index, svg path)


@dataclass(frozen=True)
class CorpusProject:
    root: Path
    trees: list[CTree]


@dataclass
class ExtractionReport:
    tree_id: str
    figure_index: int
    status: Status
    n_points: int = 0
    x_reversed: bool = False
    y_reversed: bool = False
    x_residual: float = 0.0
    y_residual: float = 0.0
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        payload = {
            "tree_id": self.tree_id,
            "figure_index": self.figure_index,
            "status": self.status.value,
            "n_points": self.n_points,
            "x_reversed": self.x_reversed,
            "y_reversed": self.y_reversed,
            "x_residual": self.x_residual,
            "y_residual": self.y_residual,
            "warnings": self.warnings,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ExtractionReport":
        raw = json.loads(text)
        return cls(tree_id=raw["tree_id"], figure_index=raw["figure_index"],
                   status=Status(raw["status"]), n_points=raw["n_points"],
                   x_reversed=raw["x_reversed"], y_reversed=raw["y_reversed"],
                   x_residual=raw["x_residual"], y_residual=raw["y_residual"],
                   warnings=list(raw["warnings"]))


# ---------------------------------------------------------------------------
# project layout

def scan_project(root: str | Path) -> CorpusProject:
    """Scan an existing corpus directory into a CorpusProject."""
    root = Path(root)
    trees = []
    for tree_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        fulltext = tree_dir / "fulltext.pdf"
        figures: list[tuple[int, Path]] = []
        figures_dir = tree_dir / "figures"
        if figures_dir.is_dir():
            for fig_dir in sorted(figures_dir.iterdir()):
                m = FIGURE_DIR_RE.match(fig_dir.name)
                if not (m and fig_dir.is_dir()):
                    continue
                for svg in sorted(fig_dir.glob("figure*.svg")):
                    if re.fullmatch(r"figure(_\d+)?\.svg", svg.name):
                        figures.append((int(m.group(1)), svg))
        figures.sort()
        trees.append(CTree(id=tree_dir.name, root=tree_dir,
                           fulltext=fulltext if fulltext.is_file() else None,
                           figures=figures))
    return CorpusProject(root=root, trees=trees)


_TEMPLATE_GROUP_RE = re.compile(r"\(\\(\d+)\)|\\(\d+)")


def _substitute_template(template: str, match: re.Match) -> str:
    def repl(m: re.Match) -> str:
        group_no = int(m.group(1) or m.group(2))
        if group_no > len(match.groups()):
            raise TemplateGroupOutOfRange(
                f"template references group {group_no}, filter defines "
                f"{len(match.groups())}")
        return match.group(group_no) or ""
    return _TEMPLATE_GROUP_RE.sub(repl, template)


def make_project(root: str | Path, file_filter: str, template: str) -> CorpusProject:
    """Restructure files under ``root`` into the corpus tree layout.

    Each file whose path matches ``file_filter`` moves to the path built by
    substituting its capture groups into ``template`` (``(\\1)`` or ``\\1``
    syntax), relative to root.  Collisions abort before any file moves.
    """
    root = Path(root)
    moves: dict[Path, Path] = {}
    destinations: dict[Path, Path] = {}
    for path in sorted(root.rglob("*")):
        if not path.is_file():
            continue
        m = re.match(file_filter, path.as_posix())
        if not m:
            continue
        dest = root / _substitute_template(template, m)
        if dest in destinations:
            raise DestinationCollision(
                f"{path} and {destinations[dest]} both map to {dest}")
        destinations[dest] = path
        moves[path] = dest
    for src, dest in moves.items():
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.move(str(src), str(dest))
    return scan_project(root)


def enumerate_figures(project: CorpusProject, figure_filter: str,
                      ) -> list[tuple[CTree, int, Path]]:
    """All figure SVGs matching the filter, ordered by (tree id, index).

    The filter's first capture group must be the numeric figure index.
    """
    pattern = re.compile(figure_filter)
    if pattern.groups < 1:
        raise BadFilter("figure filter needs a capture group for the index")
    out: list[tuple[CTree, int, Path]] = []
    for tree in project.trees:
        seen: set[Path] = set()
        for _, svg in tree.figures:
            m = pattern.match(svg.as_posix())
            if m and svg not in seen:
                seen.add(svg)
                out.append((tree, int(m.group(1)), svg))
        # also honour filter matches outside the canonical layout
        for svg in sorted(tree.root.rglob("*.svg")):
            m = pattern.match(svg.as_posix())
            if m and svg not in seen:
                seen.add(svg)
                out.append((tree, int(m.group(1)), svg))
    out.sort(key=lambda item: (item[0].id, item[1], item[2].as_posix()))
    return out


# ---------------------------------------------------------------------------
# single-figure extraction

@dataclass
class _Detected:
    box: PlotBox | None = None
    ticks: list[TickMark] = field(default_factory=list)
    labels: list[tuple[TickMark, TickLabel]] = field(default_factory=list)
    points_glyph_ids: set[str] = field(default_factory=set)


def extract_figure(svg_path: str | Path, config: PipelineConfig = DEFAULT_CONFIG,
                   tree_id: str = "", figure_index: int = 0,
                   ) -> tuple[list[DataPoint], bytes, ExtractionReport]:
    """Run the full detection chain on one figure.

    Stage failures never raise; they surface as the report status, with a
    best-effort annotated SVG of whatever was detected up to that point.
    """
    svg_bytes = Path(svg_path).read_bytes()
    report = ExtractionReport(tree_id=tree_id, figure_index=figure_index,
                              status=Status.PARSE_ERROR)
    detected = _Detected()
    points: list[DataPoint] = []
    try:
        doc = svg_model.parse_svg(svg_bytes)
        report.warnings.extend(doc.warnings)

        detected.box = axis_detection.detect_plot_box(doc, config)
        ticks = axis_detection.detect_ticks(doc, detected.box, config)
        detected.ticks = ticks
        labels = [lab for run in doc.texts
                  if (lab := axis_detection.parse_numeric_label(run))]
        xpairs = axis_detection.match_ticks_to_labels(
            ticks, labels, detected.box, AxisSide.X_AXIS, config)
        ypairs = axis_detection.match_ticks_to_labels(
            ticks, labels, detected.box, AxisSide.Y_AXIS, config)
        detected.labels = xpairs + ypairs
        xcal = axis_detection.calibrate_axis(xpairs, AxisSide.X_AXIS, config)
        ycal = axis_detection.calibrate_axis(ypairs, AxisSide.Y_AXIS, config)
        report.x_reversed = xcal.reversed
        report.y_reversed = ycal.reversed
        report.x_residual = xcal.rms_residual
        report.y_residual = ycal.rms_residual

        if point_extraction.detect_raster_body(doc, detected.box, config):
            report.status = Status.RASTER_BODY
        else:
            cluster = point_extraction.select_data_glyphs(doc, detected.box, config)
            points = point_extraction.map_to_data(cluster, xcal, ycal)
            detected.points_glyph_ids = {c.id for c in cluster.members}
            report.status = Status.OK
            report.n_points = len(points)
    except NoAxesFound as exc:
        report.status = Status.NO_AXES
        report.warnings.append(str(exc))
    except NonlinearScale as exc:
        report.status = Status.NONLINEAR_SCALE
        report.warnings.append(str(exc))
    except (TooFewTicks, InsufficientMatches, CollocatedTicks) as exc:
        report.status = Status.TOO_FEW_TICKS
        report.warnings.append(str(exc))
    except NoDataGlyphs as exc:
        report.status = Status.NO_DATA_GLYPHS
        report.warnings.append(str(exc))
    except VecfigError as exc:
        report.status = Status.PARSE_ERROR
        report.warnings.append(str(exc))

    annotated = _annotate_svg(svg_bytes, detected, config, report)
    return points, annotated, report


def _annotate_svg(svg_bytes: bytes, detected: _Detected, cfg: PipelineConfig,
                  report: ExtractionReport) -> bytes:
    """Overlay detected structure on the original SVG, primitives untouched."""
    try:
        root = ET.fromstring(svg_bytes)
    except ET.ParseError:
        return svg_bytes
    ns = f"{{{svg_model.SVG_NS}}}"
    overlay = ET.SubElement(root, f"{ns}g", {"id": "vecfig-overlay",
                                             "fill": "none"})
    box = detected.box
    if box is not None:
        ET.SubElement(overlay, f"{ns}rect", {
            "x": _num(box.interior.x0), "y": _num(box.interior.y0),
            "width": _num(box.interior.width), "height": _num(box.interior.height),
            "stroke": cfg.overlay_box_color, "stroke-width": "1",
            "stroke-dasharray": "4 2"})
        for tick in detected.ticks:
            if tick.side is AxisSide.X_AXIS:
                x, y = tick.position, box.interior.y1
            else:
                x, y = box.interior.x0, tick.position
            ET.SubElement(overlay, f"{ns}circle", {
                "cx": _num(x), "cy": _num(y), "r": "2",
                "stroke": cfg.overlay_tick_color, "stroke-width": "0.8"})
        for _, label in detected.labels:
            ET.SubElement(overlay, f"{ns}circle", {
                "cx": _num(label.anchor.x), "cy": _num(label.anchor.y), "r": "3",
                "stroke": cfg.overlay_label_color, "stroke-width": "0.8"})
    if report.status is Status.OK:
        # the selected markers are re-marked by id lookup in the source tree
        ids = detected.points_glyph_ids
        for elem in root.iter():
            if elem.get("id") in ids:
                cx, cy = elem.get("cx"), elem.get("cy")
                r = elem.get("r") or elem.get("rx")
                if cx and cy and r:
                    ET.SubElement(overlay, f"{ns}circle", {
                        "cx": cx, "cy": cy, "r": _num(float(r) + 1.5),
                        "stroke": cfg.overlay_glyph_color, "stroke-width": "0.8"})
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


# ---------------------------------------------------------------------------
# CSV output

def _num(value: float) -> str:
    """Shortest decimal form round-tripping the 9-significant-digit value."""
    target = float(f"{value:.9g}")
    if target == int(target) and abs(target) < 1e16:
        return str(int(target))
    return repr(target)


def write_csv(points: list[DataPoint], destination: str | Path,
              columns: tuple[str, ...] = DEFAULT_CONFIG.csv_columns) -> None:
    """Write the point list as UTF-8 CSV with LF endings."""
    lines = [",".join(columns)]
    for p in points:
        values = {"x": p.x, "y": p.y, "device_radius": p.device_radius}
        lines.append(",".join(_num(values[c]) for c in columns))
    try:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {destination}: {exc}") from exc


def read_csv_points(path: str | Path) -> list[tuple[float, ...]]:
    """Read back a pipeline or truth CSV as tuples of floats."""
    rows = Path(path).read_text(encoding="utf-8").splitlines()
    return [tuple(float(cell) for cell in line.split(","))
            for line in rows[1:] if line.strip()]


# ---------------------------------------------------------------------------
# batch runner

def _process_one(tree: CTree, index: int, svg: Path, config: PipelineConfig,
                 out_dir: Path) -> ExtractionReport:
    points, annotated, report = extract_figure(
        svg, config, tree_id=tree.id, figure_index=index)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(points, out_dir / "figure.csv", config.csv_columns)
    (out_dir / "figure_annotated.svg").write_bytes(annotated)
    (out_dir / "report.json").write_text(report.to_json(), encoding="utf-8")
    return report


def run_project(project: CorpusProject, figure_filter: str,
                config: PipelineConfig, output_root: str | Path,
                ) -> list[ExtractionReport]:
    """Extract every enumerated figure; one failure never stops the batch.

    Outputs mirror the input tree layout under ``output_root``; a summary
    JSON aggregating statuses lands at the output root.
    """
    output_root = Path(output_root)
    figures = enumerate_figures(project, figure_filter)
    jobs = max(1, config.jobs)

    tasks = []
    for tree, index, svg in figures:
        rel = svg.parent.relative_to(project.root)
        tasks.append((tree, index, svg, output_root / rel))

    reports: list[ExtractionReport] = []
    if jobs == 1:
        for tree, index, svg, out_dir in tasks:
            reports.append(_run_guarded(tree, index, svg, config, out_dir))
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_guarded, tree, index, svg, config, out_dir)
                       for tree, index, svg, out_dir in tasks]
            reports = [f.result() for f in futures]

    reports.sort(key=lambda r: (r.tree_id, r.figure_index))
    summary = {
        "n_figures": len(reports),
        "statuses": {s.value: sum(1 for r in reports if r.status is s)
                     for s in Status},
        "figures": [{"tree_id": r.tree_id, "figure_index": r.figure_index,
                     "status": r.status.value, "n_points": r.n_points}
                    for r in reports],
    }
    try:
        output_root.mkdir(parents=True, exist_ok=True)
        (output_root / "summary.json").write_text(
            json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write summary: {exc}") from exc
    return reports


def _run_guarded(tree: CTree, index: int, svg: Path, config: PipelineConfig,
                 out_dir: Path) -> ExtractionReport:
    try:
        return _process_one(tree, index, svg, config, out_dir)
    except Exception as exc:  # isolation: a broken figure must not kill the batch
        report = ExtractionReport(tree_id=tree.id, figure_index=index,
                                  status=Status.PARSE_ERROR,
                                  warnings=[f"unhandled: {exc}"])
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            write_csv([], out_dir / "figure.csv", config.csv_columns)
            (out_dir / "report.json").write_text(report.to_json(), encoding="utf-8")
        except OSError:
            pass
        return report
