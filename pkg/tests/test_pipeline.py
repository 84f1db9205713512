from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path

import pytest

from vecfig.config import DEFAULT_CONFIG, PipelineConfig, load_config
from vecfig.errors import BadFilter, DestinationCollision
from vecfig.pipeline import (DEFAULT_FIGURE_FILTER, ExtractionReport, Status,
                             enumerate_figures, extract_figure, make_project,
                             read_csv_points, run_project, scan_project,
                             write_csv)
from vecfig.point_extraction import DataPoint
from vecfig.svg_model import parse_svg
from vecfig.synth import (AxisStyle, SyntheticSpec, build_synthetic_project,
                          generate_scatter_svg)


def pt(x, y, r=2.0, sid="a") -> DataPoint:
    return DataPoint(x, y, r, sid)


class TestMakeProject:
    def test_single_pdf(self, tmp_path):
        (tmp_path / "paperA.pdf").write_bytes(b"%PDF")
        project = make_project(tmp_path, r".*/(.*)\.pdf", r"(\1)/fulltext.pdf")
        assert (tmp_path / "paperA" / "fulltext.pdf").is_file()
        assert [t.id for t in project.trees] == ["paperA"]
        assert project.trees[0].fulltext is not None

    def test_empty_root(self, tmp_path):
        project = make_project(tmp_path, r".*/(.*)\.pdf", r"(\1)/fulltext.pdf")
        assert project.trees == []

    def test_collision_aborts_before_moving(self, tmp_path):
        (tmp_path / "x").mkdir()
        (tmp_path / "y").mkdir()
        (tmp_path / "x" / "a.pdf").write_bytes(b"1")
        (tmp_path / "y" / "a.pdf").write_bytes(b"2")
        # oracle: both substitute to a/fulltext.pdf
        substituted = {re.match(r".*/(.*)\.pdf", p.as_posix()).group(1)
                       for p in [tmp_path / "x" / "a.pdf", tmp_path / "y" / "a.pdf"]}
        assert substituted == {"a"}
        with pytest.raises(DestinationCollision):
            make_project(tmp_path, r".*/(.*)\.pdf", r"(\1)/fulltext.pdf")
        assert (tmp_path / "x" / "a.pdf").is_file()  # nothing moved
        assert (tmp_path / "y" / "a.pdf").is_file()

    def test_template_group_out_of_range(self, tmp_path):
        from vecfig.errors import TemplateGroupOutOfRange
        (tmp_path / "a.pdf").write_bytes(b"1")
        with pytest.raises(TemplateGroupOutOfRange):
            make_project(tmp_path, r".*/(.*)\.pdf", r"(\2)/fulltext.pdf")


def make_figure(root: Path, tree: str, index: int, svg: bytes = b"") -> Path:
    fig_dir = root / tree / "figures" / f"figure{index}"
    fig_dir.mkdir(parents=True, exist_ok=True)
    path = fig_dir / "figure.svg"
    path.write_bytes(svg or b'<svg xmlns="http://www.w3.org/2000/svg"/>')
    return path


class TestEnumerateFigures:
    def test_two_figures_one_tree(self, tmp_path):
        make_figure(tmp_path, "t1", 1)
        make_figure(tmp_path, "t1", 2)
        project = scan_project(tmp_path)
        out = enumerate_figures(project, DEFAULT_FIGURE_FILTER)
        assert [(t.id, i) for t, i, _ in out] == [("t1", 1), ("t1", 2)]

    def test_no_matches(self, tmp_path):
        (tmp_path / "t1").mkdir()
        project = scan_project(tmp_path)
        assert enumerate_figures(project, DEFAULT_FIGURE_FILTER) == []

    def test_numeric_ordering(self, tmp_path):
        make_figure(tmp_path, "t1", 10)
        make_figure(tmp_path, "t1", 2)
        project = scan_project(tmp_path)
        out = enumerate_figures(project, DEFAULT_FIGURE_FILTER)
        # numeric, not lexicographic: sorted(["figure10","figure2"]) would invert
        assert [i for _, i, _ in out] == [2, 10]

    def test_bad_filter(self, tmp_path):
        make_figure(tmp_path, "t1", 1)
        project = scan_project(tmp_path)
        with pytest.raises(BadFilter):
            enumerate_figures(project, r".*figure\d+/figure\.svg")

    def test_underscore_suffix_variant(self, tmp_path):
        fig_dir = tmp_path / "t1" / "figures" / "figure3"
        fig_dir.mkdir(parents=True)
        (fig_dir / "figure_1.svg").write_bytes(
            b'<svg xmlns="http://www.w3.org/2000/svg"/>')
        project = scan_project(tmp_path)
        out = enumerate_figures(project, DEFAULT_FIGURE_FILTER)
        assert [i for _, i, _ in out] == [3]


class TestWriteCsv:
    def test_single_point(self, tmp_path):
        dest = tmp_path / "out.csv"
        write_csv([pt(10, 0.5, 2)], dest)
        assert dest.read_bytes() == b"x,y,device_radius\n10,0.5,2\n"

    def test_empty_list(self, tmp_path):
        dest = tmp_path / "out.csv"
        write_csv([], dest)
        assert dest.read_bytes() == b"x,y,device_radius\n"

    def test_line_count(self, tmp_path):
        dest = tmp_path / "out.csv"
        write_csv([pt(i, i) for i in range(23)], dest)
        assert len(dest.read_text().splitlines()) == 24

    def test_numbers_round_trip(self, tmp_path):
        dest = tmp_path / "out.csv"
        values = [1 / 3, 1e-7, 123456789.0, -2.5, 0.1]
        write_csv([pt(v, v) for v in values], dest)
        for (x, y, _), v in zip(read_csv_points(dest), values):
            assert x == pytest.approx(v, rel=1e-9)
        body = dest.read_text()
        for cell in body.splitlines()[1:]:
            for num in cell.split(",")[:2]:
                digits = re.sub(r"[^0-9]", "", num.split("e")[0]).lstrip("0")
                assert len(digits) <= 9


class TestExtractFigure:
    def test_synthetic_round_trip(self, tmp_path):
        spec = SyntheticSpec(n_points=7, seed=42)
        svg, truth = generate_scatter_svg(spec)
        path = tmp_path / "figure.svg"
        path.write_bytes(svg)
        points, annotated, report = extract_figure(path)
        assert report.status is Status.OK
        assert len(points) == 7
        xs_true = sorted(x for x, _ in truth)
        xs_got = sorted(p.x for p in points)
        for a, b in zip(xs_true, xs_got):
            assert b == pytest.approx(a, abs=0.005 * 10.0)

    def test_raster_body_status(self, tmp_path):
        svg, _ = generate_scatter_svg(
            SyntheticSpec(seed=1, axis_style=AxisStyle.RASTER_BODY))
        path = tmp_path / "figure.svg"
        path.write_bytes(svg)
        points, _, report = extract_figure(path)
        assert report.status is Status.RASTER_BODY
        assert points == []

    def test_log_axis_status(self, tmp_path):
        svg, _ = generate_scatter_svg(
            SyntheticSpec(seed=1, axis_style=AxisStyle.LOG_X))
        path = tmp_path / "figure.svg"
        path.write_bytes(svg)
        points, _, report = extract_figure(path)
        assert report.status is Status.NONLINEAR_SCALE
        assert points == []

    def test_no_axes_status(self, tmp_path):
        path = tmp_path / "figure.svg"
        path.write_bytes(b'<svg xmlns="http://www.w3.org/2000/svg" '
                         b'width="100" height="100">'
                         b'<circle cx="50" cy="50" r="3"/></svg>')
        points, annotated, report = extract_figure(path)
        assert report.status is Status.NO_AXES
        assert points == []
        assert annotated  # best-effort annotated SVG still produced

    def test_global_transform_invariance(self, tmp_path):
        spec = SyntheticSpec(n_points=8, seed=21)
        svg, _ = generate_scatter_svg(spec)
        base = tmp_path / "base.svg"
        base.write_bytes(svg)
        base_points, _, base_report = extract_figure(base)
        assert base_report.status is Status.OK
        for s, tx, ty in ((1.7, 30.0, -12.0), (0.6, -15.0, 40.0)):
            body = svg.split(b">", 2)[2]  # after xml decl and <svg ...>
            head = svg[:len(svg) - len(body) - 1] + b">"
            wrapped = (head
                       + f'<g transform="matrix({s},0,0,{s},{tx},{ty})">'.encode()
                       + body.replace(b"</svg>", b"</g></svg>"))
            moved = tmp_path / f"moved-{s}.svg"
            moved.write_bytes(wrapped)
            points, _, report = extract_figure(moved)
            assert report.status is Status.OK
            assert len(points) == len(base_points)
            for a, b in zip(base_points, points):
                assert b.x == pytest.approx(a.x, rel=1e-6, abs=1e-6)
                assert b.y == pytest.approx(a.y, rel=1e-6, abs=1e-6)

    def test_annotated_svg_conservatism(self, tmp_path):
        svg, _ = generate_scatter_svg(SyntheticSpec(n_points=5, seed=3))
        path = tmp_path / "figure.svg"
        path.write_bytes(svg)
        _, annotated, report = extract_figure(path)
        assert report.status is Status.OK
        original = parse_svg(svg)
        redone = parse_svg(annotated)
        orig_circles = {(c.center.x, c.center.y, c.radius) for c in original.circles}
        new_circles = {(c.center.x, c.center.y, c.radius) for c in redone.circles}
        assert orig_circles <= new_circles  # originals untouched, overlays added
        orig_segs = {(s.p1.x, s.p1.y, s.p2.x, s.p2.y) for s in original.segments}
        new_segs = {(s.p1.x, s.p1.y, s.p2.x, s.p2.y) for s in redone.segments}
        assert orig_segs <= new_segs


class TestRunProject:
    def _project(self, tmp_path, styles):
        specs = [SyntheticSpec(seed=i + 1, n_points=5, axis_style=style)
                 for i, style in enumerate(styles)]
        return build_synthetic_project(tmp_path / "proj", specs)

    def test_statuses(self, tmp_path):
        root = self._project(tmp_path, [AxisStyle.STANDARD, AxisStyle.STANDARD,
                                        AxisStyle.RASTER_BODY])
        project = scan_project(root)
        out = tmp_path / "out"
        reports = run_project(project, DEFAULT_FIGURE_FILTER, DEFAULT_CONFIG, out)
        assert [r.status for r in reports] == [Status.OK, Status.OK,
                                               Status.RASTER_BODY]
        summary = json.loads((out / "summary.json").read_text())
        assert summary["n_figures"] == 3
        assert summary["statuses"]["ok"] == 2

    def test_outputs_beside_mirrored_tree(self, tmp_path):
        root = self._project(tmp_path, [AxisStyle.STANDARD])
        out = tmp_path / "out"
        run_project(scan_project(root), DEFAULT_FIGURE_FILTER, DEFAULT_CONFIG, out)
        fig_out = out / "fig-0001" / "figures" / "figure1"
        assert (fig_out / "figure.csv").is_file()
        assert (fig_out / "figure_annotated.svg").is_file()
        assert (fig_out / "report.json").is_file()
        report = ExtractionReport.from_json((fig_out / "report.json").read_text())
        assert report.status is Status.OK and report.n_points == 5

    def test_empty_project(self, tmp_path):
        (tmp_path / "proj").mkdir()
        out = tmp_path / "out"
        reports = run_project(scan_project(tmp_path / "proj"),
                              DEFAULT_FIGURE_FILTER, DEFAULT_CONFIG, out)
        assert reports == []
        assert (out / "summary.json").is_file()

    @staticmethod
    def _hash_outputs(out: Path) -> dict[str, str]:
        return {p.relative_to(out).as_posix(): hashlib.sha256(p.read_bytes()).hexdigest()
                for p in sorted(out.rglob("*")) if p.is_file()}

    def test_determinism(self, tmp_path):
        root = self._project(tmp_path, [AxisStyle.STANDARD, AxisStyle.REVERSED_X])
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        run_project(scan_project(root), DEFAULT_FIGURE_FILTER, DEFAULT_CONFIG, out1)
        run_project(scan_project(root), DEFAULT_FIGURE_FILTER, DEFAULT_CONFIG, out2)
        assert self._hash_outputs(out1) == self._hash_outputs(out2)

    def test_parallel_equals_sequential(self, tmp_path):
        root = self._project(tmp_path, [AxisStyle.STANDARD] * 4)
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        run_project(scan_project(root), DEFAULT_FIGURE_FILTER, DEFAULT_CONFIG, out1)
        cfg4 = PipelineConfig(jobs=4)
        run_project(scan_project(root), DEFAULT_FIGURE_FILTER, cfg4, out2)
        assert self._hash_outputs(out1) == self._hash_outputs(out2)

    def test_batch_isolation(self, tmp_path):
        root = self._project(tmp_path, [AxisStyle.STANDARD, AxisStyle.RASTER_BODY,
                                        AxisStyle.STANDARD])
        out_all = tmp_path / "all"
        run_project(scan_project(root), DEFAULT_FIGURE_FILTER, DEFAULT_CONFIG, out_all)
        # drop the failing figure and rerun
        import shutil
        shutil.rmtree(root / "fig-0002")
        out_rest = tmp_path / "rest"
        run_project(scan_project(root), DEFAULT_FIGURE_FILTER, DEFAULT_CONFIG, out_rest)
        h_all = {k: v for k, v in self._hash_outputs(out_all).items()
                 if not k.startswith("fig-0002") and k != "summary.json"}
        h_rest = {k: v for k, v in self._hash_outputs(out_rest).items()
                  if k != "summary.json"}
        assert h_all == h_rest


class TestConfigFile:
    def test_load_overrides(self, tmp_path):
        cfg_file = tmp_path / "pipeline.cfg"
        cfg_file.write_text("# comment\nresidual_gate_frac = 0.02\njobs=3\n")
        cfg = load_config(cfg_file)
        assert cfg.residual_gate_frac == 0.02
        assert cfg.jobs == 3
        assert cfg.tick_touch_tol == DEFAULT_CONFIG.tick_touch_tol

    def test_unknown_key(self, tmp_path):
        cfg_file = tmp_path / "pipeline.cfg"
        cfg_file.write_text("no_such_tolerance = 1\n")
        with pytest.raises(ValueError):
            load_config(cfg_file)

    def test_nonpositive_tolerance_rejected(self):
        with pytest.raises(ValueError):
            PipelineConfig(tick_touch_tol=0.0)
