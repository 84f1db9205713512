"""Flatten an SVG byte stream into a device-space model of primitives.

The model keeps only what downstream detection needs: circles (data
markers), straight segments (axes and ticks), raster images (bitmap plot
bodies) and text runs (tick labels).  All nested transforms are composed
and applied during parsing, so every coordinate in the model is already in
one device space.  Per the SVG convention, y grows downward.
"""

from __future__ import annotations

import math
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .errors import DegenerateTransform, MalformedXml, NotSvg, PathSyntax

SVG_NS = "http://www.w3.org/2000/svg"
XLINK_NS = "http://www.w3.org/1999/xlink"

# Curves whose sampled deviation from the chord stays below this bound are
# treated as straight segments; anything more curved is skipped.
CURVE_DEVIATION_TOL = 0.25
# Ellipses count as circles while the radii differ by at most this ratio.
ELLIPSE_CIRCLE_TOL = 0.05
# Primitives farther out than this many canvas sizes are discarded.
CANVAS_OVERFLOW_FACTOR = 10.0

# Baseline/gap thresholds for glyph-run composition, in glyph heights.
RUN_BASELINE_TOL = 0.2
RUN_GAP_TOL = 0.6

DEFAULT_FONT_SIZE = 10.0


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def distance_to(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class AffineTransform:
    """Standard 2x3 matrix: (x, y) -> (a*x + c*y + e, b*x + d*y + f)."""

    a: float = 1.0
    b: float = 0.0
    c: float = 0.0
    d: float = 1.0
    e: float = 0.0
    f: float = 0.0

    def apply(self, p: Point) -> Point:
        return Point(self.a * p.x + self.c * p.y + self.e,
                     self.b * p.x + self.d * p.y + self.f)

    def apply_xy(self, x: float, y: float) -> Point:
        return Point(self.a * x + self.c * y + self.e,
                     self.b * x + self.d * y + self.f)

    def then(self, child: "AffineTransform") -> "AffineTransform":
        """Compose so that ``child`` applies first, then ``self``."""
        return AffineTransform(
            a=self.a * child.a + self.c * child.b,
            b=self.b * child.a + self.d * child.b,
            c=self.a * child.c + self.c * child.d,
            d=self.b * child.c + self.d * child.d,
            e=self.a * child.e + self.c * child.f + self.e,
            f=self.b * child.e + self.d * child.f + self.f,
        )

    @property
    def determinant(self) -> float:
        return self.a * self.d - self.b * self.c

    def singular_values(self) -> tuple[float, float]:
        """Singular values of the linear part, largest first."""
        a, b, c, d = self.a, self.b, self.c, self.d
        s = a * a + b * b + c * c + d * d
        det = a * d - b * c
        root = math.sqrt(max(0.0, s * s - 4.0 * det * det))
        s1 = math.sqrt(max(0.0, (s + root) / 2.0))
        s2 = math.sqrt(max(0.0, (s - root) / 2.0))
        return s1, s2


IDENTITY = AffineTransform()


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle, x0 <= x1 and y0 <= y1."""

    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    def contains(self, p: Point) -> bool:
        return self.x0 <= p.x <= self.x1 and self.y0 <= p.y <= self.y1

    def expanded(self, margin: float) -> "Rect":
        return Rect(self.x0 - margin, self.y0 - margin,
                    self.x1 + margin, self.y1 + margin)

    def intersection_area(self, other: "Rect") -> float:
        w = min(self.x1, other.x1) - max(self.x0, other.x0)
        h = min(self.y1, other.y1) - max(self.y0, other.y0)
        return w * h if w > 0 and h > 0 else 0.0


@dataclass(frozen=True)
class CircleGlyph:
    id: str
    center: Point
    radius: float
    stroke_style: str = ""


@dataclass(frozen=True)
class SegmentGlyph:
    id: str
    p1: Point
    p2: Point

    @property
    def length(self) -> float:
        return self.p1.distance_to(self.p2)


@dataclass(frozen=True)
class RasterGlyph:
    id: str
    bounds: Rect


@dataclass(frozen=True)
class TextRun:
    id: str
    anchor: Point
    content: str
    glyph_height: float


@dataclass
class FigureDocument:
    circles: list[CircleGlyph] = field(default_factory=list)
    segments: list[SegmentGlyph] = field(default_factory=list)
    rasters: list[RasterGlyph] = field(default_factory=list)
    texts: list[TextRun] = field(default_factory=list)
    canvas: Rect = field(default_factory=lambda: Rect(0.0, 0.0, 1.0, 1.0))
    warnings: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# transform parsing

_TRANSFORM_RE = re.compile(r"(matrix|translate|scale|rotate|skewX|skewY)\s*\(([^)]*)\)")
_NUM_RE = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


def parse_transform(text: str) -> AffineTransform:
    """Parse an SVG ``transform`` attribute into a single matrix."""
    result = IDENTITY
    for name, argtext in _TRANSFORM_RE.findall(text):
        args = [float(m.group(0)) for m in _NUM_RE.finditer(argtext)]
        if name == "matrix" and len(args) == 6:
            t = AffineTransform(*args)
        elif name == "translate" and len(args) in (1, 2):
            tx = args[0]
            ty = args[1] if len(args) == 2 else 0.0
            t = AffineTransform(e=tx, f=ty)
        elif name == "scale" and len(args) in (1, 2):
            sx = args[0]
            sy = args[1] if len(args) == 2 else sx
            t = AffineTransform(a=sx, d=sy)
        elif name == "rotate" and len(args) in (1, 3):
            ang = math.radians(args[0])
            cos, sin = math.cos(ang), math.sin(ang)
            t = AffineTransform(a=cos, b=sin, c=-sin, d=cos)
            if len(args) == 3:
                cx, cy = args[1], args[2]
                t = (AffineTransform(e=cx, f=cy)
                     .then(t)
                     .then(AffineTransform(e=-cx, f=-cy)))
        elif name == "skewX" and len(args) == 1:
            t = AffineTransform(c=math.tan(math.radians(args[0])))
        elif name == "skewY" and len(args) == 1:
            t = AffineTransform(b=math.tan(math.radians(args[0])))
        else:
            raise DegenerateTransform(f"bad transform arguments: {name}({argtext})")
        result = result.then(t)
    if result.determinant == 0.0:
        raise DegenerateTransform(f"zero-determinant transform: {text!r}")
    return result


# ---------------------------------------------------------------------------
# path flattening

_PATH_TOKEN_RE = re.compile(r"([MmLlHhVvZzCcSsQqTtAa])|" + _NUM_RE.pattern)

# number of coordinate values each command consumes per repetition
_PATH_ARITY = {
    "M": 2, "L": 2, "H": 1, "V": 1, "Z": 0,
    "C": 6, "S": 4, "Q": 4, "T": 2, "A": 7,
}


def _tokenize_path(path_data: str) -> list[str | float]:
    tokens: list[str | float] = []
    pos = 0
    for m in _PATH_TOKEN_RE.finditer(path_data):
        between = path_data[pos:m.start()]
        if between.strip(" ,\t\n\r"):
            raise PathSyntax(f"unexpected text in path data: {between!r}")
        pos = m.end()
        tokens.append(m.group(1) if m.group(1) else float(m.group(0)))
    if path_data[pos:].strip(" ,\t\n\r"):
        raise PathSyntax(f"unexpected trailing text: {path_data[pos:]!r}")
    return tokens


def _chord_deviation(points: list[Point]) -> float:
    """Max distance of sampled curve points from the start-end chord."""
    start, end = points[0], points[-1]
    dx, dy = end.x - start.x, end.y - start.y
    chord = math.hypot(dx, dy)
    if chord == 0.0:
        return max(p.distance_to(start) for p in points)
    return max(abs((p.x - start.x) * dy - (p.y - start.y) * dx) / chord
               for p in points)


def _sample_cubic(p0: Point, p1: Point, p2: Point, p3: Point, n: int = 33) -> list[Point]:
    pts = []
    for i in range(n):
        t = i / (n - 1)
        u = 1.0 - t
        x = u**3 * p0.x + 3 * u * u * t * p1.x + 3 * u * t * t * p2.x + t**3 * p3.x
        y = u**3 * p0.y + 3 * u * u * t * p1.y + 3 * u * t * t * p2.y + t**3 * p3.y
        pts.append(Point(x, y))
    return pts


def _sample_quadratic(p0: Point, p1: Point, p2: Point, n: int = 33) -> list[Point]:
    pts = []
    for i in range(n):
        t = i / (n - 1)
        u = 1.0 - t
        x = u * u * p0.x + 2 * u * t * p1.x + t * t * p2.x
        y = u * u * p0.y + 2 * u * t * p1.y + t * t * p2.y
        pts.append(Point(x, y))
    return pts


def flatten_path(path_data: str, transform: AffineTransform = IDENTITY,
                 id_prefix: str = "path",
                 warnings: list[str] | None = None) -> list[SegmentGlyph]:
    """Decompose path data into straight device-space segments.

    Curves whose sampled deviation from their chord is within
    CURVE_DEVIATION_TOL (after transform) become segments; more strongly
    curved pieces are skipped with a warning.  Raises PathSyntax on a
    malformed grammar.
    """
    tokens = _tokenize_path(path_data)
    warnings = warnings if warnings is not None else []
    segments: list[SegmentGlyph] = []

    cur = Point(0.0, 0.0)
    start = Point(0.0, 0.0)
    prev_cubic_ctrl: Point | None = None
    prev_quad_ctrl: Point | None = None
    cmd: str | None = None
    i = 0
    seg_n = 0

    def emit(p1: Point, p2: Point) -> None:
        nonlocal seg_n
        t1, t2 = transform.apply(p1), transform.apply(p2)
        if t1 != t2:
            segments.append(SegmentGlyph(f"{id_prefix}.{seg_n}", t1, t2))
            seg_n += 1

    def emit_curve(ctrl_points: list[Point]) -> None:
        nonlocal seg_n
        devpts = [transform.apply(p) for p in ctrl_points]
        if _chord_deviation(devpts) <= CURVE_DEVIATION_TOL:
            if devpts[0] != devpts[-1]:
                segments.append(SegmentGlyph(f"{id_prefix}.{seg_n}", devpts[0], devpts[-1]))
                seg_n += 1
        else:
            warnings.append(f"{id_prefix}: curve exceeds deviation bound, skipped")

    def take(n: int) -> list[float]:
        nonlocal i
        if i + n > len(tokens) or any(isinstance(t, str) for t in tokens[i:i + n]):
            raise PathSyntax(f"command {cmd!r} needs {n} numbers")
        vals = [float(tokens[j]) for j in range(i, i + n)]  # type: ignore[arg-type]
        i += n
        return vals

    while i < len(tokens):
        tok = tokens[i]
        if isinstance(tok, str):
            cmd = tok
            i += 1
            if cmd.upper() == "Z":
                if cur != start:
                    emit(cur, start)
                cur = start
                prev_cubic_ctrl = prev_quad_ctrl = None
                continue
        elif cmd is None:
            raise PathSyntax("path data does not start with a command")
        elif cmd in ("M", "m"):
            cmd = "L" if cmd == "M" else "l"  # implicit lineto after moveto
        rel = cmd.islower()
        op = cmd.upper()
        if op == "Z":
            raise PathSyntax("Z takes no arguments")
        args = take(_PATH_ARITY[op])

        if op == "M":
            cur = Point(cur.x + args[0], cur.y + args[1]) if rel else Point(args[0], args[1])
            start = cur
            prev_cubic_ctrl = prev_quad_ctrl = None
        elif op == "L":
            nxt = Point(cur.x + args[0], cur.y + args[1]) if rel else Point(args[0], args[1])
            emit(cur, nxt)
            cur = nxt
            prev_cubic_ctrl = prev_quad_ctrl = None
        elif op == "H":
            nxt = Point(cur.x + args[0] if rel else args[0], cur.y)
            emit(cur, nxt)
            cur = nxt
            prev_cubic_ctrl = prev_quad_ctrl = None
        elif op == "V":
            nxt = Point(cur.x, cur.y + args[0] if rel else args[0])
            emit(cur, nxt)
            cur = nxt
            prev_cubic_ctrl = prev_quad_ctrl = None
        elif op in ("C", "S"):
            if op == "C":
                c1 = Point(cur.x + args[0], cur.y + args[1]) if rel else Point(args[0], args[1])
                c2 = Point(cur.x + args[2], cur.y + args[3]) if rel else Point(args[2], args[3])
                end = Point(cur.x + args[4], cur.y + args[5]) if rel else Point(args[4], args[5])
            else:
                c1 = (Point(2 * cur.x - prev_cubic_ctrl.x, 2 * cur.y - prev_cubic_ctrl.y)
                      if prev_cubic_ctrl else cur)
                c2 = Point(cur.x + args[0], cur.y + args[1]) if rel else Point(args[0], args[1])
                end = Point(cur.x + args[2], cur.y + args[3]) if rel else Point(args[2], args[3])
            emit_curve(_sample_cubic(cur, c1, c2, end))
            prev_cubic_ctrl = c2
            prev_quad_ctrl = None
            cur = end
        elif op in ("Q", "T"):
            if op == "Q":
                c1 = Point(cur.x + args[0], cur.y + args[1]) if rel else Point(args[0], args[1])
                end = Point(cur.x + args[2], cur.y + args[3]) if rel else Point(args[2], args[3])
            else:
                c1 = (Point(2 * cur.x - prev_quad_ctrl.x, 2 * cur.y - prev_quad_ctrl.y)
                      if prev_quad_ctrl else cur)
                end = Point(cur.x + args[0], cur.y + args[1]) if rel else Point(args[0], args[1])
            emit_curve(_sample_quadratic(cur, c1, end))
            prev_quad_ctrl = c1
            prev_cubic_ctrl = None
            cur = end
        elif op == "A":
            # elliptical arcs never approximate ticks/axes; skip to endpoint
            end = Point(cur.x + args[5], cur.y + args[6]) if rel else Point(args[5], args[6])
            warnings.append(f"{id_prefix}: elliptical arc skipped")
            cur = end
            prev_cubic_ctrl = prev_quad_ctrl = None
    return segments


# ---------------------------------------------------------------------------
# glyph-run composition

def compose_text_runs(raw_glyph_texts: list[TextRun]) -> list[TextRun]:
    """Merge per-glyph text elements back into whole runs.

    Runs sharing a baseline (within RUN_BASELINE_TOL glyph heights) and
    separated horizontally by at most RUN_GAP_TOL glyph heights are joined
    left to right.  Output is sorted by (y, x).
    """
    if not raw_glyph_texts:
        return []
    pending = sorted(raw_glyph_texts, key=lambda r: (r.anchor.y, r.anchor.x, r.id))

    # group by shared baseline
    baselines: list[list[TextRun]] = []
    for run in pending:
        for group in baselines:
            h = max(run.glyph_height, group[0].glyph_height)
            if abs(run.anchor.y - group[0].anchor.y) <= RUN_BASELINE_TOL * h:
                group.append(run)
                break
        else:
            baselines.append([run])

    # chain left-to-right within each baseline
    merged: list[TextRun] = []
    for group in baselines:
        group.sort(key=lambda r: (r.anchor.x, r.id))
        chain = [group[0]]
        for run in group[1:]:
            last = chain[-1]
            h = max(run.glyph_height, last.glyph_height)
            if run.anchor.x - last.anchor.x <= RUN_GAP_TOL * h:
                chain.append(run)
            else:
                merged.append(_join_chain(chain))
                chain = [run]
        merged.append(_join_chain(chain))
    merged.sort(key=lambda r: (r.anchor.y, r.anchor.x))
    return merged


def _join_chain(chain: list[TextRun]) -> TextRun:
    if len(chain) == 1:
        return chain[0]
    return TextRun(
        id=chain[0].id,
        anchor=chain[0].anchor,
        content="".join(m.content for m in chain),
        glyph_height=max(m.glyph_height for m in chain),
    )


# ---------------------------------------------------------------------------
# document parsing

def _local_name(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _parse_length(text: str | None) -> float | None:
    if text is None:
        return None
    m = _NUM_RE.search(text)
    return float(m.group(0)) if m else None


_FONT_SIZE_RE = re.compile(r"font-size\s*:\s*([\d.]+)")


def _font_size(elem: ET.Element, inherited: float) -> float:
    fs = _parse_length(elem.get("font-size"))
    if fs is None:
        style = elem.get("style", "")
        m = _FONT_SIZE_RE.search(style)
        fs = float(m.group(1)) if m else None
    return fs if fs is not None else inherited


class _Parser:
    def __init__(self) -> None:
        self.doc = FigureDocument()
        self._counter = 0

    def _gen_id(self, elem: ET.Element, kind: str) -> str:
        eid = elem.get("id")
        if eid:
            return eid
        self._counter += 1
        return f"{kind}-{self._counter}"

    def walk(self, elem: ET.Element, transform: AffineTransform, font_size: float) -> None:
        for child in elem:
            tag = _local_name(child.tag)
            t_attr = child.get("transform")
            t = transform.then(parse_transform(t_attr)) if t_attr else transform
            fs = _font_size(child, font_size)
            handler = getattr(self, f"_handle_{tag}", None)
            if handler is not None:
                handler(child, t, fs)
            elif tag in ("g", "svg", "a", "switch"):
                self.walk(child, t, fs)
            elif tag in ("defs", "title", "desc", "metadata", "clipPath", "marker",
                         "symbol", "pattern", "linearGradient", "radialGradient",
                         "filter", "mask", "script"):
                pass  # non-rendering containers
            else:
                self.doc.warnings.append(f"unsupported element <{tag}> skipped")

    # --- element handlers -------------------------------------------------

    def _handle_circle(self, elem: ET.Element, t: AffineTransform, fs: float) -> None:
        cx = _parse_length(elem.get("cx")) or 0.0
        cy = _parse_length(elem.get("cy")) or 0.0
        r = _parse_length(elem.get("r")) or 0.0
        self._add_rounded(elem, t, cx, cy, r, r)

    def _handle_ellipse(self, elem: ET.Element, t: AffineTransform, fs: float) -> None:
        cx = _parse_length(elem.get("cx")) or 0.0
        cy = _parse_length(elem.get("cy")) or 0.0
        rx = _parse_length(elem.get("rx")) or 0.0
        ry = _parse_length(elem.get("ry")) or 0.0
        self._add_rounded(elem, t, cx, cy, rx, ry)

    def _add_rounded(self, elem: ET.Element, t: AffineTransform,
                     cx: float, cy: float, rx: float, ry: float) -> None:
        if rx <= 0 or ry <= 0:
            self.doc.warnings.append(f"degenerate circle/ellipse skipped (r={rx},{ry})")
            return
        # image of the ellipse under the linear part; semi-axes are the
        # singular values of L * diag(rx, ry)
        scaled = AffineTransform(a=t.a * rx, b=t.b * rx, c=t.c * ry, d=t.d * ry)
        s1, s2 = scaled.singular_values()
        if s1 <= 0 or (s1 - s2) / s1 > ELLIPSE_CIRCLE_TOL:
            self.doc.warnings.append(
                f"non-circular ellipse skipped (semi-axes {s1:.3g}, {s2:.3g})")
            return
        self.doc.circles.append(CircleGlyph(
            id=self._gen_id(elem, "circle"),
            center=t.apply_xy(cx, cy),
            radius=math.sqrt(s1 * s2),
            stroke_style=elem.get("style", "") or elem.get("stroke", ""),
        ))

    def _handle_line(self, elem: ET.Element, t: AffineTransform, fs: float) -> None:
        p1 = t.apply_xy(_parse_length(elem.get("x1")) or 0.0,
                        _parse_length(elem.get("y1")) or 0.0)
        p2 = t.apply_xy(_parse_length(elem.get("x2")) or 0.0,
                        _parse_length(elem.get("y2")) or 0.0)
        if p1 == p2:
            self.doc.warnings.append("zero-length line skipped")
            return
        self.doc.segments.append(SegmentGlyph(self._gen_id(elem, "line"), p1, p2))

    def _handle_path(self, elem: ET.Element, t: AffineTransform, fs: float) -> None:
        d = elem.get("d", "")
        if not d.strip():
            self.doc.warnings.append("empty path skipped")
            return
        segs = flatten_path(d, t, id_prefix=self._gen_id(elem, "path"),
                            warnings=self.doc.warnings)
        self.doc.segments.extend(segs)

    def _handle_rect(self, elem: ET.Element, t: AffineTransform, fs: float) -> None:
        x = _parse_length(elem.get("x")) or 0.0
        y = _parse_length(elem.get("y")) or 0.0
        w = _parse_length(elem.get("width")) or 0.0
        h = _parse_length(elem.get("height")) or 0.0
        if w <= 0 or h <= 0:
            self.doc.warnings.append("degenerate rect skipped")
            return
        rid = self._gen_id(elem, "rect")
        corners = [t.apply_xy(x, y), t.apply_xy(x + w, y),
                   t.apply_xy(x + w, y + h), t.apply_xy(x, y + h)]
        for k in range(4):
            self.doc.segments.append(
                SegmentGlyph(f"{rid}.{k}", corners[k], corners[(k + 1) % 4]))

    def _handle_image(self, elem: ET.Element, t: AffineTransform, fs: float) -> None:
        x = _parse_length(elem.get("x")) or 0.0
        y = _parse_length(elem.get("y")) or 0.0
        w = _parse_length(elem.get("width")) or 0.0
        h = _parse_length(elem.get("height")) or 0.0
        if w <= 0 or h <= 0:
            self.doc.warnings.append("degenerate image skipped")
            return
        corners = [t.apply_xy(x, y), t.apply_xy(x + w, y),
                   t.apply_xy(x + w, y + h), t.apply_xy(x, y + h)]
        xs = [p.x for p in corners]
        ys = [p.y for p in corners]
        self.doc.rasters.append(RasterGlyph(
            self._gen_id(elem, "image"),
            Rect(min(xs), min(ys), max(xs), max(ys))))

    def _handle_text(self, elem: ET.Element, t: AffineTransform, fs: float) -> None:
        self._collect_text(elem, t, fs, inherited_anchor=None)

    def _handle_use(self, elem: ET.Element, t: AffineTransform, fs: float) -> None:
        self.doc.warnings.append("<use> indirection not supported, skipped")

    def _handle_style(self, elem: ET.Element, t: AffineTransform, fs: float) -> None:
        self.doc.warnings.append("CSS stylesheet ignored")

    def _collect_text(self, elem: ET.Element, t: AffineTransform, fs: float,
                      inherited_anchor: Point | None) -> None:
        x = _parse_length(elem.get("x"))
        y = _parse_length(elem.get("y"))
        if x is not None or y is not None:
            anchor = t.apply_xy(x or 0.0, y or 0.0)
        else:
            anchor = inherited_anchor
        scale = math.sqrt(abs(t.determinant))
        content = (elem.text or "").strip()
        if content and anchor is not None:
            self.doc.texts.append(TextRun(
                self._gen_id(elem, "text"), anchor, content, fs * scale))
        elif content:
            self.doc.warnings.append("text without anchor skipped")
        for child in elem:
            tag = _local_name(child.tag)
            if tag == "tspan":
                ct_attr = child.get("transform")
                ct = t.then(parse_transform(ct_attr)) if ct_attr else t
                self._collect_text(child, ct, _font_size(child, fs), anchor)
            else:
                self.doc.warnings.append(f"unsupported element <{tag}> in text skipped")


def _canvas_rect(root: ET.Element, doc: FigureDocument) -> Rect:
    viewbox = root.get("viewBox")
    if viewbox:
        nums = [float(m.group(0)) for m in _NUM_RE.finditer(viewbox)]
        if len(nums) == 4 and nums[2] > 0 and nums[3] > 0:
            return Rect(nums[0], nums[1], nums[0] + nums[2], nums[1] + nums[3])
    w = _parse_length(root.get("width"))
    h = _parse_length(root.get("height"))
    if w and h and w > 0 and h > 0:
        return Rect(0.0, 0.0, w, h)
    # fall back to content bounds
    xs: list[float] = []
    ys: list[float] = []
    for c in doc.circles:
        xs += [c.center.x - c.radius, c.center.x + c.radius]
        ys += [c.center.y - c.radius, c.center.y + c.radius]
    for s in doc.segments:
        xs += [s.p1.x, s.p2.x]
        ys += [s.p1.y, s.p2.y]
    for r in doc.rasters:
        xs += [r.bounds.x0, r.bounds.x1]
        ys += [r.bounds.y0, r.bounds.y1]
    for t in doc.texts:
        xs.append(t.anchor.x)
        ys.append(t.anchor.y)
    if xs and (max(xs) > min(xs) or max(ys) > min(ys)):
        doc.warnings.append("no viewBox/width/height; canvas from content bounds")
        return Rect(min(xs), min(ys), max(max(xs), min(xs) + 1.0),
                    max(max(ys), min(ys) + 1.0))
    doc.warnings.append("no canvas information; unit canvas assumed")
    return Rect(0.0, 0.0, 1.0, 1.0)


def _within_overflow(bounds: Rect, canvas: Rect) -> bool:
    cx = (canvas.x0 + canvas.x1) / 2.0
    cy = (canvas.y0 + canvas.y1) / 2.0
    half_w = canvas.width * CANVAS_OVERFLOW_FACTOR / 2.0
    half_h = canvas.height * CANVAS_OVERFLOW_FACTOR / 2.0
    return (cx - half_w <= bounds.x0 and bounds.x1 <= cx + half_w
            and cy - half_h <= bounds.y0 and bounds.y1 <= cy + half_h)


def _drop_out_of_canvas(doc: FigureDocument) -> None:
    def keep_circle(c: CircleGlyph) -> bool:
        b = Rect(c.center.x - c.radius, c.center.y - c.radius,
                 c.center.x + c.radius, c.center.y + c.radius)
        return _within_overflow(b, doc.canvas)

    def keep_segment(s: SegmentGlyph) -> bool:
        b = Rect(min(s.p1.x, s.p2.x), min(s.p1.y, s.p2.y),
                 max(s.p1.x, s.p2.x), max(s.p1.y, s.p2.y))
        return _within_overflow(b, doc.canvas)

    for name, keep in (("circles", keep_circle), ("segments", keep_segment)):
        kept, dropped = [], 0
        for item in getattr(doc, name):
            if keep(item):
                kept.append(item)
            else:
                dropped += 1
        if dropped:
            setattr(doc, name, kept)
            doc.warnings.append(f"{dropped} far-out-of-canvas {name} discarded")
    kept_r = [r for r in doc.rasters if _within_overflow(r.bounds, doc.canvas)]
    if len(kept_r) != len(doc.rasters):
        doc.warnings.append(
            f"{len(doc.rasters) - len(kept_r)} far-out-of-canvas rasters discarded")
        doc.rasters = kept_r
    kept_t = [t for t in doc.texts
              if _within_overflow(Rect(t.anchor.x, t.anchor.y,
                                       t.anchor.x, t.anchor.y), doc.canvas)]
    if len(kept_t) != len(doc.texts):
        doc.warnings.append(
            f"{len(doc.texts) - len(kept_t)} far-out-of-canvas texts discarded")
        doc.texts = kept_t


def parse_svg(data: bytes) -> FigureDocument:
    """Parse SVG bytes into a flat device-space FigureDocument.

    Raw per-glyph text elements are composed into runs before the document
    is returned.  Raises MalformedXml / NotSvg / DegenerateTransform /
    PathSyntax.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedXml(str(exc)) from exc
    if _local_name(root.tag) != "svg":
        raise NotSvg(f"root element is <{_local_name(root.tag)}>, not <svg>")

    parser = _Parser()
    root_t_attr = root.get("transform")
    root_t = parse_transform(root_t_attr) if root_t_attr else IDENTITY
    parser.walk(root, root_t, DEFAULT_FONT_SIZE)
    doc = parser.doc
    doc.canvas = _canvas_rect(root, doc)
    _drop_out_of_canvas(doc)
    doc.texts = compose_text_runs(doc.texts)
    return doc
