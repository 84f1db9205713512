from __future__ import annotations

import pytest

from vecfig.svg_model import FigureDocument


def svg_bytes(body: str, width: float = 600, height: float = 450) -> bytes:
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'xmlns:xlink="http://www.w3.org/1999/xlink" '
        f'width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">{body}</svg>'
    ).encode("utf-8")


def serialize_model(doc: FigureDocument) -> bytes:
    """Re-serialize a figure model to SVG for round-trip checks."""
    parts = []
    for c in doc.circles:
        parts.append(f'<circle id="{c.id}" cx="{c.center.x!r}" cy="{c.center.y!r}" '
                     f'r="{c.radius!r}"/>')
    for s in doc.segments:
        parts.append(f'<line id="{s.id}" x1="{s.p1.x!r}" y1="{s.p1.y!r}" '
                     f'x2="{s.p2.x!r}" y2="{s.p2.y!r}"/>')
    for t in doc.texts:
        parts.append(f'<text id="{t.id}" x="{t.anchor.x!r}" y="{t.anchor.y!r}" '
                     f'font-size="{t.glyph_height!r}">{t.content}</text>')
    return svg_bytes("".join(parts), doc.canvas.width, doc.canvas.height)


@pytest.fixture
def basic_axes_body() -> str:
    """Left axis (50,400)-(50,50), bottom axis (50,400)-(500,400)."""
    return ('<line id="vax" x1="50" y1="400" x2="50" y2="50"/>'
            '<line id="hax" x1="50" y1="400" x2="500" y2="400"/>')
