"""Exception types shared across the extraction pipeline."""

from __future__ import annotations


class VecfigError(Exception):
    """Base class for all extraction errors."""


# --- SVG parsing ---

class MalformedXml(VecfigError):
    """Input bytes are not well-formed XML."""


class NotSvg(VecfigError):
    """XML root element is not <svg>."""


class DegenerateTransform(VecfigError):
    """A transform with zero determinant was encountered."""


class PathSyntax(VecfigError):
    """Path data string does not follow the path grammar."""


# --- Axis detection / calibration ---

class NoAxesFound(VecfigError):
    """No qualifying vertical/horizontal axis pair in the figure."""


class InsufficientMatches(VecfigError):
    """Fewer than two tick-label pairs matched on an axis."""


class TooFewTicks(VecfigError):
    """Fewer than two tick-label pairs supplied to calibration."""


class CollocatedTicks(VecfigError):
    """All tick positions coincide; no slope can be fitted."""


class NonlinearScale(VecfigError):
    """Least-squares residual exceeds the linearity gate (e.g. log axis)."""


# --- Point extraction ---

class NoDataGlyphs(VecfigError):
    """No circle glyph lies inside the plot interior."""


# --- Corpus pipeline ---

class TemplateGroupOutOfRange(VecfigError):
    """makeProject template references a capture group the filter lacks."""


class DestinationCollision(VecfigError):
    """Two input files map to the same project destination."""


class BadFilter(VecfigError):
    """Figure filter regex has no capture group for the figure index."""


class IoFailure(VecfigError):
    """Output could not be written."""


# --- Evaluation ---

class MissingTruth(VecfigError):
    """No ground-truth file available for a figure under evaluation."""
