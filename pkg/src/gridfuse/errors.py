"""Exception types raised across the package."""


class GridFuseError(Exception):
    """Base class for all package errors."""


class InvalidSize(GridFuseError, ValueError):
    pass


class PolarRegion(GridFuseError, ValueError):
    pass


class CountMismatch(GridFuseError):
    """The number of generated centres differs from the target grid count."""

    def __init__(self, expected, got):
        self.expected = expected
        self.got = got
        super().__init__(f"#latlon == G failed: expected {expected} centres, got {got}")


class ParseError(GridFuseError, ValueError):
    def __init__(self, reason, line=None):
        self.reason = reason
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{reason}")


class OutOfExtent(GridFuseError, LookupError):
    pass


class NoData(GridFuseError, LookupError):
    pass


class UnknownEdge(GridFuseError, KeyError):
    def __str__(self):
        return f"unknown edge id {self.args[0]!r}"


class ConservationViolation(GridFuseError):
    """Per-cell edge sets do not partition the global edge set."""

    def __init__(self, expected, got):
        self.expected = expected
        self.got = got
        super().__init__(f"#E_glb == #E_sum failed: {expected} edges in graph, {got} assigned")


class RasterCoverageError(GridFuseError):
    def __init__(self, failed, total, threshold):
        self.failed = failed
        self.total = total
        self.threshold = threshold
        super().__init__(
            f"{failed}/{total} cells returned no raster value "
            f"(threshold {threshold:.0%})"
        )
