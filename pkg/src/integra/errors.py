"""Exception hierarchy.

Every domain failure raised by this package derives from :class:`IntegraError`
so the CLI can map it to a single structured diagnostic line and exit code 1.
"""

from __future__ import annotations


class IntegraError(Exception):
    """Base class for all domain errors."""


# ---------------------------------------------------------------------------
# panel construction / alignment


class PanelDataError(IntegraError):
    """Problems with the monthly return panel itself."""


class GapError(PanelDataError):
    def __init__(self, series_id, month):
        self.series_id = series_id
        self.month = month
        super().__init__(f"series {series_id!r} has an interior gap at {month}")


class DuplicateError(PanelDataError):
    def __init__(self, series_id, month):
        self.series_id = series_id
        self.month = month
        super().__init__(f"series {series_id!r} has a duplicate observation for {month}")


class MissingCommonSeriesError(PanelDataError):
    def __init__(self, name, detail=""):
        self.name = name
        msg = f"common series {name!r} is missing"
        super().__init__(msg + (f": {detail}" if detail else ""))


class CoverageError(MissingCommonSeriesError):
    """A common (or riskfree) series exists but does not cover a required range."""

    def __init__(self, name, detail):
        self.name = name
        PanelDataError.__init__(self, f"series {name!r} does not cover {detail}")


class TooShortSeriesError(PanelDataError):
    def __init__(self, series_id, length, minimum):
        self.series_id = series_id
        self.length = length
        super().__init__(
            f"series {series_id!r} has {length} months; at least {minimum} are required"
        )


class LengthMismatchError(PanelDataError):
    def __init__(self, n_left, n_right):
        super().__init__(f"aligned series differ in length: {n_left} vs {n_right}")


class UnknownCountryError(PanelDataError):
    def __init__(self, country_id):
        self.country_id = country_id
        super().__init__(f"unknown country {country_id!r}")


class MetadataError(PanelDataError):
    """Bad or missing series metadata (group tags)."""


# ---------------------------------------------------------------------------
# descriptive statistics


class StatsError(IntegraError):
    pass


class TooShortError(StatsError):
    def __init__(self, n, minimum):
        super().__init__(f"series has {n} observations; at least {minimum} are required")


class ZeroVarianceError(StatsError):
    def __init__(self):
        super().__init__("series is constant (zero variance)")


class LagTooLargeError(StatsError):
    def __init__(self, lag, n):
        super().__init__(f"lag {lag} is too large for a series of length {n}")


# ---------------------------------------------------------------------------
# GARCH engine


class GarchError(IntegraError):
    pass


class DegenerateDataError(GarchError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"data column {column} is constant; cannot fit a volatility model")


class SingularHError(GarchError):
    def __init__(self, t):
        self.t = t
        super().__init__(f"conditional covariance matrix is singular at step {t}")


class NonFiniteError(GarchError):
    def __init__(self, detail):
        super().__init__(f"non-finite values encountered: {detail}")


class NoConvergenceError(GarchError):
    def __init__(self, detail):
        super().__init__(f"estimation did not converge: {detail}")


# ---------------------------------------------------------------------------
# panel NLS


class PanelFitError(IntegraError):
    pass


class EmptyGroupError(PanelFitError):
    def __init__(self, group):
        self.group = group
        super().__init__(f"no countries in group {group!r}")


class AlignmentError(PanelFitError):
    def __init__(self, detail):
        super().__init__(f"misaligned inputs: {detail}")


class SingularJacobianError(PanelFitError):
    def __init__(self):
        super().__init__("jacobian cross-product is singular; standard errors unavailable")


# ---------------------------------------------------------------------------
# simulator


class SimulationError(IntegraError):
    pass


class DgpConfigError(SimulationError):
    pass


# ---------------------------------------------------------------------------
# file I/O


class CsvFormatError(IntegraError):
    def __init__(self, path, line, column, detail):
        self.path = str(path)
        self.line = line
        self.column = column
        super().__init__(f"{path}:{line}:{column}: {detail}")


class ManifestMismatchError(IntegraError):
    def __init__(self, path, detail):
        self.path = str(path)
        super().__init__(f"manifest check failed for {path}: {detail}")
