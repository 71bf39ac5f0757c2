"""Monthly panel data model.

Holds unbalanced per-country excess-return series next to the three common
series (world excess return and the two composite FX-index returns), validates
contiguity and coverage, and aligns a country with the common series as the
four-column matrix consumed by the volatility stage.

All returns are percent per month.  Annualised display is a reporting concern
and never enters the numerics.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    CoverageError,
    DuplicateError,
    GapError,
    LengthMismatchError,
    MetadataError,
    MissingCommonSeriesError,
    TooShortSeriesError,
    UnknownCountryError,
)

MIN_SERIES_LENGTH = 60  # estimation floor: 30 volatility parameters per country

COUNTRY_GROUPS = ("developed", "emerging")
COMMON_GROUPS = ("world", "fx_dev", "fx_emg")
RISKFREE_GROUP = "riskfree"

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


@dataclass(frozen=True, order=True)
class MonthIndex:
    """A calendar month, totally ordered, with integer arithmetic."""

    year: int
    month: int

    def __post_init__(self):
        if not 1 <= int(self.month) <= 12:
            raise ValueError(f"month must be in 1..12, got {self.month}")

    @classmethod
    def parse(cls, text: str) -> "MonthIndex":
        m = _MONTH_RE.match(text.strip())
        if m is None:
            raise ValueError(f"expected YYYY-MM, got {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"

    def to_ordinal(self) -> int:
        return self.year * 12 + (self.month - 1)

    @classmethod
    def from_ordinal(cls, ordinal: int) -> "MonthIndex":
        return cls(ordinal // 12, ordinal % 12 + 1)

    def __add__(self, months: int) -> "MonthIndex":
        return MonthIndex.from_ordinal(self.to_ordinal() + int(months))

    def __sub__(self, other):
        if isinstance(other, MonthIndex):
            return self.to_ordinal() - other.to_ordinal()
        return MonthIndex.from_ordinal(self.to_ordinal() - int(other))

    def successor(self) -> "MonthIndex":
        return self + 1


@dataclass(frozen=True, eq=False)
class MonthlySeries:
    """A contiguous monthly series starting at ``start``."""

    series_id: str
    start: MonthIndex
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("values must be a non-empty 1-d array")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"series {self.series_id!r} contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    @property
    def end(self) -> MonthIndex:
        return self.start + (len(self) - 1)

    def months(self) -> list[MonthIndex]:
        return [self.start + k for k in range(len(self))]

    def covers(self, first: MonthIndex, last: MonthIndex) -> bool:
        return self.start <= first and self.end >= last

    def window(self, first: MonthIndex, last: MonthIndex) -> np.ndarray:
        """Values over [first, last], which must be covered."""
        if not self.covers(first, last):
            raise CoverageError(self.series_id, f"[{first}, {last}]")
        i = first - self.start
        return self.values[i : i + (last - first) + 1]

    def __eq__(self, other):
        return (
            isinstance(other, MonthlySeries)
            and self.series_id == other.series_id
            and self.start == other.start
            and np.array_equal(self.values, other.values)
        )


class CountrySeries(MonthlySeries):
    """A country's monthly excess returns; must meet the estimation floor."""

    def __post_init__(self):
        super().__post_init__()
        if len(self) < MIN_SERIES_LENGTH:
            raise TooShortSeriesError(self.series_id, len(self), MIN_SERIES_LENGTH)

    @property
    def country_id(self) -> str:
        return self.series_id


@dataclass(frozen=True, eq=False)
class ReturnPanel:
    """Unbalanced country panel plus the shared world and FX-index series.

    Immutable after construction; safe to share across concurrent estimations.
    """

    countries: tuple[CountrySeries, ...]
    groups: Mapping[str, str]
    world: MonthlySeries
    fx_dev: MonthlySeries
    fx_emg: MonthlySeries

    def __post_init__(self):
        object.__setattr__(self, "countries", tuple(self.countries))
        object.__setattr__(self, "groups", dict(self.groups))
        if not self.countries:
            raise MetadataError("panel has no countries")
        ids = [c.country_id for c in self.countries]
        if len(set(ids)) != len(ids):
            raise MetadataError("duplicate country ids in panel")
        for cid in ids:
            tag = self.groups.get(cid)
            if tag not in COUNTRY_GROUPS:
                raise MetadataError(f"country {cid!r} has invalid group tag {tag!r}")
        first = min(c.start for c in self.countries)
        last = max(c.end for c in self.countries)
        for common in (self.world, self.fx_dev, self.fx_emg):
            if not common.covers(first, last):
                raise CoverageError(
                    common.series_id,
                    f"the union of country ranges [{first}, {last}]",
                )

    def country_ids(self) -> list[str]:
        return [c.country_id for c in self.countries]

    def country(self, country_id: str) -> CountrySeries:
        for c in self.countries:
            if c.country_id == country_id:
                return c
        raise UnknownCountryError(country_id)

    def group_of(self, country_id: str) -> str:
        self.country(country_id)
        return self.groups[country_id]

    def __eq__(self, other):
        return (
            isinstance(other, ReturnPanel)
            and self.countries == other.countries
            and dict(self.groups) == dict(other.groups)
            and self.world == other.world
            and self.fx_dev == other.fx_dev
            and self.fx_emg == other.fx_emg
        )


@dataclass(frozen=True, eq=False)
class FactorPanel:
    """One candidate integration factor, one contiguous series per country.

    The factor enters the pricing stage lagged one month, so a country's
    factor series must cover its return range shifted back by one month.
    """

    series: Mapping[str, MonthlySeries]

    def __post_init__(self):
        object.__setattr__(self, "series", dict(self.series))

    def country_ids(self) -> list[str]:
        return sorted(self.series)

    def for_country(self, country_id: str) -> MonthlySeries:
        try:
            return self.series[country_id]
        except KeyError:
            raise UnknownCountryError(country_id) from None

    def __eq__(self, other):
        return isinstance(other, FactorPanel) and dict(self.series) == dict(other.series)


def excess_returns(total_returns, riskfree) -> np.ndarray:
    """Elementwise total minus riskfree, both monthly percent and month-aligned."""
    total = np.asarray(total_returns, dtype=float)
    rf = np.asarray(riskfree, dtype=float)
    if total.shape != rf.shape:
        raise LengthMismatchError(total.size, rf.size)
    return total - rf


def align(panel: ReturnPanel, country_id: str) -> np.ndarray:
    """Month-aligned T x 4 matrix (country excess, fx_dev, fx_emg, world excess)."""
    country = panel.country(country_id)
    first, last = country.start, country.end
    cols = (
        country.values,
        panel.fx_dev.window(first, last),
        panel.fx_emg.window(first, last),
        panel.world.window(first, last),
    )
    return np.column_stack(cols)


def _collect_series(
    rows: Iterable[tuple[MonthIndex, str, float]],
) -> dict[str, MonthlySeries]:
    by_id: dict[str, list[tuple[MonthIndex, float]]] = {}
    for month, series_id, value in rows:
        by_id.setdefault(series_id, []).append((month, float(value)))
    out: dict[str, MonthlySeries] = {}
    for series_id in sorted(by_id):
        obs = sorted(by_id[series_id], key=lambda p: p[0])
        months = [m for m, _ in obs]
        for prev, cur in zip(months, months[1:]):
            if cur == prev:
                raise DuplicateError(series_id, cur)
            if cur != prev + 1:
                raise GapError(series_id, prev + 1)
        out[series_id] = MonthlySeries(
            series_id, months[0], np.array([v for _, v in obs])
        )
    return out


def build_panel(
    rows: Iterable[tuple[MonthIndex, str, float]],
    groups: Mapping[str, str],
) -> ReturnPanel:
    """Build a validated ReturnPanel from long-format records.

    ``rows`` are (month, series_id, value) triples; ``groups`` tags each
    series_id as developed/emerging/world/fx_dev/fx_emg/riskfree.  When a
    riskfree series is present, country and world series are taken as total
    returns and converted to excess returns; without one they are assumed to
    be excess returns already.  FX-index returns are never adjusted.
    """
    series = _collect_series(rows)
    for series_id in series:
        if series_id not in groups:
            raise MetadataError(f"series {series_id!r} has no group tag")
    for series_id, tag in groups.items():
        if tag not in COUNTRY_GROUPS + COMMON_GROUPS + (RISKFREE_GROUP,):
            raise MetadataError(f"series {series_id!r} has unknown group {tag!r}")

    riskfree = None
    for series_id, tag in sorted(groups.items()):
        if tag == RISKFREE_GROUP and series_id in series:
            riskfree = series[series_id]

    def resolve_common(tag: str) -> MonthlySeries:
        found = [s for sid, s in sorted(series.items()) if groups.get(sid) == tag]
        if not found:
            raise MissingCommonSeriesError(tag)
        if len(found) > 1:
            raise MetadataError(f"more than one series tagged {tag!r}")
        return found[0]

    def to_excess(s: MonthlySeries) -> np.ndarray:
        if riskfree is None:
            return s.values
        return excess_returns(s.values, riskfree.window(s.start, s.end))

    world = resolve_common("world")
    world = MonthlySeries(world.series_id, world.start, to_excess(world))
    fx_dev = resolve_common("fx_dev")
    fx_emg = resolve_common("fx_emg")

    countries = []
    panel_groups = {}
    for series_id, s in sorted(series.items()):
        tag = groups[series_id]
        if tag in COUNTRY_GROUPS:
            countries.append(CountrySeries(series_id, s.start, to_excess(s)))
            panel_groups[series_id] = tag
    if not countries:
        raise MetadataError("no country series (developed/emerging) in input")

    return ReturnPanel(
        countries=tuple(countries),
        groups=panel_groups,
        world=world,
        fx_dev=fx_dev,
        fx_emg=fx_emg,
    )
