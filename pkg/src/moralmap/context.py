"""Contextual county datasets: census, 2016 election, mask-usage survey, COVID series.

All loaders take UTF-8 delimited text with a header row and report bad rows
instead of silently dropping them. ``join_context`` inner-joins the four
sources over a FIPS universe and emits a coverage report for counties missing
any source.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Optional, Sequence


class ContextError(ValueError):
    """Unrecoverable contextual-data problem (bad schema, empty result)."""


@dataclass
class LoaderReport:
    """Row-level rejects: (row number, reason)."""

    rejects: list[tuple[int, str]] = field(default_factory=list)

    def add(self, row_no: int, reason: str) -> None:
        self.rejects.append((row_no, reason))


@dataclass(frozen=True)
class CovidSeries:
    start_date: date
    cases: tuple[int, ...]
    deaths: tuple[int, ...]

    def daily_deltas(self) -> tuple[list[int], list[int]]:
        """Day-over-day new cases/deaths; delta i belongs to day start_date+i+1."""
        dc = [self.cases[i] - self.cases[i - 1] for i in range(1, len(self.cases))]
        dd = [self.deaths[i] - self.deaths[i - 1] for i in range(1, len(self.deaths))]
        return dc, dd


@dataclass(frozen=True)
class CountyContext:
    fips: str
    population: int
    demographics: dict[str, float]
    dem_share: float
    rep_share: float
    mask_use: float
    covid: Optional[CovidSeries] = None

    @property
    def vote_margin(self) -> float:
        return self.dem_share - self.rep_share


def _read_rows(path: str | Path) -> tuple[list[str], list[dict]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        rows = list(reader)
    return header, rows


def load_census(
    path: str | Path, population_column: str = "population"
) -> tuple[dict[str, tuple[int, dict[str, float]]], LoaderReport]:
    """fips -> (population, demographics map). Non-fips numeric columns become demographics."""
    header, rows = _read_rows(path)
    if "fips" not in header:
        raise ContextError(f"{path}: missing fips column")
    if population_column not in header:
        raise ContextError(f"{path}: missing {population_column} column")
    demo_cols = [c for c in header if c not in ("fips", population_column)]
    out: dict[str, tuple[int, dict[str, float]]] = {}
    report = LoaderReport()
    for row_no, row in enumerate(rows, start=1):
        fips = (row.get("fips") or "").strip()
        if not fips:
            report.add(row_no, "missing-fips")
            continue
        try:
            population = int(float(row[population_column]))
        except (ValueError, TypeError):
            report.add(row_no, "non-numeric")
            continue
        if population <= 0:
            report.add(row_no, "non-positive")
            continue
        demographics: dict[str, float] = {}
        bad = False
        for col in demo_cols:
            try:
                demographics[col] = float(row[col])
            except (ValueError, TypeError):
                report.add(row_no, "non-numeric")
                bad = True
                break
        if bad:
            continue
        out[fips] = (population, demographics)
    return out, report


def load_elections(
    path: str | Path,
) -> tuple[dict[str, tuple[float, float]], LoaderReport]:
    """fips -> (dem_share, rep_share).

    Accepts either raw counts (dem_votes, rep_votes, total_votes) or
    pre-normalized shares (dem_share, rep_share).
    """
    header, rows = _read_rows(path)
    if "fips" not in header:
        raise ContextError(f"{path}: missing fips column")
    raw_mode = {"dem_votes", "rep_votes", "total_votes"} <= set(header)
    share_mode = {"dem_share", "rep_share"} <= set(header)
    if not raw_mode and not share_mode:
        raise ContextError(f"{path}: need dem/rep vote counts or shares")
    out: dict[str, tuple[float, float]] = {}
    report = LoaderReport()
    for row_no, row in enumerate(rows, start=1):
        fips = (row.get("fips") or "").strip()
        if not fips:
            report.add(row_no, "missing-fips")
            continue
        try:
            if raw_mode:
                dem = float(row["dem_votes"])
                rep = float(row["rep_votes"])
                total = float(row["total_votes"])
                if total <= 0:
                    report.add(row_no, "zero-total-votes")
                    continue
                dem_share, rep_share = dem / total, rep / total
            else:
                dem_share = float(row["dem_share"])
                rep_share = float(row["rep_share"])
        except (ValueError, TypeError):
            report.add(row_no, "non-numeric")
            continue
        if dem_share < 0 or rep_share < 0 or dem_share + rep_share > 1 + 1e-9:
            report.add(row_no, "invalid-shares")
            continue
        out[fips] = (dem_share, rep_share)
    return out, report


DEFAULT_MASK_CATEGORIES = ("never", "rarely", "sometimes", "frequently", "always")
DEFAULT_MASK_WEIGHTS = (0.0, 0.25, 0.5, 0.75, 1.0)


def load_mask_survey(
    path: str | Path,
    weights: Sequence[float] = DEFAULT_MASK_WEIGHTS,
    categories: Sequence[str] = DEFAULT_MASK_CATEGORIES,
) -> dict[str, float]:
    """Collapse per-fips categorical frequency shares to one mask-use scalar.

    mask_use = sum(weight_c * share_c), clamped to [0, 1]. Shares must sum to
    1 within 2%; anything else is a hard error (survey files are small and a
    bad sum means the wrong columns were mapped).
    """
    header, rows = _read_rows(path)
    if "fips" not in header:
        raise ContextError(f"{path}: missing fips column")
    missing = [c for c in categories if c not in header]
    if missing:
        raise ContextError(f"{path}: missing category columns {missing}")
    if len(weights) != len(categories):
        raise ContextError("weights and categories length mismatch")
    out: dict[str, float] = {}
    for row_no, row in enumerate(rows, start=1):
        fips = (row.get("fips") or "").strip()
        try:
            shares = [float(row[c]) for c in categories]
        except (ValueError, TypeError):
            raise ContextError(f"{path} row {row_no}: non-numeric share")
        total = sum(shares)
        if not 0.98 <= total <= 1.02:
            raise ContextError(
                f"{path} row {row_no}: category shares sum to {total:.4f}, "
                "expected ~1.0"
            )
        value = sum(w * s for w, s in zip(weights, shares))
        out[fips] = min(1.0, max(0.0, value))
    return out


def clean_cumulative(values: Sequence[int]) -> list[int]:
    """Running-max clamp: corrections that decrease a cumulative count are flattened."""
    out: list[int] = []
    running = 0
    for v in values:
        running = max(running, v)
        out.append(running)
    return out


def load_covid(
    path: str | Path, date_range: tuple[date, date]
) -> dict[str, CovidSeries]:
    """Per-fips daily cumulative cases/deaths, clipped to range and cleaned.

    Gaps are forward-filled; cumulative decreases are clamped to the running
    max; deaths are capped at cases.
    """
    header, rows = _read_rows(path)
    for col in ("fips", "date", "cases", "deaths"):
        if col not in header:
            raise ContextError(f"{path}: missing {col} column")
    start, end = date_range
    if end < start:
        raise ContextError("inverted date range")
    by_fips: dict[str, dict[date, tuple[int, int]]] = {}
    for row_no, row in enumerate(rows, start=1):
        try:
            d = date.fromisoformat(row["date"].strip())
        except (ValueError, AttributeError):
            raise ContextError(f"{path} row {row_no}: bad date")
        if not start <= d <= end:
            continue
        fips = row["fips"].strip()
        try:
            cases = int(float(row["cases"]))
            deaths = int(float(row["deaths"]))
        except (ValueError, TypeError):
            raise ContextError(f"{path} row {row_no}: non-numeric count")
        by_fips.setdefault(fips, {})[d] = (cases, deaths)
    if not by_fips:
        raise ContextError(f"{path}: no rows within {start}..{end}")
    n_days = (end - start).days + 1
    out: dict[str, CovidSeries] = {}
    for fips, day_map in by_fips.items():
        cases, deaths = [], []
        last = (0, 0)
        for i in range(n_days):
            d = start + timedelta(days=i)
            last = day_map.get(d, last)  # forward fill
            cases.append(last[0])
            deaths.append(last[1])
        cases = clean_cumulative(cases)
        deaths = [min(dv, cv) for dv, cv in zip(clean_cumulative(deaths), cases)]
        out[fips] = CovidSeries(start, tuple(cases), tuple(deaths))
    return out


@dataclass
class CoverageReport:
    """Counties excluded from the join: fips -> sources they were missing from."""

    missing: dict[str, list[str]] = field(default_factory=dict)

    def write(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("fips,missing_sources\n")
            for fips in sorted(self.missing):
                fh.write(f"{fips},{'|'.join(self.missing[fips])}\n")


def join_context(
    census: dict[str, tuple[int, dict[str, float]]],
    elections: dict[str, tuple[float, float]],
    mask: dict[str, float],
    covid: Optional[dict[str, CovidSeries]],
    fips_universe: Sequence[str],
) -> tuple[dict[str, CountyContext], CoverageReport]:
    """Inner-join all sources over the universe; absences go to the coverage report.

    ``covid`` may be None for corpora without an epidemic context; it is then
    not required for coverage.
    """
    contexts: dict[str, CountyContext] = {}
    coverage = CoverageReport()
    for fips in sorted(fips_universe):
        missing = []
        if fips not in census:
            missing.append("census")
        if fips not in elections:
            missing.append("elections")
        if fips not in mask:
            missing.append("mask")
        if covid is not None and fips not in covid:
            missing.append("covid")
        if missing:
            coverage.missing[fips] = missing
            continue
        population, demographics = census[fips]
        dem_share, rep_share = elections[fips]
        contexts[fips] = CountyContext(
            fips=fips,
            population=population,
            demographics=demographics,
            dem_share=dem_share,
            rep_share=rep_share,
            mask_use=mask[fips],
            covid=covid[fips] if covid is not None else None,
        )
    if not contexts:
        raise ContextError("join produced no counties")
    return contexts, coverage
