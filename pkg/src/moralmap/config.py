"""Pipeline configuration: one YAML file describes a whole dataset build.

Swapping datasets (e.g. a stay-at-home corpus for a BLM corpus without COVID
context) is a config change only; no code paths are dataset-specific.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Optional

import yaml

from .context import DEFAULT_MASK_CATEGORIES, DEFAULT_MASK_WEIGHTS
from .corpus import CorpusSchema


class ConfigError(ValueError):
    pass


@dataclass
class PipelineConfig:
    corpus_path: Path
    boundaries_path: Path
    census_path: Path
    elections_path: Path
    mask_path: Path
    output_dir: Path
    covid_path: Optional[Path] = None
    corpus_schema: CorpusSchema = field(default_factory=CorpusSchema)
    exclusions: frozenset[str] = frozenset()
    taxonomy_path: Optional[Path] = None
    lexicon_pro: tuple[str, ...] = ()
    lexicon_anti: tuple[str, ...] = ()
    bin_width_days: int = 1
    mask_weights: tuple[float, ...] = DEFAULT_MASK_WEIGHTS
    mask_categories: tuple[str, ...] = DEFAULT_MASK_CATEGORIES
    study_start: Optional[date] = None
    study_end: Optional[date] = None
    geometry_tolerance: float = 0.0
    serve_host: str = "127.0.0.1"
    serve_port: int = 8008

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        try:
            with open(path, encoding="utf-8") as fh:
                raw = yaml.safe_load(fh) or {}
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}")
        except yaml.YAMLError as exc:
            raise ConfigError(f"config is not valid YAML: {exc}")
        base = path.parent
        paths = raw.get("paths", {})

        def _path(key: str, required: bool = True) -> Optional[Path]:
            value = paths.get(key)
            if value is None:
                if required:
                    raise ConfigError(f"paths.{key} missing from config")
                return None
            return (base / value).resolve()

        lexicon = raw.get("stance_lexicon") or {}
        window = raw.get("study_window") or {}
        serve = raw.get("serve") or {}
        try:
            return cls(
                corpus_path=_path("corpus"),
                boundaries_path=_path("boundaries"),
                census_path=_path("census"),
                elections_path=_path("elections"),
                mask_path=_path("mask"),
                covid_path=_path("covid", required=False),
                output_dir=_path("output"),
                corpus_schema=CorpusSchema.from_dict(raw.get("corpus_schema", {})),
                exclusions=frozenset(raw.get("exclusions", [])),
                taxonomy_path=_path("taxonomy", required=False),
                lexicon_pro=tuple(lexicon.get("pro", [])),
                lexicon_anti=tuple(lexicon.get("anti", [])),
                bin_width_days=int(raw.get("bin_width_days", 1)),
                mask_weights=tuple(raw.get("mask_weights", DEFAULT_MASK_WEIGHTS)),
                mask_categories=tuple(raw.get("mask_categories", DEFAULT_MASK_CATEGORIES)),
                study_start=_parse_date(window.get("start")),
                study_end=_parse_date(window.get("end")),
                geometry_tolerance=float(raw.get("geometry_tolerance", 0.0)),
                serve_host=str(serve.get("host", "127.0.0.1")),
                serve_port=int(serve.get("port", 8008)),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad config value: {exc}")

    def validate(self) -> list[str]:
        """All problems found, not just the first."""
        problems = []
        for label, p in [
            ("corpus", self.corpus_path),
            ("boundaries", self.boundaries_path),
            ("census", self.census_path),
            ("elections", self.elections_path),
            ("mask", self.mask_path),
            ("covid", self.covid_path),
            ("taxonomy", self.taxonomy_path),
        ]:
            if p is not None and not p.exists():
                problems.append(f"paths.{label}: file not found: {p}")
        if self.bin_width_days < 1:
            problems.append("bin_width_days must be >= 1")
        if len(self.mask_weights) != len(self.mask_categories):
            problems.append("mask_weights and mask_categories length mismatch")
        for code in self.exclusions:
            if not (isinstance(code, str) and len(code) == 2 and code.isalpha()):
                problems.append(f"exclusions: invalid state code {code!r}")
        if (self.study_start is None) != (self.study_end is None):
            problems.append("study_window needs both start and end")
        if self.study_start and self.study_end and self.study_end < self.study_start:
            problems.append("study_window is inverted")
        return problems


def _parse_date(value) -> Optional[date]:
    if value is None:
        return None
    if isinstance(value, date):
        return value
    return date.fromisoformat(str(value))
