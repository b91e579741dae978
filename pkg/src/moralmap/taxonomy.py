"""Moral foundation taxonomy: six foundations, each with a virtue and a vice frame.

The default taxonomy ships with the package; an alternative can be loaded
from a YAML file for corpora annotated against a different frame set.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import yaml


class Polarity(enum.Enum):
    VIRTUE = "virtue"
    VICE = "vice"


class Foundation(enum.Enum):
    CARE = "Care"
    FAIRNESS = "Fairness"
    LOYALTY = "Loyalty"
    AUTHORITY = "Authority"
    PURITY = "Purity"
    LIBERTY = "Liberty"


FOUNDATION_ORDER = list(Foundation)


@dataclass(frozen=True)
class MoralFrame:
    name: str
    foundation: Foundation
    polarity: Polarity


class TaxonomyError(ValueError):
    """Raised when a frame table violates the virtue/vice pairing structure."""


# (foundation, virtue frame, vice frame, extra aliases)
_DEFAULT_TABLE = [
    (Foundation.CARE, "Care", "Harm", {}),
    (Foundation.FAIRNESS, "Fairness", "Cheating", {}),
    (Foundation.LOYALTY, "Loyalty", "Betrayal", {}),
    (Foundation.AUTHORITY, "Authority", "Subversion", {}),
    (Foundation.PURITY, "Purity", "Degradation", {}),
    (Foundation.LIBERTY, "Liberty", "Oppression", {"Freedom": "Liberty"}),
]


@dataclass
class Taxonomy:
    """Bijective frame table: every foundation has exactly one virtue and one vice."""

    frames: list[MoralFrame]
    aliases: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        names = [f.name for f in self.frames]
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise TaxonomyError(f"duplicate frame name(s): {sorted(dupes)}")
        by_foundation: dict[Foundation, list[MoralFrame]] = {}
        for f in self.frames:
            by_foundation.setdefault(f.foundation, []).append(f)
        for foundation, members in by_foundation.items():
            polarities = sorted(m.polarity.value for m in members)
            if polarities != ["vice", "virtue"]:
                raise TaxonomyError(
                    f"foundation {foundation.value} must have exactly one virtue "
                    f"and one vice frame, got {polarities}"
                )
        self._by_name = {f.name: f for f in self.frames}
        for alias, target in self.aliases.items():
            if target not in self._by_name:
                raise TaxonomyError(f"alias {alias!r} points at unknown frame {target!r}")
            if alias in self._by_name:
                raise TaxonomyError(f"alias {alias!r} shadows a frame name")

    def resolve(self, label: str) -> MoralFrame:
        """Resolve a frame label (or alias) to its canonical frame."""
        label = label.strip()
        name = self.aliases.get(label, label)
        frame = self._by_name.get(name)
        if frame is None:
            raise KeyError(label)
        return frame

    def frame_names(self) -> list[str]:
        return [f.name for f in self.frames]

    def foundations(self) -> list[Foundation]:
        return [f for f in FOUNDATION_ORDER if any(m.foundation is f for m in self.frames)]

    def vice_partner(self, frame: MoralFrame) -> MoralFrame:
        """The opposite-polarity frame sharing the same foundation."""
        for other in self.frames:
            if other.foundation is frame.foundation and other.polarity is not frame.polarity:
                return other
        raise TaxonomyError(f"no partner for {frame.name}")  # unreachable on valid taxonomy

    def frame_index(self, frame: MoralFrame) -> int:
        return self.frames.index(frame)


def default_taxonomy() -> Taxonomy:
    frames = []
    aliases: dict[str, str] = {}
    for foundation, virtue, vice, extra in _DEFAULT_TABLE:
        frames.append(MoralFrame(virtue, foundation, Polarity.VIRTUE))
        frames.append(MoralFrame(vice, foundation, Polarity.VICE))
        aliases.update(extra)
    return Taxonomy(frames, aliases)


def load_taxonomy(path: str | None = None) -> Taxonomy:
    """Load the frame table from a YAML file, or return the default 12-frame table.

    Expected YAML shape::

        frames:
          - {name: Care, foundation: Care, polarity: virtue}
          ...
        aliases:
          Freedom: Liberty
    """
    if path is None:
        return default_taxonomy()
    with open(path, encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    frames = []
    seen = set()
    for entry in raw.get("frames", []):
        name = entry["name"]
        if name in seen:
            raise TaxonomyError(f"duplicate frame name(s): ['{name}']")
        seen.add(name)
        frames.append(
            MoralFrame(name, Foundation(entry["foundation"]), Polarity(entry["polarity"]))
        )
    return Taxonomy(frames, dict(raw.get("aliases", {})))
