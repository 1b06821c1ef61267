"""Tile catalogs, level grids, and sliding-window corpus construction.

Level files are plain text: one character per tile, one row per line,
rows top to bottom. A catalog config maps each character to a tile id
(contiguous, assigned in config order) and a set of semantic categories.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

CATEGORIES = frozenset({"background", "solid", "enemy", "hazard", "passable"})


class CorpusError(ValueError):
    """Malformed catalog config, level text, or window parameters."""


@dataclass(frozen=True)
class TileCatalog:
    """Maps tile characters to ids and semantic categories.

    Ids are contiguous from 0 in config order; ``boundary_id`` is a
    reserved sentinel (max id + 1) used only for out-of-grid reads.
    """

    chars: tuple[str, ...]
    categories: tuple[frozenset[str], ...]

    def __post_init__(self) -> None:
        if len(self.chars) != len(self.categories):
            raise CorpusError("chars and categories length mismatch")
        if len(set(self.chars)) != len(self.chars):
            raise CorpusError("duplicate character in catalog")

    @property
    def boundary_id(self) -> int:
        return len(self.chars)

    @property
    def tile_count(self) -> int:
        return len(self.chars)

    def id_of(self, char: str) -> int:
        try:
            return self.chars.index(char)
        except ValueError:
            raise CorpusError(f"character {char!r} not in catalog") from None

    def char_of(self, tile_id: int) -> str:
        return self.chars[tile_id]

    def has_category(self, tile_id: int, category: str) -> bool:
        return category in self.categories[tile_id]

    def ids_with(self, category: str) -> frozenset[int]:
        return frozenset(
            i for i, cats in enumerate(self.categories) if category in cats
        )


def load_catalog(config_text: str) -> TileCatalog:
    """Parse a catalog config (JSON: ``{"tiles": {char: [category, ...]}}``).

    Ids are assigned in config order; duplicate characters, empty
    category lists, and unknown category names are rejected.
    """

    def reject_duplicates(pairs):
        seen = set()
        for key, _ in pairs:
            if key in seen:
                raise CorpusError(f"duplicate character {key!r} in catalog config")
            seen.add(key)
        return dict(pairs)

    try:
        config = json.loads(config_text, object_pairs_hook=reject_duplicates)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"catalog config is not valid JSON: {exc}") from exc
    if not isinstance(config, dict) or "tiles" not in config:
        raise CorpusError('catalog config must be an object with a "tiles" key')
    tiles = config["tiles"]
    if not tiles:
        raise CorpusError("catalog config has no tiles")

    chars: list[str] = []
    categories: list[frozenset[str]] = []
    for char, cats in tiles.items():
        if len(char) != 1:
            raise CorpusError(f"tile key {char!r} must be a single character")
        if not cats:
            raise CorpusError(f"tile {char!r} has an empty category list")
        unknown = set(cats) - CATEGORIES
        if unknown:
            raise CorpusError(
                f"tile {char!r} has unknown categories: {sorted(unknown)}"
            )
        chars.append(char)
        categories.append(frozenset(cats))

    catalog = TileCatalog(tuple(chars), tuple(categories))
    if not catalog.ids_with("background"):
        raise CorpusError("catalog must contain at least one background tile")
    return catalog


@dataclass(frozen=True)
class TileGrid:
    """A width x height grid of tile ids, stored row-major."""

    width: int
    height: int
    cells: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise CorpusError("grid dimensions must be >= 1")
        if len(self.cells) != self.width * self.height:
            raise CorpusError("cell count does not match width * height")

    def tile_at(self, x: int, y: int) -> int:
        """Tile id at column x, row y (no bounds check)."""
        return self.cells[y * self.width + x]

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def row(self, y: int) -> tuple[int, ...]:
        return self.cells[y * self.width : (y + 1) * self.width]

    def to_text(self, catalog: TileCatalog) -> str:
        lines = ["".join(catalog.char_of(t) for t in self.row(y)) for y in range(self.height)]
        return "\n".join(lines) + "\n"


def parse_level(text: str, catalog: TileCatalog) -> TileGrid:
    """Parse newline-separated rows of tile characters into a grid."""
    lines = text.splitlines()
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise CorpusError("empty level text")
    width = len(lines[0])
    cells: list[int] = []
    for y, line in enumerate(lines):
        if len(line) != width:
            raise CorpusError(
                f"ragged row {y}: length {len(line)}, expected {width}"
            )
        for x, char in enumerate(line):
            try:
                cells.append(catalog.id_of(char))
            except CorpusError:
                raise CorpusError(
                    f"character {char!r} at row {y}, column {x} not in catalog"
                ) from None
    return TileGrid(width, len(lines), tuple(cells))


def slide_windows(
    level: TileGrid, window_w: int, window_h: int, stride: int = 1
) -> list[TileGrid]:
    """Cut fixed-size segments by sliding a window horizontally, left to right."""
    if window_h != level.height:
        raise CorpusError(
            f"window height {window_h} != level height {level.height}"
        )
    if window_w > level.width:
        raise CorpusError(f"window width {window_w} > level width {level.width}")
    if stride < 1:
        raise CorpusError("stride must be >= 1")
    segments = []
    for start in range(0, level.width - window_w + 1, stride):
        cells = []
        for y in range(window_h):
            cells.extend(level.row(y)[start : start + window_w])
        segments.append(TileGrid(window_w, window_h, tuple(cells)))
    return segments


@dataclass(frozen=True)
class Corpus:
    """Segments cut from example levels, with per-segment provenance."""

    segments: tuple[TileGrid, ...]
    catalog: TileCatalog
    provenance: tuple[tuple[str, int], ...]  # (level name, window start column)

    def __post_init__(self) -> None:
        if len(self.segments) != len(self.provenance):
            raise CorpusError("provenance length mismatch")
        dims = {(s.width, s.height) for s in self.segments}
        if len(dims) > 1:
            raise CorpusError(f"segments have mixed dimensions: {sorted(dims)}")

    @property
    def segment_width(self) -> int:
        return self.segments[0].width

    @property
    def segment_height(self) -> int:
        return self.segments[0].height


def build_corpus(
    level_texts: list[tuple[str, str]],
    catalog: TileCatalog,
    window_w: int,
    window_h: int,
    stride: int = 1,
) -> Corpus:
    """Parse and window every level, concatenating segments left to right."""
    if not level_texts:
        raise CorpusError("no levels")
    segments: list[TileGrid] = []
    provenance: list[tuple[str, int]] = []
    for name, text in level_texts:
        try:
            level = parse_level(text, catalog)
            windows = slide_windows(level, window_w, window_h, stride)
        except CorpusError as exc:
            raise CorpusError(f"level {name!r}: {exc}") from exc
        for k, segment in enumerate(windows):
            segments.append(segment)
            provenance.append((name, k * stride))
    return Corpus(tuple(segments), catalog, tuple(provenance))


def save_corpus(corpus: Corpus, path) -> None:
    """Write a corpus to a JSON file (segments as row strings)."""
    payload = {
        "width": corpus.segment_width,
        "height": corpus.segment_height,
        "tiles": {c: sorted(corpus.catalog.categories[i]) for i, c in enumerate(corpus.catalog.chars)},
        "segments": [
            {
                "level": name,
                "start": start,
                "rows": seg.to_text(corpus.catalog).splitlines(),
            }
            for seg, (name, start) in zip(corpus.segments, corpus.provenance)
        ],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_corpus(path) -> Corpus:
    """Read a corpus written by :func:`save_corpus`."""
    with open(path) as fh:
        payload = json.load(fh)
    catalog = load_catalog(json.dumps({"tiles": payload["tiles"]}))
    segments = []
    provenance = []
    for entry in payload["segments"]:
        segments.append(parse_level("\n".join(entry["rows"]), catalog))
        provenance.append((entry["level"], entry["start"]))
    return Corpus(tuple(segments), catalog, tuple(provenance))


def default_catalog() -> TileCatalog:
    """The bundled Super Mario Bros. tile catalog (11 tile types)."""
    text = resources.files("rangeforge.data").joinpath("smb_catalog.json").read_text()
    return load_catalog(text)


def bundled_level_texts() -> list[tuple[str, str]]:
    """Name/text pairs for the bundled sample levels, sorted by name."""
    root = resources.files("rangeforge.data").joinpath("sample_levels")
    out = []
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".txt"):
            out.append((entry.name[: -len(".txt")], entry.read_text()))
    return out
