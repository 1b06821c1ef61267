"""Pattern templates: rule extraction from a corpus and grid checking.

Three templates are supported. ``ring`` jointly constrains the 8
surrounding tiles of an input tile, ``block2`` jointly constrains the
east/south/south-east tiles (input at the top-left of a 2x2 block), and
``nbr_plus`` constrains each of the four orthogonal neighbours
independently.

Rule positions range over the grid plus a one-cell boundary ring, with
every out-of-grid read yielding the catalog's boundary sentinel. Using
the same convention for extraction, checking, and encoding constrains
generated-level edges to look like example-level edges and makes
template validity strictly ordered: ring-valid implies block2-valid
implies nbr_plus-valid, for rule sets extracted from the same corpus.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .corpus import Corpus, TileGrid

TEMPLATE_KINDS = ("ring", "block2", "nbr_plus")

Offset = tuple[int, int]


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class TemplateShape:
    """Input location (0, 0) plus output offset groups.

    Joint groups constrain all their offsets at once; each group of a
    template with several singleton groups is checked independently.
    """

    output_groups: tuple[tuple[Offset, ...], ...]

    def __post_init__(self) -> None:
        seen: set[Offset] = set()
        for group in self.output_groups:
            for off in group:
                if off == (0, 0):
                    raise PatternError("input offset cannot be an output offset")
                if off in seen:
                    raise PatternError(f"offset {off} appears twice")
                seen.add(off)


_RING = TemplateShape(
    (((-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)),)
)
_BLOCK2 = TemplateShape((((1, 0), (0, 1), (1, 1)),))
_NBR_PLUS = TemplateShape((((0, -1),), ((0, 1),), ((-1, 0),), ((1, 0),)))


def template_shape(kind: str) -> TemplateShape:
    """The fixed shape of a template kind."""
    if kind == "ring":
        return _RING
    if kind == "block2":
        return _BLOCK2
    if kind == "nbr_plus":
        return _NBR_PLUS
    raise PatternError(f"unknown template kind {kind!r}")


# Per output group, input tile id -> set of allowed output tuples.
GroupRules = dict[int, frozenset[tuple[int, ...]]]


@dataclass(frozen=True)
class RuleSet:
    """Learned pattern constraints for one template kind."""

    kind: str
    shape: TemplateShape
    rules: tuple[GroupRules, ...]
    tile_chars: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.kind not in TEMPLATE_KINDS:
            raise PatternError(f"unknown template kind {self.kind!r}")
        if len(self.rules) != len(self.shape.output_groups):
            raise PatternError("rules/group count mismatch")

    @property
    def boundary_id(self) -> int:
        return len(self.tile_chars)


@dataclass(frozen=True)
class Violation:
    """One failed template check: position, group, and what was seen."""

    x: int
    y: int
    group: int
    input_tile: int
    observed: tuple[int, ...]


def _value(grid: TileGrid, x: int, y: int, boundary_id: int) -> int:
    return grid.tile_at(x, y) if grid.in_bounds(x, y) else boundary_id


def _positions(grid: TileGrid):
    """Input positions: the grid plus its one-cell boundary ring."""
    for y in range(-1, grid.height + 1):
        for x in range(-1, grid.width + 1):
            yield x, y


def observe_segment(
    segment: TileGrid, shape: TemplateShape, boundary_id: int
) -> list[dict[int, set[tuple[int, ...]]]]:
    """All (input tile, output tuple) observations of one segment."""
    observed: list[dict[int, set[tuple[int, ...]]]] = [
        {} for _ in shape.output_groups
    ]
    for x, y in _positions(segment):
        input_tile = _value(segment, x, y, boundary_id)
        for g, group in enumerate(shape.output_groups):
            out = tuple(_value(segment, x + dx, y + dy, boundary_id) for dx, dy in group)
            observed[g].setdefault(input_tile, set()).add(out)
    return observed


def extract_rules(corpus: Corpus, kind: str) -> RuleSet:
    """Learn the allowed output tuples per input tile from a corpus.

    The result is the set union over all segments; segment order does
    not matter.
    """
    if not corpus.segments:
        raise PatternError("cannot extract rules from an empty corpus")
    shape = template_shape(kind)
    boundary_id = corpus.catalog.boundary_id
    merged: list[dict[int, set[tuple[int, ...]]]] = [{} for _ in shape.output_groups]
    for segment in corpus.segments:
        for g, per_tile in enumerate(observe_segment(segment, shape, boundary_id)):
            for tile, tuples in per_tile.items():
                merged[g].setdefault(tile, set()).update(tuples)
    rules = tuple(
        {tile: frozenset(tuples) for tile, tuples in per_tile.items()}
        for per_tile in merged
    )
    return RuleSet(kind, shape, rules, corpus.catalog.chars)


def check_grid(grid: TileGrid, ruleset: RuleSet) -> list[Violation]:
    """All template violations of a grid; empty means template-valid.

    An input tile absent from the rule map is reported as a violation,
    not raised.
    """
    boundary_id = ruleset.boundary_id
    violations = []
    for x, y in _positions(grid):
        input_tile = _value(grid, x, y, boundary_id)
        for g, group in enumerate(ruleset.shape.output_groups):
            out = tuple(_value(grid, x + dx, y + dy, boundary_id) for dx, dy in group)
            allowed = ruleset.rules[g].get(input_tile)
            if allowed is None or out not in allowed:
                violations.append(Violation(x, y, g, input_tile, out))
    return violations


def save_rules(ruleset: RuleSet, path) -> None:
    """Write a rule set as JSON with stable ordering (diffable)."""
    payload = {
        "kind": ruleset.kind,
        "tiles": list(ruleset.tile_chars),
        "groups": [
            {
                "offsets": [list(off) for off in group],
                "rules": {
                    str(tile): sorted(list(t) for t in per_tile[tile])
                    for tile in sorted(per_tile)
                },
            }
            for group, per_tile in zip(ruleset.shape.output_groups, ruleset.rules)
        ],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_rules(path) -> RuleSet:
    """Read a rule set written by :func:`save_rules`."""
    with open(path) as fh:
        payload = json.load(fh)
    kind = payload["kind"]
    shape = template_shape(kind)
    file_groups = [
        tuple((dx, dy) for dx, dy in entry["offsets"]) for entry in payload["groups"]
    ]
    if tuple(file_groups) != shape.output_groups:
        raise PatternError(f"rule file offsets do not match template {kind!r}")
    rules = tuple(
        {
            int(tile): frozenset(tuple(t) for t in tuples)
            for tile, tuples in entry["rules"].items()
        }
        for entry in payload["groups"]
    )
    return RuleSet(kind, shape, rules, tuple(payload["tiles"]))
