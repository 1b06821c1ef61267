"""Command-line entry point: the pipeline as subcommands.

Subcommands: ingest (build + save corpus), extract (learn a rule set),
explore (systematic exploration), baseline (unconstrained random
generation), report (aggregate CSVs), check (validate a level against
a rule set). See README for the config schema and output layout.
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
from pathlib import Path

from . import corpus as corpus_mod
from . import explorer, patterns, report
from .config import ConfigError, RunConfig, load_config
from .corpus import CorpusError, load_catalog, load_corpus, parse_level, save_corpus
from .metrics import bin_cell, density, difficulty
from .patterns import TEMPLATE_KINDS, PatternError, check_grid, extract_rules, load_rules, save_rules


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rangeforge",
        description="Constraint-based level generation over an expressive range.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p):
        p.add_argument("--config", default="rangeforge.json", help="config file path")
        p.add_argument("--seed", type=int, help="override master seed")
        p.add_argument("--template", choices=TEMPLATE_KINDS, help="override template kind")
        return p

    with_config(sub.add_parser("ingest", help="parse levels and save the windowed corpus"))

    with_config(sub.add_parser("extract", help="learn a rule set from the corpus"))

    p = with_config(sub.add_parser("explore", help="systematically explore the expressive range"))
    p.add_argument("--budget", type=float, help="override total budget in seconds")
    p.add_argument("--timeout", type=float, help="override per-attempt timeout in seconds")
    p.add_argument("--workers", type=int, help="override solver worker count")
    p.add_argument("--max-attempts", type=int, help="stop after this many attempts")

    p = with_config(sub.add_parser("baseline", help="generate levels with no count constraints"))
    p.add_argument("--attempts", type=int, default=100, help="number of attempts")
    p.add_argument("--timeout", type=float, help="override per-attempt timeout in seconds")

    with_config(sub.add_parser("report", help="write result CSVs from logs and corpus"))

    p = sub.add_parser("check", help="validate a level file against a rule set")
    p.add_argument("level", help="level text file")
    p.add_argument("rules", help="rule set JSON file")
    return parser


def _catalog_for(config: RunConfig):
    if config.catalog_path is None:
        return corpus_mod.default_catalog()
    return load_catalog(Path(config.catalog_path).read_text())


def _prepare_output(config: RunConfig, config_path: str) -> Path:
    out = Path(config.output_dir)
    for sub in ("corpus", "rules", "logs", "levels", "reports"):
        (out / sub).mkdir(parents=True, exist_ok=True)
    if Path(config_path).exists():
        shutil.copy(config_path, out / "config.used.json")
    return out


def _load_level_texts(config: RunConfig) -> list[tuple[str, str]]:
    levels_dir = Path(config.levels_dir)
    texts = []
    for path in sorted(levels_dir.glob("*.txt")):
        texts.append((path.stem, path.read_text()))
    if not texts:
        raise CorpusError(f"no .txt level files in {levels_dir}")
    return texts


def _corpus_path(out: Path) -> Path:
    return out / "corpus" / "corpus.json"


def _rules_path(out: Path, template: str) -> Path:
    return out / "rules" / f"{template}.rules.json"


def _cmd_ingest(config: RunConfig, config_path: str) -> int:
    config.require_paths("levels_dir")
    out = _prepare_output(config, config_path)
    catalog = _catalog_for(config)
    built = corpus_mod.build_corpus(
        _load_level_texts(config), catalog,
        config.window_width, config.window_height, config.stride,
    )
    save_corpus(built, _corpus_path(out))
    print(f"ingested {len(built.segments)} segments -> {_corpus_path(out)}")
    return 0


def _cmd_extract(config: RunConfig, config_path: str) -> int:
    out = _prepare_output(config, config_path)
    config.require_paths("output_dir")
    built = load_corpus(_corpus_path(out))
    ruleset = extract_rules(built, config.template)
    save_rules(ruleset, _rules_path(out, config.template))
    sizes = [sum(len(v) for v in group.values()) for group in ruleset.rules]
    print(
        f"extracted {config.template} rules ({sum(sizes)} tuples) "
        f"-> {_rules_path(out, config.template)}"
    )
    return 0


def _write_levels(records, catalog, out: Path, tag: str) -> None:
    for record in records:
        if record.level is None:
            continue
        cell = record.cell
        name = f"{tag}_d{cell.density_bin}_h{cell.difficulty_bin}_seed{record.seed}.txt"
        (out / "levels" / name).write_text(record.level.to_text(catalog))


def _cmd_explore(config: RunConfig, config_path: str, max_attempts) -> int:
    out = _prepare_output(config, config_path)
    catalog = _catalog_for(config)
    built = load_corpus(_corpus_path(out))
    ruleset = load_rules(_rules_path(out, config.template))
    state = explorer.init_state(
        built, config.axes, config.threshold,
        config.budget_seconds, config.attempt_timeout_seconds, config.seed,
    )
    log_path = out / "logs" / f"{config.template}_explore.jsonl"
    with explorer.LogWriter(log_path, catalog) as sink:
        records = explorer.explore(
            state, ruleset, catalog,
            config.generate_width, config.generate_height,
            log_sink=sink, max_attempts=max_attempts, workers=config.workers,
        )
    _write_levels(records, catalog, out, config.template)
    successes = sum(1 for r in records if r.outcome == explorer.SUCCESS)
    print(f"explore: {len(records)} attempts, {successes} levels -> {log_path}")
    return 0


def _cmd_baseline(config: RunConfig, config_path: str, attempts: int) -> int:
    out = _prepare_output(config, config_path)
    catalog = _catalog_for(config)
    ruleset = load_rules(_rules_path(out, config.template))
    log_path = out / "logs" / f"{config.template}_baseline.jsonl"
    with explorer.LogWriter(log_path, catalog) as sink:
        records = explorer.random_baseline(
            attempts, ruleset, catalog,
            config.generate_width, config.generate_height,
            seed=config.seed, axes=config.axes,
            attempt_timeout=config.attempt_timeout_seconds, log_sink=sink,
        )
    _write_levels(records, catalog, out, f"{config.template}_baseline")
    covered = explorer.covered_cells(records)
    print(
        f"baseline: {len(records)} attempts, {len(covered)} cells covered "
        f"-> {log_path}"
    )
    return 0


def _cmd_report(config: RunConfig, config_path: str) -> int:
    out = _prepare_output(config, config_path)
    catalog = _catalog_for(config)
    built = load_corpus(_corpus_path(out))
    reports = out / "reports"

    all_records = []
    tagged_histograms = []
    generated_levels = []
    initial = list(built.segments)
    counts, out_of_range = report.histogram(initial, config.axes, catalog)
    tagged_histograms.append((counts, "initial"))
    if out_of_range:
        print(f"note: {out_of_range} initial segments out of axes range")

    for log_path in sorted((out / "logs").glob("*.jsonl")):
        records = explorer.read_log(log_path, catalog)
        all_records.extend(records)
        levels = [r.level for r in records if r.level is not None]
        generated_levels.extend(levels)
        counts, out_of_range = report.histogram(levels, config.axes, catalog)
        tagged_histograms.append((counts, log_path.stem))
        if out_of_range:
            print(f"note: {out_of_range} levels in {log_path.name} out of axes range")

    report.write_attempts_csv(report.attempt_table(all_records), reports / "attempts.csv")
    report.write_histogram_csv(tagged_histograms, reports / "histogram.csv")

    tagged_levels = [(seg, "initial") for seg in initial]
    tagged_levels += [(lvl, "generated") for lvl in generated_levels]
    rows = report.interestingness_table(tagged_levels, catalog, config.physics)
    report.write_interestingness_csv(rows, reports / "interestingness.csv")

    report.write_tilefreq_csv(
        report.tile_frequency(initial), catalog, reports / "tilefreq_initial.csv"
    )
    if generated_levels:
        same_size = [
            lvl for lvl in generated_levels
            if (lvl.width, lvl.height) == (initial[0].width, initial[0].height)
        ]
        pool = same_size or generated_levels
        report.write_tilefreq_csv(
            report.tile_frequency(pool), catalog, reports / "tilefreq_generated.csv"
        )
    print(f"reports written to {reports}")
    return 0


def _cmd_check(level_path: str, rules_path: str) -> int:
    ruleset = load_rules(rules_path)
    chars = {c: ["background"] for c in ruleset.tile_chars}
    catalog = load_catalog(json.dumps({"tiles": chars}))
    grid = parse_level(Path(level_path).read_text(), catalog)
    violations = check_grid(grid, ruleset)
    if not violations:
        print(f"{level_path}: valid under {ruleset.kind} rules")
        return 0
    for v in violations[:20]:
        print(
            f"violation at ({v.x},{v.y}) group {v.group}: "
            f"input {v.input_tile} observed {v.observed}"
        )
    if len(violations) > 20:
        print(f"... and {len(violations) - 20} more")
    print(f"{level_path}: {len(violations)} violations under {ruleset.kind} rules")
    return 1


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return _cmd_check(args.level, args.rules)

        config = load_config(args.config)
        if args.seed is not None:
            config.seed = args.seed
        if args.template is not None:
            config.template = args.template
        if getattr(args, "budget", None) is not None:
            config.budget_seconds = args.budget
        if getattr(args, "timeout", None) is not None:
            config.attempt_timeout_seconds = args.timeout
        if getattr(args, "workers", None) is not None:
            config.workers = args.workers

        if args.command == "ingest":
            return _cmd_ingest(config, args.config)
        if args.command == "extract":
            return _cmd_extract(config, args.config)
        if args.command == "explore":
            return _cmd_explore(config, args.config, args.max_attempts)
        if args.command == "baseline":
            return _cmd_baseline(config, args.config, args.attempts)
        if args.command == "report":
            return _cmd_report(config, args.config)
        raise AssertionError(f"unhandled command {args.command}")
    except (ConfigError, CorpusError, PatternError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
