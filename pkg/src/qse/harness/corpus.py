"""Desk-scale corpus: DSL re-encodings of the reference benchmark programs."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Union

from ..condlang import BranchTree, collect_paths, count_conditions, parse_program

__all__ = ["CorpusProgram", "load_corpus", "load_manifest", "division_count_report",
           "DivisionRow", "format_division_table"]


@dataclass(frozen=True)
class CorpusProgram:
    name: str
    dsl_source: str
    expected_division_count: int
    expected_path_count: int
    notes: str = ""
    sweep: bool = False

    def __post_init__(self):
        if self.expected_division_count < 0:
            raise ValueError("expected_division_count must be non-negative")

    @property
    def tree(self) -> BranchTree:
        return parse_program(self.dsl_source)


def _corpus_dir() -> Path:
    return Path(str(resources.files("qse.harness") / "corpus"))


def load_manifest(path: Optional[Union[str, Path]] = None) -> list[CorpusProgram]:
    """Read a manifest; DSL paths are resolved relative to the manifest."""
    path = Path(path) if path else _corpus_dir() / "manifest.json"
    doc = json.loads(path.read_text())
    programs = []
    for entry in doc["programs"]:
        src = (path.parent / entry["path"]).read_text()
        programs.append(CorpusProgram(
            entry["name"], src, int(entry["expected_division_count"]),
            int(entry["expected_path_count"]), entry.get("notes", ""),
            bool(entry.get("sweep", False))))
    return programs


def load_corpus() -> list[CorpusProgram]:
    """The bundled eight-program corpus."""
    return load_manifest()


@dataclass(frozen=True)
class DivisionRow:
    name: str
    paths: int
    divisions: int
    expected_paths: int
    expected_divisions: int

    @property
    def matches(self) -> bool:
        return (self.paths, self.divisions) == (self.expected_paths, self.expected_divisions)


def division_count_report(corpus: Iterable[CorpusProgram]) -> list[DivisionRow]:
    rows = []
    for prog in corpus:
        tree = prog.tree
        rows.append(DivisionRow(prog.name, len(collect_paths(tree)), count_conditions(tree),
                                prog.expected_path_count, prog.expected_division_count))
    return rows


def format_division_table(rows: Iterable[DivisionRow]) -> str:
    lines = [f"{'program':<12} {'paths':>5} {'divisions':>9}  {'expected':>8}  match"]
    for r in rows:
        exp = f"{r.expected_paths}/{r.expected_divisions}"
        lines.append(f"{r.name:<12} {r.paths:>5} {r.divisions:>9}  {exp:>8}  "
                     f"{'yes' if r.matches else 'NO'}")
    return "\n".join(lines) + "\n"
