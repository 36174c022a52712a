"""OEIS b-file parsing and sequence cross-checks.

Supported sequences and the alignment used:

* ``A000364``: ``a(n) = |E_{2n}|`` (Euler numbers at order 1), offset 0.
* ``A036968``: ``a(n) = G_n = G_n(0)``, signed, offset 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .engine import EulerTable, euler_number, genocchi_number

SUPPORTED = ("A000364", "A036968")
_ID = re.compile(r"^A\d{6}$")
_LINE = re.compile(r"^(-?\d+)\s+(-?\d+)$")


class BFileError(ValueError):
    def __init__(self, path, line: int, message: str):
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


@dataclass(frozen=True)
class BFile:
    sequence_id: str
    entries: tuple

    def as_dict(self) -> dict:
        return dict(self.entries)


def _infer_id(path: Path) -> str | None:
    m = re.match(r"^[bA](\d{6})", path.name)
    return f"A{m.group(1)}" if m else None


def parse_bfile(path, sequence_id: str | None = None) -> BFile:
    """Read ``<index> <value>`` lines; ``#`` comments and blank lines are skipped."""
    path = Path(path)
    seq = sequence_id or _infer_id(path)
    if seq is None or not _ID.match(seq):
        raise ValueError(f"cannot determine an A-number for {path}")
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            m = _LINE.match(line)
            if m is None:
                raise BFileError(path, lineno, f"malformed line {line!r}")
            idx, val = int(m.group(1)), int(m.group(2))
            if entries and idx <= entries[-1][0]:
                raise BFileError(path, lineno, f"index {idx} does not increase")
            entries.append((idx, val))
    return BFile(seq, tuple(entries))


def bundled_bfile(sequence_id: str) -> Path:
    name = f"b{sequence_id[1:]}.txt"
    return Path(str(resources.files("eulerkit") / "data" / name))


def offset(sequence_id: str) -> int:
    return 0 if sequence_id == "A000364" else 1


def computed_terms(sequence_id: str, count: int, table: EulerTable) -> list:
    """``count`` terms from the engine, indexed from the sequence offset."""
    if sequence_id == "A000364":
        table.require(2 * (count - 1))
        return [(i, abs(euler_number(2 * i, table))) for i in range(count)]
    if sequence_id == "A036968":
        return [(i, genocchi_number(i, table)) for i in range(1, count + 1)]
    raise ValueError(f"unsupported sequence {sequence_id}")


@dataclass
class Comparison:
    sequence_id: str
    rows: list  # (index, computed, expected or None)

    @property
    def first_mismatch(self) -> int | None:
        for idx, got, want in self.rows:
            if want is None or got != want:
                return idx
        return None

    @property
    def ok(self) -> bool:
        return bool(self.rows) and self.first_mismatch is None


def compare(bfile: BFile, count: int, table: EulerTable) -> Comparison:
    if bfile.sequence_id not in SUPPORTED:
        raise ValueError(f"unsupported sequence {bfile.sequence_id}")
    known = bfile.as_dict()
    rows = []
    for idx, val in computed_terms(bfile.sequence_id, count, table):
        if val.denominator != 1:
            raise ArithmeticError(f"term {idx} of {bfile.sequence_id} is not an integer: {val}")
        rows.append((idx, val.numerator, known.get(idx)))
    return Comparison(bfile.sequence_id, rows)
