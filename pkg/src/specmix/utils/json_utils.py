from __future__ import annotations

import csv
import json
import os
from pathlib import Path
from tempfile import NamedTemporaryFile
from typing import Any, Dict, Iterator


def write_bytes_atomic(path: Path, payload: bytes) -> None:
    """
    Write bytes with best-effort atomic semantics:
    write to temp file in same directory, then replace.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with NamedTemporaryFile("wb", dir=path.parent, delete=False) as tmp:
        tmp.write(payload)
        tmp_path = Path(tmp.name)

    os.replace(tmp_path, path)


def write_text_atomic(path: Path, text: str) -> None:
    write_bytes_atomic(path, text.encode("utf-8"))


def write_json(path: Path, obj: Dict[str, Any]) -> None:
    """
    Pretty-print JSON to a UTF-8 file atomically.
    """
    write_text_atomic(path, json.dumps(obj, ensure_ascii=False, indent=2) + "\n")


def iter_csv_rows(path: Path) -> Iterator[tuple[int, list[str]]]:
    """
    Yield (line_number, fields) for each non-blank line of a CSV file.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            yield reader.line_num, row
