from __future__ import annotations

import csv
import io
from pathlib import Path

from ..train.loop import TrainHistory
from ..utils.json_utils import write_text_atomic

HISTORY_COLUMNS = ("epoch", "j_data", "j_reg", "j_smth", "j_total", "seconds")


def write_history(history: TrainHistory, path: Path) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HISTORY_COLUMNS)
    for rec in history.records:
        w.writerow([rec.epoch] + [repr(float(getattr(rec, c))) for c in HISTORY_COLUMNS[1:]])
    write_text_atomic(Path(path), buf.getvalue())
