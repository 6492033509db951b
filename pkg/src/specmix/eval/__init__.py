from .metrics import align, apply_alignment, nonlinear_energy_map, re, rmse, sad, sad_matrix, sid
from .report import EvalReport, evaluate, write_report

__all__ = [
    "EvalReport",
    "align",
    "apply_alignment",
    "evaluate",
    "nonlinear_energy_map",
    "re",
    "rmse",
    "sad",
    "sad_matrix",
    "sid",
    "write_report",
]
