from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import List, Optional

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, Field, field_validator, model_validator

from ..errors import ContractError
from ..numerics import as_f64
from ..utils.json_utils import write_text_atomic
from .metrics import align, apply_alignment, re, rmse, sad, sid


class EvalReport(BaseModel):
    rmse: float = Field(ge=0)
    sad_deg: List[float]
    sad_mean_deg: float = Field(ge=0)
    sid: List[float]
    sid_mean: float = Field(ge=0)
    re: Optional[float] = Field(default=None, ge=0)
    permutation: List[int]
    symmetric_sid: bool = False

    @field_validator("sad_deg", "sid")
    @classmethod
    def _nonnegative(cls, v: List[float]) -> List[float]:
        if any(x < 0 for x in v):
            raise ValueError("per-endmember metrics must be >= 0")
        return v

    @model_validator(mode="after")
    def _check_permutation(self) -> "EvalReport":
        R = len(self.permutation)
        if sorted(self.permutation) != list(range(R)):
            raise ValueError(f"permutation {self.permutation} is not a bijection on 0..{R - 1}")
        if len(self.sad_deg) != R or len(self.sid) != R:
            raise ValueError("per-endmember metric lists must have one entry per endmember")
        return self

    @property
    def endmembers(self) -> int:
        return len(self.permutation)

    def to_text(self) -> str:
        lines = [
            f"endmembers: {self.endmembers}",
            f"permutation (estimated -> true): {self.permutation}",
            f"abundance RMSE: {self.rmse:.6f}",
            f"mean SAD (deg): {self.sad_mean_deg:.6f}",
            f"mean SID{' (symmetric)' if self.symmetric_sid else ''} (nats): {self.sid_mean:.6g}",
        ]
        if self.re is not None:
            lines.append(f"RE: {self.re:.6f}")
        lines.append("")
        lines.append("true_index  sad_deg     sid")
        for k in range(self.endmembers):
            lines.append(f"{k:>10}  {self.sad_deg[k]:<10.6f}  {self.sid[k]:.6g}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["endmember", "estimated_index", "sad_deg", "sid"])
        inverse = {t: k for k, t in enumerate(self.permutation)}
        for k in range(self.endmembers):
            w.writerow([k, inverse[k], repr(self.sad_deg[k]), repr(self.sid[k])])
        w.writerow(["mean", "", repr(self.sad_mean_deg), repr(self.sid_mean)])
        w.writerow(["rmse", "", repr(self.rmse), ""])
        if self.re is not None:
            w.writerow(["re", "", repr(self.re), ""])
        return buf.getvalue()


def evaluate(
    a_true: npt.ArrayLike,
    m_true: npt.ArrayLike,
    a_hat: npt.ArrayLike,
    m_hat: npt.ArrayLike,
    x: Optional[npt.ArrayLike] = None,
    x_hat: Optional[npt.ArrayLike] = None,
    symmetric_sid: bool = False,
) -> EvalReport:
    """
    Align estimates to the truth by minimum total SAD, then score them.

    Per-endmember lists are indexed by the true endmember. RE is only filled
    when both the observed and the reconstructed cube are given.
    """
    a_true = as_f64(a_true, ndim=2, name="a_true")
    a_hat = as_f64(a_hat, ndim=2, name="a_hat")
    m_true = as_f64(m_true, ndim=2, name="m_true")
    m_hat = as_f64(m_hat, ndim=2, name="m_hat")
    if m_true.shape != m_hat.shape:
        raise ContractError(f"endmember shapes differ: {m_true.shape} vs {m_hat.shape}")
    if a_true.shape != a_hat.shape:
        raise ContractError(f"abundance shapes differ: {a_true.shape} vs {a_hat.shape}")
    if a_true.shape[0] != m_true.shape[1]:
        raise ContractError(f"{m_true.shape[1]} endmembers but {a_true.shape[0]} abundance rows")

    perm = align(m_hat, m_true)
    m_aligned, a_aligned = apply_alignment(perm, m_hat, a_hat)
    R = m_true.shape[1]
    sads = [sad(m_true[:, k], m_aligned[:, k]) for k in range(R)]
    sids = [sid(m_true[:, k], m_aligned[:, k], symmetric=symmetric_sid) for k in range(R)]

    recon_error: Optional[float] = None
    if x is not None and x_hat is not None:
        recon_error = re(x, x_hat, R)

    return EvalReport(
        rmse=rmse(a_true, a_aligned),
        sad_deg=sads,
        sad_mean_deg=float(np.mean(sads)),
        sid=sids,
        sid_mean=float(np.mean(sids)),
        re=recon_error,
        permutation=perm,
        symmetric_sid=symmetric_sid,
    )


def write_report(report: EvalReport, path: Path) -> None:
    """Format follows the suffix: .csv, .json, anything else is text."""
    suffix = path.suffix.lower()
    if suffix == ".csv":
        body = report.to_csv()
    elif suffix == ".json":
        body = json.dumps(report.model_dump(), indent=2) + "\n"
    else:
        body = report.to_text()
    write_text_atomic(path, body)
