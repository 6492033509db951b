from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from rich.console import Console
from rich.table import Table

from ..datagen import generate_scene
from ..datagen.types import SpectralLibrary
from ..eval import EvalReport, evaluate, write_report
from ..io import write_cube, write_history, write_library, write_model
from ..model import extract_endmembers, unmix
from ..train import TrainConfig, train
from ..utils.json_utils import write_json, write_text_atomic
from ..utils.paths import ensure_dir, get_run_dir, scene_dir
from ..utils.run_id import new_run_id
from ..utils.time import Stopwatch, utc_now_iso
from ..vca import vca_extract

console = Console(stderr=True)

SUMMARY_COLUMNS = ("model", "snr_db", "seed", "rmse", "sad_mean_deg", "sid_mean", "re", "seconds")


@dataclass
class SceneResult:
    model: str
    snr_db: Optional[float]
    seed: int
    report: EvalReport
    seconds: float
    out_dir: Path

    def summary_row(self) -> List[str]:
        snr = "inf" if self.snr_db is None else f"{self.snr_db:g}"
        re_value = "" if self.report.re is None else repr(self.report.re)
        return [
            self.model,
            snr,
            str(self.seed),
            repr(self.report.rmse),
            repr(self.report.sad_mean_deg),
            repr(self.report.sid_mean),
            re_value,
            f"{self.seconds:.3f}",
        ]


@dataclass
class ExperimentResult:
    run_id: str
    run_dir: Path
    scenes: List[SceneResult] = field(default_factory=list)


def run_scene(
    model: str,
    snr_db: Optional[float],
    seed: int,
    R: int,
    B: int,
    pixels: int,
    train_cfg: TrainConfig,
    out_dir: Path,
    symmetric_sid: bool = False,
    save_artifacts: bool = True,
    report_name: str = "report.json",
) -> SceneResult:
    """generate -> VCA -> train -> unmix -> evaluate for one synthetic scene."""
    watch = Stopwatch()
    ensure_dir(out_dir)
    scene = generate_scene(model, R, B, pixels, snr_db, seed)  # type: ignore[arg-type]
    init = vca_extract(scene.cube, R, seed)
    params, history = train(scene.cube, init.nonnegative(), train_cfg.model_copy(update={"seed": seed}), quiet=True)
    result = unmix(params, scene.cube)
    m_hat = extract_endmembers(params)
    report = evaluate(
        scene.abundances.values,
        scene.library.spectra,
        result.abundances.values,
        m_hat,
        x=scene.cube.data,
        x_hat=result.x_hat.data,
        symmetric_sid=symmetric_sid,
    )
    write_report(report, out_dir / report_name)
    if save_artifacts:
        write_cube(scene.cube, out_dir / "scene.smxc")
        write_library(scene.library, out_dir / "endmembers.csv")
        write_model(params, out_dir / "model.smxm")
        write_history(history, out_dir / "history.csv")
        write_cube(result.abundances.to_cube(), out_dir / "abundances.est.smxc")
        write_cube(result.x_nlin, out_dir / "x_nlin.smxc")
        names = [f"learned_{k}" for k in range(R)]
        write_library(SpectralLibrary(scene.library.wavelengths, m_hat, names), out_dir / "endmembers.est.csv")
    return SceneResult(model, scene.cube.provenance.snr_db, seed, report, watch.lap(), out_dir)


def _summary_csv(scenes: List[SceneResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for s in scenes:
        w.writerow(s.summary_row())
    return buf.getvalue()


def _summary_table(scenes: List[SceneResult]) -> Table:
    table = Table(title="Synthetic benchmark")
    for col in ("model", "SNR (dB)", "seed", "RMSE", "mean SAD (deg)", "mean SID", "RE"):
        table.add_column(col, justify="right" if col != "model" else "left")
    for s in scenes:
        row = s.summary_row()
        table.add_row(row[0], row[1], row[2], f"{s.report.rmse:.4f}", f"{s.report.sad_mean_deg:.4f}",
                      f"{s.report.sid_mean:.4g}", "-" if s.report.re is None else f"{s.report.re:.4f}")
    return table


def run_experiment(cfg: Dict[str, Any], config_path: Path, run_id: Optional[str] = None) -> ExperimentResult:
    """
    Sweep every (model, SNR, seed) in `cfg["experiment"]` and write one run directory.
    """
    exp = cfg["experiment"]
    out_names = cfg["io"].get("output", {}) or {}
    run_id = run_id or new_run_id()
    run_dir = ensure_dir(get_run_dir(cfg["io"]["runs_dir"], run_id))
    train_cfg = TrainConfig.preset(exp.get("preset", "synthetic"), **dict(exp.get("train") or {}))

    snrs = exp.get("snr_db", [30])
    seeds = exp.get("seeds", [0])
    R = int(exp.get("endmembers", 4))
    B = int(exp.get("bands", 224))
    pixels = int(exp.get("pixels", 5000))
    report_name = out_names.get("report", "report.json")

    meta_path = run_dir / "run_meta.json"
    run_meta: Dict[str, Any] = {
        "run_id": run_id,
        "created_at": utc_now_iso(),
        "config_path": str(config_path),
        "train_config": train_cfg.to_json_dict(),
        "output_files": {},
        "counts": {"scenes_planned": len(exp["models"]) * len(snrs) * len(seeds), "scenes_done": 0},
    }
    write_json(meta_path, run_meta)
    console.print(f"[bold green]Run ID:[/bold green] {run_id}")
    console.print(f"[bold]Run directory:[/bold] {run_dir}")

    result = ExperimentResult(run_id=run_id, run_dir=run_dir)
    for model in exp["models"]:
        for snr in snrs:
            for seed in seeds:
                out_dir = scene_dir(run_dir, model, snr, int(seed))
                console.print(f"[bold]Scene[/bold] {out_dir.name} ...")
                scene = run_scene(
                    model,
                    snr,
                    int(seed),
                    R,
                    B,
                    pixels,
                    train_cfg,
                    out_dir,
                    symmetric_sid=bool(exp.get("symmetric_sid", False)),
                    save_artifacts=bool(exp.get("save_artifacts", True)),
                    report_name=report_name,
                )
                result.scenes.append(scene)
                console.print(
                    f"  rmse={scene.report.rmse:.4f} sad={scene.report.sad_mean_deg:.4f} deg "
                    f"({scene.seconds:.1f}s)"
                )
                run_meta["output_files"][out_dir.name] = str(out_dir.relative_to(run_dir))
                run_meta["counts"]["scenes_done"] = len(result.scenes)
                write_json(meta_path, run_meta)

    summary_name = out_names.get("summary", "summary.csv")
    write_text_atomic(run_dir / summary_name, _summary_csv(result.scenes))
    run_meta["output_files"]["summary"] = summary_name
    run_meta["finished_at"] = utc_now_iso()
    write_json(meta_path, run_meta)
    console.print(_summary_table(result.scenes))
    return result
