from __future__ import annotations

from pathlib import Path


def ensure_dir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    return path


def get_run_dir(runs_dir: str | Path, run_id: str) -> Path:
    return Path(runs_dir) / run_id


def scene_dir(run_dir: Path, model: str, snr_db: float | None, seed: int) -> Path:
    """
    Per-scene subfolder of a run: <model>_snr<db>_seed<seed> (snr "inf" when noiseless).
    """
    snr = "inf" if snr_db is None else f"{snr_db:g}"
    return Path(run_dir) / f"{model}_snr{snr}_seed{seed}"
