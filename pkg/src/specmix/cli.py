from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
from rich.console import Console

from .config import ConfigError, load_config, load_train_config
from .datagen import MIXTURE_MODELS, generate_scene
from .datagen.types import HsiCube, SpectralLibrary
from .errors import (
    ContractError,
    DegenerateDataError,
    FormatError,
    GenerationError,
    NumericError,
    UsageError,
)
from .eval import evaluate, nonlinear_energy_map, write_report
from .io import (
    export_map,
    read_cube,
    read_library,
    read_model,
    write_cube,
    write_history,
    write_library,
    write_model,
)
from .model import extract_endmembers, unmix
from .pipeline.experiment import run_experiment
from .train import PRESETS, TrainConfig, train
from .utils.json_utils import write_json
from .utils.paths import ensure_dir
from .vca import vca_extract

console = Console(stderr=True)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class SpecmixArgumentParser(argparse.ArgumentParser):
    """Bad flags exit with code 1 after printing usage to stderr."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _wavelengths_or_index(cube: HsiCube) -> np.ndarray:
    if cube.wavelengths is not None:
        return cube.wavelengths
    return np.arange(cube.bands, dtype=np.float64)


def _parse_snr(text: str) -> float:
    value = float(text)
    if math.isnan(value):
        raise argparse.ArgumentTypeError("SNR must be a number or 'inf'")
    return value


def cmd_generate(args: argparse.Namespace) -> int:
    out_dir = ensure_dir(Path(args.out))
    snr = None if math.isinf(args.snr_db) and args.snr_db > 0 else args.snr_db
    scene = generate_scene(args.model, args.r, args.b, args.pixels, snr, args.seed)
    write_cube(scene.cube, out_dir / "scene.smxc")
    write_library(scene.library, out_dir / "endmembers.csv")
    write_cube(scene.abundances.to_cube(), out_dir / "abundances.smxc")
    write_json(out_dir / "scene.json", scene.cube.provenance.model_dump())
    console.print(f"[bold green]Scene:[/bold green] {args.model} R={args.r} B={args.b} N={args.pixels} -> {out_dir}")
    return EXIT_OK


def cmd_extract(args: argparse.Namespace) -> int:
    cube = read_cube(Path(args.cube))
    result = vca_extract(cube, args.r, args.seed)
    lib = SpectralLibrary(_wavelengths_or_index(cube), result.nonnegative(), result.names())
    write_library(lib, Path(args.out))
    console.print(f"[bold]VCA pixels:[/bold] {result.selected_pixel_indices} -> {args.out}")
    return EXIT_OK


def _train_config(args: argparse.Namespace) -> TrainConfig:
    if args.config and args.preset:
        raise UsageError("--config and --preset are mutually exclusive")
    if args.config:
        return load_train_config(Path(args.config))
    return TrainConfig.preset(args.preset or "synthetic")


def cmd_train(args: argparse.Namespace) -> int:
    cfg = _train_config(args)
    cube = read_cube(Path(args.cube))
    init = read_library(Path(args.init))
    if init.bands != cube.bands:
        raise ContractError(f"init library has {init.bands} bands but the cube has {cube.bands}")
    params, history = train(cube, init.spectra, cfg)
    write_model(params, Path(args.out_model))
    if args.out_history:
        write_history(history, Path(args.out_history))
    console.print(f"[bold green]Model:[/bold green] {args.out_model}")
    return EXIT_OK


def cmd_unmix(args: argparse.Namespace) -> int:
    params = read_model(Path(args.model))
    cube = read_cube(Path(args.cube))
    result = unmix(params, cube)
    write_cube(result.abundances.to_cube(), Path(args.out_abund))
    if args.out_lin:
        write_cube(result.x_lin, Path(args.out_lin))
    if args.out_nlin:
        write_cube(result.x_nlin, Path(args.out_nlin))
    if args.out_recon:
        write_cube(result.x_hat, Path(args.out_recon))
    if args.out_endm:
        R = params.dims[1]
        lib = SpectralLibrary(
            _wavelengths_or_index(cube), extract_endmembers(params), [f"learned_{k}" for k in range(R)]
        )
        write_library(lib, Path(args.out_endm))
    console.print(f"[bold]Abundances:[/bold] {args.out_abund}")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    if bool(args.cube) != bool(args.recon):
        raise UsageError("--cube and --recon must be given together")
    a_true = read_cube(Path(args.truth_abund)).data
    a_hat = read_cube(Path(args.est_abund)).data
    m_true = read_library(Path(args.truth_endm)).spectra
    m_hat = read_library(Path(args.est_endm)).spectra
    x = x_hat = None
    if args.cube:
        x = read_cube(Path(args.cube)).data
        x_hat = read_cube(Path(args.recon)).data
    report = evaluate(a_true, m_true, a_hat, m_hat, x=x, x_hat=x_hat, symmetric_sid=args.symmetric_sid)
    write_report(report, Path(args.report))
    console.print(report.to_text().rstrip())
    return EXIT_OK


def cmd_export_map(args: argparse.Namespace) -> int:
    cube = read_cube(Path(args.input))
    vmax: Optional[float] = args.vmax
    if args.energy:
        values = nonlinear_energy_map(cube)
    else:
        index = args.band if args.band is not None else args.endmember
        if not 0 <= index < cube.bands:
            raise UsageError(f"index {index} out of range for {cube.bands} rows")
        values = cube.data[index]
        if args.endmember is not None and vmax is None:
            vmax = 1.0
    export_map(values, cube.layout, Path(args.out), vmax=vmax)
    console.print(f"[bold]Map:[/bold] {args.out}")
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    config_path = Path(args.config)
    cfg = load_config(config_path)
    run_experiment(cfg, config_path, run_id=args.run_id)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = SpecmixArgumentParser(
        prog="specmix",
        description="Blind nonlinear spectral unmixing with a constrained autoencoder",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="Synthesize a scene (library, abundances, cube)")
    p_gen.add_argument("--model", choices=MIXTURE_MODELS, default="linear", help="Mixture model")
    p_gen.add_argument("--r", type=int, default=4, help="Number of endmembers")
    p_gen.add_argument("--b", type=int, default=224, help="Number of bands")
    p_gen.add_argument("--pixels", type=int, default=5000, help="Number of pixels")
    p_gen.add_argument("--snr-db", type=_parse_snr, default=30.0, help="SNR in dB ('inf' for noiseless)")
    p_gen.add_argument("--seed", type=int, default=0, help="Scene seed")
    p_gen.add_argument("--out", type=str, required=True, help="Output directory")
    p_gen.set_defaults(func=cmd_generate)

    p_ext = sub.add_parser("extract", help="VCA endmember extraction")
    p_ext.add_argument("--cube", type=str, required=True, help="Input cube (.smxc)")
    p_ext.add_argument("--r", type=int, required=True, help="Number of endmembers")
    p_ext.add_argument("--seed", type=int, default=0, help="VCA seed")
    p_ext.add_argument("--out", type=str, required=True, help="Output library CSV")
    p_ext.set_defaults(func=cmd_extract)

    p_train = sub.add_parser("train", help="Train the autoencoder")
    p_train.add_argument("--cube", type=str, required=True, help="Training cube (.smxc)")
    p_train.add_argument("--init", type=str, required=True, help="Initial endmember library CSV")
    p_train.add_argument("--config", type=str, help="Flat JSON train config")
    p_train.add_argument("--preset", choices=sorted(PRESETS), help="Named train preset")
    p_train.add_argument("--out-model", type=str, required=True, help="Output model (.smxm)")
    p_train.add_argument("--out-history", type=str, help="Output history CSV")
    p_train.set_defaults(func=cmd_train)

    p_unmix = sub.add_parser("unmix", help="Estimate abundances and reconstructions")
    p_unmix.add_argument("--model", type=str, required=True, help="Trained model (.smxm)")
    p_unmix.add_argument("--cube", type=str, required=True, help="Input cube (.smxc)")
    p_unmix.add_argument("--out-abund", type=str, required=True, help="Output abundance cube")
    p_unmix.add_argument("--out-lin", type=str, help="Output linear-branch cube")
    p_unmix.add_argument("--out-nlin", type=str, help="Output nonlinear-branch cube")
    p_unmix.add_argument("--out-recon", type=str, help="Output reconstruction cube")
    p_unmix.add_argument("--out-endm", type=str, help="Output learned endmember library CSV")
    p_unmix.set_defaults(func=cmd_unmix)

    p_eval = sub.add_parser("evaluate", help="Score estimates against ground truth")
    p_eval.add_argument("--truth-abund", type=str, required=True, help="True abundance cube")
    p_eval.add_argument("--truth-endm", type=str, required=True, help="True endmember library CSV")
    p_eval.add_argument("--est-abund", type=str, required=True, help="Estimated abundance cube")
    p_eval.add_argument("--est-endm", type=str, required=True, help="Estimated endmember library CSV")
    p_eval.add_argument("--cube", type=str, help="Observed cube, for RE")
    p_eval.add_argument("--recon", type=str, help="Reconstructed cube, for RE")
    p_eval.add_argument("--symmetric-sid", action="store_true", help="Report symmetric SID")
    p_eval.add_argument("--report", type=str, required=True, help="Report path (.txt, .csv or .json)")
    p_eval.set_defaults(func=cmd_evaluate)

    p_map = sub.add_parser("export-map", help="Render one map as a binary PGM")
    p_map.add_argument("--in", dest="input", type=str, required=True, help="Input cube (.smxc)")
    which = p_map.add_mutually_exclusive_group(required=True)
    which.add_argument("--band", type=int, help="Band index of a data cube")
    which.add_argument("--endmember", type=int, help="Row of an abundance cube (scaled to [0, 1])")
    which.add_argument("--energy", action="store_true", help="Nonlinear energy of an x_nlin cube")
    p_map.add_argument("--vmax", type=float, help="Override the white level")
    p_map.add_argument("--out", type=str, required=True, help="Output .pgm")
    p_map.set_defaults(func=cmd_export_map)

    p_exp = sub.add_parser("experiment", help="Run the synthetic benchmark sweep")
    p_exp.add_argument("--config", type=str, default="config.yml", help="Path to config.yml")
    p_exp.add_argument("--run-id", type=str, help="Provide a specific run id")
    p_exp.set_defaults(func=cmd_experiment)

    return parser


def main(argv: List[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except UsageError as e:
        console.print(f"[red]Usage error:[/red] {e}")
        return EXIT_USAGE
    except ConfigError as e:
        console.print(f"[red]Config error:[/red] {e}")
        return EXIT_DATA
    except FormatError as e:
        console.print(f"[red]Format error ({e.code}):[/red] {e}")
        return EXIT_DATA
    except (ContractError, GenerationError, DegenerateDataError, FileNotFoundError) as e:
        console.print(f"[red]Error:[/red] {e}")
        return EXIT_DATA
    except NumericError as e:
        console.print(f"[red]Numeric failure:[/red] {e}")
        return EXIT_NUMERIC
    except Exception as e:
        console.print(f"[red]Unexpected error:[/red] {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
