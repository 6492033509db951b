from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import numpy.typing as npt
from rich.console import Console

from ..datagen.types import HsiCube
from ..errors import ContractError, NonFiniteLossError
from ..model.params import ModelParams, init_params
from ..numerics import as_f64
from ..utils.seeding import substream
from ..utils.time import Stopwatch
from .adam import AdamState, adam_step
from .config import TrainConfig
from .objective import ObjectiveTerms, objective, value_and_gradient

console = Console(stderr=True)


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    j_data: float
    j_reg: float
    j_smth: float
    j_total: float
    seconds: float


@dataclass
class TrainHistory:
    records: List[EpochRecord] = field(default_factory=list)

    def append(self, epoch: int, terms: ObjectiveTerms, seconds: float) -> None:
        self.records.append(EpochRecord(epoch, terms.j_data, terms.j_reg, terms.j_smth, terms.j_total, seconds))

    def __len__(self) -> int:
        return len(self.records)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=np.float64)


def train(
    X: HsiCube,
    m_init: npt.ArrayLike,
    cfg: TrainConfig,
    quiet: bool = False,
) -> tuple[ModelParams, TrainHistory]:
    """
    Adam over seeded minibatch epochs. The short last batch is kept and the
    history holds full-dataset objective terms after each epoch.
    """
    m_init = as_f64(m_init, ndim=2, name="m_init")
    if m_init.shape[0] != X.bands:
        raise ContractError(f"init library has {m_init.shape[0]} bands but the cube has {X.bands}")

    p = init_params(m_init, cfg.seed, cfg.make_activation())
    state = AdamState.fresh(p, cfg.beta1, cfg.beta2, cfg.eps)
    shuffle_rng = substream(cfg.seed, "shuffle")
    N = X.pixels
    batch = min(cfg.batch_size, N)
    history = TrainHistory()
    log: Optional[Console] = None if quiet else console

    if log:
        log.print(
            f"[bold]Training[/bold] B={X.bands} R={m_init.shape[1]} N={N} "
            f"batch={batch} epochs={cfg.epochs} lr={cfg.lr:g}"
        )
    for epoch in range(1, cfg.epochs + 1):
        watch = Stopwatch()
        order = shuffle_rng.permutation(N)
        for b, start in enumerate(range(0, N, batch)):
            xb = X.data[:, order[start : start + batch]]
            terms, grad = value_and_gradient(p, xb, cfg.lam, cfg.gamma)
            if not terms.is_finite():
                raise NonFiniteLossError(epoch, b, terms.as_dict())
            state, p = adam_step(state, p, grad, cfg.lr)

        full = objective(p, X.data, cfg.lam, cfg.gamma)
        if not full.is_finite():
            raise NonFiniteLossError(epoch, -1, full.as_dict())
        history.append(epoch, full, watch.lap())
        if log:
            log.print(
                f"epoch {epoch:>3}/{cfg.epochs}  j_data={full.j_data:.6e}  j_reg={full.j_reg:.4e}  "
                f"j_smth={full.j_smth:.4e}  j_total={full.j_total:.6e}"
            )
    return p, history
