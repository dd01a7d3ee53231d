"""Training engine: unrolled losses, gradients, optimizer and baselines."""

from .baselines import fit_derivative_ls, fit_derivative_ls_snapshots
from .loss import grad_unrolled, loss_unrolled
from .optim import Adam, LossReport, TrainConfig, triangular_lr
from .train import (derivative_stable_from_snapshots, fit_derivative_stable, train_lsi,
                    train_slsi)

__all__ = [
    "Adam", "LossReport", "TrainConfig", "derivative_stable_from_snapshots",
    "fit_derivative_ls", "fit_derivative_ls_snapshots", "fit_derivative_stable",
    "grad_unrolled", "loss_unrolled", "train_lsi", "train_slsi", "triangular_lr",
]
