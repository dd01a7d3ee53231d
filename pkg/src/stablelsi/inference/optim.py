"""Adam with a triangular cyclic learning rate, plus training configuration."""

from __future__ import annotations

from dataclasses import dataclass, field, fields

import numpy as np

from ..errors import ConfigError


@dataclass
class TrainConfig:
    updates: int = 20000
    lr_min: float = 1e-6
    lr_max: float = 1e-2
    cycle_length: int | None = None  # None -> updates // 10
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    init_std: float = 0.1
    seed: int = 0
    unroll_steps: int = 1
    stability_check_every: int = 1000

    def __post_init__(self):
        if self.updates < 0:
            raise ConfigError("updates must be nonnegative")
        if not 0 < self.lr_min <= self.lr_max:
            raise ConfigError(f"need 0 < lr_min <= lr_max, got {self.lr_min}, {self.lr_max}")
        if self.unroll_steps < 1:
            raise ConfigError("unroll_steps must be at least 1")
        if self.cycle_length is not None and self.cycle_length < 2:
            raise ConfigError("cycle_length must be at least 2")
        if self.init_std <= 0:
            raise ConfigError("init_std must be positive")

    @property
    def effective_cycle(self) -> int:
        if self.cycle_length is not None:
            return self.cycle_length
        return max(2, self.updates // 10)

    @classmethod
    def keys(cls):
        return [f.name for f in fields(cls)]


def triangular_lr(step: int, lr_min: float, lr_max: float, cycle: int) -> float:
    """Linear ramp ``lr_min -> lr_max`` over the first half of each cycle and
    back down over the second half."""
    phase = (step % cycle) / cycle
    return lr_min + (lr_max - lr_min) * (1.0 - abs(2.0 * phase - 1.0))


class Adam:
    """Adam over a dict of named arrays. Updates the arrays in place."""

    def __init__(self, params: dict, beta1=0.9, beta2=0.999, eps=1e-8):
        self.params = params
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}
        self.t = 0

    def step(self, grads: dict, lr: float):
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        c1 = 1.0 - b1 ** self.t
        c2 = 1.0 - b2 ** self.t
        for k, p in self.params.items():
            g = grads[k]
            m = self.m[k]
            v = self.v[k]
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * g * g
            p -= lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


@dataclass
class LossReport:
    losses: list = field(default_factory=list)
    lrs: list = field(default_factory=list)
    best_update: int = -1
    best_loss: float = float("inf")
    wall_time: float = 0.0
    stability_trace: list = field(default_factory=list)  # (update, max Re lambda)

    @property
    def final_loss(self) -> float:
        return self.losses[-1] if self.losses else float("nan")

    def csv_rows(self):
        yield ("update", "lr", "loss")
        for i, (lr, loss) in enumerate(zip(self.lrs, self.losses)):
            yield (i, repr(float(lr)), repr(float(loss)))
