"""Training loops: sLSI (stable), LSI (unconstrained) and derivative fits."""

from __future__ import annotations

import logging
import time

import numpy as np

from ..errors import ConfigError, DimensionError, DivergenceError
from ..linalg import as_matrix, eigenvalues
from ..snapshots import SnapshotSet
from ..stableparam import (LinearModel, Provenance, StableParams, assemble,
                           assemble_matrix, init_params)
from .loss import assemble_backward, matrix_loss_grad, prepare, stable_loss_grad
from .optim import Adam, LossReport, TrainConfig, triangular_lr

log = logging.getLogger(__name__)


def _optimize(params: dict, loss_grad, cfg: TrainConfig, check=None):
    """Full-batch Adam loop; returns ``(best_params, report)``.

    ``loss_grad(params) -> (loss, grads)``. ``check(params)`` is called every
    ``cfg.stability_check_every`` updates and its value logged to the report.
    """
    report = LossReport()
    opt = Adam(params, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps)
    cycle = cfg.effective_cycle
    best = {k: v.copy() for k, v in params.items()}
    t_start = time.perf_counter()

    def record(step, loss):
        if not np.isfinite(loss):
            raise DivergenceError(f"non-finite loss at update {step}", step=step,
                                  partial=best)
        if loss < report.best_loss:
            report.best_loss = loss
            report.best_update = step
            for k, v in params.items():
                best[k][...] = v

    for step in range(cfg.updates):
        # a non-finite loss is reported by ``record``; silence numpy on the way there
        with np.errstate(over="ignore", invalid="ignore"):
            loss, grads = loss_grad(params)
        record(step, loss)
        if check is not None and step % cfg.stability_check_every == 0:
            report.stability_trace.append((step, check(params)))
        lr = triangular_lr(step, cfg.lr_min, cfg.lr_max, cycle)
        report.losses.append(loss)
        report.lrs.append(lr)
        opt.step(grads, lr)
        if log.isEnabledFor(logging.DEBUG) and step % 1000 == 0:
            log.debug("update %d lr %.3e loss %.6e", step, lr, loss)
    with np.errstate(over="ignore", invalid="ignore"):
        final_loss, _ = loss_grad(params)
    record(cfg.updates, final_loss)
    if check is not None:
        report.stability_trace.append((cfg.updates, check(params)))
    report.wall_time = time.perf_counter() - t_start
    return best, report


def _check_data(data: SnapshotSet, n: int):
    if len(data) == 0:
        raise ValueError("snapshot set is empty")
    if data.n != n:
        raise DimensionError(f"data has state dimension {data.n}, requested n={n}")


def _input_dim(data: SnapshotSet) -> int:
    ms = {t.m for t in data if t.inputs is not None}
    if len(ms) > 1:
        raise DimensionError(f"inconsistent input dimensions {sorted(ms)}")
    return ms.pop() if ms else 0


def _stable_max_real(params):
    a = assemble_matrix(params["jbar"], params["rbar"], params["qbar"])
    return eigenvalues(a).max_real


def train_slsi(data: SnapshotSet, n: int, cfg: TrainConfig | None = None,
               init: StableParams | None = None):
    """Stable linear system inference with the RK4-unrolled loss.

    Returns ``(params, model, report)`` for the lowest loss seen.
    """
    cfg = cfg or TrainConfig()
    _check_data(data, n)
    m = _input_dim(data)
    p0 = init or init_params(n, m or None, cfg.seed, cfg.init_std)
    blocks = prepare(data, cfg.unroll_steps, with_inputs=m > 0)
    params = {k: v.copy() for k, v in p0.arrays().items()}

    def loss_grad(ps):
        return stable_loss_grad(StableParams(**ps), blocks)

    best, report = _optimize(params, loss_grad, cfg, _stable_max_real)
    p = StableParams(**best)
    return p, assemble(p), report


def train_lsi(data: SnapshotSet, n: int, cfg: TrainConfig | None = None):
    """Same loss and optimizer as ``train_slsi`` over a free matrix ``A``."""
    cfg = cfg or TrainConfig()
    _check_data(data, n)
    m = _input_dim(data)
    rng = np.random.default_rng(cfg.seed)
    params = {"a": rng.normal(0.0, cfg.init_std, (n, n))}
    if m:
        params["b"] = rng.normal(0.0, cfg.init_std, (n, m))
    blocks = prepare(data, cfg.unroll_steps, with_inputs=m > 0)

    def loss_grad(ps):
        loss, ga, gb = matrix_loss_grad(ps["a"], ps.get("b"), blocks)
        g = {"a": ga}
        if gb is not None:
            g["b"] = gb
        return loss, g

    best, report = _optimize(params, loss_grad, cfg)
    return LinearModel(best["a"], best.get("b"), Provenance.UNCONSTRAINED), report


def derivative_residual(a, b, x, xdot, u=None):
    r = xdot - a @ x
    if b is not None:
        r = r - b @ u
    return r


def fit_derivative_stable(x, xdot, cfg: TrainConfig | None = None, u=None):
    """Minimize ``||Xdot - (A X + B U)||_F^2`` over the stable factors.

    Returns ``(params, model, report)``.
    """
    cfg = cfg or TrainConfig()
    x = as_matrix(x, "X")
    xdot = as_matrix(xdot, "Xdot")
    if x.shape != xdot.shape:
        raise DimensionError(f"X is {x.shape} but Xdot is {xdot.shape}")
    m = 0
    if u is not None:
        u = as_matrix(u, "U")
        if u.shape[1] != x.shape[1]:
            raise DimensionError("U must have one column per snapshot")
        m = u.shape[0]
    n = x.shape[0]
    p0 = init_params(n, m or None, cfg.seed, cfg.init_std)
    params = {k: v.copy() for k, v in p0.arrays().items()}

    def loss_grad(ps):
        p = StableParams(**ps)
        a = assemble_matrix(p.jbar, p.rbar, p.qbar)
        r = derivative_residual(a, p.bbar, x, xdot, u)
        gj, gr, gq = assemble_backward(p, -2.0 * r @ x.T)
        g = {"jbar": gj, "rbar": gr, "qbar": gq}
        if p.bbar is not None:
            g["bbar"] = -2.0 * r @ u.T
        return float(np.sum(r * r)), g

    best, report = _optimize(params, loss_grad, cfg, _stable_max_real)
    p = StableParams(**best)
    return p, assemble(p), report


def derivative_stable_from_snapshots(data: SnapshotSet, cfg: TrainConfig | None = None):
    if not data.has_derivatives:
        raise ConfigError("derivative-based fitting needs derivative snapshots")
    u = data.stacked_inputs() if data.has_inputs else None
    return fit_derivative_stable(data.stacked_states(), data.stacked_derivatives(), cfg, u)
