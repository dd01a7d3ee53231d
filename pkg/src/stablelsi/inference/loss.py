"""Unrolled RK4 losses and their reverse-mode gradients.

For every trajectory and every window start ``i`` the observed state
``x(t_i)`` is rolled forward ``unroll`` RK4 steps with the candidate
``(A, B)`` and each rolled state is compared with the observed snapshot at
the same time:

    L = sum_k sum_i sum_{s=1..unroll} || x_k(t_{i+s}) - y_{k,i,s} ||^2

With ``unroll=1`` this is the plain one-step-ahead squared residual summed
over snapshot pairs. All windows that share a step size are evaluated as one
``n x K`` block so a gradient costs a handful of dense products.

Gradients are accumulated by hand through the four RK4 stages and then
through ``A = (jbar - jbar.T - rbar rbar.T) qbar qbar.T``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from ..snapshots import SnapshotSet
from ..stableparam import StableParams, assemble_matrix


@dataclass
class _Block:
    dt: float
    x0: np.ndarray                  # n x K window starts
    targets: list                   # unroll entries, each n x K
    inputs: list | None             # unroll entries of (u_now, u_mid, u_next), each m x K


def _windows(data: SnapshotSet, unroll: int, need_inputs: bool):
    if unroll < 1:
        raise ConfigError("unroll must be at least 1")
    if len(data) == 0:
        raise ValueError("snapshot set is empty")
    groups: dict = {}
    for traj in data:
        steps = traj.grid.steps
        count = steps - unroll + 1
        if count <= 0:
            continue
        with_u = need_inputs and traj.inputs is not None
        key = (traj.grid.dt, with_u)
        g = groups.setdefault(key, {"x0": [], "tg": [[] for _ in range(unroll)],
                                    "u": [[] for _ in range(unroll)]})
        x = traj.states
        g["x0"].append(x[:, :count])
        for s in range(unroll):
            g["tg"][s].append(x[:, s + 1: s + 1 + count])
        if with_u:
            u_now, u_mid, u_next = traj.inputs.stage_inputs()
            for s in range(unroll):
                sl = slice(s, s + count)
                g["u"][s].append((u_now[:, sl], u_mid[:, sl], u_next[:, sl]))
    blocks = []
    for (dt, with_u) in sorted(groups, key=lambda k: (k[0], k[1])):
        g = groups[(dt, with_u)]
        inputs = None
        if with_u:
            inputs = [tuple(np.hstack([u[j] for u in g["u"][s]]) for j in range(3))
                      for s in range(unroll)]
        blocks.append(_Block(dt, np.hstack(g["x0"]),
                             [np.hstack(t) for t in g["tg"]], inputs))
    return blocks


def prepare(data: SnapshotSet, unroll: int = 1, with_inputs: bool = True):
    """Precompute the window blocks for repeated loss evaluations."""
    return _windows(data, unroll, with_inputs)


def _stage_forward(a, b, x, u, dt):
    bu = (0.0, 0.0, 0.0) if u is None else (b @ u[0], b @ u[1], b @ u[2])
    h1 = a @ x + bu[0]
    z2 = x + 0.5 * dt * h1
    h2 = a @ z2 + bu[1]
    z3 = x + 0.5 * dt * h2
    h3 = a @ z3 + bu[1]
    z4 = x + dt * h3
    h4 = a @ z4 + bu[2]
    y = x + dt / 6.0 * (h1 + 2.0 * h2 + 2.0 * h3 + h4)
    return y, (x, z2, z3, z4)


def _stage_backward(a, gy, saved, u, dt, ga, gb):
    """Pull ``gy`` back through one RK4 step; accumulates into ``ga``/``gb``."""
    x, z2, z3, z4 = saved
    gh1 = dt / 6.0 * gy
    gh2 = dt / 3.0 * gy
    gh3 = dt / 3.0 * gy
    gh4 = dt / 6.0 * gy
    gx = gy.copy()

    ga += gh4 @ z4.T
    gz4 = a.T @ gh4
    gx += gz4
    gh3 = gh3 + dt * gz4

    ga += gh3 @ z3.T
    gz3 = a.T @ gh3
    gx += gz3
    gh2 = gh2 + 0.5 * dt * gz3

    ga += gh2 @ z2.T
    gz2 = a.T @ gh2
    gx += gz2
    gh1 = gh1 + 0.5 * dt * gz2

    ga += gh1 @ x.T
    gx += a.T @ gh1

    if u is not None:
        gb += gh1 @ u[0].T + (gh2 + gh3) @ u[1].T + gh4 @ u[2].T
    return gx


def matrix_loss_grad(a, b, blocks, need_grad: bool = True):
    """Loss and gradients with respect to the assembled ``A`` and ``B``."""
    loss = 0.0
    ga = np.zeros_like(a)
    gb = None if b is None else np.zeros_like(b)
    for blk in blocks:
        if blk.inputs is not None and b is None:
            raise ConfigError("data carries inputs but the model has no input matrix")
        y = blk.x0
        tape = []
        resid = []
        for s, target in enumerate(blk.targets):
            u = None if blk.inputs is None else blk.inputs[s]
            y, saved = _stage_forward(a, b, y, u, blk.dt)
            tape.append((saved, u))
            r = target - y
            resid.append(r)
            loss += float(np.sum(r * r))
        if not need_grad:
            continue
        gy = np.zeros_like(blk.x0)
        for s in range(len(blk.targets) - 1, -1, -1):
            gy = gy - 2.0 * resid[s]
            saved, u = tape[s]
            gy = _stage_backward(a, gy, saved, u, blk.dt, ga, gb)
    return loss, ga, gb


def assemble_backward(p: StableParams, ga):
    """Pull a gradient on ``A`` back to ``(jbar, rbar, qbar)``."""
    jbar, rbar, qbar = p.jbar, p.rbar, p.qbar
    m = jbar - jbar.T - rbar @ rbar.T
    q = qbar @ qbar.T
    gm = ga @ q.T
    gq = m.T @ ga
    gj = gm - gm.T
    gr = -(gm + gm.T) @ rbar
    gqbar = (gq + gq.T) @ qbar
    return gj, gr, gqbar


def _check_inputs(p_has_b: bool, data: SnapshotSet):
    if data.has_inputs and not p_has_b:
        raise ConfigError("data carries inputs; parameters need an input matrix B")


def loss_unrolled(p: StableParams, data: SnapshotSet, unroll: int = 1) -> float:
    _check_inputs(p.bbar is not None, data)
    blocks = prepare(data, unroll, with_inputs=p.bbar is not None)
    a = assemble_matrix(p.jbar, p.rbar, p.qbar)
    return matrix_loss_grad(a, p.bbar, blocks, need_grad=False)[0]


def stable_loss_grad(p: StableParams, blocks):
    a = assemble_matrix(p.jbar, p.rbar, p.qbar)
    loss, ga, gb = matrix_loss_grad(a, p.bbar, blocks)
    gj, gr, gq = assemble_backward(p, ga)
    grads = {"jbar": gj, "rbar": gr, "qbar": gq}
    if gb is not None:
        grads["bbar"] = gb
    return loss, grads


def grad_unrolled(p: StableParams, data: SnapshotSet, unroll: int = 1) -> dict:
    """Exact gradient of ``loss_unrolled`` keyed by factor name."""
    _check_inputs(p.bbar is not None, data)
    blocks = prepare(data, unroll, with_inputs=p.bbar is not None)
    return stable_loss_grad(p, blocks)[1]
