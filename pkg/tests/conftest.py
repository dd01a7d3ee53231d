import functools

import numpy as np
import pytest

import stablelsi.compression as _compression
import stablelsi.inference
import stablelsi.inference.train as _train
from stablelsi.datagen import gen_stable_lti, sample_trajectories
from stablelsi.integrator import TimeGrid
from stablelsi.stableparam import STABILITY_TOL

# (criterion, verdict, detail) lines printed at the end of the run
ACCEPTANCE_LINES = []

# every stable-parameterized model fitted anywhere in the session
TRAINED_STABLE = []

# every (snapshot matrix, basis) compression made anywhere in the session
COMPRESSIONS = []


def _recording(fit):
    @functools.wraps(fit)
    def wrapper(*args, **kwargs):
        out = fit(*args, **kwargs)
        TRAINED_STABLE.append((fit.__name__, out[1]))
        return out
    return wrapper


# installed before any test module (or the CLI) imports these names
for _name in ("train_slsi", "fit_derivative_stable"):
    _wrapped = _recording(getattr(_train, _name))
    setattr(_train, _name, _wrapped)
    setattr(stablelsi.inference, _name, _wrapped)


_fit_pod = _compression.fit_pod


@functools.wraps(_fit_pod)
def _recording_fit_pod(data, *args, **kwargs):
    basis = _fit_pod(data, *args, **kwargs)
    x = data.stacked_states() if hasattr(data, "stacked_states") else np.asarray(data, float)
    COMPRESSIONS.append((x.copy(), basis))
    return basis


_compression.fit_pod = _recording_fit_pod


def pod_bound_holds(x, basis):
    """``||X - lift(project(X))||_2 <= sum_{i>r} sigma_i`` up to round-off in
    forming the residual; returns ``(ok, lhs, rhs)``."""
    resid = x - _compression.lift(basis, _compression.project(basis, x))
    lhs = float(np.linalg.norm(resid, 2))
    rhs = basis.tail_bound
    slack = 64 * np.finfo(float).eps * max(x.shape) * float(basis.sigma_all[0])
    return lhs <= rhs + slack, lhs, rhs


def pytest_sessionfinish(session):
    failed = False
    if TRAINED_STABLE:
        worst = max(model.spectrum().max_real for _, model in TRAINED_STABLE)
        ok = worst <= STABILITY_TOL
        failed |= not ok
        ACCEPTANCE_LINES.append(
            (1, ok, f"all {len(TRAINED_STABLE)} stable-parameterized models trained in this "
                    f"session have max Re(lambda) = {worst:.3e} (tol {STABILITY_TOL:g})"))
    if COMPRESSIONS:
        checks = [pod_bound_holds(x, b) for x, b in COMPRESSIONS]
        ok = all(c[0] for c in checks)
        failed |= not ok
        ACCEPTANCE_LINES.append(
            (8, ok, f"POD truncation bound holds for all {len(checks)} compressions "
                    f"made in this session"))
    if failed:
        session.exitstatus = pytest.ExitCode.TESTS_FAILED


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for crit, ok, detail in sorted(ACCEPTANCE_LINES, key=lambda r: r[0]):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {crit}: {detail}")


def central_difference(fun, arrays, key, idx, rel_step=1e-6):
    """Central difference of ``fun(arrays)`` in one entry, parameter-scaled step."""
    base = arrays[key]
    h = rel_step * max(1.0, abs(base[idx]))
    plus = {k: v.copy() for k, v in arrays.items()}
    minus = {k: v.copy() for k, v in arrays.items()}
    plus[key][idx] += h
    minus[key][idx] -= h
    return (fun(plus) - fun(minus)) / (2.0 * h)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_lti_data():
    model = gen_stable_lti(3, seed=11)
    x0s = np.random.default_rng(5).normal(size=(2, 3))
    return model, sample_trajectories(model, x0s, TimeGrid(0.0, 0.05, 40))
