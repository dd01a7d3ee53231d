"""Command-line pipeline: generate, compress, train, simulate, evaluate,
spectrum, and experiment (a config-driven chain of the others).

Every command accepts ``--config FILE``; the file holds one ``[section]``
per command with ``key = value`` lines whose keys are the long option names
(dashes or underscores). Flags given on the command line win over the file.

Exit codes: 0 success, 2 usage/configuration, 3 data/format, 4 numerical
failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import logging
import sys
from pathlib import Path

import numpy as np

from . import datagen
from .compression import energy_table, fit_pod, lift, project, project_snapshots
from .errors import (ConfigError, DimensionError, DivergenceError, FactorizationError,
                     FormatError)
from .inference import (TrainConfig, derivative_stable_from_snapshots,
                        fit_derivative_ls_snapshots, train_lsi, train_slsi)
from .integrator import TimeGrid, simulate
from .io import read_basis, read_model, read_snapshots, write_basis, write_model, write_snapshots
from .snapshots import SnapshotSet, Trajectory
from .stableparam import STABILITY_TOL

log = logging.getLogger("stablelsi")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4

METHODS = ("slsi", "lsi", "deriv-ls", "deriv-stable")


class UsageError(Exception):
    pass


# -------------------------------------------------------------------- helpers

def _floats(text):
    return [float(v) for v in str(text).replace(",", " ").split()]


def _summary(data: SnapshotSet) -> str:
    t = data[0]
    return (f"n={data.n} trajectories={len(data)} N={t.grid.steps} dt={t.grid.dt!r} "
            f"inputs={'yes' if data.has_inputs else 'no'} "
            f"derivatives={'yes' if data.has_derivatives else 'no'}")


def _write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in rows:
            w.writerow(row)


def _train_config(args) -> TrainConfig:
    return TrainConfig(
        updates=args.updates, lr_min=args.lr_min, lr_max=args.lr_max,
        cycle_length=args.cycle_length, adam_beta1=args.adam_beta1,
        adam_beta2=args.adam_beta2, adam_eps=args.adam_eps, init_std=args.init_std,
        seed=args.seed, unroll_steps=args.unroll_steps)


def eigen_rows(name, model, zoom):
    lam = model.spectrum().eigenvalues
    for k, z in enumerate(lam):
        yield (name, k, repr(float(z.real)), repr(float(z.imag)),
               int(abs(z) <= zoom))


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# ------------------------------------------------------------------- commands

def cmd_generate(args):
    kind = args.system
    if kind == "lti":
        model = datagen.gen_stable_lti(args.n, args.seed, args.margin, args.m)
        rng = np.random.default_rng(args.seed + 1)
        x0s = rng.normal(size=(args.trajectories, args.n))
        grid = TimeGrid(0.0, args.dt, args.steps)
        inputs = None
        if args.m:
            freqs = rng.uniform(0.5, 3.0, size=(args.trajectories, args.m))
            phases = rng.uniform(0.0, 2 * np.pi, size=(args.trajectories, args.m))
            inputs = [(lambda t, w=w, ph=ph: np.sin(w * t + ph)) for w, ph in zip(freqs, phases)]
        data = datagen.sample_trajectories(model, x0s, grid, inputs)
        if args.model_out:
            write_model(model, args.model_out)
    elif kind == "transport-flow":
        data = datagen.gen_transport_flow(datagen.TransportFlowSpec(
            grid_points_per_axis=args.grid_points or 200, times=args.samples or 100,
            t_end=args.horizon or 5.0))
    elif kind == "burgers":
        freqs = tuple(args.f) if args.f else datagen.BurgersSpec().frequencies
        data = datagen.gen_burgers(datagen.BurgersSpec(
            grid_points=args.grid_points or 1000, viscosity=args.viscosity,
            horizon=args.horizon or 1.0, samples=args.samples or 500, frequencies=freqs))
    else:
        raise UsageError(f"unknown system {kind!r}")

    if args.noise:
        data = datagen.add_noise(data, args.noise, args.noise_seed)
    if args.test_out:
        if kind != "burgers":
            raise UsageError("--test-out is only meaningful for burgers")
        train, test = datagen.burgers_split(data, tuple(args.test_f))
        if len(test) == 0 or len(train) == 0:
            raise UsageError("train/test split left one side empty")
        write_snapshots(test, args.test_out)
        print(f"test set: {_summary(test)}")
        data = train
    write_snapshots(data, args.out)
    print(_summary(data))
    return EXIT_OK


def cmd_compress(args):
    data = read_snapshots(args.input)
    if (args.rank is None) == (args.energy is None):
        raise UsageError("give exactly one of --rank and --energy")
    if args.rank is not None:
        limit = min(data.n, data.stacked_states().shape[1])
        if args.rank > limit:
            raise UsageError(f"--rank {args.rank} exceeds min(n, N) = {limit}")
    basis = fit_pod(data, rank=args.rank, energy=args.energy, center=args.center)
    write_basis(basis, args.basis_out)
    reduced = project_snapshots(basis, data)
    write_snapshots(reduced, args.out)
    rows = [("mode", "sigma", "cumulative_energy", "tail_bound")]
    rows += [(i, repr(s), repr(c), repr(t)) for i, s, c, t in energy_table(basis)]
    if args.energy_csv:
        _write_csv(args.energy_csv, rows)
    shown = min(len(rows) - 1, max(basis.r + 3, args.show))
    print(f"{'i':>4} {'sigma_i':>14} {'cum.energy':>14} {'tail bound':>14}")
    for i, s, c, t in rows[1:shown + 1]:
        mark = " *" if i == basis.r else ""
        print(f"{i:>4} {float(s):14.6e} {float(c):14.10f} {float(t):14.6e}{mark}")
    print(f"selected r={basis.r} energy={basis.energy_captured!r} "
          f"tail_bound={basis.tail_bound!r} sigma_r+1={basis.sigma_next!r}")
    return EXIT_OK


def cmd_train(args):
    data = read_snapshots(args.input)
    cfg = _train_config(args)
    n = data.n
    report = None
    if args.method == "slsi":
        _, model, report = train_slsi(data, n, cfg)
    elif args.method == "lsi":
        model, report = train_lsi(data, n, cfg)
    elif args.method == "deriv-ls":
        if not data.has_derivatives:
            raise UsageError("deriv-ls needs derivative snapshots in the input file")
        model = fit_derivative_ls_snapshots(data)
    elif args.method == "deriv-stable":
        if not data.has_derivatives:
            raise UsageError("deriv-stable needs derivative snapshots in the input file")
        _, model, report = derivative_stable_from_snapshots(data, cfg)
    else:
        raise UsageError(f"unknown method {args.method!r}")

    write_model(model, args.out)
    loss_csv = args.loss_csv or f"{args.out}.loss.csv"
    eig_csv = args.eig_report or f"{args.out}.eig.csv"
    if report is not None:
        _write_csv(loss_csv, report.csv_rows())
    spec = model.spectrum()
    rows = [("model", "index", "re", "im", "in_zoom")]
    rows += list(eigen_rows(args.method, model, args.zoom))
    rows.append(("max_re", "", repr(spec.max_real), "", ""))
    _write_csv(eig_csv, rows)
    status = "stable" if spec.max_real <= STABILITY_TOL else "UNSTABLE"
    print(f"method={args.method} n={n} max_re_lambda={spec.max_real:.6e} ({status})")
    if report is not None:
        print(f"best_loss={report.best_loss:.6e} at update {report.best_update} "
              f"wall_time={report.wall_time:.2f}s")
    return EXIT_OK


def _initial_state(args, model, basis):
    if args.x0 is not None:
        x0 = np.array(_floats(args.x0))
    elif args.x0_from is not None:
        data = read_snapshots(args.x0_from)
        x0 = data[args.trajectory].states[:, 0]
    else:
        raise UsageError("give --x0 or --x0-from")
    if basis is not None and x0.shape[0] == basis.n and basis.n != model.n:
        x0 = project(basis, x0)
    if x0.shape[0] != model.n:
        raise DimensionError(f"x0 has length {x0.shape[0]}, model has n={model.n}")
    return x0


def cmd_simulate(args):
    model = read_model(args.model)
    basis = read_basis(args.basis) if args.basis else None
    x0 = _initial_state(args, model, basis)
    grid = TimeGrid(args.t0, args.dt, args.steps)
    u = None
    if model.b is not None:
        if not args.inputs_from:
            raise UsageError("model has inputs; give --inputs-from with a snapshot file")
        u = read_snapshots(args.inputs_from)[args.trajectory].inputs
        if u is None or u.samples.shape[1] != grid.nodes:
            raise DimensionError("input signal missing or not matching the simulation grid")
    code = EXIT_OK
    try:
        traj = simulate(model, x0, grid, u)
    except DivergenceError as exc:
        log.warning("simulation diverged at step %d; writing partial trajectory", exc.step)
        traj = exc.partial
        grid = TimeGrid(args.t0, args.dt, traj.shape[1] - 1)
        code = EXIT_NUMERIC
    if basis is not None:
        traj = lift(basis, traj)
    write_snapshots(SnapshotSet([Trajectory(grid, traj, u if code == EXIT_OK else None)]),
                    args.out)
    print(f"trajectory shape {traj.shape} max|x|={float(np.max(np.abs(traj))):.6e}")
    return code


def evaluate_model(model, test: SnapshotSet, basis=None, dt=None, steps=None):
    """Per-trajectory relative L2 errors and per-step error series."""
    metrics, series, fields = [], [], []
    for k, traj in enumerate(test):
        if dt is not None and abs(dt - traj.grid.dt) > 1e-12 * traj.grid.dt:
            raise DimensionError(f"grid mismatch: --dt {dt} vs data dt {traj.grid.dt}")
        if steps is not None and steps != traj.grid.steps:
            raise DimensionError(f"grid mismatch: --steps {steps} vs data N={traj.grid.steps}")
        truth = traj.states
        x0 = truth[:, 0]
        if basis is not None:
            if truth.shape[0] != basis.n:
                raise DimensionError("test data dimension differs from the basis")
            x0 = project(basis, x0)
        if x0.shape[0] != model.n:
            raise DimensionError(f"model n={model.n} does not match data")
        pred = simulate(model, x0, traj.grid, traj.inputs if model.b is not None else None)
        if basis is not None:
            pred = lift(basis, pred)
        err = pred - truth
        denom = np.linalg.norm(truth)
        rel = float(np.linalg.norm(err) / denom) if denom > 0 else float(np.linalg.norm(err))
        label = test.labels[k] if test.labels else str(k)
        metrics.append((k, label, traj.grid.steps, rel))
        col_err = np.linalg.norm(err, axis=0)
        col_ref = np.linalg.norm(truth, axis=0)
        for i, t in enumerate(traj.grid.times()):
            r = col_err[i] / col_ref[i] if col_ref[i] > 0 else col_err[i]
            series.append((k, i, t, col_err[i], r))
        fields.append(Trajectory(traj.grid, err))
    return metrics, series, SnapshotSet(fields, test.labels)


def cmd_evaluate(args):
    model = read_model(args.model)
    test = read_snapshots(args.data)
    basis = read_basis(args.basis) if args.basis else None
    metrics, series, fields = evaluate_model(model, test, basis, args.dt, args.steps)
    _write_csv(args.out, [("trajectory", "label", "steps", "rel_l2_error")]
               + [(k, lbl, n, repr(e)) for k, lbl, n, e in metrics])
    if args.series_out:
        _write_csv(args.series_out, [("trajectory", "step", "time", "abs_error", "rel_error")]
                   + [(k, i, repr(float(t)), repr(float(a)), repr(float(r)))
                      for k, i, t, a, r in series])
    if args.field_out:
        write_snapshots(fields, args.field_out)
    for k, lbl, _, e in metrics:
        print(f"trajectory {k} ({lbl}): relative L2 error {e:.6e}")
    return EXIT_OK


def cmd_spectrum(args):
    if not args.models:
        raise UsageError("give at least one model file")
    names = args.names or [Path(p).stem for p in args.models]
    if len(names) != len(args.models):
        raise UsageError("--names must match the number of models")
    rows = [("model", "index", "re", "im", "in_zoom")]
    for name, path in zip(names, args.models):
        model = read_model(path)
        rows += list(eigen_rows(name, model, args.zoom))
        print(f"{name}: max Re lambda = {model.spectrum().max_real:.6e} "
              f"({model.provenance.value})")
    _write_csv(args.out, rows)
    return EXIT_OK


def cmd_experiment(args):
    """Run generate -> (split) -> compress -> train (each method) -> spectrum
    -> evaluate from one config file into ``--workdir``."""
    cp = _read_config(args.config)
    work = Path(args.workdir)
    work.mkdir(parents=True, exist_ok=True)
    parser = build_parser()

    def run(cmd, extra):
        argv = [cmd, "--config", args.config] + extra
        ns = parser.parse_args(argv)
        _apply_config(parser, ns, argv, cp)
        return ns.func(ns)

    methods = [m.strip() for m in cp.get("experiment", "methods", fallback="slsi,lsi").split(",")]
    gen_extra = ["--out", str(work / "data.slsi")]
    system = cp.get("generate", "system", fallback=None)
    if system is None:
        raise UsageError("[generate] section must set system")
    if system == "burgers":
        gen_extra += ["--test-out", str(work / "test.slsi")]
    run("generate", gen_extra)
    train_file = work / "data.slsi"
    test_file = work / "test.slsi" if system == "burgers" else train_file
    basis_file = None
    if cp.has_section("compress"):
        basis_file = work / "basis.slsi"
        run("compress", ["--input", str(train_file), "--out", str(work / "reduced.slsi"),
                         "--basis-out", str(basis_file),
                         "--energy-csv", str(work / "energy.csv")])
        train_file = work / "reduced.slsi"
    models = []
    for method in methods:
        out = work / f"{method}.model"
        run("train", ["--input", str(train_file), "--out", str(out), "--method", method])
        models.append(str(out))
        ev = ["--model", str(out), "--data", str(test_file),
              "--out", str(work / f"{method}.metrics.csv"),
              "--series-out", str(work / f"{method}.series.csv")]
        if basis_file is not None:
            ev += ["--basis", str(basis_file)]
        try:
            run("evaluate", ev)
        except DivergenceError as exc:
            log.warning("%s model diverged during evaluation at step %d", method, exc.step)
    run("spectrum", ["--models", *models, "--names", *methods,
                     "--out", str(work / "spectrum.csv")])
    return EXIT_OK


# --------------------------------------------------------------------- parser

def _add_train_options(p):
    d = TrainConfig()
    p.add_argument("--updates", type=int, default=d.updates, help="optimizer updates")
    p.add_argument("--lr-min", type=float, default=d.lr_min, help="cyclic learning rate floor")
    p.add_argument("--lr-max", type=float, default=d.lr_max, help="cyclic learning rate peak")
    p.add_argument("--cycle-length", type=int, default=None,
                   help="updates per triangular cycle (default: updates/10)")
    p.add_argument("--adam-beta1", type=float, default=d.adam_beta1, help="Adam beta1")
    p.add_argument("--adam-beta2", type=float, default=d.adam_beta2, help="Adam beta2")
    p.add_argument("--adam-eps", type=float, default=d.adam_eps, help="Adam epsilon")
    p.add_argument("--init-std", type=float, default=d.init_std,
                   help="std of the Gaussian parameter initialisation")
    p.add_argument("--seed", type=int, default=d.seed, help="initialisation seed")
    p.add_argument("--unroll-steps", type=int, default=d.unroll_steps,
                   help="RK4 steps unrolled per training window")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="stablelsi", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, description=help_, formatter_class=fmt)
        p.add_argument("--config", default=None, help="key=value config file with sections")
        p.set_defaults(func=func)
        return p

    p = add("generate", cmd_generate, "generate a snapshot dataset")
    p.add_argument("system", nargs="?", choices=["lti", "transport-flow", "burgers"],
                   default=None, help="data source")
    p.add_argument("--out", default=None, help="output snapshot file (.txt/.csv for text)")
    p.add_argument("--n", type=int, default=4, help="lti: state dimension")
    p.add_argument("--m", type=int, default=0, help="lti: input dimension")
    p.add_argument("--seed", type=int, default=0, help="lti: system and initial-state seed")
    p.add_argument("--margin", type=float, default=0.1, help="lti: lower bound on eig(R)")
    p.add_argument("--trajectories", type=int, default=3, help="lti: trajectory count")
    p.add_argument("--dt", type=float, default=0.01, help="lti: sampling step")
    p.add_argument("--steps", type=int, default=500, help="lti: steps per trajectory")
    p.add_argument("--model-out", default=None, help="lti: also write the true model")
    p.add_argument("--grid-points", type=int, default=None,
                   help="transport-flow: points per axis (200); burgers: grid points (1000)")
    p.add_argument("--samples", type=int, default=None,
                   help="snapshots per trajectory (transport-flow 100, burgers 500)")
    p.add_argument("--horizon", type=float, default=None,
                   help="final time (transport-flow 5, burgers 1)")
    p.add_argument("--viscosity", type=float, default=0.01, help="burgers: viscosity mu")
    p.add_argument("--f", type=float, nargs="+", default=None,
                   help="burgers: initial-condition frequencies (default 1.0..5.0 step 0.25)")
    p.add_argument("--test-out", default=None,
                   help="burgers: write the test split here and the training split to --out")
    p.add_argument("--test-f", type=float, nargs="+",
                   default=list(datagen.BURGERS_TEST_FREQUENCIES),
                   help="burgers: test frequencies")
    p.add_argument("--noise", type=float, default=0.0,
                   help="relative Gaussian noise level (std / signal RMS)")
    p.add_argument("--noise-seed", type=int, default=0, help="noise seed")

    p = add("compress", cmd_compress, "fit a POD basis and project snapshots")
    p.add_argument("--input", default=None, help="snapshot file")
    p.add_argument("--out", default=None, help="reduced snapshot file")
    p.add_argument("--basis-out", default=None, help="basis file")
    p.add_argument("--rank", type=int, default=None, help="retained modes")
    p.add_argument("--energy", type=float, default=None,
                   help="retain the fewest modes reaching this squared-sigma energy")
    p.add_argument("--center", action="store_true", help="subtract the snapshot mean first")
    p.add_argument("--energy-csv", default=None, help="write the full energy table")
    p.add_argument("--show", type=int, default=10, help="energy table rows to print")

    p = add("train", cmd_train, "learn a linear model")
    p.add_argument("--input", default=None, help="(reduced) snapshot file")
    p.add_argument("--out", default=None, help="model file")
    p.add_argument("--method", choices=METHODS, default="slsi", help="inference method")
    p.add_argument("--loss-csv", default=None, help="loss history (default <out>.loss.csv)")
    p.add_argument("--eig-report", default=None,
                   help="eigenvalue report (default <out>.eig.csv)")
    p.add_argument("--zoom", type=float, default=1.0,
                   help="|lambda| radius flagged in the in_zoom column")
    _add_train_options(p)

    p = add("simulate", cmd_simulate, "simulate a model on a uniform grid")
    p.add_argument("--model", default=None, help="model file")
    p.add_argument("--x0", default=None, help="initial state, comma separated")
    p.add_argument("--x0-from", default=None, help="take x0 from column 0 of this snapshot file")
    p.add_argument("--inputs-from", default=None, help="snapshot file supplying the input signal")
    p.add_argument("--trajectory", type=int, default=0, help="trajectory index in those files")
    p.add_argument("--basis", default=None, help="lift the trajectory through this basis")
    p.add_argument("--t0", type=float, default=0.0, help="start time")
    p.add_argument("--dt", type=float, default=0.002, help="step size")
    p.add_argument("--steps", type=int, default=500, help="number of steps")
    p.add_argument("--out", default=None, help="trajectory snapshot file")

    p = add("evaluate", cmd_evaluate, "relative L2 errors of a model on test data")
    p.add_argument("--model", default=None, help="model file")
    p.add_argument("--data", default=None, help="test snapshot file")
    p.add_argument("--basis", default=None, help="evaluate in full space through this basis")
    p.add_argument("--dt", type=float, default=None, help="require this step size")
    p.add_argument("--steps", type=int, default=None, help="require this step count")
    p.add_argument("--out", default=None, help="metrics CSV")
    p.add_argument("--series-out", default=None, help="per-time-step error CSV")
    p.add_argument("--field-out", default=None, help="error field snapshot file (heatmaps)")

    p = add("spectrum", cmd_spectrum, "eigenvalue CSV for one or more models")
    p.add_argument("--models", nargs="*", default=None, help="model files")
    p.add_argument("--names", nargs="*", default=None, help="names (default: file stems)")
    p.add_argument("--zoom", type=float, default=1.0,
                   help="|lambda| radius flagged in the in_zoom column")
    p.add_argument("--out", default=None, help="output CSV")

    p = add("experiment", cmd_experiment, "run a full pipeline from a config file")
    p.add_argument("--workdir", default=None, help="output directory")
    return parser


REQUIRED = {
    "generate": ("system", "out"),
    "compress": ("input", "out", "basis_out"),
    "train": ("input", "out"),
    "simulate": ("model", "out"),
    "evaluate": ("model", "data", "out"),
    "spectrum": ("out",),
    "experiment": ("config", "workdir"),
}


def _read_config(path):
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    cp.optionxform = lambda s: s.strip().replace("-", "_")
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except FileNotFoundError as exc:
        raise UsageError(f"config file {path} not found") from exc
    except configparser.Error as exc:
        raise UsageError(f"bad config file: {exc}") from exc
    return cp


def _subparser(parser, name):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def _apply_config(parser, ns, argv, cp=None):
    """Fill options from the config section unless given on the command line."""
    if ns.config is None:
        return
    cp = cp or _read_config(ns.config)
    if not cp.has_section(ns.command):
        return
    sub = _subparser(parser, ns.command)
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    given = set()
    for tok in argv:
        if tok.startswith("--"):
            given.add(tok[2:].split("=", 1)[0].replace("-", "_"))
    for key, raw in cp.items(ns.command):
        if key not in actions:
            raise UsageError(f"unknown key {key!r} in [{ns.command}] of {ns.config}")
        if key in given or (key == "system" and ns.system is not None):
            continue
        act = actions[key]
        if isinstance(act, argparse._StoreTrueAction):
            value = raw.strip().lower() in ("1", "true", "yes", "on")
        elif act.nargs in ("+", "*"):
            conv = act.type or str
            value = [conv(v) for v in raw.replace(",", " ").split()]
        else:
            conv = act.type or str
            try:
                value = conv(raw)
            except ValueError as exc:
                raise UsageError(f"bad value for {key}: {raw!r}") from exc
            if act.choices is not None and value not in act.choices:
                raise UsageError(f"{key} must be one of {list(act.choices)}")
        setattr(ns, key, value)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if ns.command != "experiment":
            _apply_config(parser, ns, argv)
        missing = [k for k in REQUIRED[ns.command] if getattr(ns, k, None) in (None, [])]
        if ns.command == "spectrum" and not ns.models:
            missing.append("models")
        if missing:
            raise UsageError("missing required option(s): "
                             + ", ".join("--" + m.replace("_", "-") for m in missing))
        return ns.func(ns)
    except (UsageError, ConfigError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DivergenceError, FactorizationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FormatError, DimensionError, FileNotFoundError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
