"""Experiment driver: reads a TOML config, runs seeded sweeps
(algorithms x noise levels x dataset sizes x repeats), and emits the
frozen CSV schemas consumed by the plotting scripts.

Output files (all column orders frozen):
  results.csv      one row per run
  summary.csv      per-cell mean/std/min/max aggregates
  diagnostics.csv  per-run final-time / clean-label error / cosine rows
  auc.csv          per-cell AUC aggregates
  margins_<cell>.csv            margin snapshots (repeat 0 of each cell)
  margin_potentials_<cell>.csv  potential-curve samples per snapshot
  model_<cell>_r<rep>.csv       ensemble dumps (when save_models)
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .boosters import EPS_FLOOR, BoosterConfig, BoostRun, train
from .core import Dataset, Ensemble, Stump
from .data import LSParams, NoiseSpec, generate_ls, inject_noise, load_csv, load_delimited, split, subsample
from .metrics import auc as auc_metric
from .metrics import cosine_to_true, error_rate, run_summary
from .potentials import ExpPotential, LogitPotential, brown_from_epsilon, robust_from_goals

ALGO_TOKENS = ("adb", "llb", "bb", "rb", "bba", "rba", "bbm")

RESULTS_COLUMNS = (
    "algorithm", "dataset", "delta", "eta", "n_train", "repeat", "seed",
    "epsilon_final", "theta", "test_err_true", "test_err_noisy", "train_err",
    "t_f", "auc", "status", "wall_ms",
)
DIAGNOSTICS_COLUMNS = (
    "algorithm", "dataset", "delta", "eta", "n_train", "theta", "epsilon",
    "repeat", "seed", "t_f", "train_err_true", "cosine_to_true", "iterations", "status",
)
SUMMARY_COLUMNS = (
    "algorithm", "dataset", "delta", "eta", "n_train", "theta", "epsilon", "n_runs",
    "test_err_true_mean", "test_err_true_std", "test_err_true_min", "test_err_true_max",
    "test_err_noisy_mean", "test_err_noisy_std", "train_err_mean", "train_err_std",
    "auc_mean", "auc_std", "t_f_mean", "epsilon_final_mean",
)
AUC_COLUMNS = (
    "algorithm", "dataset", "delta", "eta", "n_train", "theta", "epsilon",
    "n_runs", "auc_mean", "auc_std",
)
MARGINS_COLUMNS = ("iteration", "example_id", "normalized_margin", "is_noisy")
MARGIN_POTENTIALS_COLUMNS = ("iteration", "s", "phi")
MODEL_COLUMNS = ("alpha", "feature", "threshold", "polarity")
POTENTIALS_COLUMNS = ("kind", "s", "t", "phi", "weight")

_ROOT_KEYS = {"name", "seed", "iterations", "repeats", "algorithms", "dataset", "noise", "params", "output"}
_DATASET_LS_KEYS = {"kind", "n_train", "n_test", "delta"}
_DATASET_FILE_KEYS = {"kind", "path", "format", "label_column", "positive_labels",
                      "train_frac", "test_frac", "keep_frac"}
_NOISE_KEYS = {"eta", "asymmetric"}
_PARAMS_KEYS = {"epsilon", "epsilon_offset", "theta", "sigma_f", "gamma", "bbm_rounds",
                "eps_increment", "max_tries"}
_OUTPUT_KEYS = {"snapshots", "save_models"}

NAN = float("nan")


def _check_keys(table: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise ValueError(f"unknown config keys in {where}: {', '.join(unknown)}")


def _as_list(value) -> list:
    if isinstance(value, list):
        if not value:
            raise ValueError("empty sweep axis in config")
        return value
    return [value]


@dataclass
class Cell:
    """One sweep-axis combination; repeats run inside it."""

    index: int
    algo: str
    delta: int | None
    n_train: int | None
    keep_frac: float | None
    eta: float
    theta: float | None
    eps_mode: str | None  # None | "abs" | "off" | "adaptive"
    eps_value: float | None

    def epsilon(self) -> float | None:
        """Realized fixed error goal, or the adaptive start, or None."""
        if self.eps_mode == "abs":
            return self.eps_value
        if self.eps_mode == "off":
            return self.eta + self.eps_value
        if self.eps_mode == "adaptive":
            return 0.0
        return None

    def label(self, ds_base: str) -> str:
        parts = [self.algo, ds_base]
        if self.delta is not None:
            parts.append(f"d{self.delta}")
        parts.append(f"eta{self.eta:g}")
        if self.n_train is not None:
            parts.append(f"n{self.n_train}")
        if self.keep_frac is not None:
            parts.append(f"keep{self.keep_frac:g}")
        if self.theta is not None:
            parts.append(f"th{self.theta:g}")
        if self.eps_mode == "abs":
            parts.append(f"eps{self.eps_value:g}")
        elif self.eps_mode == "off":
            parts.append(f"epsoff{self.eps_value:+g}")
        return "_".join(parts)


@dataclass
class Plan:
    """Validated experiment: static settings plus the enumerated cells."""

    name: str
    seed: int
    iterations: int
    repeats: int
    algorithms: list[str]
    dataset: dict
    noise: dict
    params: dict
    output: dict
    cells: list[Cell]

    @property
    def ds_base(self) -> str:
        if self.dataset["kind"] == "ls":
            return "ls"
        return Path(self.dataset["path"]).stem


def load_config(path) -> Plan:
    """Parse and validate a TOML experiment config into a Plan."""
    path = Path(path)
    if not path.exists():
        raise ValueError(f"no such config file: {path}")
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    return build_plan(raw, default_name=path.stem)


def build_plan(raw: dict, default_name: str = "experiment") -> Plan:
    _check_keys(raw, _ROOT_KEYS, "top level")
    name = raw.get("name", default_name)
    seed = int(raw.get("seed", 0))
    iterations = int(raw.get("iterations", 200))
    repeats = int(raw.get("repeats", 10))
    if iterations < 1 or repeats < 1:
        raise ValueError(f"iterations and repeats must be >= 1, got {iterations}, {repeats}")

    algorithms = raw.get("algorithms")
    if not algorithms or not isinstance(algorithms, list):
        raise ValueError("config must list at least one algorithm")
    for a in algorithms:
        if a not in ALGO_TOKENS:
            raise ValueError(f"unknown algorithm {a!r}, expected one of {ALGO_TOKENS}")

    dataset = dict(raw.get("dataset") or {})
    kind = dataset.get("kind")
    if kind == "ls":
        _check_keys(dataset, _DATASET_LS_KEYS, "[dataset]")
        if "n_train" not in dataset:
            raise ValueError("[dataset] kind='ls' requires n_train")
        dataset["n_train"] = [int(v) for v in _as_list(dataset["n_train"])]
        dataset["n_test"] = int(dataset.get("n_test", 4000))
        dataset["delta"] = [int(v) for v in _as_list(dataset.get("delta", 1))]
        for d in dataset["delta"]:
            LSParams(n=1, delta=d)  # range check
    elif kind == "file":
        _check_keys(dataset, _DATASET_FILE_KEYS, "[dataset]")
        if "path" not in dataset:
            raise ValueError("[dataset] kind='file' requires path")
        fmt = dataset.setdefault("format", "delimited")
        if fmt not in ("delimited", "csv"):
            raise ValueError(f"[dataset] format must be 'delimited' or 'csv', got {fmt!r}")
        dataset.setdefault("label_column", -1)
        dataset.setdefault("positive_labels", [1])
        dataset.setdefault("train_frac", 0.70)
        dataset.setdefault("test_frac", 0.20)
        dataset["keep_frac"] = [float(v) for v in _as_list(dataset.get("keep_frac", 1.0))]
    else:
        raise ValueError(f"[dataset] kind must be 'ls' or 'file', got {kind!r}")

    noise = dict(raw.get("noise") or {})
    _check_keys(noise, _NOISE_KEYS, "[noise]")
    noise["eta"] = [float(v) for v in _as_list(noise.get("eta", 0.0))]
    noise["asymmetric"] = bool(noise.get("asymmetric", False))

    params = dict(raw.get("params") or {})
    _check_keys(params, _PARAMS_KEYS, "[params]")
    params["theta"] = [float(v) for v in _as_list(params.get("theta", 0.0))]
    params["sigma_f"] = float(params.get("sigma_f", 0.001))
    params["gamma"] = float(params.get("gamma", 0.1))
    params["bbm_rounds"] = int(params.get("bbm_rounds", 0))
    params["eps_increment"] = float(params.get("eps_increment", 0.01))
    params["max_tries"] = int(params.get("max_tries", 3))
    has_abs = "epsilon" in params
    has_off = "epsilon_offset" in params
    if has_abs and has_off:
        raise ValueError("[params] epsilon and epsilon_offset are mutually exclusive")
    if has_abs:
        params["epsilon"] = [float(v) for v in _as_list(params["epsilon"])]
    if has_off:
        params["epsilon_offset"] = [float(v) for v in _as_list(params["epsilon_offset"])]
    fixed_time_algos = [a for a in algorithms if a in ("bb", "rb")]
    if fixed_time_algos and not (has_abs or has_off):
        raise ValueError(
            f"algorithms {fixed_time_algos} need [params] epsilon or epsilon_offset"
        )

    output = dict(raw.get("output") or {})
    _check_keys(output, _OUTPUT_KEYS, "[output]")
    output["snapshots"] = [int(v) for v in output.get("snapshots", [])]
    for s in output["snapshots"]:
        if not 1 <= s <= iterations:
            raise ValueError(f"[output] snapshot iteration {s} outside [1, {iterations}]")
    output["save_models"] = bool(output.get("save_models", False))

    cells = _enumerate_cells(algorithms, dataset, noise, params)
    return Plan(name, seed, iterations, repeats, algorithms, dataset, noise, params, output, cells)


def _enumerate_cells(algorithms, dataset, noise, params) -> list[Cell]:
    """Cross product in documented order: algorithm, dataset variant, eta, theta, epsilon."""
    if dataset["kind"] == "ls":
        variants = [(d, n, None) for d in dataset["delta"] for n in dataset["n_train"]]
    else:
        variants = [(None, None, kf) for kf in dataset["keep_frac"]]
    cells: list[Cell] = []
    for algo in algorithms:
        thetas = params["theta"] if algo in ("rb", "rba") else [None]
        for delta, n_train, keep_frac in variants:
            for eta in noise["eta"]:
                for theta in thetas:
                    for eps_mode, eps_value in _eps_axis(algo, params):
                        cell = Cell(len(cells), algo, delta, n_train, keep_frac,
                                    eta, theta, eps_mode, eps_value)
                        _validate_epsilon(cell)
                        cells.append(cell)
    return cells


def _eps_axis(algo: str, params: dict):
    if algo in ("bba", "rba"):
        return [("adaptive", 0.0)]
    if algo not in ("bb", "rb"):
        return [(None, None)]
    if "epsilon" in params:
        return [("abs", v) for v in params["epsilon"]]
    return [("off", v) for v in params["epsilon_offset"]]


def _validate_epsilon(cell: Cell) -> None:
    if cell.eps_mode in ("abs", "off"):
        eps = cell.epsilon()
        hi = 0.5 if cell.algo in ("rb", "rba") else 1.0
        if not 0.0 < eps < hi:
            raise ValueError(
                f"cell {cell.algo} eta={cell.eta:g}: realized epsilon {eps:g} outside (0, {hi:g})"
            )


# ---------------------------------------------------------------------------
# execution


@lru_cache(maxsize=4)
def _load_file_dataset(path: str, fmt: str, label_column: int, positive_labels: tuple):
    if fmt == "csv":
        return load_csv(path)
    return load_delimited(path, label_column=label_column, positive_label_set=positive_labels)


def _run_seed(master_seed: int, cell_index: int, repeat: int) -> int:
    """Single integer seed for one run, derived from the documented triple."""
    return int(np.random.SeedSequence([master_seed, cell_index, repeat]).generate_state(1)[0])


def _run_task(task: dict):
    """Execute one run; returns (results_row, diagnostics_row, extras)."""
    t0 = time.perf_counter()
    cell = task["cell"]
    ds_cfg, noise_cfg, params = task["dataset"], task["noise"], task["params"]
    seed = _run_seed(task["master_seed"], cell["index"], task["repeat"])
    streams = np.random.default_rng(seed)
    s_train, s_test, s_sub, s_ntr, s_nte, s_algo = (
        int(v) for v in streams.integers(0, 2**62, size=6)
    )

    if ds_cfg["kind"] == "ls":
        train_set = generate_ls(LSParams(n=cell["n_train"], delta=cell["delta"], seed=s_train))
        test_set = generate_ls(LSParams(n=ds_cfg["n_test"], delta=cell["delta"], seed=s_test))
    else:
        full = _load_file_dataset(ds_cfg["path"], ds_cfg["format"],
                                  int(ds_cfg["label_column"]),
                                  tuple(ds_cfg["positive_labels"]))
        train_set, test_set = split(full, ds_cfg["train_frac"], ds_cfg["test_frac"], seed=s_train)
        if cell["keep_frac"] < 1.0:
            train_set = subsample(train_set, cell["keep_frac"], seed=s_sub)

    eta = cell["eta"]
    eta_pos, eta_neg = (0.0, eta) if noise_cfg["asymmetric"] else (eta, eta)
    noisy_train = inject_noise(train_set, NoiseSpec(eta_pos, eta_neg, seed=s_ntr))
    noisy_test = inject_noise(test_set, NoiseSpec(eta_pos, eta_neg, seed=s_nte))

    algo = cell["algo"]
    adaptive = algo in ("bba", "rba")
    base_algo = {"bba": "bb", "rba": "rb"}.get(algo, algo)
    epsilon = cell["epsilon"] if cell["epsilon"] is not None else 0.0
    theta = cell["theta"] if cell["theta"] is not None else 0.0
    config = BoosterConfig(
        algorithm=base_algo,
        max_iters=task["iterations"],
        epsilon=epsilon,
        theta=theta,
        sigma_f=params["sigma_f"],
        gamma=params["gamma"],
        bbm_rounds=params["bbm_rounds"],
        adaptive_epsilon=adaptive,
        eps_increment=params["eps_increment"],
        max_tries=params["max_tries"],
        seed=s_algo,
    )
    run = train(noisy_train, config)

    test_err_true = error_rate(run.ensemble, noisy_test, against="true_labels")
    test_err_noisy = error_rate(run.ensemble, noisy_test, against="labels")
    train_err = error_rate(run.ensemble, noisy_train, against="labels")
    try:
        auc_val = auc_metric(run.ensemble, noisy_test, against="true_labels")
    except ValueError:
        auc_val = NAN
    summary = run_summary(run)
    time_based = base_algo in ("bb", "rb")
    if time_based:
        eps_final = run.trace[-1].epsilon if run.trace else epsilon
    else:
        eps_final = NAN
    try:
        cosine = cosine_to_true(run.ensemble, np.ones(noisy_train.d)) if ds_cfg["kind"] == "ls" else NAN
    except ValueError:
        cosine = NAN

    wall_ms = (time.perf_counter() - t0) * 1000.0
    n_train = train_set.n
    theta_out = cell["theta"] if cell["theta"] is not None else NAN
    delta_out = cell["delta"] if cell["delta"] is not None else NAN
    row = {
        "algorithm": algo, "dataset": task["ds_base"], "delta": delta_out, "eta": eta,
        "n_train": n_train, "repeat": task["repeat"], "seed": seed,
        "epsilon_final": eps_final, "theta": theta_out,
        "test_err_true": test_err_true, "test_err_noisy": test_err_noisy,
        "train_err": train_err, "t_f": run.final_time, "auc": auc_val,
        "status": run.status, "wall_ms": round(wall_ms, 1),
    }
    diag = {
        "algorithm": algo, "dataset": task["ds_base"], "delta": delta_out, "eta": eta,
        "n_train": n_train, "theta": theta_out, "epsilon": _cell_eps_key(cell),
        "repeat": task["repeat"], "seed": seed, "t_f": summary.t_f,
        "train_err_true": summary.e_f, "cosine_to_true": cosine,
        "iterations": summary.iterations, "status": summary.status,
    }
    extras = {}
    if task["repeat"] == 0 and task["snapshots"]:
        extras["margins"] = margin_snapshot_rows(run, task["snapshots"])
        extras["potentials"] = potential_snapshot_rows(run, task["snapshots"])
    if task["save_models"]:
        extras["model"] = [
            (alpha, stump.feature, stump.threshold, stump.polarity)
            for alpha, stump in run.ensemble.members
        ]
    return row, diag, extras


def _cell_eps_key(cell: dict) -> float:
    if cell["eps_mode"] in ("abs", "off"):
        return cell["epsilon"]
    return NAN


def margin_snapshot_rows(run: BoostRun, iterations) -> list[tuple]:
    """(iteration, example_id, normalized_margin, is_noisy) rows, replayed from the trace."""
    ds = run.dataset
    X, y = ds.features, ds.labels
    if ds.true_labels is not None:
        noisy = (ds.labels != ds.true_labels).astype(int)
    else:
        noisy = np.zeros(ds.n, dtype=int)
    points = sorted({int(i) for i in iterations if 1 <= i <= len(run.trace)})
    rows: list[tuple] = []
    scores = np.zeros(ds.n)
    alpha_sum = 0.0
    for it, record in enumerate(run.trace, start=1):
        if record.appended and record.stump is not None:
            scores = scores + record.alpha * record.stump.predict(X)
            alpha_sum += abs(record.alpha)
        if it in points and alpha_sum > 0.0:
            margins = y * scores / alpha_sum
            rows.extend(
                (it, i, float(margins[i]), int(noisy[i])) for i in range(ds.n)
            )
    return rows


SNAPSHOT_S_GRID = np.linspace(-1.0, 1.0, 101)
SNAPSHOT_PHI_CAP = 1e12  # keeps the exponential curve finite in the CSV


def potential_snapshot_rows(run: BoostRun, iterations) -> list[tuple]:
    """(iteration, s, phi) samples of the loss curve on the normalized-margin axis."""
    algo = run.config.algorithm
    if algo == "bbm":
        return []
    points = sorted({int(i) for i in iterations if 1 <= i <= len(run.trace)})
    rows: list[tuple] = []
    alpha_sum = 0.0
    t = 0.0
    eps = run.config.epsilon
    for it, record in enumerate(run.trace, start=1):
        if record.appended and record.stump is not None:
            alpha_sum += abs(record.alpha)
        if not math.isnan(record.t):
            t = record.t
        if not math.isnan(record.epsilon):
            eps = record.epsilon
        if it not in points or alpha_sum <= 0.0:
            continue
        if algo == "adb":
            pot, t_eval = ExpPotential(), 0.0
        elif algo == "llb":
            pot, t_eval = LogitPotential(), 0.0
        elif algo == "bb":
            pot, t_eval = brown_from_epsilon(max(eps, EPS_FLOOR)), min(t, 1.0)
        else:
            pot = robust_from_goals(max(eps, EPS_FLOOR), run.config.theta, run.config.sigma_f)
            t_eval = min(t, 1.0)
        phi = np.minimum(pot.value(SNAPSHOT_S_GRID * alpha_sum, t_eval), SNAPSHOT_PHI_CAP)
        rows.extend((it, float(s), float(p)) for s, p in zip(SNAPSHOT_S_GRID, phi))
    return rows


# ---------------------------------------------------------------------------
# output plumbing


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


class _CsvWriter:
    """Line-buffered CSV writer: header on open, flush after every row."""

    def __init__(self, path: Path, columns):
        self.columns = columns
        self.fh = open(path, "w")
        self.fh.write(",".join(columns) + "\n")
        self.fh.flush()

    def write_row(self, row: dict) -> None:
        self.fh.write(",".join(_fmt(row[c]) for c in self.columns) + "\n")
        self.fh.flush()

    def close(self) -> None:
        self.fh.close()


def _write_rows(path: Path, columns, rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def save_model(ensemble: Ensemble, path) -> None:
    _write_rows(Path(path), MODEL_COLUMNS,
                [(a, s.feature, s.threshold, s.polarity) for a, s in ensemble.members])


def load_model(path) -> Ensemble:
    path = Path(path)
    if not path.exists():
        raise ValueError(f"no such model file: {path}")
    ensemble = Ensemble()
    with open(path) as fh:
        header = fh.readline().strip()
        if header != ",".join(MODEL_COLUMNS):
            raise ValueError(f"{path}: not a model CSV (header {header!r})")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 4:
                raise ValueError(f"{path}: row {lineno}: expected 4 fields")
            alpha, feature, threshold, polarity = parts
            ensemble.append(float(alpha),
                            Stump(int(feature), float(threshold), int(polarity)))
    return ensemble


def _nanmean(vals) -> float:
    vals = [v for v in vals if not math.isnan(v)]
    return sum(vals) / len(vals) if vals else NAN


def _nanstd(vals) -> float:
    vals = [v for v in vals if not math.isnan(v)]
    if len(vals) < 2:
        return NAN if not vals else 0.0
    m = sum(vals) / len(vals)
    return math.sqrt(sum((v - m) ** 2 for v in vals) / (len(vals) - 1))


def run_experiment(config_path, out_dir=None, threads: int = 1, seed_override=None) -> Path:
    """Run a config end to end; returns the output directory."""
    plan = load_config(config_path)
    if seed_override is not None:
        plan.seed = int(seed_override)
    out = Path(out_dir) if out_dir is not None else Path("runs") / plan.name
    out.mkdir(parents=True, exist_ok=True)

    tasks = []
    for cell in plan.cells:
        cell_dict = {
            "index": cell.index, "algo": cell.algo, "delta": cell.delta,
            "n_train": cell.n_train, "keep_frac": cell.keep_frac, "eta": cell.eta,
            "theta": cell.theta, "eps_mode": cell.eps_mode, "epsilon": cell.epsilon(),
        }
        for rep in range(plan.repeats):
            tasks.append({
                "cell": cell_dict, "repeat": rep, "master_seed": plan.seed,
                "iterations": plan.iterations, "dataset": plan.dataset,
                "noise": plan.noise, "params": plan.params, "ds_base": plan.ds_base,
                "snapshots": plan.output["snapshots"],
                "save_models": plan.output["save_models"],
            })

    results_writer = _CsvWriter(out / "results.csv", RESULTS_COLUMNS)
    all_rows: list[dict] = []
    diag_rows: list[dict] = []

    def handle(task, outcome):
        row, diag, extras = outcome
        results_writer.write_row(row)
        all_rows.append(row)
        diag_rows.append(diag)
        label = plan.cells[task["cell"]["index"]].label(plan.ds_base)
        if "margins" in extras:
            _write_rows(out / f"margins_{label}.csv", MARGINS_COLUMNS, extras["margins"])
            _write_rows(out / f"margin_potentials_{label}.csv", MARGIN_POTENTIALS_COLUMNS,
                        extras["potentials"])
        if "model" in extras:
            _write_rows(out / f"model_{label}_r{task['repeat']}.csv", MODEL_COLUMNS,
                        extras["model"])

    try:
        if threads <= 1:
            for task in tasks:
                handle(task, _run_task(task))
        else:
            # completed runs are flushed in submission order so reruns are byte-identical
            with ProcessPoolExecutor(max_workers=threads) as pool:
                futures = {pool.submit(_run_task, t): i for i, t in enumerate(tasks)}
                done: dict[int, tuple] = {}
                next_up = 0
                for fut in as_completed(futures):
                    done[futures[fut]] = fut.result()
                    while next_up in done:
                        handle(tasks[next_up], done.pop(next_up))
                        next_up += 1
    finally:
        results_writer.close()

    _write_aggregates(out, plan, all_rows)
    _write_rows(out / "diagnostics.csv", DIAGNOSTICS_COLUMNS,
                [[d[c] for c in DIAGNOSTICS_COLUMNS] for d in diag_rows])
    return out


def _write_aggregates(out: Path, plan: Plan, rows: list[dict]) -> None:
    # rows arrive in task order (cell-major), so integer division recovers the cell
    by_cell: dict[int, list[dict]] = {}
    for i, row in enumerate(rows):
        by_cell.setdefault(i // plan.repeats, []).append(row)
    summary_rows = []
    auc_rows = []
    for cell in plan.cells:
        cell_rows = by_cell.get(cell.index, [])
        if not cell_rows:
            continue
        first = cell_rows[0]
        eps_key = cell.epsilon() if cell.eps_mode in ("abs", "off") else NAN
        base = [cell.algo, first["dataset"], first["delta"], cell.eta,
                first["n_train"], first["theta"], eps_key]
        errs_t = [r["test_err_true"] for r in cell_rows]
        errs_n = [r["test_err_noisy"] for r in cell_rows]
        trains = [r["train_err"] for r in cell_rows]
        aucs = [r["auc"] for r in cell_rows]
        tfs = [r["t_f"] for r in cell_rows]
        eps_fin = [r["epsilon_final"] for r in cell_rows]
        summary_rows.append(base + [
            len(cell_rows),
            _nanmean(errs_t), _nanstd(errs_t), min(errs_t), max(errs_t),
            _nanmean(errs_n), _nanstd(errs_n), _nanmean(trains), _nanstd(trains),
            _nanmean(aucs), _nanstd(aucs), _nanmean(tfs), _nanmean(eps_fin),
        ])
        auc_rows.append(base + [len(cell_rows), _nanmean(aucs), _nanstd(aucs)])
    _write_rows(out / "summary.csv", SUMMARY_COLUMNS, summary_rows)
    _write_rows(out / "auc.csv", AUC_COLUMNS, auc_rows)


def dump_potentials(kind: str, out_path, epsilon: float = 0.1, theta: float = 0.0,
                    sigma_f: float = 0.001, c=None,
                    times=(0.0, 0.25, 0.5, 0.75, 0.9, 0.99),
                    s_lo: float = -3.0, s_hi: float = 3.0, s_points: int = 121) -> Path:
    """Write the (kind, s, t, phi, weight) grid for the potential curves figure."""
    from .potentials import BrownPotential

    s_grid = np.linspace(s_lo, s_hi, s_points)
    if kind == "exp":
        pot, time_grid = ExpPotential(), [0.0]
    elif kind == "logit":
        pot, time_grid = LogitPotential(), [0.0]
    elif kind == "brown":
        pot = BrownPotential(c=float(c)) if c is not None else brown_from_epsilon(epsilon)
        time_grid = list(times)
    elif kind == "robust":
        pot, time_grid = robust_from_goals(epsilon, theta, sigma_f), list(times)
    else:
        raise ValueError(f"unknown potential kind {kind!r}")
    rows = []
    for t in time_grid:
        phi = pot.value(s_grid, t)
        wgt = pot.weight(s_grid, t)
        rows.extend(
            (kind, float(s), float(t), float(p), float(w))
            for s, p, w in zip(s_grid, phi, wgt)
        )
    out_path = Path(out_path)
    _write_rows(out_path, POTENTIALS_COLUMNS, rows)
    return out_path
