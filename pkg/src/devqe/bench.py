"""Benchmark harness: multi-seed optimizer comparison on molecular fixtures,
analytic test-function runs, and 1-D potential-energy-surface scans.

All output is plain CSV ('.' decimal, no locale); plotting is external.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

import numpy as np

from . import de as de_mod
from . import local as local_mod
from .ansatz import default_ansatz
from .integrals import load_fcidump
from .jw import jordan_wigner
from .orbitals import MacroConfig, OOConfig, run_sa_oo_vqe
from .savqe import OptimizerChoice, run_sa_vqe
from .trace import OptimizationTrace

SUMMARY_HEADER = "method,evals_min,evals_max,evals_mean,E_min,E_max,E_mean"


class UsageError(ValueError):
    """Bad configuration or command usage; maps to exit code 2."""


def sphere(x):
    return float(np.sum(np.asarray(x) ** 2))


def rosenbrock(x):
    x = np.asarray(x, dtype=float)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def rastrigin(x):
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x**2 - 10.0 * np.cos(2.0 * np.pi * x)))


TEST_FUNCTIONS = {
    "sphere": (sphere, (-5.0, 5.0)),
    "rosenbrock": (rosenbrock, (-5.0, 10.0)),
    "rastrigin": (rastrigin, (-5.12, 5.12)),
}

LOCAL_METHODS = ("bfgs", "gd")
UNAVAILABLE_METHODS = ("cobyla", "slsqp")  # external-library optimizers, not emulated

DE_METHODS = {
    f"de_{strategy}_{tag}": (strategy, crossover)
    for strategy in de_mod.STRATEGIES
    for tag, crossover in (("bin", "binomial"), ("exp", "exponential"))
}


def available_methods():
    return LOCAL_METHODS + tuple(sorted(DE_METHODS))


def method_error(name) -> UsageError:
    message = f"unknown optimizer {name!r}; valid: {', '.join(available_methods())}"
    if name in UNAVAILABLE_METHODS:
        message = (
            f"optimizer {name!r} is not available (external-library method, "
            f"not emulated); valid: {', '.join(available_methods())}"
        )
    return UsageError(message)


CONFIG_KEYS = {
    "molecule",
    "optimizer",
    "strategy",
    "crossover",
    "boundary",
    "np",
    "f",
    "cr",
    "seeds",
    "weights",
    "macro_tol",
    "max_macro_iters",
    "mode",
    "function",
    "dimension",
    "max_evals",
    "max_generations",
    "abs_tol",
    "n_tol",
}


def parse_config(path) -> dict:
    """Flat key=value file; unknown keys are errors, not warnings."""
    config = {}
    with open(path) as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{line_no}: expected key=value")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{line_no}: unknown key {key!r}")
            config[key] = value.strip()
    return config


def parse_seeds(text) -> list:
    if text is None or str(text).strip() == "":
        return list(range(10))
    try:
        return [int(tok) for tok in str(text).replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"could not parse seed list {text!r}")


def parse_weights(text):
    if text is None or str(text).strip() == "":
        return (0.5, 0.5)
    try:
        vals = tuple(float(tok) for tok in str(text).replace(",", " ").split())
    except ValueError:
        raise UsageError(f"could not parse weights {text!r}")
    return vals


def _de_termination(config: dict) -> de_mod.TerminationCriteria:
    max_evals = int(config.get("max_evals", 3000))
    eps = float(config.get("abs_tol", 1e-8))
    n_tol = int(config.get("n_tol", 10))
    max_generations = config.get("max_generations")
    return de_mod.TerminationCriteria(
        max_evals=max_evals,
        max_generations=int(max_generations) if max_generations else None,
        abs_tol=(eps, n_tol),
    )


def build_optimizer(method: str, config: dict, seed: int) -> OptimizerChoice:
    if method in LOCAL_METHODS:
        local = local_mod.LocalOptConfig()
        return OptimizerChoice(method, local_config=local)
    if method in DE_METHODS:
        strategy, crossover = DE_METHODS[method]
        de_config = de_mod.DEConfig(
            np_size=int(config["np"]) if config.get("np") else None,
            f=float(config.get("f", 0.5)),
            cr=float(config.get("cr", 0.9)),
            strategy=config.get("strategy", strategy),
            crossover=config.get("crossover", crossover),
            boundary=config.get("boundary", "clamp"),
            seed=seed,
            termination=_de_termination(config),
        )
        return OptimizerChoice("de", de_config=de_config)
    raise method_error(method)


# ---------------------------------------------------------------------------
# optimize: analytic test functions


def cmd_optimize(config: dict, out_dir) -> str:
    function_name = config.get("function")
    if function_name not in TEST_FUNCTIONS:
        raise UsageError(
            f"unknown function {function_name!r}; valid: {', '.join(sorted(TEST_FUNCTIONS))}"
        )
    objective, (lo, hi) = TEST_FUNCTIONS[function_name]
    dim = int(config.get("dimension", 2))
    method = config.get("optimizer", "bfgs")
    if method not in LOCAL_METHODS and method not in DE_METHODS:
        raise method_error(method)
    seeds = parse_seeds(config.get("seeds"))

    rows = []
    for seed in seeds:
        if method in DE_METHODS:
            choice = build_optimizer(method, config, seed)
            bounds = de_mod.Bounds.box(lo, hi, dim)
            result = de_mod.de_minimize(objective, bounds, choice.de_config)
            rows.append((method, seed, result.best_fitness, result.evaluations,
                         result.stop_reason))
        else:
            local = local_mod.LocalOptConfig()
            x0 = np.full(dim, lo + 0.8 * (hi - lo))
            runner = (
                local_mod.bfgs_minimize if method == "bfgs" else local_mod.gradient_descent
            )
            result = runner(objective, x0, local)
            rows.append((method, seed, result.fun, result.evaluations,
                         result.stop_reason))

    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "optimize.csv")
    best = [r[2] for r in rows]
    evals = [r[3] for r in rows]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row", "method", "seed", "best_f", "evaluations", "stop_reason"])
        for method_name, seed, best_f, n_evals, reason in rows:
            writer.writerow(["run", method_name, seed, repr(best_f), n_evals, reason])
        writer.writerow(
            ["summary", method, "", repr(float(np.mean(best))), repr(float(np.mean(evals))), ""]
        )
    return path


# ---------------------------------------------------------------------------
# molecule runs


@dataclass
class MoleculeRun:
    method: str
    seed: int
    e_sa: float
    e_states: tuple
    evaluations: int
    trace: OptimizationTrace


def run_molecule(integrals, method: str, seed: int, config: dict, mode: str) -> MoleculeRun:
    """One full run on a molecule: mode "saoo" (macro loop) or "savqe" (fixed
    orbitals, single VQE stage)."""
    if method not in LOCAL_METHODS and method not in DE_METHODS:
        raise method_error(method)
    if mode not in ("savqe", "saoo"):
        raise UsageError(f"unknown mode {mode!r}; valid: savqe, saoo")
    optimizer = build_optimizer(method, config, seed)
    weights = parse_weights(config.get("weights"))
    ansatz = default_ansatz(integrals.n_orb, integrals.n_elec)

    if mode == "savqe":
        hamiltonian = jordan_wigner(integrals)
        result = run_sa_vqe(
            hamiltonian,
            ansatz,
            weights=weights,
            optimizer=optimizer,
            n_orb=integrals.n_orb,
            n_elec=integrals.n_elec,
        )
        return MoleculeRun(
            method=method,
            seed=seed,
            e_sa=result.e_sa,
            e_states=result.state_energies,
            evaluations=result.evaluations,
            trace=result.trace,
        )

    macro = MacroConfig(
        macro_tol=float(config.get("macro_tol", 1e-4)),
        max_macro_iters=int(config.get("max_macro_iters", 20)),
    )
    result = run_sa_oo_vqe(
        integrals,
        ansatz,
        weights=weights,
        inner_optimizer=optimizer,
        oo_config=OOConfig(),
        macro_config=macro,
    )
    return MoleculeRun(
        method=method,
        seed=seed,
        e_sa=result.e_sa,
        e_states=result.state_energies,
        evaluations=result.evaluations,
        trace=result.trace,
    )


@dataclass
class RunSummary:
    method: str
    evals_min: int
    evals_max: int
    evals_mean: float
    e_min: float
    e_max: float
    e_mean: float
    per_seed: list = field(default_factory=list)  # (seed, e0, e1, e_sa, evals)

    @classmethod
    def from_runs(cls, method, runs) -> "RunSummary":
        evals = [r.evaluations for r in runs]
        energies = [r.e_sa for r in runs]
        per_seed = [
            (r.seed, r.e_states[0], r.e_states[1], r.e_sa, r.evaluations) for r in runs
        ]
        return cls(
            method=method,
            evals_min=int(min(evals)),
            evals_max=int(max(evals)),
            evals_mean=float(np.mean(evals)),
            e_min=float(min(energies)),
            e_max=float(max(energies)),
            e_mean=float(np.mean(energies)),
            per_seed=per_seed,
        )


def _write_manifest(out_dir, config, methods, seeds, mode):
    path = os.path.join(out_dir, "manifest.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["key", "value"])
        writer.writerow(["mode", mode])
        writer.writerow(["methods", " ".join(methods)])
        writer.writerow(["seeds", " ".join(str(s) for s in seeds)])
        for key in sorted(config):
            writer.writerow([key, config[key]])
        defaults = {
            "np_default": "max(15, 5*D)",
            "f_default": 0.5,
            "cr_default": 0.9,
            "boundary_default": "clamp",
            "de_max_evals_default": 3000,
            "de_abs_tol_default": 1e-8,
            "de_n_tol_default": 10,
            "macro_tol_default": 1e-4,
            "max_macro_iters_default": 20,
            "weights_default": "0.5 0.5",
        }
        for key, value in defaults.items():
            writer.writerow([key, value])
    return path


def cmd_compare(config: dict, out_dir, seeds=None) -> str:
    fcidump_path = config.get("molecule")
    if not fcidump_path:
        raise UsageError("compare requires molecule=<fcidump path> in the config")
    integrals = load_fcidump(fcidump_path)
    methods = str(config.get("optimizer", "bfgs")).replace(",", " ").split()
    for method in methods:
        if method not in LOCAL_METHODS and method not in DE_METHODS:
            raise method_error(method)
    seeds = parse_seeds(config.get("seeds")) if seeds is None else list(seeds)

    os.makedirs(out_dir, exist_ok=True)
    _write_manifest(out_dir, config, methods, seeds, "saoo")

    summaries = []
    failures = []
    per_seed_rows = []
    for method in methods:
        runs = []
        for seed in seeds:
            try:
                run = run_molecule(integrals, method, seed, config, "saoo")
            except Exception as exc:
                failures.append((method, seed, str(exc)))
                continue
            run.trace.write_csv(os.path.join(out_dir, f"trace_{method}_{seed}.csv"))
            runs.append(run)
            per_seed_rows.append(
                (method, seed, run.e_states[0], run.e_states[1], run.e_sa, run.evaluations)
            )
        if runs:
            summaries.append(RunSummary.from_runs(method, runs))

    if failures:
        with open(os.path.join(out_dir, "failures.csv"), "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["method", "seed", "error"])
            writer.writerows(failures)

    with open(os.path.join(out_dir, "runs.csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "seed", "e0", "e1", "e_sa", "evaluations"])
        for method, seed, e0, e1, e_sa, evals in per_seed_rows:
            writer.writerow([method, seed, repr(e0), repr(e1), repr(e_sa), evals])

    summary_path = os.path.join(out_dir, "summary.csv")
    with open(summary_path, "w", newline="") as fh:
        fh.write(SUMMARY_HEADER + "\n")
        writer = csv.writer(fh)
        for s in summaries:
            writer.writerow(
                [s.method, s.evals_min, s.evals_max, repr(s.evals_mean),
                 repr(s.e_min), repr(s.e_max), repr(s.e_mean)]
            )
    if not summaries:
        raise RuntimeError("every run failed; see failures.csv")
    return summary_path


def cmd_scan(config: dict, out_dir, mode=None) -> str:
    scan_dir = config.get("molecule")
    if not scan_dir or not os.path.isdir(scan_dir):
        raise UsageError("scan requires molecule=<directory of FCIDUMP files>")
    files = sorted(
        f for f in os.listdir(scan_dir) if not f.startswith(".") and
        os.path.isfile(os.path.join(scan_dir, f)) and not f.lower().endswith(".md")
    )
    if not files:
        raise UsageError(f"no FCIDUMP files found in {scan_dir}")
    mode = mode or config.get("mode", "savqe")
    if mode not in ("savqe", "saoo"):
        raise UsageError(f"unknown mode {mode!r}; valid: savqe, saoo")
    method = config.get("optimizer", "bfgs")
    seeds = parse_seeds(config.get("seeds", "0"))

    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"scan_{mode}.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["coordinate_label", "e0", "e1", "e_sa", "mode", "status"])
        for name in files:
            label = os.path.splitext(name)[0]
            try:
                integrals = load_fcidump(os.path.join(scan_dir, name))
                run = run_molecule(integrals, method, seeds[0], config, mode)
            except Exception:
                writer.writerow([label, "", "", "", mode, "failed"])
                continue
            writer.writerow(
                [label, repr(run.e_states[0]), repr(run.e_states[1]),
                 repr(run.e_sa), mode, "ok"]
            )
    return path


def cmd_single(config: dict, out_dir, mode: str) -> str:
    """One molecule run (the `vqe` and `saoo` subcommands)."""
    fcidump_path = config.get("molecule")
    if not fcidump_path:
        raise UsageError(f"{mode} requires molecule=<fcidump path> in the config")
    integrals = load_fcidump(fcidump_path)
    method = config.get("optimizer", "bfgs")
    seeds = parse_seeds(config.get("seeds", "0"))
    os.makedirs(out_dir, exist_ok=True)

    run = run_molecule(integrals, method, seeds[0], config, mode)
    run.trace.write_csv(os.path.join(out_dir, f"trace_{method}_{seeds[0]}.csv"))
    sorted_energies = sorted(run.e_states)
    path = os.path.join(out_dir, "result.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["method", "seed", "e0", "e1", "e_lo", "e_hi", "e_sa", "evaluations", "mode"]
        )
        writer.writerow(
            [method, seeds[0], repr(run.e_states[0]), repr(run.e_states[1]),
             repr(sorted_energies[0]), repr(sorted_energies[1]),
             repr(run.e_sa), run.evaluations, mode]
        )
    return path
