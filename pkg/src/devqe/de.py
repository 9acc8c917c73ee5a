"""Differential Evolution engine.

Population lifecycle, the eight classic mutation strategies, binomial and
exponential crossover, three box-constraint repairs, greedy selection and
composable termination criteria.  One counter-based RNG stream (Philox) drives
a run; every stochastic draw for a generation happens serially before any
objective evaluation, so results are reproducible regardless of how the
evaluations themselves are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .trace import SCOPE_STEP, OptimizationTrace, TraceEvent

STRATEGIES = (
    "rand1",
    "rand2",
    "best1",
    "best2",
    "current_to_rand1",
    "current_to_best1",
    "current_to_pbest1",
    "rand_to_best1",
)
CROSSOVERS = ("binomial", "exponential")
BOUNDARY_MODES = ("clamp", "toroidal", "reinit")

STOP_REASONS = (
    "max_evals",
    "max_generations",
    "abs_tol",
    "rel_tol",
    "running_mean",
    "best_worst",
)


class ConfigurationError(ValueError):
    """Invalid optimizer configuration (population size, strategy name, ...)."""


class BoundsError(ValueError):
    """Lower bound exceeds upper bound, or bound shapes disagree."""


class DegenerateRangeError(ValueError):
    """Toroidal repair requested on a zero-width interval."""


class ObjectiveError(RuntimeError):
    """The objective raised; `.partial` carries the result accumulated so far."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based stream so draw order, not thread count, fixes the run."""
    return np.random.Generator(np.random.Philox(seed))


@dataclass
class Bounds:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        self.upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if self.lower.shape != self.upper.shape:
            raise BoundsError("lower and upper bounds must have the same shape")
        if np.any(self.lower > self.upper):
            raise BoundsError("lower bound exceeds upper bound")

    @classmethod
    def box(cls, lower: float, upper: float, dim: int) -> "Bounds":
        return cls(np.full(dim, float(lower)), np.full(dim, float(upper)))

    @classmethod
    def unbounded(cls, dim: int) -> "Bounds":
        # absent user bounds fall back to the extreme finite floats
        big = np.finfo(float).max
        return cls(np.full(dim, -big), np.full(dim, big))

    @property
    def dim(self) -> int:
        return self.lower.size

    def contains(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


@dataclass
class Population:
    generation: int
    members: np.ndarray
    fitnesses: np.ndarray

    def __post_init__(self):
        if len(self.members) != len(self.fitnesses):
            raise ConfigurationError("members and fitnesses must align")
        if len(self.members) < 4:
            raise ConfigurationError("population size must be at least 4")

    @property
    def size(self) -> int:
        return len(self.members)

    def best_index(self) -> int:
        return int(np.argmin(self.fitnesses))


@dataclass
class TerminationCriteria:
    """Stop rules; the first satisfied one (in field order) wins.

    max_evals:     FE_max
    max_generations: g_max
    abs_tol:       (eps_tol, n_tol)
    rel_tol:       (eps_rtol, n_tol, delta)
    running_mean:  (eps_mean, n_mean, n_tol)
    best_worst:    (eps_bw, n_tol)
    """

    max_evals: int | None = None
    max_generations: int | None = None
    abs_tol: tuple | None = None
    rel_tol: tuple | None = None
    running_mean: tuple | None = None
    best_worst: tuple | None = None

    def __post_init__(self):
        if not any(
            v is not None
            for v in (
                self.max_evals,
                self.max_generations,
                self.abs_tol,
                self.rel_tol,
                self.running_mean,
                self.best_worst,
            )
        ):
            raise ConfigurationError("at least one termination criterion must be set")
        for name, tup in (
            ("abs_tol", self.abs_tol),
            ("rel_tol", self.rel_tol),
            ("running_mean", self.running_mean),
            ("best_worst", self.best_worst),
        ):
            if tup is None:
                continue
            if tup[0] <= 0:
                raise ConfigurationError(f"{name} tolerance must be positive")
            if any(int(n) < 1 for n in tup[1:] if not isinstance(n, float)):
                raise ConfigurationError(f"{name} window lengths must be >= 1")


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    cum_evals: int
    f_best: float
    f_worst: float


def _consecutive_tail(flags) -> int:
    count = 0
    for ok in reversed(flags):
        if not ok:
            break
        count += 1
    return count


def should_terminate(history, criteria: TerminationCriteria) -> str | None:
    """First satisfied stop criterion for a per-generation history, or None.

    `history` is the ordered list of GenerationRecord entries, one per
    completed generation (generation 0 is the evaluated initial population).
    """
    if not history:
        return None
    cur = history[-1]

    if criteria.max_evals is not None and cur.cum_evals >= criteria.max_evals:
        return "max_evals"
    if criteria.max_generations is not None and cur.generation >= criteria.max_generations:
        return "max_generations"

    best = [rec.f_best for rec in history]
    improvements = [abs(best[i] - best[i - 1]) for i in range(1, len(best))]

    if criteria.abs_tol is not None:
        eps, n_tol = criteria.abs_tol
        flags = [imp < eps for imp in improvements]
        if len(flags) >= n_tol and _consecutive_tail(flags) >= n_tol:
            return "abs_tol"

    if criteria.rel_tol is not None:
        eps, n_tol, delta = criteria.rel_tol
        flags = [
            improvements[i] / (abs(best[i + 1]) + delta) < eps
            for i in range(len(improvements))
        ]
        if len(flags) >= n_tol and _consecutive_tail(flags) >= n_tol:
            return "rel_tol"

    if criteria.running_mean is not None:
        eps, n_mean, n_tol = criteria.running_mean
        flags = []
        for g in range(len(improvements)):
            if g + 1 < n_mean:
                flags.append(False)  # window not yet full
                continue
            window = improvements[g - n_mean + 1 : g + 1]
            flags.append(sum(window) / n_mean < eps)
        if len(flags) >= n_tol and _consecutive_tail(flags) >= n_tol:
            return "running_mean"

    if criteria.best_worst is not None:
        eps, n_tol = criteria.best_worst
        flags = [abs(rec.f_worst - rec.f_best) < eps for rec in history]
        if len(flags) >= n_tol and _consecutive_tail(flags) >= n_tol:
            return "best_worst"

    return None


@dataclass
class DEConfig:
    np_size: int | None = None  # population size; default max(15, 5*D)
    f: float = 0.5
    cr: float = 0.9
    strategy: str = "rand1"
    crossover: str = "binomial"
    boundary: str = "clamp"
    p_best_fraction: float = 0.11
    seed: int = 0
    termination: TerminationCriteria = field(
        default_factory=lambda: TerminationCriteria(max_generations=1000)
    )

    def __post_init__(self):
        if self.f <= 0:
            raise ConfigurationError("scale factor F must be positive")
        if not 0.0 <= self.cr <= 1.0:
            raise ConfigurationError("crossover rate Cr must lie in [0, 1]")
        if not 0.0 < self.p_best_fraction <= 1.0:
            raise ConfigurationError("p_best_fraction must lie in (0, 1]")
        if self.strategy not in STRATEGIES:
            raise ConfigurationError(
                f"unknown strategy {self.strategy!r}; valid: {', '.join(STRATEGIES)}"
            )
        if self.crossover not in CROSSOVERS:
            raise ConfigurationError(
                f"unknown crossover {self.crossover!r}; valid: {', '.join(CROSSOVERS)}"
            )
        if self.boundary not in BOUNDARY_MODES:
            raise ConfigurationError(
                f"unknown boundary mode {self.boundary!r}; valid: {', '.join(BOUNDARY_MODES)}"
            )


@dataclass
class DEResult:
    best_vector: np.ndarray
    best_fitness: float
    evaluations: int
    generations: int
    trace: OptimizationTrace
    stop_reason: str


def initialize_population(
    bounds: Bounds, np_size: int, distribution="uniform", rng=None
) -> Population:
    """Draw the generation-0 population inside the box.

    `distribution` is "uniform" or a ("normal", mean, sigma) tuple; normal
    samples are clamped back into the box.  Fitnesses start as NaN sentinels.
    """
    if np_size < 4:
        raise ConfigurationError("population size must be at least 4")
    rng = make_rng(0) if rng is None else rng
    dim = bounds.dim
    if distribution == "uniform":
        r = rng.random((np_size, dim))
        with np.errstate(over="ignore"):
            width = bounds.upper - bounds.lower
            members = r * width + bounds.lower
        overflow = ~np.isfinite(width)
        if np.any(overflow):
            # extreme default bounds: r*width overflows, use the split form
            alt = r * bounds.upper + (1.0 - r) * bounds.lower
            members[:, overflow] = np.clip(
                alt[:, overflow], bounds.lower[overflow], bounds.upper[overflow]
            )
    elif isinstance(distribution, tuple) and distribution[0] == "normal":
        _, mean, sigma = distribution
        members = rng.normal(loc=mean, scale=sigma, size=(np_size, dim))
        members = np.clip(members, bounds.lower, bounds.upper)
    else:
        raise ConfigurationError(f"unknown init distribution {distribution!r}")
    return Population(
        generation=0, members=members, fitnesses=np.full(np_size, np.nan)
    )


def _draw_distinct(rng, n_pop: int, count: int, exclude) -> list:
    """`count` indices from [0, n_pop), distinct from each other and `exclude`."""
    if n_pop - len(set(exclude)) < count:
        raise ConfigurationError(
            f"population of {n_pop} too small to draw {count} distinct indices"
        )
    taken = set(exclude)
    out = []
    while len(out) < count:
        r = int(rng.integers(n_pop))
        if r in taken:
            continue
        taken.add(r)
        out.append(r)
    return out


def _p_best_index(pop: Population, p_best_fraction: float, rng, exclude=()) -> int:
    """Random member of the top p*100% block, never one of `exclude`; the block
    widens just enough when the excluded index is its only candidate."""
    k = max(1, int(round(p_best_fraction * pop.size)))
    order = np.argsort(pop.fitnesses, kind="stable")
    candidates = [int(i) for i in order[:k] if int(i) not in exclude]
    while not candidates and k < pop.size:
        k += 1
        candidates = [int(i) for i in order[:k] if int(i) not in exclude]
    if not candidates:
        raise ConfigurationError("population too small to draw a p-best index")
    return candidates[int(rng.integers(len(candidates)))]


def mutate(
    strategy: str,
    pop: Population,
    target_index: int,
    f: float,
    p_best_fraction: float = 0.11,
    rng=None,
) -> np.ndarray:
    """Build the donor vector for one target; the population is not modified."""
    rng = make_rng(0) if rng is None else rng
    x = pop.members
    i = target_index

    if strategy == "rand1":
        r0, r1, r2 = _draw_distinct(rng, pop.size, 3, [i])
        return x[r0] + f * (x[r1] - x[r2])
    if strategy == "rand2":
        r0, r1, r2, r3, r4 = _draw_distinct(rng, pop.size, 5, [i])
        return x[r0] + f * (x[r1] - x[r2]) + f * (x[r3] - x[r4])
    if strategy == "best1":
        best = pop.best_index()
        r1, r2 = _draw_distinct(rng, pop.size, 2, [i])
        return x[best] + f * (x[r1] - x[r2])
    if strategy == "best2":
        best = pop.best_index()
        r1, r2, r3, r4 = _draw_distinct(rng, pop.size, 4, [i])
        return x[best] + f * (x[r1] - x[r2]) + f * (x[r3] - x[r4])
    if strategy == "current_to_rand1":
        r1, r2 = _draw_distinct(rng, pop.size, 2, [i])
        return x[i] + f * (x[r1] - x[r2])
    if strategy == "current_to_best1":
        best = pop.best_index()
        r1, r2 = _draw_distinct(rng, pop.size, 2, [i])
        return x[i] + f * (x[best] - x[i]) + f * (x[r1] - x[r2])
    if strategy == "current_to_pbest1":
        pbest = _p_best_index(pop, p_best_fraction, rng, exclude=(i,))
        r1, r2 = _draw_distinct(rng, pop.size, 2, [i, pbest])
        return x[i] + f * (x[pbest] - x[i]) + f * (x[r1] - x[r2])
    if strategy == "rand_to_best1":
        best = pop.best_index()
        r1, r2, r3 = _draw_distinct(rng, pop.size, 3, [i])
        return x[r1] + f * (x[best] - x[r1]) + f * (x[r2] - x[r3])
    raise ConfigurationError(f"unknown strategy {strategy!r}")


def crossover_binomial(target, donor, cr: float, rng) -> np.ndarray:
    target = np.asarray(target, dtype=float)
    donor = np.asarray(donor, dtype=float)
    if target.shape != donor.shape:
        raise ValueError("target and donor dimensions differ")
    dim = target.size
    take = rng.random(dim) <= cr
    j_rand = int(rng.integers(dim))
    take[j_rand] = True  # at least one component always comes from the donor
    return np.where(take, donor, target)


def crossover_exponential(target, donor, cr: float, rng) -> np.ndarray:
    target = np.asarray(target, dtype=float)
    donor = np.asarray(donor, dtype=float)
    if target.shape != donor.shape:
        raise ValueError("target and donor dimensions differ")
    dim = target.size
    j_rand = int(rng.integers(dim))
    length = 1
    while length < dim and rng.random() <= cr:
        length += 1
    trial = target.copy()
    for k in range(length):
        j = (j_rand + k) % dim
        trial[j] = donor[j]
    return trial


def handle_bounds(vector, bounds: Bounds, strategy: str, rng=None) -> np.ndarray:
    """Repair out-of-box components; in-range components pass through unchanged."""
    v = np.array(vector, dtype=float)
    lo, hi = bounds.lower, bounds.upper
    if strategy == "clamp":
        return np.minimum(np.maximum(v, lo), hi)
    if strategy == "toroidal":
        width = hi - lo
        out = v.copy()
        for j in range(v.size):
            if v[j] < lo[j]:
                if width[j] == 0.0:
                    raise DegenerateRangeError(f"zero-width interval at component {j}")
                out[j] = hi[j] - math.fmod(lo[j] - v[j], width[j])
            elif v[j] > hi[j]:
                if width[j] == 0.0:
                    raise DegenerateRangeError(f"zero-width interval at component {j}")
                out[j] = lo[j] + math.fmod(v[j] - hi[j], width[j])
        return out
    if strategy == "reinit":
        rng = make_rng(0) if rng is None else rng
        out = v.copy()
        for j in range(v.size):
            if v[j] < lo[j] or v[j] > hi[j]:
                out[j] = rng.random() * (hi[j] - lo[j]) + lo[j]
        return out
    raise ConfigurationError(f"unknown boundary mode {strategy!r}")


def select(current: Population, trials, trial_fitnesses) -> Population:
    """Greedy one-to-one selection; ties go to the trial vector."""
    trials = np.asarray(trials, dtype=float)
    trial_fitnesses = np.asarray(trial_fitnesses, dtype=float)
    keep_trial = trial_fitnesses <= current.fitnesses
    members = np.where(keep_trial[:, None], trials, current.members)
    fitnesses = np.where(keep_trial, trial_fitnesses, current.fitnesses)
    return Population(
        generation=current.generation + 1, members=members, fitnesses=fitnesses
    )


def de_minimize(objective, bounds: Bounds, config: DEConfig, callback=None) -> DEResult:
    """Run the full DE loop; see module docstring for the reproducibility rules.

    Non-finite objective values are treated as +inf fitness.  If the objective
    raises, the run aborts with an ObjectiveError carrying the partial result.
    `callback(population, cum_evals)` fires after the initial evaluation and
    after every completed generation.
    """
    dim = bounds.dim
    np_size = config.np_size if config.np_size is not None else max(15, 5 * dim)
    if np_size < 4:
        raise ConfigurationError("population size must be at least 4")
    rng = make_rng(config.seed)

    trace = OptimizationTrace()
    history: list[GenerationRecord] = []
    state = {"evals": 0}

    def evaluate(x):
        state["evals"] += 1
        try:
            val = float(objective(np.asarray(x, dtype=float)))
        except Exception as exc:
            partial = _partial_result(trace, history, pop, state["evals"])
            raise ObjectiveError(f"objective raised: {exc}", partial=partial) from exc
        return val if math.isfinite(val) else math.inf

    pop = initialize_population(bounds, np_size, "uniform", rng)
    pop.fitnesses = np.array([evaluate(m) for m in pop.members])
    _record_generation(trace, history, pop, state["evals"])
    if callback is not None:
        callback(pop, state["evals"])

    stop_reason = should_terminate(history, config.termination)
    while stop_reason is None:
        # all stochastic draws happen serially here, before any evaluation
        trials = np.empty_like(pop.members)
        for i in range(np_size):
            donor = mutate(
                config.strategy, pop, i, config.f, config.p_best_fraction, rng
            )
            if config.crossover == "binomial":
                trial = crossover_binomial(pop.members[i], donor, config.cr, rng)
            else:
                trial = crossover_exponential(pop.members[i], donor, config.cr, rng)
            trials[i] = handle_bounds(trial, bounds, config.boundary, rng)
        trial_fitnesses = np.array([evaluate(t) for t in trials])
        pop = select(pop, trials, trial_fitnesses)
        _record_generation(trace, history, pop, state["evals"])
        if callback is not None:
            callback(pop, state["evals"])
        stop_reason = should_terminate(history, config.termination)

    best = pop.best_index()
    return DEResult(
        best_vector=pop.members[best].copy(),
        best_fitness=float(pop.fitnesses[best]),
        evaluations=state["evals"],
        generations=pop.generation,
        trace=trace,
        stop_reason=stop_reason,
    )


def _record_generation(trace, history, pop, cum_evals):
    f_best = float(np.min(pop.fitnesses))
    f_worst = float(np.max(pop.fitnesses))
    history.append(
        GenerationRecord(
            generation=pop.generation,
            cum_evals=cum_evals,
            f_best=f_best,
            f_worst=f_worst,
        )
    )
    trace.append(
        TraceEvent(
            cum_evals=cum_evals,
            scope=SCOPE_STEP,
            macro_index=trace.last_macro_index(),
            e_sa=f_best,
        )
    )


def _partial_result(trace, history, pop, evals):
    if history:
        best_f = min(rec.f_best for rec in history)
    else:
        best_f = math.inf
    best = pop.best_index() if np.any(np.isfinite(pop.fitnesses)) else 0
    return DEResult(
        best_vector=pop.members[best].copy(),
        best_fitness=best_f,
        evaluations=evals,
        generations=pop.generation,
        trace=trace,
        stop_reason="aborted",
    )
