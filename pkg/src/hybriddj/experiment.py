"""Config-driven runner for the ideal, hybrid and Gaussian pipelines.

A config is a flat JSON object whose keys are the fields of
:class:`ExperimentConfig`; unknown keys are rejected. Each run produces a
:class:`RunRecord` written as JSON. Measured floats are formatted with 12
significant digits in scientific notation so that repeated runs are
byte-identical apart from the ``wall_time`` line.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import cv as cvmod
from .cv import CONVENTIONS, NORMALIZED, GaussianParams, fourier, make_grid, position_eigenstate
from .dualrail import hadamard, make_dualrail
from .errors import ConfigError, HybridDJError, StageError
from .gaussian import (
    PAPER_CLAIMED_PROBABILITY,
    TaggedValue,
    post_measurement_profile,
    probability_claim_report,
)
from .measurement import SQUEEZED, MeasurementWindow, sample_outcome, window_project_position, window_project_squeezed
from .oracle import (
    CONSTANT,
    FUNCTION_KINDS,
    HybridState,
    OracleSpec,
    QueryCounter,
    ancilla_discard_study,
    apply_oracle_coherent,
    apply_oracle_semiclassical,
    bob_fidelity,
    cv_from_hybrid,
    make_function,
    uncompute_ancilla,
    validate_promise,
)

MODES = ("ideal_cv", "hybrid_semiclassical", "hybrid_coherent", "gaussian")
SWEEP_PARAMETERS = ("s", "delta_s", "n_points", "window_width")


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str = "ideal_cv"
    n_points: int = 256
    q0: float = 0.0
    s: float = 0.5
    delta_s: float = 0.05
    #: measurement window width in grid spacings
    window_width: float = 3.0
    function: str = "const0"
    function_width: int | None = None
    function_path: str | None = None
    seed: int = 0
    convention: str = NORMALIZED
    t_resolution: int = 64
    cnot_success_probability: float = 1.0
    allow_unresolved: bool = False
    output_path: str | None = None

    def __post_init__(self):
        self._check_types()
        self._check_values()

    def _check_types(self):
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            kind = f.type.replace(" | None", "")
            optional = "None" in f.type
            if v is None:
                if not optional:
                    raise ConfigError(f"{f.name} must not be null")
                continue
            ok = {
                "int": isinstance(v, int) and not isinstance(v, bool),
                "float": isinstance(v, (int, float)) and not isinstance(v, bool),
                "str": isinstance(v, str),
                "bool": isinstance(v, bool),
            }[kind]
            if not ok:
                raise ConfigError(f"{f.name} must be of type {kind}, got {v!r}")
            if kind == "float":
                object.__setattr__(self, f.name, float(v))

    def _check_values(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.convention not in CONVENTIONS:
            raise ConfigError(f"convention must be one of {CONVENTIONS}, got {self.convention!r}")
        if self.function not in FUNCTION_KINDS + ("file",):
            raise ConfigError(f"function must be one of {FUNCTION_KINDS + ('file',)}, got {self.function!r}")
        if self.function == "file" and not self.function_path:
            raise ConfigError("function 'file' needs function_path")
        if not self.window_width > 0:
            raise ConfigError("window_width must be positive")
        if not 0 < self.cnot_success_probability <= 1:
            raise ConfigError("cnot_success_probability must lie in (0, 1]")
        if self.t_resolution < 16:
            raise ConfigError("t_resolution must be >= 16")
        try:
            grid = make_grid(self.n_points)
            if self.mode == "gaussian":
                GaussianParams(self.s, self.delta_s).window()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if abs(self.q0) > grid.half_width - grid.spacing:
            raise ConfigError(f"q0={self.q0} outside the usable grid range")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> ExperimentConfig:
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(d)


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return ExperimentConfig.from_json(text)


def format_float(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return f"{x:.11e}"


def _render(obj, indent=0, exact=False):
    pad = "  " * (indent + 1)
    if isinstance(obj, TaggedValue):
        obj = {"value": obj.value, "convention": obj.convention}
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for k, v in obj.items():
            items.append(f"{pad}{json.dumps(str(k))}: {_render(v, indent + 1, exact or k == 'config')}")
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_render(v, indent + 1, exact) for v in obj) + "]"
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return json.dumps(float(obj)) if exact else format_float(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass
class RunRecord:
    config: dict
    verified_class: str
    oracle_queries: int
    window_probability: float
    bob_fidelity: float | None
    success_probability: TaggedValue | None
    cnot_success_probability: float
    gamma_profile: str | None
    seed: int
    details: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}

    def to_json(self) -> str:
        # wall_time is last so that it sits on its own line
        return _render(self.to_dict()) + "\n"


@contextmanager
def _stage(name):
    try:
        yield
    except StageError:
        raise
    except (HybridDJError, ValueError, ArithmeticError) as exc:
        raise StageError(name, exc) from exc


def _load_function(config: ExperimentConfig, grid) -> OracleSpec:
    if config.function == "file":
        try:
            spec = OracleSpec.from_json(Path(config.function_path).read_text())
        except (OSError, KeyError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot load function from {config.function_path}: {exc}") from exc
        return spec
    return make_function(config.function, grid, width=config.function_width, seed=config.seed)


def profile_path_for(output_path) -> Path:
    p = Path(output_path)
    return p.with_name(p.stem + "_profile.csv")


def run(config: ExperimentConfig, write: bool = True) -> RunRecord:
    """Execute prepare, superpose, oracle, inverse superpose and measure for one config."""
    t_start = time.perf_counter()
    counter = QueryCounter()
    details: dict = {}
    bob_fid = None
    success = None
    profile_file = None

    with _stage("prepare"):
        grid = make_grid(config.n_points)
        f = _load_function(config, grid)
        verified = validate_promise(f, grid)
        centre = float(grid.points[grid.nearest_index(config.q0)])
        window = MeasurementWindow(centre, config.window_width * grid.spacing)
        details["q0_snapped"] = centre
        details["window"] = [window.lo, window.hi]
        details["function_label"] = f.label
        if config.mode == "gaussian":
            params = GaussianParams(config.s, config.delta_s)
            cvmod.require_resolved(grid, 1.0 / config.s, "transformed squeezed state", config.allow_unresolved)
            initial = cvmod.build_squeezed_state(grid, params, config.convention, config.allow_unresolved)
            details["squeezing_r"] = params.r
            if config.convention == cvmod.PAPER:
                details["amplitude_formula"] = cvmod.PAPER_AMPLITUDE_FORMULA
        else:
            initial = position_eigenstate(grid, config.q0)
        bob = make_dualrail(1)

    with _stage("superpose"):
        state = fourier(initial, "forward")
        bob = hadamard(bob)

    with _stage("oracle"):
        if config.mode == "ideal_cv":
            counter.tick()
            state = cvmod.apply_phase_function(state, f)
        elif config.mode == "hybrid_coherent":
            hybrid = HybridState.from_product(state, make_dualrail(0), bob)
            hybrid = apply_oracle_coherent(hybrid, f, counter)
            study = ancilla_discard_study(hybrid, MeasurementWindow(centre, grid.spacing))
            details.update(study)
            hybrid = uncompute_ancilla(hybrid, f)
            bob_fid = bob_fidelity(hybrid, bob)
            state = cv_from_hybrid(hybrid, bob)
        else:
            state, bob_after = apply_oracle_semiclassical(state, bob, f, counter)
            bob_fid = bob_after.fidelity(bob)

    with _stage("inverse_superpose"):
        final = fourier(state, "inverse")

    with _stage("measure"):
        normed = final.renormalize()
        proj = window_project_position(normed, window)
        details["null_outcome"] = proj.null_outcome
        idx = sample_outcome(normed, config.seed)
        details["sampled_q"] = float(grid.points[idx])
        if config.mode == "gaussian":
            success = TaggedValue(abs(cvmod.overlap(initial, final)) ** 2, config.convention)
            if config.delta_s > 0:
                sq = window_project_squeezed(
                    normed,
                    MeasurementWindow(config.s, config.delta_s, SQUEEZED, config.t_resolution),
                    config.allow_unresolved,
                )
                details["squeezed_window_weight"] = sq.weight
            if verified == CONSTANT:
                report = probability_claim_report(params, grid, config.allow_unresolved)
                details["claimed_probability"] = PAPER_CLAIMED_PROBABILITY
                details["paper_convention_probability"] = report["paper"]
                details["normalized_convention_probability"] = report["normalized"]
                details["discrepancy_note"] = report["note"]

    if config.mode == "gaussian":
        with _stage("analyze"):
            profile = post_measurement_profile(grid, params, config.allow_unresolved)
            details["profile_max_abs_gap"] = float(profile.abs_gap.max())
            if write and config.output_path:
                profile_file = profile_path_for(config.output_path)
                with open(profile_file, "w", newline="") as fh:
                    profile.write_csv(fh)
                profile_file = str(profile_file)

    record = RunRecord(
        config=config.to_dict(),
        verified_class=verified,
        oracle_queries=counter.count,
        window_probability=proj.probability,
        bob_fidelity=bob_fid,
        success_probability=success,
        cnot_success_probability=config.cnot_success_probability,
        gamma_profile=profile_file,
        seed=config.seed,
        details=details,
        wall_time=time.perf_counter() - t_start,
    )
    if write and config.output_path:
        Path(config.output_path).write_text(record.to_json())
    return record


SWEEP_COLUMNS = (
    "mode", "n_points", "q0", "s", "delta_s", "window_width", "function", "seed",
    "verified_class", "oracle_queries", "window_probability", "bob_fidelity",
    "success_probability", "convention",
)


def sweep(base: ExperimentConfig, parameter: str, values, workers: int = 1) -> list[RunRecord]:
    """One run per value, returned in input order."""
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError(f"cannot sweep {parameter!r}; choose from {SWEEP_PARAMETERS}")
    values = list(values)
    if not values:
        raise ConfigError("sweep needs at least one value")
    if parameter == "n_points":
        if any(float(v) != int(v) for v in values):
            raise ConfigError("n_points values must be integers")
        values = [int(v) for v in values]
    else:
        values = [float(v) for v in values]
    configs = [dataclasses.replace(base, **{parameter: v, "output_path": None}) for v in values]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda c: run(c, write=False), configs))
    return [run(c, write=False) for c in configs]


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, TaggedValue):
        v = v.value
    if isinstance(v, bool) or isinstance(v, str):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format_float(v)


def sweep_csv(records: list[RunRecord], parameter: str) -> str:
    """CSV table, one row per record in the given order; the swept column is one of the config columns."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError(f"cannot tabulate sweep over {parameter!r}")
    w.writerow(SWEEP_COLUMNS)
    for r in records:
        cfg = r.config
        succ = r.success_probability
        row = {
            **{k: cfg[k] for k in ("mode", "n_points", "q0", "s", "delta_s", "window_width", "function", "seed")},
            "verified_class": r.verified_class,
            "oracle_queries": r.oracle_queries,
            "window_probability": r.window_probability,
            "bob_fidelity": r.bob_fidelity,
            "success_probability": succ,
            "convention": succ.convention if succ is not None else "",
        }
        w.writerow([_cell(row[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()


def classical_deterministic_queries(domain_size: int) -> int:
    """Worst-case evaluations a deterministic algorithm needs: ``K/2 + 1``."""
    if not isinstance(domain_size, (int, np.integer)) or domain_size < 2 or domain_size % 2:
        raise ValueError(f"domain size must be an even integer >= 2, got {domain_size!r}")
    return domain_size // 2 + 1


def classical_deterministic(f: OracleSpec) -> tuple[str, int]:
    """Query points in order until the class is certain. Returns ``(answer, queries)``."""
    needed = classical_deterministic_queries(f.n_points)
    first = f.values[0]
    for i in range(1, needed):
        if f.values[i] != first:
            return "balanced", i + 1
    return "constant", needed


def classical_randomized(f: OracleSpec, k: int, seed: int) -> dict:
    """Sample ``k`` distinct points; any disagreement means balanced."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > f.n_points:
        raise ValueError(f"k={k} exceeds the domain size {f.n_points}")
    rng = np.random.default_rng(seed)
    picks = rng.choice(f.n_points, size=k, replace=False)
    seen = f.values[picks]
    answer = "balanced" if np.any(seen != seen[0]) else "constant"
    return {"answer": answer, "failure_bound": 2.0 ** (1 - k), "queries": k}


def randomized_failure_rate(n_points: int, k: int, trials: int, seed: int) -> float:
    """Empirical error rate of :func:`classical_randomized` on fresh random balanced functions."""
    grid = make_grid(n_points)
    seeds = np.random.SeedSequence(seed).generate_state(2 * trials)
    failures = 0
    for t in range(trials):
        f = make_function("random_balanced", grid, seed=int(seeds[2 * t]))
        if classical_randomized(f, k, int(seeds[2 * t + 1]))["answer"] == "constant":
            failures += 1
    return failures / trials


def classical_report(config: ExperimentConfig, k: int = 5) -> dict:
    grid = make_grid(config.n_points)
    f = _load_function(config, grid)
    verified = validate_promise(f, grid)
    det_answer, det_queries = classical_deterministic(f)
    rnd = classical_randomized(f, k, config.seed)
    return {
        "domain_size": config.n_points,
        "verified_class": verified,
        "deterministic_worst_case_queries": classical_deterministic_queries(config.n_points),
        "deterministic_answer": det_answer,
        "deterministic_queries": det_queries,
        "randomized_k": k,
        "randomized_answer": rnd["answer"],
        "randomized_failure_bound": rnd["failure_bound"],
        "quantum_queries": 1,
        "seed": config.seed,
    }


def render_json(obj) -> str:
    return _render(obj) + "\n"
