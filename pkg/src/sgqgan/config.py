"""Experiment config parsing: strict JSON schema with full default filling.

Parsing is total: every failure is a SchemaError (wrong shape/type/key) or
RangeError (value outside its range), carrying the JSON path of the
offending field. Unknown keys are rejected. The parsed config is fully
resolved -- every default is materialized -- except a generated scene's
hidden phases, which stay null until execution so that a later master-seed
override still governs them.

Commands and their keys (see README for the full schema):

    learn-state   target (required), initial
    characterize  process (required), probes
    multiphase    scene (required: n, A, sigma, psi)
    sweep         base (required), grid (required)

plus the common keys sched, model, iterations, trials, master_seed,
output_prefix and the always-ignored provenance block that run manifests
carry. Manifests are therefore themselves valid configs.
"""

import json
from dataclasses import dataclass, replace

from .errors import RangeError, SchemaError
from .multiphase import default_gains, default_iterations
from .spsa import GainSchedule
from .state_learning import builtin_targets
from .states import parse_state, named_qubit_states

__all__ = ["ExperimentConfig", "parse_config", "resolve_state_text", "GRID_PATHS"]

COMMANDS = ("learn-state", "characterize", "multiphase", "sweep")

_COMMON_KEYS = {
    "command",
    "sched",
    "model",
    "iterations",
    "trials",
    "master_seed",
    "output_prefix",
    "provenance",
}
_KEYS = {
    "learn-state": _COMMON_KEYS | {"target", "initial"},
    "characterize": _COMMON_KEYS | {"process", "probes"},
    "multiphase": _COMMON_KEYS | {"scene"},
    "sweep": {"command", "base", "grid", "output_prefix", "provenance"},
}
_SCHED_KEYS = ("a", "A", "s", "b", "t")
_MODEL_KEYS = ("mode", "pairs_per_setting", "background_rate")
_SCENE_KEYS = ("n", "A", "sigma", "psi")

GRID_PATHS = (
    "iterations",
    "master_seed",
    "model.background_rate",
    "model.mode",
    "model.pairs_per_setting",
    "sched.A",
    "sched.a",
    "sched.b",
    "sched.s",
    "sched.t",
    "trials",
)

_DEFAULT_ITERATIONS = {"learn-state": 20, "characterize": 30}
_DEFAULT_TRIALS = {"learn-state": 100, "characterize": 1, "multiphase": 50}


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    sched: GainSchedule | None = None
    model_mode: str = "analytic"
    pairs_per_setting: int = 1000
    background_rate: float = 0.0
    iterations: int = 1
    trials: int = 1
    master_seed: int = 0
    output_prefix: str = ""
    target: str | None = None
    initial: str | None = None
    process: str | None = None
    probes: tuple | None = None
    scene_n: int | None = None
    scene_A: tuple | None = None
    scene_sigma: float | None = None
    scene_psi: tuple | None = None
    base: "ExperimentConfig | None" = None
    grid: tuple | None = None  # ((name, (values...)), ...) sorted

    def to_json_dict(self) -> dict:
        """Config as a JSON-ready dict; parse_config round-trips it."""
        if self.command == "sweep":
            return {
                "command": "sweep",
                "base": self.base.to_json_dict(),
                "grid": {name: list(values) for name, values in self.grid},
                "output_prefix": self.output_prefix,
            }
        doc = {
            "command": self.command,
            "sched": {
                "a": self.sched.a,
                "A": self.sched.A,
                "s": self.sched.s,
                "b": self.sched.b,
                "t": self.sched.t,
            },
            "model": {
                "mode": self.model_mode,
                "pairs_per_setting": self.pairs_per_setting,
                "background_rate": self.background_rate,
            },
            "iterations": self.iterations,
            "trials": self.trials,
            "master_seed": self.master_seed,
            "output_prefix": self.output_prefix,
        }
        if self.command == "learn-state":
            doc["target"] = self.target
            doc["initial"] = self.initial
        elif self.command == "characterize":
            doc["process"] = self.process
            doc["probes"] = list(self.probes)
        elif self.command == "multiphase":
            doc["scene"] = {
                "n": self.scene_n,
                "A": list(self.scene_A),
                "sigma": self.scene_sigma,
                "psi": None if self.scene_psi is None else list(self.scene_psi),
            }
        return doc

    def with_master_seed(self, seed: int) -> "ExperimentConfig":
        if self.command == "sweep":
            return replace(self, base=self.base.with_master_seed(seed))
        return replace(self, master_seed=seed)

    def with_output_prefix(self, prefix: str) -> "ExperimentConfig":
        return replace(self, output_prefix=prefix)


def _expect_dict(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(path, f"expected an object, got {type(value).__name__}")
    return value


def _expect_list(value, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(path, f"expected an array, got {type(value).__name__}")
    return value


def _expect_str(value, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(path, f"expected a string, got {type(value).__name__}")
    return value


def _expect_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, f"expected an integer, got {type(value).__name__}")
    return value


def _expect_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, f"expected a number, got {type(value).__name__}")
    return float(value)


def _check_keys(doc: dict, allowed, path: str) -> None:
    for key in doc:
        if key not in allowed:
            raise SchemaError(f"{path}.{key}", "unknown key")


def resolve_state_text(text: str):
    """Turn a target/probe spec into a PureState.

    Accepts the builtin target names (psi_t1..psi_t6), the single-letter
    polarization names (H, V, D, A, R, L) and comma-separated amplitude
    literals.
    """
    by_name = builtin_targets()
    if text in by_name:
        return by_name[text]
    letters = named_qubit_states()
    if text in letters:
        return letters[text]
    return parse_state(text)


def _parse_state_field(text, path: str):
    text = _expect_str(text, path)
    try:
        resolve_state_text(text)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None
    return text


def _parse_sched(doc, path: str, default: GainSchedule) -> GainSchedule:
    if doc is None:
        return default
    doc = _expect_dict(doc, path)
    _check_keys(doc, _SCHED_KEYS, path)
    values = {}
    for key in _SCHED_KEYS:
        if key in doc:
            values[key] = _expect_number(doc[key], f"{path}.{key}")
    for key in ("a", "s", "b", "t"):
        if key in values and values[key] <= 0:
            raise RangeError(f"{path}.{key}", values[key], "must be > 0")
    if "A" in values and values["A"] < 0:
        raise RangeError(f"{path}.A", values["A"], "must be >= 0")
    return GainSchedule(**values)


def _parse_model(doc, path: str) -> tuple[str, int, float]:
    mode, pairs, background = "analytic", 1000, 0.0
    if doc is None:
        return mode, pairs, background
    doc = _expect_dict(doc, path)
    _check_keys(doc, _MODEL_KEYS, path)
    if "mode" in doc:
        mode = _expect_str(doc["mode"], f"{path}.mode")
        if mode not in ("analytic", "sampled"):
            raise RangeError(f"{path}.mode", mode, "must be 'analytic' or 'sampled'")
    if "pairs_per_setting" in doc:
        pairs = _expect_int(doc["pairs_per_setting"], f"{path}.pairs_per_setting")
        if pairs < 1:
            raise RangeError(f"{path}.pairs_per_setting", pairs, "must be >= 1")
    if "background_rate" in doc:
        background = _expect_number(doc["background_rate"], f"{path}.background_rate")
        if background < 0:
            raise RangeError(f"{path}.background_rate", background, "must be >= 0")
    return mode, pairs, background


def _parse_scene(doc, path: str):
    doc = _expect_dict(doc, path)
    _check_keys(doc, _SCENE_KEYS, path)
    if "n" not in doc:
        raise SchemaError(f"{path}.n", "required key is missing")
    n = _expect_int(doc["n"], f"{path}.n")
    if n < 1:
        raise RangeError(f"{path}.n", n, "must be >= 1")
    weights = None
    if doc.get("A") is not None:
        raw = _expect_list(doc["A"], f"{path}.A")
        if len(raw) != n:
            raise RangeError(f"{path}.A", len(raw), f"must have length n={n}")
        weights = tuple(
            _expect_number(v, f"{path}.A[{i}]") for i, v in enumerate(raw)
        )
        for i, w in enumerate(weights):
            if w < 0:
                raise RangeError(f"{path}.A[{i}]", w, "must be >= 0")
        if abs(sum(weights) - 1.0) > 1e-9:
            raise RangeError(f"{path}.A", sum(weights), "must sum to 1 within 1e-9")
    else:
        weights = tuple([1.0 / n] * n)
    sigma = 1.0
    if doc.get("sigma") is not None:
        sigma = _expect_number(doc["sigma"], f"{path}.sigma")
        if sigma < 0:
            raise RangeError(f"{path}.sigma", sigma, "must be >= 0")
    psi = None
    if doc.get("psi") is not None:
        raw = _expect_list(doc["psi"], f"{path}.psi")
        if len(raw) != n:
            raise RangeError(f"{path}.psi", len(raw), f"must have length n={n}")
        psi = tuple(_expect_number(v, f"{path}.psi[{i}]") for i, v in enumerate(raw))
    return n, weights, sigma, psi


def _parse_common(doc: dict, path: str, command: str):
    iterations = None
    if "iterations" in doc:
        iterations = _expect_int(doc["iterations"], f"{path}.iterations")
        if iterations < 1:
            raise RangeError(f"{path}.iterations", iterations, "must be >= 1")
    trials = _DEFAULT_TRIALS[command]
    if "trials" in doc:
        trials = _expect_int(doc["trials"], f"{path}.trials")
        if trials < 1:
            raise RangeError(f"{path}.trials", trials, "must be >= 1")
        if command == "characterize" and trials != 1:
            raise RangeError(
                f"{path}.trials", trials, "characterize runs exactly 1 trial per probe"
            )
    master_seed = 0
    if "master_seed" in doc:
        master_seed = _expect_int(doc["master_seed"], f"{path}.master_seed")
        if not 0 <= master_seed < 2**64:
            raise RangeError(f"{path}.master_seed", master_seed, "must be a u64")
    prefix = command
    if "output_prefix" in doc:
        prefix = _expect_str(doc["output_prefix"], f"{path}.output_prefix")
        if not prefix:
            raise RangeError(f"{path}.output_prefix", prefix, "must be non-empty")
    return iterations, trials, master_seed, prefix


def _parse_command_config(doc: dict, path: str, allow_sweep: bool) -> ExperimentConfig:
    _expect_dict(doc, path)
    if "command" not in doc:
        raise SchemaError(f"{path}.command", "required key is missing")
    command = _expect_str(doc["command"], f"{path}.command")
    if command not in COMMANDS:
        raise RangeError(f"{path}.command", command, f"must be one of {COMMANDS}")
    if command == "sweep":
        if not allow_sweep:
            raise RangeError(f"{path}.command", command, "sweep cannot nest")
        return _parse_sweep(doc, path)
    _check_keys(doc, _KEYS[command], path)

    mode, pairs, background = _parse_model(doc.get("model"), f"{path}.model")
    iterations, trials, master_seed, prefix = _parse_common(doc, path, command)

    cfg = ExperimentConfig(
        command=command,
        model_mode=mode,
        pairs_per_setting=pairs,
        background_rate=background,
        trials=trials,
        master_seed=master_seed,
        output_prefix=prefix,
        iterations=iterations if iterations is not None else 1,
    )

    if command == "learn-state":
        if "target" not in doc:
            raise SchemaError(f"{path}.target", "required key is missing")
        target = _parse_state_field(doc["target"], f"{path}.target")
        initial = _parse_state_field(doc.get("initial", "0, 1"), f"{path}.initial")
        sched = _parse_sched(doc.get("sched"), f"{path}.sched", GainSchedule())
        if iterations is None:
            iterations = _DEFAULT_ITERATIONS[command]
        return replace(
            cfg, target=target, initial=initial, sched=sched, iterations=iterations
        )

    if command == "characterize":
        if "process" not in doc:
            raise SchemaError(f"{path}.process", "required key is missing")
        process_text = _expect_str(doc["process"], f"{path}.process")
        from .process import parse_waveplates

        try:
            parse_waveplates(process_text)
        except ValueError as exc:
            raise SchemaError(f"{path}.process", str(exc)) from None
        probes = ("H", "D", "R")
        if "probes" in doc:
            raw = _expect_list(doc["probes"], f"{path}.probes")
            if len(raw) < 2:
                raise RangeError(f"{path}.probes", len(raw), "need at least 2 probes")
            probes = tuple(
                _parse_state_field(p, f"{path}.probes[{i}]") for i, p in enumerate(raw)
            )
        sched = _parse_sched(doc.get("sched"), f"{path}.sched", GainSchedule())
        if iterations is None:
            iterations = _DEFAULT_ITERATIONS[command]
        return replace(
            cfg, process=process_text, probes=probes, sched=sched, iterations=iterations
        )

    # multiphase
    if "scene" not in doc:
        raise SchemaError(f"{path}.scene", "required key is missing")
    n, weights, sigma, psi = _parse_scene(doc["scene"], f"{path}.scene")
    sched = _parse_sched(doc.get("sched"), f"{path}.sched", default_gains(n))
    if iterations is None:
        iterations = default_iterations(n)
    return replace(
        cfg,
        scene_n=n,
        scene_A=weights,
        scene_sigma=sigma,
        scene_psi=psi,
        sched=sched,
        iterations=iterations,
    )


def _parse_sweep(doc: dict, path: str) -> ExperimentConfig:
    _check_keys(doc, _KEYS["sweep"], path)
    if "base" not in doc:
        raise SchemaError(f"{path}.base", "required key is missing")
    base_doc = _expect_dict(doc["base"], f"{path}.base")
    base = _parse_command_config(base_doc, f"{path}.base", allow_sweep=False)
    if base.command == "characterize":
        raise RangeError(
            f"{path}.base.command", base.command, "sweep bases must be learn-state or multiphase"
        )
    if "grid" not in doc:
        raise SchemaError(f"{path}.grid", "required key is missing")
    grid_doc = _expect_dict(doc["grid"], f"{path}.grid")
    if not grid_doc:
        raise RangeError(f"{path}.grid", 0, "grid must contain at least one parameter")
    grid = []
    for name in sorted(grid_doc):
        grid_path = f"{path}.grid.{name}"
        if name not in GRID_PATHS:
            raise SchemaError(grid_path, f"not sweepable; allowed: {GRID_PATHS}")
        values = _expect_list(grid_doc[name], grid_path)
        if not values:
            raise RangeError(grid_path, 0, "needs at least one value")
        for i, value in enumerate(values):
            probe = dict(base_doc)
            _apply_override(probe, name, value)
            try:
                _parse_command_config(probe, f"{path}.base", allow_sweep=False)
            except (SchemaError, RangeError) as exc:
                raise type(exc)(f"{grid_path}[{i}]", *_error_tail(exc)) from None
        grid.append((name, tuple(sorted(values, key=_value_key))))
    prefix = "sweep"
    if "output_prefix" in doc:
        prefix = _expect_str(doc["output_prefix"], f"{path}.output_prefix")
    return ExperimentConfig(
        command="sweep", base=base, grid=tuple(grid), output_prefix=prefix
    )


def _error_tail(exc):
    if isinstance(exc, RangeError):
        return (exc.value, exc.message)
    return (exc.message,)


def _value_key(value):
    return (0, value) if isinstance(value, (int, float)) else (1, str(value))


def _apply_override(doc: dict, dotted: str, value) -> None:
    """Set a dotted path like 'sched.a' inside a raw config dict."""
    parts = dotted.split(".")
    here = doc
    for part in parts[:-1]:
        nested = dict(here.get(part) or {})
        here[part] = nested
        here = nested
    here[parts[-1]] = value


def grid_points(cfg: ExperimentConfig):
    """Yield (named overrides, point config) in deterministic grid order."""
    import itertools

    names = [name for name, _ in cfg.grid]
    value_lists = [values for _, values in cfg.grid]
    base_doc = cfg.base.to_json_dict()
    for combo in itertools.product(*value_lists):
        doc = json.loads(json.dumps(base_doc))
        for name, value in zip(names, combo):
            _apply_override(doc, name, value)
        yield dict(zip(names, combo)), _parse_command_config(doc, "$", False)


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a JSON config document into a resolved config."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("$", "top level must be an object")
    return _parse_command_config(doc, "$", allow_sweep=True)
