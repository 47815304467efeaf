"""Key = value configuration parsing and validation.

The format is flat lines of `key = value`, with `#` starting a comment
(full line or trailing) and blank lines ignored. Dotted keys group
related settings:

    model.a1 = 0.13        # model rate constants (all eight required
    ...                    # when any model.* key is present)
    model.n = 2
    tau = 25.0             # optional analysis/simulation delay
    k_max = 8              # delay-ladder depth per crossing frequency
    sim.enabled = true
    sim.t_end = 5000.0     # defaults derived from the Hopf point
    sim.step = 0.35        # snapped to an exact divisor of the delay
    sim.perturbation = 0.01
    sweep.param = n        # optional one-parameter sweep
    sweep.start = 2
    sweep.stop = 4
    sweep.count = 2
    variants.f11_undistributed = false
    variants.f02_a12_coeff = false
    variants.w20_mixed_conjugates = false
    variants.f21_delayed_args = false

Unknown keys are rejected with their line number.
"""

from __future__ import annotations

import dataclasses

from .errors import ConfigError
from .model import ModelParams
from .normal_form import FormulaVariants

_MODEL_KEYS = ("a1", "a2", "a12", "a21", "b1", "b2", "a", "n")
_SWEEPABLE = set(_MODEL_KEYS)


@dataclasses.dataclass(frozen=True)
class SimSpec:
    enabled: bool = True
    t_end: float | None = None
    step: float | None = None
    perturbation: float = 0.01


@dataclasses.dataclass(frozen=True)
class SweepSpec:
    param: str
    start: float
    stop: float
    count: int


@dataclasses.dataclass(frozen=True)
class AnalysisConfig:
    params: ModelParams | None = None
    tau: float | None = None
    k_max: int = 8
    sim: SimSpec = SimSpec()
    sweep: SweepSpec | None = None
    variants: FormulaVariants = FormulaVariants()


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """Raw key -> value strings; syntax errors carry line numbers."""
    out: dict[str, str] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{ln}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"{source}:{ln}: empty key or value in {raw!r}")
        if key in out:
            raise ConfigError(f"{source}:{ln}: duplicate key {key!r}")
        out[key] = value
    return out


def _as_float(key: str, s: str) -> float:
    try:
        return float(s)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {s!r}") from None


def _as_int(key: str, s: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {s!r}") from None


def _as_bool(key: str, s: str) -> bool:
    low = s.lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ConfigError(f"{key}: expected true/false, got {s!r}")


def config_from_mapping(raw: dict[str, str]) -> AnalysisConfig:
    """Typed, validated configuration from raw strings."""
    known = set()

    def take(key):
        known.add(key)
        return raw.get(key)

    model_vals = {}
    for name in _MODEL_KEYS:
        s = take(f"model.{name}")
        if s is not None:
            model_vals[name] = _as_int(f"model.{name}", s) if name == "n" \
                else _as_float(f"model.{name}", s)
    params = None
    if model_vals:
        missing = [k for k in _MODEL_KEYS if k not in model_vals]
        if missing:
            raise ConfigError(
                "incomplete model block; missing "
                + ", ".join(f"model.{k}" for k in missing))
        try:
            params = ModelParams(**model_vals)
        except Exception as exc:
            raise ConfigError(f"invalid model parameters: {exc}") from None

    tau_s = take("tau")
    tau = _as_float("tau", tau_s) if tau_s is not None else None
    if tau is not None and tau < 0.0:
        raise ConfigError(f"tau must be non-negative, got {tau}")

    k_s = take("k_max")
    k_max = _as_int("k_max", k_s) if k_s is not None else 8
    if k_max < 0:
        raise ConfigError(f"k_max must be non-negative, got {k_max}")

    sim_kwargs = {}
    s = take("sim.enabled")
    if s is not None:
        sim_kwargs["enabled"] = _as_bool("sim.enabled", s)
    for name in ("t_end", "step", "perturbation"):
        s = take(f"sim.{name}")
        if s is not None:
            sim_kwargs[name] = _as_float(f"sim.{name}", s)
    sim = SimSpec(**sim_kwargs)
    if sim.t_end is not None and sim.t_end <= 0.0:
        raise ConfigError(f"sim.t_end must be positive, got {sim.t_end}")
    if sim.step is not None and sim.step <= 0.0:
        raise ConfigError(f"sim.step must be positive, got {sim.step}")

    sweep_raw = {name: take(f"sweep.{name}")
                 for name in ("param", "start", "stop", "count")}
    sweep = None
    present = [k for k, v in sweep_raw.items() if v is not None]
    if present:
        missing = [k for k, v in sweep_raw.items() if v is None]
        if missing:
            raise ConfigError("incomplete sweep block; missing "
                              + ", ".join(f"sweep.{k}" for k in missing))
        param = sweep_raw["param"]
        if param not in _SWEEPABLE:
            raise ConfigError(f"sweep.param must be one of {sorted(_SWEEPABLE)}, "
                              f"got {param!r}")
        sweep = SweepSpec(
            param=param,
            start=_as_float("sweep.start", sweep_raw["start"]),
            stop=_as_float("sweep.stop", sweep_raw["stop"]),
            count=_as_int("sweep.count", sweep_raw["count"]),
        )
        if sweep.count < 1:
            raise ConfigError(f"sweep.count must be >= 1, got {sweep.count}")
        if sweep.stop < sweep.start:
            raise ConfigError("sweep.stop must be >= sweep.start")
        if params is None:
            raise ConfigError("sweep requires a model block for the base values")

    var_kwargs = {}
    for name in ("f11_undistributed", "f02_a12_coeff",
                 "w20_mixed_conjugates", "f21_delayed_args"):
        s = take(f"variants.{name}")
        if s is not None:
            var_kwargs[name] = _as_bool(f"variants.{name}", s)
    variants = FormulaVariants(**var_kwargs)

    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError("unknown configuration keys: " + ", ".join(unknown))
    return AnalysisConfig(params=params, tau=tau, k_max=k_max,
                          sim=sim, sweep=sweep, variants=variants)


def load_config(path: str) -> AnalysisConfig:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return config_from_mapping(parse_config_text(text, source=path))
