"""Run configuration: flat ``key = value`` files plus command-line overrides."""
from dataclasses import dataclass, fields, replace
import math

from .model import Level


class ConfigError(ValueError):
    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


def _bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off", ""):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text):
    if isinstance(text, (list, tuple)):
        return tuple(float(x) for x in text)
    return tuple(float(x) for x in str(text).replace(",", " ").split())


@dataclass(frozen=True)
class RunConfig:
    b_h: float = 10.0
    b_l: float = 5.0
    k: float = 0.1
    omega: float = 1.0
    kbt_h: float = 3.5
    measure: str = "e1"
    j: float | None = None
    j_min: float = 0.0
    j_max: float = 10.0
    j_steps: int = 101
    cost: bool = False
    cost_kbt: float | None = None
    tau: tuple = (10.0, 100.0, 1000.0)
    steps: int = 2000
    seed: int | None = None

    def validate(self):
        for key in ("b_h", "b_l", "omega", "kbt_h"):
            v = getattr(self, key)
            if not (math.isfinite(v) and v > 0):
                raise ConfigError(key, f"must be a positive number, got {v!r}")
        if not (math.isfinite(self.k) and self.k >= 0):
            raise ConfigError("k", f"must be >= 0, got {self.k!r}")
        if self.b_l >= self.b_h:
            raise ConfigError("b_l", f"must be smaller than b_h ({self.b_l!r} >= {self.b_h!r})")
        try:
            Level.parse(self.measure)
        except ValueError as exc:
            raise ConfigError("measure", str(exc)) from None
        if self.j is not None and not (math.isfinite(self.j) and self.j >= 0):
            raise ConfigError("j", f"must be >= 0, got {self.j!r}")
        if not (math.isfinite(self.j_min) and self.j_min >= 0):
            raise ConfigError("j_min", f"must be >= 0, got {self.j_min!r}")
        if not (math.isfinite(self.j_max) and self.j_min <= self.j_max):
            raise ConfigError("j_max", f"must be >= j_min, got {self.j_max!r}")
        if self.j_steps < 1:
            raise ConfigError("j_steps", f"must be >= 1, got {self.j_steps!r}")
        if self.cost_kbt is not None and not self.cost_kbt > 0:
            raise ConfigError("cost_kbt", f"must be > 0, got {self.cost_kbt!r}")
        if not self.tau or any(not (math.isfinite(t) and t > 0) for t in self.tau):
            raise ConfigError("tau", f"must be positive numbers, got {self.tau!r}")
        if self.steps < 1:
            raise ConfigError("steps", f"must be >= 1, got {self.steps!r}")
        return self

    def j_grid(self):
        n = self.j_steps
        if n == 1:
            return [float(self.j_min)]
        return [(self.j_min * (n - 1 - i) + self.j_max * i) / (n - 1) for i in range(n)]

    def with_values(self, values):
        return replace(self, **coerce(values))


_CONVERTERS = {
    "measure": lambda s: str(s).strip().lower(),
    "j_steps": int, "steps": int, "seed": int,
    "cost": _bool,
    "tau": _floats,
}
KEYS = tuple(f.name for f in fields(RunConfig))


def coerce(values):
    out = {}
    for raw_key, raw in values.items():
        key = raw_key.strip().replace("-", "_")
        if key not in KEYS:
            raise ConfigError(key, "unknown configuration key")
        conv = _CONVERTERS.get(key, float)
        try:
            out[key] = None if raw is None or (isinstance(raw, str) and raw.strip() == "" and key != "cost") else conv(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(key, f"cannot parse {raw!r} ({exc})") from None
    return out


def parse_config(text, base=None):
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {line!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return (base or RunConfig()).with_values(values)


def render_config(config):
    lines = []
    for key in KEYS:
        v = getattr(config, key)
        if v is None:
            continue
        if isinstance(v, bool):
            v = "true" if v else "false"
        elif isinstance(v, tuple):
            v = ", ".join(repr(float(x)) for x in v)
        elif isinstance(v, float):
            v = repr(v)
        lines.append(f"{key} = {v}")
    return "\n".join(lines) + "\n"


def load_config(path, base=None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text, base)
