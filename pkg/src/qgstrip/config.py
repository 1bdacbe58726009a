"""Run configuration: flat ``key=value`` text files plus command-line overrides."""
import math
from dataclasses import asdict, dataclass, fields, replace

from .errors import ConfigError

MODELS = ("rect", "brick")


@dataclass(frozen=True)
class RunConfig:
    model: str = "rect"
    n_cells: int = 3
    l1: float = 1.0
    l2: float = 1.0
    l3: float = math.sqrt(2.0)
    k_min: float = 100.0
    k_max: float = 107.0
    theta_steps: int = 24
    exclusion_k: float = 0.3
    grid_step: float = 0.002
    root_tol: float = 1e-8
    mode_tol: float = 1e-8
    out_dir: str = "out"
    seed: int = 0
    workers: int = 1

    def validate(self):
        """Raise :class:`ConfigError` naming the first out-of-range field."""
        checks = [
            ("model", self.model in MODELS, f"must be one of {MODELS}"),
            ("n_cells", self.n_cells >= 1, "must be >= 1"),
            ("l1", self.l1 > 0, "must be positive"),
            ("l2", self.l2 > 0, "must be positive"),
            ("l3", self.l3 > 0, "must be positive"),
            ("k_min", self.k_min > 0, "must be positive"),
            ("k_max", self.k_max > self.k_min, "must exceed k_min"),
            ("theta_steps", self.theta_steps >= 2 and self.theta_steps % 2 == 0,
             "must be an even integer >= 2"),
            ("exclusion_k", 0 <= self.exclusion_k < math.pi / 2, "must lie in [0, pi/2)"),
            ("grid_step", 0 < self.grid_step <= self.k_max - self.k_min, "must be in (0, k_max - k_min]"),
            ("root_tol", 0 < self.root_tol < 1, "must lie in (0, 1)"),
            ("mode_tol", 0 < self.mode_tol < 1, "must lie in (0, 1)"),
            ("out_dir", bool(self.out_dir), "must be non-empty"),
            ("workers", self.workers >= 1, "must be >= 1"),
        ]
        for name, ok, msg in checks:
            if not ok:
                raise ConfigError(f"{name}={getattr(self, name)!r}: {msg}", field=name)
        return self

    def to_text(self):
        return "".join(f"{k}={v!r}\n" if not isinstance(v, str) else f"{k}={v}\n"
                       for k, v in asdict(self).items())

    def with_overrides(self, **values):
        clean = {k: v for k, v in values.items() if v is not None}
        return replace(self, **_coerce(clean))

    def build_model(self):
        from .model import build_brick, build_rectangular
        if self.model == "rect":
            return build_rectangular(self.n_cells, self.l1, self.l2)
        return build_brick(self.n_cells, self.l1, self.l2, self.l3)


_TYPES = {f.name: f.type for f in fields(RunConfig)}
_CASTS = {"str": str, "int": int, "float": float, str: str, int: int, float: float}


def _coerce(values):
    out = {}
    for key, raw in values.items():
        if key not in _TYPES:
            raise ConfigError(f"unknown config key {key!r}", field=key)
        cast = _CASTS[_TYPES[key]]
        try:
            if cast is int and isinstance(raw, str):
                value = int(raw.strip())
            else:
                value = cast(raw.strip() if isinstance(raw, str) else raw)
        except ValueError:
            raise ConfigError(f"{key}={raw!r} is not a valid {cast.__name__}", field=key) from None
        if cast is float and not math.isfinite(value):
            raise ConfigError(f"{key}={raw!r} is not finite", field=key)
        out[key] = value
    return out


def parse_config(text):
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key] = value
    return RunConfig(**_coerce(values))


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
