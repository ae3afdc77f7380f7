"""Scenario configuration files and deterministic CSV rows.

Grammar (one entry per line)::

    line    := blank | comment | entry
    comment := '#' any*
    entry   := key ws* '=' ws* value ws* ('#' any*)?
    key     := section ('.' name)+

Sections: ``economy``, ``intervention``, ``sweep``, ``twopop``, ``solver``.
Keys are case-sensitive; unknown or repeated keys are errors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError, InvalidIntervention, ParameterError
from .model import PRIMITIVES, ModelParams
from .policy import Intervention, InterventionKind
from .twopop import Population, TwoPopParams

INTERVENTION_KEYS = ("kind", "dtheta_H", "dtheta_L", "factor", "dY_H", "dY_L", "psi_factor")
SWEEP_KEYS = ("primitive", "from", "to", "steps", "sensitivity")
SOLVER_KEYS = ("tol", "grid_points", "seed")
TWOPOP_KEYS = ("beta_f", "beta_m", "symmetric")
COMMAND_BLOCKS = ("intervention", "sweep", "twopop")


def _parse_float(text, key, line):
    try:
        v = float(text)
    except ValueError:
        raise ConfigError(f"expected a decimal number, got {text!r}", key, line) from None
    if not math.isfinite(v):
        raise ConfigError(f"value must be finite, got {text!r}", key, line)
    return v


def _parse_int(text, key, line):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"expected an integer, got {text!r}", key, line) from None


def _parse_bool(text, key, line):
    low = text.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ConfigError(f"expected true or false, got {text!r}", key, line)


def _allowed(key):
    parts = key.split(".")
    sec = parts[0]
    rest = ".".join(parts[1:])
    if sec == "economy":
        return rest in PRIMITIVES
    if sec == "intervention":
        return rest in INTERVENTION_KEYS
    if sec == "sweep":
        return rest in SWEEP_KEYS
    if sec == "solver":
        return rest in SOLVER_KEYS
    if sec == "twopop":
        if rest in TWOPOP_KEYS:
            return True
        return len(parts) == 3 and parts[1] in ("f", "m") and parts[2] in PRIMITIVES
    return False


def parse_text(text: str) -> dict:
    """Raw ``key -> (value, line)`` mapping with key validation."""
    out = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        if "=" not in s:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", None, n)
        key, value = (x.strip() for x in s.split("=", 1))
        if not key:
            raise ConfigError("missing key", None, n)
        if not _allowed(key):
            raise ConfigError("unknown key", key, n)
        if key in out:
            raise ConfigError(f"duplicate key (first on line {out[key][1]})", key, n)
        if not value:
            raise ConfigError("missing value", key, n)
        out[key] = (value, n)
    return out


@dataclass
class SweepSpec:
    primitive: str
    start: float
    stop: float
    steps: int
    sensitivity: bool = False

    def values(self):
        if self.steps == 1:
            return [self.start]
        return [self.start + (self.stop - self.start) * j / (self.steps - 1) for j in range(self.steps)]


@dataclass
class ScenarioConfig:
    economy: ModelParams | None = None
    intervention: Intervention | None = None
    sweep: SweepSpec | None = None
    twopop: TwoPopParams | None = None
    tol: float = 1e-10
    grid_points: int = 10_000
    seed: int = 20240101
    blocks: set = field(default_factory=set)

    def require(self, command: str):
        """Check that exactly the block ``command`` needs is present."""
        need = {"solve": None, "sweep": "sweep", "policy": "intervention", "twopop": "twopop"}[command]
        extra = (self.blocks & set(COMMAND_BLOCKS)) - {need}
        if extra:
            raise ConfigError(f"block {sorted(extra)[0]!r} is not used by the {command} command")
        if need is not None and need not in self.blocks:
            raise ConfigError(f"the {command} command needs a {need!r} block")
        if command != "twopop" and self.economy is None:
            raise ConfigError(f"the {command} command needs an 'economy' block")


def _block(raw, prefix):
    return {k[len(prefix):]: v for k, v in raw.items() if k.startswith(prefix)}


def _params(cls, entries, prefix, names):
    missing = [n for n in names if n not in entries]
    if missing:
        raise ConfigError("missing key", prefix + missing[0])
    vals = {n: _parse_float(entries[n][0], prefix + n, entries[n][1]) for n in names}
    try:
        return cls(**vals)
    except ParameterError as exc:
        raise ConfigError(f"invalid {prefix.rstrip('.')}: {exc}", prefix.rstrip("."),
                          min(e[1] for e in entries.values())) from None


def load_text(text: str) -> ScenarioConfig:
    raw = parse_text(text)
    cfg = ScenarioConfig()
    cfg.blocks = {k.split(".", 1)[0] for k in raw}

    eco = _block(raw, "economy.")
    if eco:
        cfg.economy = _params(ModelParams, eco, "economy.", PRIMITIVES)

    iv = _block(raw, "intervention.")
    if iv:
        if "kind" not in iv:
            raise ConfigError("missing key", "intervention.kind")
        kind_text, kline = iv["kind"]
        try:
            kind = InterventionKind(kind_text.lower())
        except ValueError:
            raise ConfigError(f"unknown intervention kind {kind_text!r}", "intervention.kind", kline) from None
        nums = {k: _parse_float(v, "intervention." + k, n) for k, (v, n) in iv.items() if k != "kind"}
        try:
            cfg.intervention = Intervention(kind, **nums)
        except InvalidIntervention as exc:
            raise ConfigError(str(exc), "intervention.kind", kline) from None

    sw = _block(raw, "sweep.")
    if sw:
        for k in ("primitive", "from", "to", "steps"):
            if k not in sw:
                raise ConfigError("missing key", "sweep." + k)
        prim, pline = sw["primitive"]
        if prim not in PRIMITIVES or prim == "alpha_L":
            raise ConfigError(f"cannot sweep {prim!r}", "sweep.primitive", pline)
        steps = _parse_int(sw["steps"][0], "sweep.steps", sw["steps"][1])
        if steps < 1:
            raise ConfigError("steps must be >= 1", "sweep.steps", sw["steps"][1])
        sens = False
        if "sensitivity" in sw:
            sens = _parse_bool(sw["sensitivity"][0], "sweep.sensitivity", sw["sensitivity"][1])
        cfg.sweep = SweepSpec(prim, _parse_float(sw["from"][0], "sweep.from", sw["from"][1]),
                              _parse_float(sw["to"][0], "sweep.to", sw["to"][1]), steps, sens)

    tp = _block(raw, "twopop.")
    if tp:
        betas = {}
        for g in ("f", "m"):
            key = "beta_" + g
            betas[key] = _parse_float(tp[key][0], "twopop." + key, tp[key][1]) if key in tp else 1.0
        sym = _parse_bool(tp["symmetric"][0], "twopop.symmetric", tp["symmetric"][1]) \
            if "symmetric" in tp else False
        try:
            if sym:
                if cfg.economy is None:
                    raise ConfigError("twopop.symmetric needs an 'economy' block", "twopop.symmetric",
                                      tp["symmetric"][1])
                if any(k.startswith(("f.", "m.")) for k in tp):
                    raise ConfigError("twopop.symmetric excludes per-population keys", "twopop.symmetric",
                                      tp["symmetric"][1])
                cfg.twopop = TwoPopParams.symmetric(cfg.economy, **betas)
            else:
                pops = {g: _params(Population, _block(tp, g + "."), f"twopop.{g}.", PRIMITIVES)
                        for g in ("f", "m")}
                cfg.twopop = TwoPopParams(pops["f"], pops["m"], **betas)
        except ParameterError as exc:
            raise ConfigError(f"invalid twopop block: {exc}", "twopop") from None

    sv = _block(raw, "solver.")
    if "tol" in sv:
        cfg.tol = _parse_float(sv["tol"][0], "solver.tol", sv["tol"][1])
    if "grid_points" in sv:
        cfg.grid_points = _parse_int(sv["grid_points"][0], "solver.grid_points", sv["grid_points"][1])
        if cfg.grid_points < 2:
            raise ConfigError("grid_points must be >= 2", "solver.grid_points", sv["grid_points"][1])
    if "seed" in sv:
        cfg.seed = _parse_int(sv["seed"][0], "solver.seed", sv["seed"][1])
    return cfg


def load(path) -> ScenarioConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", None, None) from None
    return load_text(text)


def economy_text(params: ModelParams) -> str:
    """Config lines reproducing ``params`` exactly."""
    return "".join(f"economy.{k} = {fmt(v)}\n" for k, v in params.as_dict().items())


# --- CSV -------------------------------------------------------------------

SOLVE_COLUMNS = ("alpha_H", "alpha_L", "Y_H", "Y_L", "theta_H", "theta_L", "psi", "regime",
                 "eq_index", "W_star", "i_H", "i_L", "pi_H", "pi_L", "activity", "stability",
                 "pareto_dominant")
SENS_COLUMNS = ("dW", "di_H", "di_L", "dpi_H", "dpi_L", "sens_status")
EVENT_COLUMNS = ("step", "value", "event")
TWOPOP_COLUMNS = ("eq_index", "W_f", "W_m", "i_fH", "i_fL", "i_mH", "i_mL",
                  "pi_fH", "pi_fL", "pi_mH", "pi_mL", "residual", "stability")


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float) or hasattr(x, "__float__") and not isinstance(x, str):
        return format(float(x), ".17g")
    return str(getattr(x, "value", x))


def csv_line(values) -> str:
    return ",".join(fmt(v) for v in values) + "\n"


def solve_rows(eqset, focal) -> list:
    p = eqset.economy
    head = [getattr(p, k) for k in PRIMITIVES] + [eqset.regime.tag]
    return [head + [j, e.W_star, e.i_H, e.i_L, e.pi_H, e.pi_L, e.activity, e.stability, e is focal]
            for j, e in enumerate(eqset)]


def parse_csv(text: str) -> list:
    """Split CSV text into tables of dicts; tables are separated by blank lines."""
    tables = []
    for chunk in text.strip("\n").split("\n\n"):
        lines = chunk.split("\n")
        header = lines[0].split(",")
        tables.append([dict(zip(header, ln.split(","))) for ln in lines[1:]])
    return tables
