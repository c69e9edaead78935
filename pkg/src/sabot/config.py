"""Strict run-configuration parsing and validation (JSON).

Unknown keys are rejected by name; nothing is executed or written before a
config validates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algorithms import algorithm_names
from .assist import AssistConfig, MODES
from .core import Problem, ProblemSpec
from .errors import ConfigError
from .external import ExternalEvaluator
from .metrics import INDICATORS
from .problems import make_problem, problem_names

_TOP_KEYS = {"problem", "algorithm", "assist", "ese_max", "seeds", "indicator", "out"}
_PROBLEM_KEYS = {"name", "command", "n_var", "n_obj", "n_constr", "lower", "upper", "timeout"}
_ALGO_KEYS = {"name", "pop_size", "params"}
_ASSIST_KEYS = {"mode", "n_doe", "beta", "n_candidates", "n_infill", "min_infill_dist"}
_INDICATOR_KEYS = {"name", "ref_point", "n_reference"}


def _check_keys(section: dict, allowed: set, where: str) -> None:
    if not isinstance(section, dict):
        raise ConfigError(f"{where} must be an object")
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown key {sorted(unknown)[0]!r} in {where}")


def _positive_int(value, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
        raise ConfigError(f"{where} must be a positive integer, got {value!r}")
    return value


@dataclass
class RunConfig:
    problem: dict
    algorithm_name: str
    pop_size: int | None
    algorithm_params: dict
    assist: AssistConfig | None
    ese_max: int
    seeds: list[int]
    indicator: str | None
    ref_point: list | None
    n_reference: int
    out: str | None
    raw: dict = field(repr=False, default_factory=dict)

    def make_problem(self) -> Problem:
        p = self.problem
        if "name" in p:
            kwargs = {k: p[k] for k in ("n_var", "n_obj") if k in p}
            return make_problem(p["name"], **kwargs)
        n_var = p["n_var"]
        lower = np.broadcast_to(np.asarray(p["lower"], dtype=float), (n_var,)).copy()
        upper = np.broadcast_to(np.asarray(p["upper"], dtype=float), (n_var,)).copy()
        spec = ProblemSpec(n_var, p.get("n_obj", 1), p.get("n_constr", 0), lower, upper)
        return ExternalEvaluator(spec, p["command"], timeout=p.get("timeout", 60.0))

    def experiment_signature(self) -> tuple:
        return (json.dumps(self.problem, sort_keys=True), self.ese_max, tuple(self.seeds))


def parse_config(data: dict) -> RunConfig:
    _check_keys(data, _TOP_KEYS, "config")
    for required in ("problem", "algorithm", "ese_max", "seeds"):
        if required not in data:
            raise ConfigError(f"missing required key {required!r}")

    prob = data["problem"]
    _check_keys(prob, _PROBLEM_KEYS, "problem")
    if ("name" in prob) == ("command" in prob):
        raise ConfigError("problem needs exactly one of 'name' or 'command'")
    if "name" in prob:
        if prob["name"].lower() not in problem_names():
            raise ConfigError(f"unknown problem {prob['name']!r}; choose from {problem_names()}")
    else:
        for required in ("n_var", "lower", "upper"):
            if required not in prob:
                raise ConfigError(f"external problem missing {required!r}")
        _positive_int(prob["n_var"], "problem.n_var")

    algo = data["algorithm"]
    _check_keys(algo, _ALGO_KEYS, "algorithm")
    if "name" not in algo:
        raise ConfigError("algorithm missing 'name'")
    if algo["name"].lower() not in algorithm_names():
        raise ConfigError(f"unknown algorithm {algo['name']!r}; choose from {algorithm_names()}")
    pop_size = _positive_int(algo["pop_size"], "algorithm.pop_size") if "pop_size" in algo else None
    params = algo.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("algorithm.params must be an object")

    assist = None
    if data.get("assist") is not None:
        a = data["assist"]
        _check_keys(a, _ASSIST_KEYS, "assist")
        mode = a.get("mode", "knockout")
        if mode != "none":
            if mode not in MODES:
                raise ConfigError(f"assist.mode must be one of {MODES + ('none',)}, got {mode!r}")
            assist = AssistConfig(
                mode=mode,
                n_doe=a.get("n_doe"),
                beta=a.get("beta", 30),
                n_candidates=a.get("n_candidates", 5),
                n_infill=a.get("n_infill"),
                min_infill_dist=a.get("min_infill_dist", 1e-3),
            )

    ese_max = _positive_int(data["ese_max"], "ese_max")
    seeds = data["seeds"]
    if (not isinstance(seeds, list)) or not seeds or not all(
        isinstance(s, int) and not isinstance(s, bool) for s in seeds
    ):
        raise ConfigError("seeds must be a non-empty list of integers")

    indicator_name, ref_point, n_reference = None, None, 1000
    if data.get("indicator") is not None:
        ind = data["indicator"]
        _check_keys(ind, _INDICATOR_KEYS, "indicator")
        indicator_name = ind.get("name", "igd")
        if indicator_name not in INDICATORS:
            raise ConfigError(f"indicator.name must be one of {INDICATORS}")
        ref_point = ind.get("ref_point")
        if "n_reference" in ind:
            n_reference = _positive_int(ind["n_reference"], "indicator.n_reference")

    out = data.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError("out must be a string path")

    return RunConfig(
        problem=prob,
        algorithm_name=algo["name"].lower(),
        pop_size=pop_size,
        algorithm_params=params,
        assist=assist,
        ese_max=ese_max,
        seeds=list(seeds),
        indicator=indicator_name,
        ref_point=ref_point,
        n_reference=n_reference,
        out=out,
        raw=data,
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}")
    return parse_config(data)
