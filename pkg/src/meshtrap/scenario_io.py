"""JSON scenario files.

A file looks like::

    {
      "schema_version": 1,
      "scenario": {"symmetric": {"n_domains": 12, "alpha": 0.5, ...}},
      "solver": {"tol": 1e-10, "max_iter": 10000, "damping": 0.5},
      "dollar_config": {"duplicated_engineering": 300000, ...}
    }

``scenario`` holds either the ``symmetric`` shorthand or explicit
``domains``/matrix fields. Unknown keys are rejected by name.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .calibration import DollarConfig
from .equilibrium import DEFAULT_SOLVER, SolverConfig
from .model import DomainError, DomainParams, Scenario

SCHEMA_VERSION = 1

TOP_FIELDS = {"schema_version", "scenario", "solver", "dollar_config"}
SYMMETRIC_FIELDS = {
    "n_domains": True, "alpha": True, "gamma_q": True, "gamma_g": True, "kappa": True,
    "beta": True, "lambda": True, "p_bar": False, "m_consumers": False, "omega": False,
    "switching_cost": False, "tau": False,
}
EXPLICIT_FIELDS = {
    "n_domains": False, "m_consumers": False, "domains": True, "beta": True,
    "lambda_matrix": True, "omega": False, "switching_cost": False, "tau": False, "p_matrix": False,
}
DOMAIN_FIELDS = {"alpha": True, "gamma_q": True, "gamma_g": True, "kappa": True}
SOLVER_FIELDS = {f.name: False for f in dataclasses.fields(SolverConfig)}
DOLLAR_FIELDS = {f.name: False for f in dataclasses.fields(DollarConfig)}


class ScenarioFileError(Exception):
    pass


class ScenarioParseError(ScenarioFileError):
    pass


class ScenarioValidationError(ScenarioFileError):
    pass


@dataclass(frozen=True)
class ScenarioFile:
    scenario: Scenario
    schema_version: int = SCHEMA_VERSION
    solver: SolverConfig = DEFAULT_SOLVER
    dollar_config: DollarConfig | None = None


def _check_fields(obj, spec: dict[str, bool], where: str) -> None:
    if not isinstance(obj, dict):
        raise ScenarioValidationError(f"{where}: expected an object, got {type(obj).__name__}")
    for key in obj:
        if key not in spec:
            raise ScenarioValidationError(f"{where}: unknown field {key!r}")
    for key, required in spec.items():
        if required and key not in obj:
            raise ScenarioValidationError(f"{where}: missing required field {key!r}")


def _number(obj: dict, key: str, where: str, default=None):
    if key not in obj:
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioValidationError(f"{where}.{key}: expected a number, got {v!r}")
    return v


def _matrix(obj: dict, key: str, where: str):
    v = obj.get(key)
    if v is None:
        return None
    try:
        arr = np.array(v, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ScenarioValidationError(f"{where}.{key}: not a numeric matrix ({exc})") from None
    if arr.ndim != 2 and arr.size:
        raise ScenarioValidationError(f"{where}.{key}: expected a 2-D matrix")
    return arr


def scenario_from_dict(d: dict, where: str = "scenario") -> Scenario:
    try:
        if isinstance(d, dict) and "symmetric" in d:
            if len(d) != 1:
                extra = next(k for k in d if k != "symmetric")
                raise ScenarioValidationError(f"{where}: unknown field {extra!r} next to 'symmetric'")
            sym = d["symmetric"]
            w = f"{where}.symmetric"
            _check_fields(sym, SYMMETRIC_FIELDS, w)
            kwargs = {k: _number(sym, k, w) for k in sym}
            kwargs["lam"] = kwargs.pop("lambda")
            return Scenario.symmetric(**kwargs)

        _check_fields(d, EXPLICIT_FIELDS, where)
        if not isinstance(d["domains"], list):
            raise ScenarioValidationError(f"{where}.domains: expected a list")
        domains = []
        for k, dom in enumerate(d["domains"]):
            w = f"{where}.domains[{k}]"
            _check_fields(dom, DOMAIN_FIELDS, w)
            domains.append(DomainParams(**{f: _number(dom, f, w) for f in DOMAIN_FIELDS}))
        n = len(domains)
        if "n_domains" in d and d["n_domains"] != n:
            raise ScenarioValidationError(f"{where}.n_domains: {d['n_domains']} but {n} domains listed")
        omega = _matrix(d, "omega", where)
        if omega is None or omega.size == 0:
            omega = np.zeros((0, n))
        if "m_consumers" in d and d["m_consumers"] != omega.shape[0]:
            raise ScenarioValidationError(
                f"{where}.m_consumers: {d['m_consumers']} but omega has {omega.shape[0]} rows"
            )
        return Scenario(
            domains=tuple(domains),
            beta=_number(d, "beta", where),
            lambda_matrix=_matrix(d, "lambda_matrix", where),
            omega=omega,
            switching_cost=_number(d, "switching_cost", where, 0.0),
            tau=_number(d, "tau", where, 1.0),
            p_matrix=_matrix(d, "p_matrix", where),
        )
    except DomainError as exc:
        raise ScenarioValidationError(f"{where}: {exc}") from None
    except TypeError as exc:
        raise ScenarioValidationError(f"{where}: {exc}") from None


def scenario_to_dict(s: Scenario, shorthand: bool = True) -> dict:
    params = s.symmetric_params() if shorthand else None
    if params is not None:
        params["lambda"] = params.pop("lam")
        return {"symmetric": params}
    return {
        "n_domains": s.n_domains,
        "m_consumers": s.m_consumers,
        "domains": [dataclasses.asdict(d) for d in s.domains],
        "beta": s.beta,
        "lambda_matrix": s.lambda_matrix.tolist(),
        "omega": s.omega.tolist(),
        "switching_cost": s.switching_cost,
        "tau": s.tau,
        "p_matrix": s.p_matrix.tolist(),
    }


def from_dict(doc) -> ScenarioFile:
    _check_fields(doc, {"schema_version": True, "scenario": True, "solver": False, "dollar_config": False}, "file")
    version = doc["schema_version"]
    if version != SCHEMA_VERSION:
        raise ScenarioValidationError(f"file.schema_version: unsupported version {version!r}")
    scenario = scenario_from_dict(doc["scenario"])
    solver = DEFAULT_SOLVER
    if "solver" in doc:
        _check_fields(doc["solver"], SOLVER_FIELDS, "solver")
        try:
            solver = SolverConfig(**{k: _number(doc["solver"], k, "solver") for k in doc["solver"]})
        except ValueError as exc:
            raise ScenarioValidationError(f"solver: {exc}") from None
    dollars = None
    if "dollar_config" in doc:
        _check_fields(doc["dollar_config"], DOLLAR_FIELDS, "dollar_config")
        try:
            dollars = DollarConfig(**{k: _number(doc["dollar_config"], k, "dollar_config")
                                      for k in doc["dollar_config"]})
        except ValueError as exc:
            raise ScenarioValidationError(f"dollar_config: {exc}") from None
    return ScenarioFile(scenario, version, solver, dollars)


def to_dict(sf: ScenarioFile, shorthand: bool = True) -> dict:
    doc = {"schema_version": sf.schema_version, "scenario": scenario_to_dict(sf.scenario, shorthand)}
    if sf.solver != DEFAULT_SOLVER:
        doc["solver"] = dataclasses.asdict(sf.solver)
    if sf.dollar_config is not None:
        doc["dollar_config"] = dataclasses.asdict(sf.dollar_config)
    return doc


def loads(text: str) -> ScenarioFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(doc)


def dumps(sf: ScenarioFile, shorthand: bool = True) -> str:
    return json.dumps(to_dict(sf, shorthand), indent=2) + "\n"


def load_scenario_file(path: str | Path) -> ScenarioFile:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return loads(text)
    except ScenarioFileError as exc:
        raise type(exc)(f"{path}: {exc}") from None


def save_scenario_file(sf: ScenarioFile, path: str | Path, shorthand: bool = True) -> None:
    Path(path).write_text(dumps(sf, shorthand), encoding="utf-8")
