import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import scenarios
from meshtrap.calibration import DollarConfig, baseline_scenario
from meshtrap.equilibrium import SolverConfig
from meshtrap.scenario_io import (
    ScenarioFile,
    ScenarioParseError,
    ScenarioValidationError,
    dumps,
    load_scenario_file,
    loads,
    save_scenario_file,
    scenario_from_dict,
    scenario_to_dict,
)

REPO = Path(__file__).resolve().parents[1]


def test_committed_baseline_file_loads():
    sf = load_scenario_file(REPO / "scenarios" / "baseline.json")
    assert sf.scenario == baseline_scenario()
    assert sf.schema_version == 1


def test_shorthand_and_expanded_forms_agree():
    s = baseline_scenario(m_consumers=2)
    short = scenario_to_dict(s, shorthand=True)
    full = scenario_to_dict(s, shorthand=False)
    assert "symmetric" in short and "lambda_matrix" in full
    assert scenario_from_dict(short) == scenario_from_dict(full) == s


@given(scenarios())
@settings(max_examples=50)
def test_round_trip(s):
    sf = ScenarioFile(s, solver=SolverConfig(tol=1e-9), dollar_config=DollarConfig(1, 2, 3))
    back = loads(dumps(sf, shorthand=False))
    assert back == sf
    assert loads(dumps(back)) == sf


def test_save_and_load(tmp_path):
    sf = ScenarioFile(baseline_scenario())
    path = tmp_path / "s.json"
    save_scenario_file(sf, path)
    assert load_scenario_file(path) == sf


def _doc(**scenario):
    return {"schema_version": 1, "scenario": scenario}


def test_unknown_fields_named():
    base = scenario_to_dict(baseline_scenario(), shorthand=False)
    with pytest.raises(ScenarioValidationError, match="'colour'"):
        loads(json.dumps(_doc(**base, colour="red")))
    doc = _doc(**base)
    doc["scenario"]["domains"][3]["alpah"] = 0.5
    with pytest.raises(ScenarioValidationError, match=r"domains\[3\].*'alpah'"):
        loads(json.dumps(doc))
    doc = {"schema_version": 1, "scenario": {"symmetric": {"n_domains": 3}}, "extra": 1}
    with pytest.raises(ScenarioValidationError, match="'extra'"):
        loads(json.dumps(doc))
    doc = {"schema_version": 1, "scenario": scenario_to_dict(baseline_scenario()), "solver": {"tolerance": 1}}
    with pytest.raises(ScenarioValidationError, match="'tolerance'"):
        loads(json.dumps(doc))


def test_missing_and_invalid_values():
    sym = scenario_to_dict(baseline_scenario())["symmetric"]
    del sym["kappa"]
    with pytest.raises(ScenarioValidationError, match="'kappa'"):
        loads(json.dumps(_doc(symmetric=sym)))
    sym = scenario_to_dict(baseline_scenario())["symmetric"]
    sym["alpha"] = "high"
    with pytest.raises(ScenarioValidationError, match="alpha"):
        loads(json.dumps(_doc(symmetric=sym)))
    sym["alpha"] = -1.0
    with pytest.raises(ScenarioValidationError):
        loads(json.dumps(_doc(symmetric=sym)))
    doc = {"schema_version": 2, "scenario": scenario_to_dict(baseline_scenario())}
    with pytest.raises(ScenarioValidationError, match="version"):
        loads(json.dumps(doc))
    full = scenario_to_dict(baseline_scenario(), shorthand=False)
    full["n_domains"] = 5
    with pytest.raises(ScenarioValidationError, match="n_domains"):
        loads(json.dumps(_doc(**full)))


def test_malformed_json_reports_line():
    text = '{\n  "schema_version": 1,\n  "scenario": {\n    "symmetric": {,\n  }\n}\n'
    with pytest.raises(ScenarioParseError, match="line 4"):
        loads(text)


def test_file_errors_name_the_path(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{oops", encoding="utf-8")
    with pytest.raises(ScenarioParseError, match="bad.json"):
        load_scenario_file(path)


def test_explicit_matrices_preserved():
    s = scenario_from_dict({
        "domains": [
            {"alpha": 0.5, "gamma_q": 1.0, "gamma_g": 0.4, "kappa": 0.1},
            {"alpha": 0.6, "gamma_q": 1.0, "gamma_g": 0.4, "kappa": 0.1},
        ],
        "beta": 0.2,
        "lambda_matrix": [[0, 0.3], [0.5, 0]],
    })
    assert s.externality.tolist() == [0.5, 0.3]
    assert s.m_consumers == 0 and np.all(s.p_matrix == 0.5 * (1 - np.eye(2)))
