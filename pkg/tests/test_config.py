import json

import pytest

from scripts.extremes.config import ExperimentConfig, load_config, resolve_config
from scripts.extremes.errors import ConfigError
from scripts.extremes.observables import DEFAULT_CENTER
from scripts.tools import config_digest

MINIMAL = {"map": "tent", "observable": "neglog", "n": 1000, "trials": 100, "seed": 1}


def _write(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload))
    return str(path)


def test_minimal_config_gets_defaults(tmp_path):
    cfg = resolve_config("simulate-max", load_config(_write(tmp_path, MINIMAL)))
    assert cfg.command == "simulate-max"
    assert cfg.center == DEFAULT_CENTER
    assert cfg.windows == [[0.25, 1.0]]
    assert cfg.n == 1000 and cfg.trials == 100


def test_missing_required_field_is_named(tmp_path):
    payload = dict(MINIMAL)
    del payload["seed"]
    with pytest.raises(ConfigError, match="seed"):
        load_config(_write(tmp_path, payload))


def test_bad_files(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "nao_existe.json"))
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, "{map: tent"))
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, "[1, 2]"))


def test_unknown_fields_only_warn(tmp_path, capsys):
    values = load_config(_write(tmp_path, dict(MINIMAL, colour="azul")))
    assert "colour" not in values
    assert "colour" in capsys.readouterr().out


def test_unused_alpha_warns(capsys):
    resolve_config("simulate-max", MINIMAL, {"alpha": 0.5})
    assert "alpha" in capsys.readouterr().out


def test_flags_override_file_values():
    cfg = resolve_config("simulate-max", MINIMAL, {"n": 50, "seed": 9})
    assert cfg.n == 50 and cfg.seed == 9


@pytest.mark.parametrize(
    "override",
    [
        {"n": 0},
        {"trials": -1},
        {"map": "henon"},
        {"map": "lsv"},
        {"observable": "pareto"},
        {"thin": 1.5},
        {"windows": [[1.0, 0.5]]},
        {"t_start": 2.0, "t_end": 1.0},
        {"center": 1.0},
        {"record_horizon": 0.5},
        {"record_horizon": "longo"},
    ],
)
def test_invalid_values_raise_config_error(override):
    with pytest.raises(ConfigError):
        resolve_config("simulate-max", MINIMAL, override)


def test_observable_alpha_falls_back_to_map_alpha():
    cfg = resolve_config("simulate-max", dict(MINIMAL, observable="pareto", alpha=0.5))
    assert cfg.effective_obs_alpha == 0.5
    cfg = resolve_config("simulate-max", dict(MINIMAL, observable="pareto", alpha=0.5, obs_alpha=2.0))
    assert cfg.effective_obs_alpha == 2.0


def test_runtime_fields_do_not_change_the_hash():
    a = resolve_config("selftest", MINIMAL, {"workers": 1, "quiet": False})
    b = resolve_config("selftest", MINIMAL, {"workers": 4, "quiet": True, "assert_": True})
    assert "workers" not in a.to_dict()
    assert config_digest(a.to_dict()) == config_digest(b.to_dict())


def test_defaults_validate():
    assert ExperimentConfig().validate().map == "tent"
