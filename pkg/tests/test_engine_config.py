import json

import pytest

from qwonder.engine_config import DEFAULTS, ENV_VARS, EngineConfig


@pytest.fixture
def fresh_config(monkeypatch, tmp_path):
    for var in ENV_VARS.values():
        monkeypatch.delenv(var, raising=False)
    path = tmp_path / 'qwonder_config.json'
    monkeypatch.setenv('QWONDER_CONFIG_FILE', str(path))
    monkeypatch.setattr(EngineConfig, '_config', None)
    return path


def test_defaults_without_a_file(fresh_config):
    assert EngineConfig.get_all_config() == DEFAULTS


def test_file_values_are_used(fresh_config):
    fresh_config.write_text(json.dumps({'step_budget': 50, 'log_level': 'debug'}))
    assert EngineConfig.get_step_budget() == 50
    assert EngineConfig.get_log_level() == 'DEBUG'
    assert EngineConfig.get_default_horizon() == DEFAULTS['default_horizon']


def test_environment_wins_over_the_file(fresh_config, monkeypatch):
    fresh_config.write_text(json.dumps({'cache_size': 10}))
    monkeypatch.setenv('QWONDER_CACHE_SIZE', '20')
    assert EngineConfig.get_cache_size() == 20


@pytest.mark.parametrize("raw", ['lots', '-5', '0'])
def test_invalid_numbers_fall_back(fresh_config, monkeypatch, raw):
    monkeypatch.setenv('QWONDER_DEFAULT_HORIZON', raw)
    assert EngineConfig.get_default_horizon() == DEFAULTS['default_horizon']


def test_unknown_log_level_falls_back(fresh_config, monkeypatch):
    monkeypatch.setenv('QWONDER_LOG_LEVEL', 'chatty')
    assert EngineConfig.get_log_level() == 'INFO'


def test_broken_file_is_ignored(fresh_config):
    fresh_config.write_text('{not json')
    assert EngineConfig.get_all_config() == DEFAULTS


def test_save_and_reload(fresh_config, monkeypatch):
    assert EngineConfig.save_config({'step_budget': 123})
    assert json.loads(fresh_config.read_text()) == {'step_budget': 123}
    assert EngineConfig.get_step_budget() == 123
    monkeypatch.setenv('QWONDER_STEP_BUDGET', '7')
    assert EngineConfig.get_step_budget() == 123
    assert EngineConfig.reload_config()['step_budget'] == 7
