import pytest

from src.core.config import BenchConfig, Config, ConLESConfig, RankingMode, RunConfig, SearchConfig


@pytest.fixture
def clean_env(monkeypatch):
    for name in (
        "CONLES_STATE_CAP", "CONLES_TIMEOUT", "CONLES_WINDOW_LENGTH", "CONLES_CANDIDATES",
        "CONLES_RANKING", "CONLES_JOBS", "CONLES_LOG_LEVEL",
    ):
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


def test_defaults(clean_env):
    config = Config.from_environment()
    assert config.conles.window_length == 50
    assert config.conles.candidates == 3
    assert config.conles.ranking is RankingMode.UNREACHABLE
    assert config.conles.search.state_cap == 1_000_000
    assert config.conles.search.timeout_seconds == 120.0
    assert config.validate() == (True, [])


def test_environment_values(clean_env):
    clean_env.setenv("CONLES_WINDOW_LENGTH", "10")
    clean_env.setenv("CONLES_CANDIDATES", "2")
    clean_env.setenv("CONLES_RANKING", "marginal")
    clean_env.setenv("CONLES_TIMEOUT", "1.5")
    clean_env.setenv("CONLES_JOBS", "4")
    config = Config.from_environment()
    assert config.conles.window_length == 10
    assert config.conles.candidates == 2
    assert config.conles.ranking is RankingMode.MARGINAL
    assert config.conles.search.timeout_seconds == 1.5
    assert config.run.jobs == 4


def test_unparsable_environment_values_are_reported(clean_env):
    clean_env.setenv("CONLES_WINDOW_LENGTH", "ten")
    clean_env.setenv("CONLES_RANKING", "greedy")
    config = Config.from_environment()
    assert config.conles.window_length == 50
    is_valid, errors = config.validate()
    assert not is_valid
    assert any("CONLES_WINDOW_LENGTH" in e for e in errors)
    assert any("CONLES_RANKING" in e for e in errors)


@pytest.mark.parametrize("config, fragment", [
    (Config(conles=ConLESConfig(window_length=0)), "window length"),
    (Config(conles=ConLESConfig(candidates=0)), "candidates"),
    (Config(conles=ConLESConfig(search=SearchConfig(state_cap=0))), "state cap"),
    (Config(conles=ConLESConfig(search=SearchConfig(timeout_seconds=-1))), "timeout"),
    (Config(run=RunConfig(jobs=0)), "jobs"),
    (Config(run=RunConfig(output_format="xml")), "output format"),
    (Config(bench=BenchConfig(repeat=0)), "repeat"),
    (Config(bench=BenchConfig(windows=(5, 0))), "window lengths"),
])
def test_validation_errors(config, fragment):
    is_valid, errors = config.validate()
    assert not is_valid
    assert any(fragment in e for e in errors)


def test_unknown_log_level(clean_env):
    clean_env.setenv("CONLES_LOG_LEVEL", "chatty")
    is_valid, errors = Config.from_environment().validate()
    assert not is_valid
    assert errors == ["unknown log level: chatty"]


def test_echo_and_as_dict():
    config = Config()
    assert config.conles.echo()["ranking"] == "unreachable"
    assert config.as_dict()["conles"]["ranking"] == "unreachable"
    assert config.as_dict()["run"]["jobs"] == 1


def test_timeout_none_disables_deadline():
    assert ConLESConfig(search=SearchConfig(timeout_seconds=None)).validate() == []
