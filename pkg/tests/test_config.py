import logging

import pytest

from src.config import (
    TIME_BUDGET_ENV,
    configure_logging,
    get_time_budget,
    load_config,
    oracle_limit_settings,
    parse_limit_overrides,
)
from src.errors import UsageError
from src.exact_oracles import OracleLimits


def test_config_has_every_section():
    cfg = load_config()
    for section in ("paths", "oracle_limits", "generators", "hansel", "mv_coloring", "reporting"):
        assert section in cfg


def test_missing_config_file():
    with pytest.raises(FileNotFoundError):
        load_config("configs/does_not_exist.yaml")


def test_time_budget_from_environment(monkeypatch):
    monkeypatch.setenv(TIME_BUDGET_ENV, "2.5")
    assert get_time_budget() == 2.5
    assert OracleLimits.from_config().time_budget == 2.5

    monkeypatch.setenv(TIME_BUDGET_ENV, "soon")
    with pytest.raises(RuntimeError):
        get_time_budget()


def test_time_budget_default(monkeypatch):
    monkeypatch.delenv(TIME_BUDGET_ENV, raising=False)
    assert get_time_budget() == float(load_config()["oracle_limits"]["time_budget"])
    assert get_time_budget(7.0) == 7.0


def test_overrides_win(monkeypatch):
    monkeypatch.setenv(TIME_BUDGET_ENV, "9")
    settings = oracle_limit_settings({"time_budget": 1.5, "max_edges_partition": 12})
    assert settings["time_budget"] == 1.5
    assert settings["max_edges_partition"] == 12
    assert settings["max_vertices_coloring"] == load_config()["oracle_limits"]["max_vertices_coloring"]


@pytest.mark.parametrize("overrides", [{"bogus": 1}, {"max_edges_cover_weight": 0}])
def test_bad_overrides(overrides):
    with pytest.raises(UsageError):
        oracle_limit_settings(overrides)


def test_parse_limit_overrides():
    assert parse_limit_overrides(None) == {}
    assert parse_limit_overrides("max_edges_partition=12, time_budget=0.5") == {
        "max_edges_partition": 12,
        "time_budget": 0.5,
    }
    with pytest.raises(UsageError):
        parse_limit_overrides("max_edges_partition")
    with pytest.raises(UsageError):
        parse_limit_overrides("max_edges_partition=lots")


def test_configure_logging_levels():
    configure_logging(verbose=True)
    assert logging.getLogger("src").level == logging.DEBUG
    configure_logging()
    assert logging.getLogger("src").level == logging.INFO
    assert len(logging.getLogger("src").handlers) == 1
