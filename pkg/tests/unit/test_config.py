"""Unit tests for config module."""

import pytest

from src.config import CAP_OVERRIDE_ENV, DEFAULT_CAPS, Caps, default_db_path
from src.errors import PreconditionError


def test_default_caps():
    assert DEFAULT_CAPS.wsat_edges == 24
    assert DEFAULT_CAPS.workers == 1
    assert set(DEFAULT_CAPS.as_dict()) >= {"lp_exact_edges", "gamma_edges"}


def test_caps_must_be_positive():
    with pytest.raises(PreconditionError):
        Caps(wsat_edges=0)


def test_with_overrides():
    caps = Caps().with_overrides(wsat_edges="30", lp_edges=None)

    assert caps.wsat_edges == 30
    assert caps.lp_edges == DEFAULT_CAPS.lp_edges
    with pytest.raises(PreconditionError, match="unknown cap"):
        Caps().with_overrides(speed=3)


def test_caps_from_env(monkeypatch):
    monkeypatch.setenv(CAP_OVERRIDE_ENV, "wsat_edges=28, workers=4,")

    caps = Caps.from_env()

    assert caps.wsat_edges == 28
    assert caps.workers == 4


@pytest.mark.parametrize("raw", ["wsat_edges", "wsat_edges=lots", "colour=3"])
def test_caps_from_env_rejects_bad_values(raw, monkeypatch):
    monkeypatch.setenv(CAP_OVERRIDE_ENV, raw)

    with pytest.raises(PreconditionError):
        Caps.from_env()


def test_default_db_path(monkeypatch, mock_env_vars):
    assert default_db_path() == str(mock_env_vars)

    monkeypatch.delenv("WSAT_DB_PATH")
    assert default_db_path() == ":memory:"
