"""Shared fixtures: synthetic cities, indexes, and acceptance reporting."""

from __future__ import annotations

from contextlib import contextmanager

import pytest

from landsig.grid import build_index
from landsig.ingest import store_from_events
from landsig.model import BoundingBox
from landsig.synth import DEFAULT_TZ_OFFSET_MINUTES, default_profiles, generate_city

TZ = DEFAULT_TZ_OFFSET_MINUTES

_acceptance_results: list[tuple[str, bool]] = []


def record_criterion(name: str, passed: bool) -> None:
    _acceptance_results.append((name, passed))


@contextmanager
def criterion(name: str):
    """Record one acceptance criterion's outcome for the terminal summary."""
    try:
        yield
    except BaseException:
        record_criterion(name, False)
        raise
    else:
        record_criterion(name, True)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, passed in _acceptance_results:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}")


def zone_box(profile) -> BoundingBox:
    """Envelope of a synthetic zone's rectangle."""
    outer = profile.polygon.outer
    return BoundingBox(
        lat_min=float(outer[:, 0].min()),
        lat_max=float(outer[:, 0].max()),
        lon_min=float(outer[:, 1].min()),
        lon_max=float(outer[:, 1].max()),
    )


def seed_box_at_center(profile, half_deg: float = 0.001) -> BoundingBox:
    outer = profile.polygon.outer
    clat = float(outer[:, 0].mean())
    clon = float(outer[:, 1].mean())
    return BoundingBox(clat - half_deg, clat + half_deg, clon - half_deg, clon + half_deg)


@pytest.fixture(scope="session")
def profiles():
    return default_profiles()


@pytest.fixture(scope="session")
def baseline_city(profiles):
    events, truth = generate_city(profiles, days=30, seed=7)
    store = store_from_events(events)
    return {
        "events": events,
        "truth": truth,
        "store": store,
        "index": build_index(store),
    }


@pytest.fixture(scope="session")
def test_city(profiles):
    events, truth = generate_city(profiles, days=30, seed=99)
    store = store_from_events(events)
    return {
        "events": events,
        "truth": truth,
        "store": store,
        "index": build_index(store),
    }
