"""Session protocol and automated growth."""

import numpy as np
import pytest

from conftest import TZ, seed_box_at_center, zone_box
from landsig.clusters import (
    GrowthPolicy,
    SessionStatus,
    auto_grow,
    finalize_session,
    open_session,
    revise_session,
)
from landsig.errors import (
    DegenerateBoxError,
    IncompleteClusterError,
    SessionClosedError,
)
from landsig.grid import build_index
from landsig.ingest import store_from_events
from landsig.model import BoundingBox
from landsig.synth import daytime_only_profile, generate_city

OCEAN = BoundingBox(-40.0, -39.9, 120.0, 120.1)


@pytest.fixture(scope="module")
def daytime_city():
    profile = daytime_only_profile()
    events, _ = generate_city([profile], days=30, seed=17)
    store = store_from_events(events)
    return {"profile": profile, "index": build_index(store)}


def test_open_session_on_dense_zone_is_complete(test_city, profiles):
    session = open_session(zone_box(profiles[0]), test_city["index"], TZ, dataset="test")
    assert session.status is SessionStatus.COMPLETE
    assert session.event_total > 0
    assert session.history == []


def test_open_session_on_empty_ocean_is_incomplete(test_city):
    session = open_session(OCEAN, test_city["index"], TZ)
    assert session.status is SessionStatus.INCOMPLETE
    assert session.event_total == 0


def test_open_session_validates_seed(test_city):
    with pytest.raises(DegenerateBoxError):
        open_session(BoundingBox(1.0, 1.0, 0.0, 1.0), test_city["index"], TZ)


def test_revision_to_identical_bbox_grows_history(test_city, profiles):
    box = zone_box(profiles[0])
    session = open_session(box, test_city["index"], TZ)
    before = session.counts
    revise_session(session, box, test_city["index"], TZ)
    assert session.counts == before
    assert session.history == [box]


def test_growing_revision_flips_status(test_city, profiles):
    # start on a sliver too small for overnight activity, then take the zone
    box = zone_box(profiles[0])
    clat = (box.lat_min + box.lat_max) / 2
    clon = (box.lon_min + box.lon_max) / 2
    sliver = BoundingBox(clat - 1e-4, clat + 1e-4, clon - 1e-4, clon + 1e-4)
    session = open_session(sliver, test_city["index"], TZ)
    assert session.status is SessionStatus.INCOMPLETE
    revise_session(session, box, test_city["index"], TZ)
    assert session.status is SessionStatus.COMPLETE
    assert session.history == [sliver]


def test_accept_complete_session_yields_cluster(test_city, profiles):
    box = zone_box(profiles[1])
    session = open_session(box, test_city["index"], TZ, dataset="test")
    cluster = finalize_session(session, "accept")
    assert session.status is SessionStatus.ACCEPTED
    assert cluster.bbox == box
    assert cluster.origin["mode"] == "manual"
    assert abs(float(np.mean(cluster.signature.values)) - 1.0) <= 1e-9


def test_accept_incomplete_session_fails_and_stays_open(test_city):
    session = open_session(OCEAN, test_city["index"], TZ)
    with pytest.raises(IncompleteClusterError):
        finalize_session(session, "accept")
    assert session.status is SessionStatus.INCOMPLETE
    assert finalize_session(session, "discard") is None
    assert session.status is SessionStatus.DISCARDED


def test_closed_sessions_reject_revision_and_refinalize(test_city, profiles):
    session = open_session(zone_box(profiles[0]), test_city["index"], TZ)
    finalize_session(session, "accept")
    with pytest.raises(SessionClosedError):
        revise_session(session, OCEAN, test_city["index"], TZ)
    with pytest.raises(SessionClosedError):
        finalize_session(session, "discard")


def test_finalize_rejects_unknown_decision(test_city, profiles):
    session = open_session(zone_box(profiles[0]), test_city["index"], TZ)
    with pytest.raises(ValueError):
        finalize_session(session, "maybe")


# --- auto_grow ---------------------------------------------------------------


def test_auto_grow_completes_inside_dense_zone(test_city, profiles):
    outcome = auto_grow(seed_box_at_center(profiles[0]), GrowthPolicy(), test_city["index"], TZ)
    assert outcome.cluster is not None
    assert outcome.reason == "complete"
    assert outcome.cluster.origin["iterations"] == len(outcome.trace) - 1
    assert (outcome.cluster.signature.values >= 0).all()


def test_auto_grow_bboxes_are_nested_and_counts_monotone(test_city, profiles):
    outcome = auto_grow(
        seed_box_at_center(profiles[2], half_deg=2e-4), GrowthPolicy(), test_city["index"], TZ
    )
    steps = outcome.trace
    for earlier, later in zip(steps, steps[1:]):
        assert later.bbox.lat_min <= earlier.bbox.lat_min
        assert later.bbox.lat_max >= earlier.bbox.lat_max
        assert later.bbox.lon_min <= earlier.bbox.lon_min
        assert later.bbox.lon_max >= earlier.bbox.lon_max
        assert all(
            later.counts[h] >= earlier.counts[h] for h in range(24)
        )


def test_auto_grow_is_deterministic(test_city, profiles):
    seed = seed_box_at_center(profiles[3], half_deg=3e-4)
    policy = GrowthPolicy()
    a = auto_grow(seed, policy, test_city["index"], TZ)
    b = auto_grow(seed, policy, test_city["index"], TZ)
    assert len(a.trace) == len(b.trace)
    for step_a, step_b in zip(a.trace, b.trace):
        assert step_a.bbox == step_b.bbox
        assert step_a.counts == step_b.counts
    assert a.cluster.signature == b.cluster.signature


def test_auto_grow_single_iteration_keeps_complete_seed(test_city, profiles):
    seed = zone_box(profiles[0])
    outcome = auto_grow(seed, GrowthPolicy(max_iterations=1), test_city["index"], TZ)
    assert outcome.cluster is not None
    assert outcome.cluster.bbox == seed
    assert outcome.cluster.origin["iterations"] == 0


def test_auto_grow_daytime_only_region_discards_at_max_span(daytime_city):
    seed = seed_box_at_center(daytime_city["profile"])
    outcome = auto_grow(seed, GrowthPolicy(), daytime_city["index"], TZ)
    assert outcome.discarded
    assert outcome.reason == "max_span"
    # overnight hours can never fill in
    assert all(not step.complete for step in outcome.trace)


def test_auto_grow_respects_iteration_budget(test_city):
    # an empty region with a generous span ceiling runs out of iterations
    outcome = auto_grow(
        OCEAN, GrowthPolicy(step_deg=0.001, max_span_deg=10.0, max_iterations=3),
        test_city["index"], TZ,
    )
    assert outcome.discarded
    assert outcome.reason == "max_iterations"
    assert len(outcome.trace) == 4  # seed plus three expansions


def test_accepted_clusters_never_have_zero_hours(test_city, daytime_city, profiles):
    policies = [
        GrowthPolicy(),
        GrowthPolicy(step_deg=0.001, max_span_deg=0.03, max_iterations=8),
    ]
    seeds = [seed_box_at_center(p, half_deg=h) for p in profiles for h in (2e-4, 1e-3)]
    seeds.append(seed_box_at_center(daytime_city["profile"]))
    for policy in policies:
        for seed in seeds:
            for index in (test_city["index"], daytime_city["index"]):
                outcome = auto_grow(seed, policy, index, TZ)
                if outcome.cluster is not None:
                    assert (outcome.cluster.signature.values > 0).all()
                    assert outcome.trace[-1].complete


def test_growth_policy_validation():
    with pytest.raises(ValueError):
        GrowthPolicy(step_deg=0)
    with pytest.raises(ValueError):
        GrowthPolicy(max_iterations=0)
    with pytest.raises(ValueError):
        GrowthPolicy(max_span_deg=-1)
