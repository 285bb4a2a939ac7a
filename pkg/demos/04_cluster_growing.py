"""Grow clusters from small seed rectangles until their curves are complete.

Two routes do the same job: the interactive session protocol (open, revise,
finalize) that a human drives from the map UI, and the automated policy that
expands all four edges by a fixed step until every hour has activity or the
limits are hit. Both refuse to accept a cluster with a zero-count hour.
"""

from landsig.clusters import GrowthPolicy, auto_grow, finalize_session, open_session, revise_session
from landsig.errors import IncompleteClusterError
from landsig.grid import build_index
from landsig.ingest import store_from_events
from landsig.model import BoundingBox
from landsig.synth import DEFAULT_TZ_OFFSET_MINUTES as TZ
from landsig.synth import daytime_only_profile, default_profiles, generate_city

profiles = default_profiles()
events, _ = generate_city(profiles, days=30, seed=99)
index = build_index(store_from_events(events))

# --- the manual loop, scripted -------------------------------------------------

seed = BoundingBox(-27.4703, -27.4697, 153.0197, 153.0203)
session = open_session(seed, index, TZ, dataset="testcity")
print(f"seed box: {session.event_total} events, status={session.status}")

try:
    finalize_session(session, "accept")
except IncompleteClusterError as exc:
    print(f"accept refused while incomplete: {exc}")

step = 0
while session.status.value == "incomplete":
    step += 1
    revise_session(session, session.bbox.expand(0.002), index, TZ)
    print(f"  revision {step}: {session.event_total} events, status={session.status}")

cluster = finalize_session(session, "accept")
print(f"accepted after {len(session.history)} revisions; "
      f"signature peak hour {int(cluster.signature.values.argmax())}\n")

# --- the automated analogue ------------------------------------------------------

outcome = auto_grow(seed, GrowthPolicy(), index, TZ, dataset="testcity")
print("auto-grow trace (span in degrees, events, complete):")
for i, st in enumerate(outcome.trace):
    print(f"  iter {i}: span {st.bbox.lat_span:.4f} x {st.bbox.lon_span:.4f} "
          f"{st.event_total:5d} events {'complete' if st.complete else 'incomplete'}")
print(f"outcome: {outcome.reason}\n")

# --- a region that can never complete --------------------------------------------

day_events, _ = generate_city([daytime_only_profile()], days=30, seed=5)
day_index = build_index(store_from_events(day_events))
doomed = auto_grow(seed, GrowthPolicy(), day_index, TZ)
print(f"daytime-only region: discarded={doomed.discarded} at {doomed.reason} "
      f"after {len(doomed.trace)} looks")
