"""Extract normalized 24-hour signatures for rectangles and test completeness.

A rectangle's signature is its hourly event histogram divided by the hourly
average, so every curve has mean 1. A curve is "complete" when every hour
has at least one event; incomplete rectangles are not classifiable and get
discarded by the cluster workflow.
"""

from pathlib import Path

from landsig.grid import build_index, hourly_histogram
from landsig.ingest import store_from_events
from landsig.model import BoundingBox
from landsig.signature import chart_svg, is_complete, missing_hours, normalize
from landsig.synth import DEFAULT_TZ_OFFSET_MINUTES as TZ
from landsig.synth import default_profiles, generate_city

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

profiles = default_profiles()
events, _ = generate_city(profiles, days=30, seed=7)
index = build_index(store_from_events(events))

# A box over the whole business zone: dense, complete.
business = BoundingBox(-27.476, -27.464, 153.014, 153.026)
counts = hourly_histogram(index, business, TZ)
print(f"business zone box: {counts.total} events, complete={is_complete(counts)}")
sig = normalize(counts)
print("normalized values (hours 0-5):", [round(v, 3) for v in sig.tolist()[:6]])
print("normalized values (hours 12-17):", [round(v, 3) for v in sig.tolist()[12:18]])

# A tiny sliver at the zone center: too small to cover the quiet hours.
sliver = BoundingBox(-27.4705, -27.4695, 153.0195, 153.0205)
sliver_counts = hourly_histogram(index, sliver, TZ)
print(
    f"\ncenter sliver: {sliver_counts.total} events, complete={is_complete(sliver_counts)}, "
    f"missing hours {missing_hours(sliver_counts)}"
)

# An empty rectangle far from everything.
ocean = BoundingBox(-40.0, -39.9, 120.0, 120.1)
ocean_counts = hourly_histogram(index, ocean, TZ)
print(f"ocean box: {ocean_counts.total} events, complete={is_complete(ocean_counts)}")

svg_path = OUT / "02_business_signature.svg"
svg_path.write_text(chart_svg([("Business", sig)], title="Business zone signature"))
print(f"\nsignature chart -> {svg_path}")
