"""The whole pipeline through the installed CLI, exactly as a batch user runs it.

synth (two cities) -> ingest x2 -> template -> auto-grow x4 -> classify ->
validate -> report. Everything lands in demos/output/pipeline/.
"""

import subprocess
import sys
from pathlib import Path

OUT = Path(__file__).parent / "output" / "pipeline"
OUT.mkdir(parents=True, exist_ok=True)

SEEDS = [
    ("-27.471", "-27.469", "153.019", "153.021"),
    ("-27.471", "-27.469", "153.049", "153.051"),
    ("-27.441", "-27.439", "153.019", "153.021"),
    ("-27.441", "-27.439", "153.049", "153.051"),
]


def run(*args):
    cmd = ["landsig", *[str(a) for a in args]]
    print("$", " ".join(cmd))
    result = subprocess.run(cmd, cwd=OUT)
    if result.returncode != 0:
        sys.exit(result.returncode)


run("synth", "--days", 30, "--seed", 7, "--out-dir", "baseline")
run("synth", "--days", 30, "--seed", 99, "--out-dir", "testcity")
run("ingest", "--in", "baseline/events.csv", "--format", "csv",
    "--tz-offset", 600, "--out", "baseline.npz")
run("ingest", "--in", "testcity/events.csv", "--format", "csv",
    "--tz-offset", 600, "--out", "testcity.npz")
run("template", "--store", "baseline.npz", "--zones", "baseline/zones.json",
    "--out", "template.json")

grow = ["auto-grow", "--store", "testcity.npz", "--out", "clusters.json"]
for box in SEEDS:
    grow += ["--seed-bbox", *box]
run(*grow)

run("classify", "--template", "template.json", "--store", "testcity.npz",
    "--bbox", "-27.476", "-27.464", "153.014", "153.026")
run("validate", "--clusters", "clusters.json", "--zones", "testcity/zones.json",
    "--template", "template.json", "--out", "validation.csv")
run("report", "--out-dir", "report", "--template", "template.json",
    "--clusters", "clusters.json", "--zones", "testcity/zones.json")

print("\nvalidation table:")
print((OUT / "validation.csv").read_text())
print(f"artifacts under {OUT}")
