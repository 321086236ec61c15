"""
The five-step command-line pipeline, end to end
===============================================

Drives extract -> select -> train -> evaluate -> report on the bundled
50-message corpus, exactly as a batch job would, and shows what lands in
the output directory. Rerunning with the same seed reproduces every file
byte for byte (only run.log carries timestamps).
"""

import json
import subprocess
import sys
import tempfile
from importlib.resources import files
from pathlib import Path

dataset = files("rumorfuse") / "resources" / "mini" / "messages.jsonl"
out = Path(tempfile.mkdtemp(prefix="rumorfuse_demo_")) / "run"

steps = [
    ["extract", "--dataset", str(dataset), "--out", str(out)],
    ["select", "--out", str(out), "--top-k", "10"],
    ["train", "--out", str(out), "--fusion", "early", "--ensemble", "stacking"],
    ["evaluate", "--out", str(out)],
    ["report", "--out", str(out)],
]
for step in steps:
    print(f"$ rumorfuse {' '.join(step)}")
    r = subprocess.run(
        [sys.executable, "-m", "rumorfuse.cli", *step],
        capture_output=True,
        text=True,
    )
    if r.returncode != 0:
        sys.exit(f"step failed ({r.returncode}):\n{r.stderr}")

# what the run produced
print("\noutput tree:")
for p in sorted(out.rglob("*")):
    if p.is_file():
        print(f"  {p.relative_to(out)}  ({p.stat().st_size} bytes)")

manifest = json.loads((out / "models" / "pipeline.json").read_text())
print(f"\ntrained with fusion={manifest['fusion']}, seed={manifest['seed']}, "
      f"{len(manifest['feature_names'])} features")

print("\nheld-out metrics (report/summary.txt):")
print((out / "report" / "summary.txt").read_text())
