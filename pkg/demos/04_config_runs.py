"""Config-driven runs: the same experiments the command line performs.

Each JSON file in demos/configs describes one experiment.  A run sweeps the
time samples in parallel, fits the decay slope, and writes run.csv and
report.json.  The CSV is identical whatever the worker count.

Run:  python demos/04_config_runs.py [output-dir]
Same thing from the shell:  asymprofile run demos/configs/heat_n1.json --out out/heat_n1
"""

import sys
import tempfile
from pathlib import Path

from asymprofile.experiment import load_config, plotdata, run, write_outputs

out_root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="asymprofile-"))
for path in sorted((Path(__file__).parent / "configs").glob("*.json")):
    config = load_config(path)
    report = run(config)
    csv_path, _ = write_outputs(report, out_root / path.stem)
    fit = report.fits["residual"]
    verdict = "pass" if report.passed else "FAIL"
    print(f"{path.stem:14s} slope {fit['slope']:+.4f} (expected {config.expected_slope:+.4f})  "
          f"C ~ {report.fitted_constant:.4g}  [{verdict}]  -> {csv_path}")
    for w in report.warnings:
        print(f"    warning: {w}")

print("\nfirst rows of the residual plot data for the last run:")
print("".join(plotdata(report, "residual").splitlines(keepends=True)[:4]))
