"""The report pipeline: sweep runs, CSV reports, emitted plot scripts.

Everything here also works from the shell via the ``maxaffine-attn`` command;
this script drives the same machinery through the Python API and leaves a
report, a curve file, and a ready-to-run matplotlib script in demos/output/.
"""

from pathlib import Path

from maxaffine_attn.cli import config_from_args, run

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

# grid-size sweep at a fixed target accuracy (temperature chosen per row)
sweep_out = out_dir / "sweep.csv"
config = config_from_args([
    "sweep", "--function", "sinprod", "--d", "1", "--n", "2",
    "--P", "4,8,16,32", "--epsilon", "0.1", "--samples", "500",
    "--seed", "0", "--out", str(sweep_out)])
assert run(config) == 0
print(f"sweep report: {sweep_out}")
for row in config.rows:
    print(f"  P={row['P_or_Nx']:3d}  sup_err={row['sup_err']:.4f}")
print(f"plot script (never executed by the harness): {sweep_out}.plot.py")

# a 1-D run leaves an overlay curve next to its report
overlay_out = out_dir / "step1d.csv"
config = config_from_args([
    "approximate", "--function", "step1d", "--d", "1", "--n", "1",
    "--P", "64", "--temperature", "5000", "--samples", "500",
    "--seed", "0", "--out", str(overlay_out)])
assert run(config) == 0
print(f"\noverlay report: {overlay_out}")
print(f"curve data: {overlay_out}.curve.csv")
print(f"plot script: {overlay_out}.plot.py")
print("\nrun the emitted scripts with python to render PNGs")
