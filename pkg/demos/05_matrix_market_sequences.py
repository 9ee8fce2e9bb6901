# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Sequences on disk and the benchmark harness
#
# External matrices come in as a directory of Matrix Market files named
# `step_0000.mtx`, `step_0001.mtx`, ... with optional `step_NNNN.rhs.mtx`
# right-hand sides. Writing then reading is bit-exact.

# %%
import tempfile
from pathlib import Path

from amgreuse import gen_diffusion_sequence, mm_read, preset, read_sequence, write_sequence
from amgreuse.bench import main

workdir = Path(tempfile.mkdtemp())
systems = list(gen_diffusion_sequence(preset("slow", grid_n=48, steps=6)))
write_sequence(workdir, systems, symmetric=True, comments=["slow preset, 48x48"])
print(sorted(p.name for p in workdir.iterdir())[:4], "...")

A0, comments = mm_read(workdir / "step_0000.mtx", return_comments=True)
print("bit-exact:", A0.identical(systems[0][0]), "| comments:", comments)

# %%
loaded = list(read_sequence(workdir))
print(len(loaded), "steps loaded")

# %% [markdown]
# ## Running the harness
#
# `amgreuse-bench` (or `python -m amgreuse.bench`) runs the strategies over
# one sequence and prints a comparison table plus a setup-phase breakdown.
# Here it is called in-process on the directory written above.

# %%
status = main(["--sequence", str(workdir), "--strategies", "none,full,partial",
               "--steps-csv", str(workdir / "steps.csv")])
print("exit status", status)
print((workdir / "steps.csv").read_text().splitlines()[0])
