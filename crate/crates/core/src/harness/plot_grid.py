#!/usr/bin/env python3
"""Signed contour of p_final from grid.csv (written alongside this script)."""
import csv
import math
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

here = os.path.dirname(os.path.abspath(__file__))
src = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "grid.csv")
meta, rows = {}, []
with open(src) as fh:
    for line in fh:
        if line.startswith("#"):
            key, _, val = line[1:].partition(":")
            meta[key.strip()] = val.strip()
        else:
            break
    fh.seek(0)
    reader = csv.DictReader(line for line in fh if not line.startswith("#"))
    for r in reader:
        rows.append(r)

x1 = sorted({float(r["axis1"]) for r in rows})
x2 = sorted({float(r["axis2"]) for r in rows})
z = np.full((len(x2), len(x1)), np.nan)
for r in rows:
    i, j = x1.index(float(r["axis1"])), x2.index(float(r["axis2"]))
    if r["status"] == "ok":
        z[j, i] = float(r["p_final"])
z = np.ma.masked_invalid(z)

lim = float(np.nanmax(np.abs(z))) if z.count() else 1.0
lim = lim if lim > 0 and math.isfinite(lim) else 1.0
fig, ax = plt.subplots(figsize=(6, 5))
mesh = ax.pcolormesh(x1, x2, z, cmap="RdBu", vmin=-lim, vmax=lim, shading="nearest")
if z.count() and z.min() < 0 < z.max():
    ax.contour(x1, x2, z, levels=[0.0], colors="k", linewidths=1.2)
fig.colorbar(mesh, ax=ax, label="p_final (Blue - Red)")
ax.set_xlabel(meta.get("axis1", "axis1").split(" in ")[0])
ax.set_ylabel(meta.get("axis2", "axis2").split(" in ")[0])
ax.set_title("{} ({} tier)".format(meta.get("scenario", ""), meta.get("tier", "")))
fig.tight_layout()
out = os.path.join(here, "grid.png")
fig.savefig(out, dpi=150)
print(out)
