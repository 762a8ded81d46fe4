"""
Flattening and footprints
=========================

A baseline for comparison: flatten the log per object type, build a
footprint table from each flattened log and count agreeing cells.
"""
# %%
from otcluster import flatten, footprint_matrix, footprint_of, load_fixture

log = load_fixture("running-example")
flat = flatten(log, {"o"})
print(flat.to_csv().splitlines()[:4])

# %%
# One footprint per type
# ----------------------
for row in footprint_of(flat).table():
    print(" ".join(f"{cell:>3}" for cell in row))

# %%
# Pairwise agreement
# ------------------
fm = footprint_matrix(log)
for row in fm.to_rows(decimals=4):
    print(" ".join(f"{cell:>7}" for cell in row))
