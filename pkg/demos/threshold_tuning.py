"""
Finding every distinct clustering
=================================

The threshold only matters where it crosses a similarity value, so a
bisection over hundredths finds each cluster count without sweeping all 101
thresholds.
"""
# %%
from otcluster import (discover_dfm, distinct_cluster_sets, load_fixture, sweep_clusters,
                       to_markov, tune_clusters)

m = to_markov(discover_dfm(load_fixture("order-handling")))
for row in m.sim_matrix.to_rows(decimals=4):
    print(" ".join(f"{cell:>8}" for cell in row))

# %%
# Bisection against the full sweep
# --------------------------------
tuned = tune_clusters(m)
swept = sweep_clusters(m)
print("thresholds evaluated:", len(tuned.entries), "of", len(swept.entries))
print("counts found:", sorted(set(tuned.counts().values())))
print("counts swept:", sorted(set(swept.counts().values())))

# %%
# Distinct partitions
# -------------------
for threshold, clusters in distinct_cluster_sets(tuned):
    print(f"from {threshold:.2f}: {clusters}")

# %%
# The literal variant evaluates one midpoint per side and stops.
print(tune_clusters(m, mode="literal").thresholds())
