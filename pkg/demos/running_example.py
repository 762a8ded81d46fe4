"""
Running example: orders, items and packages
===========================================

Three object types share a small order-handling process. Orders and items
move through the same activities, packages do their own thing. This script
walks from the raw log to clusters.
"""
# %%
# Load the log
# ------------
import numpy as np

from otcluster import discover_clusters, discover_dfm, load_fixture, to_markov

log = load_fixture("running-example")
print(len(log.events), "events,", len(log.objects), "objects, types", log.object_types)

# %%
# Directly-follows multigraph
# ---------------------------
# Every edge carries the object type whose lifecycle produced it.
dfm = discover_dfm(log)
for (source, otype, target), n in sorted(dfm.freq.items()):
    print(f"{source:>3} -[{otype}]-> {target:<3} x{n}")

# %%
# Transition probabilities and similarity
# ---------------------------------------
# Outgoing frequencies are normalised per (activity, type).
m = to_markov(dfm)
print("P(ca -> pi | o) =", round(m.prob["ca", "o", "pi"], 4))
print("order rows:", m.sim_matrix.order)
print(np.round(m.sim_matrix.values, 4))

# %%
# Clusters at a few thresholds
# ----------------------------
for threshold in (0.0, 0.01, 0.5, 0.77):
    print(f"{threshold:.2f}", discover_clusters(m, threshold))
