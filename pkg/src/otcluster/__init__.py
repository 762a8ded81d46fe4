"""Object-type clustering for object-centric event logs.

Discover a directly-follows multigraph from a JSON-OCEL log, turn it into
per-type transition matrices, measure how alike object types behave and
group them by a similarity threshold.
"""
from .clustering import (ClusterSet, TuningResult, brute_force_clusters, discover_clusters,
                         distinct_cluster_sets, sweep_clusters, tune_clusters)
from .dfm import (Dfm, MarkovDfm, SimilarityMatrix, dfm_from_json, dfm_to_json, discover_dfm,
                  export_dot, pairwise_similarity, postset, preset, similarity_matrix, to_markov)
from .errors import *  # noqa: F401,F403
from .fixtures import load_fixture, running_example_log
from .footprint import (FlattenedLog, Footprint, Relation, flatten, footprint_matrix,
                        footprint_of, footprint_similarity)
from .ocel_io import (Event, ObjectInstance, OcelLog, SyntheticSpec, TraceTemplate,
                      generate_synthetic_log, ordered_events_for_object, parse_ocel, read_ocel,
                      write_ocel)

__version__ = "0.1.0"
