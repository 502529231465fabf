"""Exact combinatorics of biased graphs on the complete graph.

Cycles of K_n, the overlap graph, biased-clique counting, the container
algorithm, compression, abelian labellings and diamond rings.
"""

from biaslab.bias import (
    BiasSet,
    SimpleGraph,
    count_biased_cliques,
    count_biased_graphs,
    is_biased_clique,
    is_biased_graph,
    is_scarce,
    max_stable_set,
    sample_bias,
)
from biaslab.bounds import bounds_report
from biaslab.cache import cache_load, cache_save
from biaslab.compression import build_scheme, compress, reconstruct
from biaslab.containers import container_params, run_containers
from biaslab.cycles import (
    Cycle,
    CycleCatalog,
    canonical_cycle,
    catalog_for,
    cycle_count_by_length,
    edge_index,
    enumerate_cycles,
    hamilton_ids,
)
from biaslab.labelling import (
    AbelianGroup,
    EdgeLabelling,
    abelian_labellable,
    balanced_set,
    zero_patterns,
)
from biaslab.overlap import (
    OverlapGraph,
    build_overlap,
    compute_sn_and_bounds,
    cycles_adjacent,
    theta_triples,
    third_cycle,
)
from biaslab.rings import enumerate_diamond_rings, monte_carlo

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup",
    "BiasSet",
    "Cycle",
    "CycleCatalog",
    "EdgeLabelling",
    "OverlapGraph",
    "SimpleGraph",
    "abelian_labellable",
    "balanced_set",
    "bounds_report",
    "build_overlap",
    "build_scheme",
    "cache_load",
    "cache_save",
    "canonical_cycle",
    "catalog_for",
    "compress",
    "compute_sn_and_bounds",
    "container_params",
    "count_biased_cliques",
    "count_biased_graphs",
    "cycle_count_by_length",
    "cycles_adjacent",
    "edge_index",
    "enumerate_cycles",
    "enumerate_diamond_rings",
    "hamilton_ids",
    "is_biased_clique",
    "is_biased_graph",
    "is_scarce",
    "max_stable_set",
    "monte_carlo",
    "reconstruct",
    "run_containers",
    "sample_bias",
    "theta_triples",
    "third_cycle",
    "zero_patterns",
]
