"""Spectral characterization of random graphs.

Estimate adjacency-spectrum densities, compute spectral entropy and
KL/JS divergences, fit random-graph parameters by minimum divergence,
select among candidate families, and bootstrap-test whether two graph
populations come from the same process.
"""
from .density import (SpectralDensity, Spectrum, average_density,
                      density_from_csv, density_to_csv, estimate_density,
                      kernel_bandwidth, sample_density, semicircle_density,
                      shared_grid, spectrum, spectrum_from_file,
                      spectrum_to_file)
from .divergence import (DivergenceValue, er_entropy_theoretical,
                         js_divergence, kl_divergence, spectral_entropy)
from .edgelist import read_edge_list, write_edge_list
from .errors import (ConfigError, DomainError, EdgeListError,
                     GridMismatchError, NetspectraError, NoFeasibleModelError,
                     NumericError)
from .estimation import (FitResult, ParameterGrid, ReferenceCache,
                         candidate_seed, fit, reference_density)
from .graphs import (ERDOS_RENYI, FAMILIES, SCALE_FREE, SMALL_WORLD, Graph,
                     ModelSpec, canonical_family, generate, generate_er,
                     generate_scale_free, generate_small_world)
from .jstest import (GraphSet, JsTestResult, degree_density, degree_graph_set,
                     js_test, paired_graph_sets, spectral_graph_set)
from .metrics import GraphMetrics, clustering_coefficient, metrics
from .selection import (RankedCandidate, SelectionResult, classify_network,
                        default_candidates, select_model)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DivergenceValue", "DomainError", "EdgeListError",
    "ERDOS_RENYI", "FAMILIES", "FitResult", "Graph", "GraphMetrics",
    "GraphSet", "GridMismatchError", "JsTestResult", "ModelSpec",
    "NetspectraError", "NoFeasibleModelError", "NumericError",
    "ParameterGrid", "RankedCandidate", "ReferenceCache", "SCALE_FREE",
    "SMALL_WORLD", "SelectionResult", "SpectralDensity", "Spectrum",
    "average_density", "candidate_seed", "canonical_family",
    "classify_network", "clustering_coefficient", "default_candidates",
    "degree_density", "degree_graph_set", "density_from_csv",
    "density_to_csv", "er_entropy_theoretical", "estimate_density", "fit",
    "generate", "generate_er", "generate_scale_free", "generate_small_world",
    "js_divergence", "js_test", "kernel_bandwidth", "kl_divergence",
    "metrics", "paired_graph_sets", "read_edge_list", "reference_density",
    "sample_density", "select_model", "semicircle_density", "shared_grid",
    "spectral_entropy", "spectral_graph_set", "spectrum",
    "spectrum_from_file", "spectrum_to_file", "write_edge_list",
]
