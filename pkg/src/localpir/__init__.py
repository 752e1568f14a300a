"""Local private information retrieval on edge-replicated storage.

Servers are graph vertices; each message is an edge, stored at exactly its
two endpoint servers.  The privacy requirement is local: a server must not
learn which message is wanted whenever that message is one it stores.  The
package builds the known achievable schemes, verifies privacy by exact
enumeration, simulates retrievals, and computes capacity bounds.
"""

from .capacity import (
    BoundReport,
    BoundValue,
    Comparator,
    bipartite_lower_bound,
    equal_degree_bound,
    et_lower_bound,
    et_rate,
    family_bounds,
    graph_bounds,
    lambda_weight,
    union_capacity,
)
from .errors import LocalPIRError
from .field import Field, FieldElem, is_prime
from .graphs import (
    Graph,
    bipartition,
    build_graph,
    components,
    detect_family,
    family,
    graph_from_json,
    graph_to_json,
    is_edge_transitive,
    local_subgraph,
)
from .scheme import (
    PlanConfig,
    Randomness,
    SchemePlan,
    bipartite_config,
    build_bipartite_plan,
    build_et_plan,
    build_plan,
    build_plan_family,
    build_union_plan,
    decode,
    derive_recipe,
    et_config,
    et_download_cost,
    fixture_config,
    lex_subsets,
    occurrence_index,
    sample_randomness,
    subpacketization,
    to_physical,
    union_config,
)
from .sim import RateReport, Transcript, execute_plan, measure_rate, run_retrieval
from .verify import (
    DEFAULT_CAP,
    PrivacyReport,
    SchemeReport,
    canonical_privacy_probe,
    check_scheme,
    cost_audit,
    decode_check,
    enumerate_randomness,
    fingerprint_distribution,
    privacy_check,
    query_fingerprint,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "BoundValue", "Comparator", "DEFAULT_CAP", "Field",
    "FieldElem", "Graph", "LocalPIRError", "PlanConfig", "PrivacyReport",
    "RateReport", "Randomness", "SchemePlan", "SchemeReport", "Transcript",
    "bipartite_config", "bipartite_lower_bound", "bipartition",
    "build_bipartite_plan", "build_et_plan", "build_graph", "build_plan",
    "build_plan_family", "build_union_plan", "canonical_privacy_probe",
    "check_scheme", "components", "cost_audit", "decode", "decode_check",
    "derive_recipe", "detect_family", "enumerate_randomness",
    "equal_degree_bound", "et_config", "et_download_cost", "et_lower_bound",
    "et_rate", "execute_plan", "family", "family_bounds", "fixture_config",
    "fingerprint_distribution", "graph_bounds", "graph_from_json",
    "graph_to_json", "is_edge_transitive", "is_prime", "lambda_weight",
    "lex_subsets", "local_subgraph", "measure_rate", "occurrence_index",
    "privacy_check", "query_fingerprint", "run_retrieval",
    "sample_randomness", "subpacketization", "to_physical", "union_capacity",
    "union_config",
]
