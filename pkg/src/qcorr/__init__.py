"""Correlation measures for small multipartite quantum systems."""
from .correlation import (CorrelationReport, SetPartition, analyze, decompose, index_of_correlation,
                          lambda_parameter, mutual_information, pairwise_expansion)
from .entropy import partial_trace, von_neumann_entropy
from .errors import QCorrError
from .ghz_audit import AuditResult, audit_simultaneous_optimality, check_ghz_form, maximize_index
from .partitions import enumerate_integer_partitions, enumerate_set_partitions, partition_count
from .states import MultipartiteState, bell, classical_correlated, ghz, load_state, w_state

__all__ = [
    "AuditResult", "CorrelationReport", "MultipartiteState", "QCorrError", "SetPartition",
    "analyze", "audit_simultaneous_optimality", "bell", "check_ghz_form", "classical_correlated",
    "decompose", "enumerate_integer_partitions", "enumerate_set_partitions", "ghz",
    "index_of_correlation", "lambda_parameter", "load_state", "maximize_index", "mutual_information",
    "pairwise_expansion", "partial_trace", "partition_count", "von_neumann_entropy", "w_state",
]
