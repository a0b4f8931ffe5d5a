"""Possibility & certainty reputation grading and grade-filtered MANET routing."""

from .classifier import (
    MAXR,
    MINR,
    REPUTATION_VALUE_ERROR,
    CooperationClass,
    Grade,
    Method,
    Mode,
    QueryRange,
    ReputationDomainError,
    ReputationInterval,
    classify_batch,
    classify_interval,
    classify_point,
    grade_to_class,
)
from .expert import Admission, ClassificationTable, ExpertNode, NodeStrength, admit, classify_network, node_strength
from .reputation import Observation, ObservationKind, ReputationLedger, ReputationParams
from .routing import RoutePath, Tier, Topology, TopologySpec, allowed_subgraph, build_topology, select_path
from .simulator import BehaviorProfile, Metrics, Policy, ProfileSpec, SimConfig, compare, run

__version__ = "0.1.0"
