"""Verification workbench for classification aggregation functions.

Classifications map m objects onto p categories surjectively (no category
left empty); a classification aggregation function (CAF) maps a profile of
individual classifications to a single social one.  This package provides
executable axiom checkers, the known constructive aggregators, an exhaustive
constraint search deciding satisfiability of axiom sets at small instance
sizes, and mechanically checkable contradiction traces for the known
impossibility results.
"""

from cafbench.core import (
    CafTable,
    Instance,
    InstanceTooLargeError,
    Relabeling,
    count_surjections,
    enumerate_classifications,
    enumerate_profiles,
)
from cafbench.search import AxiomSet, SearchOutcome, brute_force_search, search

__all__ = [
    "AxiomSet",
    "CafTable",
    "Instance",
    "InstanceTooLargeError",
    "Relabeling",
    "SearchOutcome",
    "brute_force_search",
    "count_surjections",
    "enumerate_classifications",
    "enumerate_profiles",
    "search",
]

__version__ = "0.1.0"
