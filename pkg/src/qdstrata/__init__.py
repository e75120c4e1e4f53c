"""
Configurations of hat-homologous saddle connections on quadratic differentials.

The package enumerates admissible configurations of a stratum of quadratic
differentials, computes their principal boundary strata and detects such
configurations on explicit polygonal surfaces::

    >>> from qdstrata import enumerate_configurations
    >>> len(enumerate_configurations((2, 2)))
    3
"""

from .strata import QSingularityData, HSingularityData, parse_stratum, is_empty
from .confgraph import ConfGraph
from .configuration import (Configuration, validate, principal_boundary, boundary_text,
                            canonical_form)
from .enumerator import enumerate_configurations, genus2_table

__all__ = [
    "QSingularityData", "HSingularityData", "parse_stratum", "is_empty", "ConfGraph",
    "Configuration", "validate", "principal_boundary", "boundary_text", "canonical_form",
    "enumerate_configurations", "genus2_table",
]
