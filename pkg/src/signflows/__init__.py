"""signflows: Walsh analysis, semigroup-valued random flows, and
coalescing-walk webs, with exact cross-verification throughout.

The package keeps every quantity computable by two independent routes:
algebraic laws against closed-form products, spectral operators against
pointwise kernels, pathwise constructions against dynamic programs, and
rescaled discrete laws against their continuum targets.
"""

from .errors import (
    BudgetExceeded,
    DimensionTooLarge,
    InvalidParameter,
    InvariantViolation,
    ParityMismatch,
    SignflowsError,
)
from .semigroup import (
    G1Element,
    G2Element,
    G3Element,
    act,
    compose,
    project,
)
from .flow import FlowLaw, GeneratorSet, LatticePath, closed_form_law, flow_law, standard_generators
from .walsh import BlockPartition, Observable, SignVector, WalshSpectrum, walsh_transform
from .web import SignField, WebMap, compose_maps, critical_count, evolve_web

__version__ = "0.1.0"

__all__ = [
    "BlockPartition",
    "BudgetExceeded",
    "DimensionTooLarge",
    "FlowLaw",
    "G1Element",
    "G2Element",
    "G3Element",
    "GeneratorSet",
    "InvalidParameter",
    "InvariantViolation",
    "LatticePath",
    "Observable",
    "ParityMismatch",
    "SignField",
    "SignVector",
    "SignflowsError",
    "WalshSpectrum",
    "WebMap",
    "act",
    "closed_form_law",
    "compose",
    "compose_maps",
    "critical_count",
    "evolve_web",
    "flow_law",
    "project",
    "standard_generators",
    "walsh_transform",
]
