"""Self-orthogonal and self-dual codes over finite commutative chain rings of even characteristic."""

from .chain_ring import ChainRing, ChainRingSpec, InvalidRingSpec, OddKappaError, preset, ring_new
from .codes import (
    BlockCode,
    CodeChain,
    LinearCodeR,
    LinearCodeT,
    check_chain_conditions,
    is_self_dual,
    is_self_orthogonal,
    property_P_conditions,
    satisfies_property_P,
)
from .enumeration import (
    ChainConditionError,
    CountContext,
    FormulaInapplicable,
    count_sd_type,
    count_so_type,
    count_with_torsion_chain,
    iter_types,
    total_counts,
)
from .field_tower import GaloisRing, ResidueField
from .kernels import BACKEND
from .lift import ExistenceFailure, LiftError, WrongMode, construct, plan_steps, sample_construction

__all__ = [
    "BACKEND",
    "BlockCode",
    "ChainConditionError",
    "ChainRing",
    "ChainRingSpec",
    "CodeChain",
    "CountContext",
    "ExistenceFailure",
    "FormulaInapplicable",
    "GaloisRing",
    "InvalidRingSpec",
    "LiftError",
    "LinearCodeR",
    "LinearCodeT",
    "OddKappaError",
    "ResidueField",
    "WrongMode",
    "check_chain_conditions",
    "construct",
    "count_sd_type",
    "count_so_type",
    "count_with_torsion_chain",
    "is_self_dual",
    "is_self_orthogonal",
    "iter_types",
    "plan_steps",
    "preset",
    "property_P_conditions",
    "ring_new",
    "sample_construction",
    "satisfies_property_P",
    "total_counts",
]
