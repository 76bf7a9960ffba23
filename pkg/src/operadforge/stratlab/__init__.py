"""Cell models of truncated operads and bimodules, boundary colimits and surgery."""

from .builtins import (
    fm1_complex,
    fm1_model,
    interval_nullbordism_model,
    permutohedral_sphere,
    trivial_bimodule_model,
)
from .model import (
    Cell,
    CellModel,
    Complex,
    EquivariantComplex,
    Violation,
    attachments,
    boundary_colimit,
    dimension_ledger,
    index_trees,
    stratified_euler,
    stratum_codim,
    validate_complex,
    validate_model,
)
from .recognize import Recognition, components, free_action_check, recognize
from .surgery import ModelError, SurgeryResult, cone_fill, extend, extend_left, extend_right, flatten
from .worked import EXAMPLES, run_example

BUILTIN_MODELS = {
    "fm1": fm1_model,
    "interval": lambda: interval_nullbordism_model("right"),
    "interval-left": lambda: interval_nullbordism_model("left"),
    "trivial": trivial_bimodule_model,
}

__all__ = [
    "BUILTIN_MODELS",
    "Cell",
    "CellModel",
    "Complex",
    "EXAMPLES",
    "EquivariantComplex",
    "ModelError",
    "Recognition",
    "SurgeryResult",
    "Violation",
    "attachments",
    "boundary_colimit",
    "components",
    "cone_fill",
    "dimension_ledger",
    "extend",
    "extend_left",
    "extend_right",
    "flatten",
    "fm1_complex",
    "fm1_model",
    "free_action_check",
    "index_trees",
    "interval_nullbordism_model",
    "permutohedral_sphere",
    "recognize",
    "run_example",
    "stratified_euler",
    "stratum_codim",
    "trivial_bimodule_model",
    "validate_complex",
    "validate_model",
]
