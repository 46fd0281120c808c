"""Local distinguishability of two-, three- and four-qubit orthogonal product bases."""

__version__ = "0.1.0"

from .opm_model import Opm, OpmError, catalog, expand_stars, get_opm, parse_opm, render_opm
from .instantiate import FamilyParams, Mode, OpbInstance, gram, instance, realize, sample_params, verify_opb
from .structure import (
    EquivalenceTransform,
    apply_equivalence,
    certify,
    decide_local_distinguishability,
    decompose,
    multiplicity_check,
    reducibility,
)
from .locc import (
    build_protocol_from_certificate,
    build_protocol_theorem1,
    first_round_triviality,
    nondisturbing_space,
    simulate,
)
from .teleport import distinguish_merged_3qubit, distinguish_merged_M49, ebit_sweep, merge

__all__ = [
    "EquivalenceTransform",
    "FamilyParams",
    "Mode",
    "OpbInstance",
    "Opm",
    "OpmError",
    "apply_equivalence",
    "build_protocol_from_certificate",
    "build_protocol_theorem1",
    "catalog",
    "certify",
    "decide_local_distinguishability",
    "decompose",
    "distinguish_merged_3qubit",
    "distinguish_merged_M49",
    "ebit_sweep",
    "expand_stars",
    "first_round_triviality",
    "get_opm",
    "gram",
    "instance",
    "merge",
    "multiplicity_check",
    "nondisturbing_space",
    "parse_opm",
    "realize",
    "reducibility",
    "render_opm",
    "sample_params",
    "simulate",
    "verify_opb",
]
