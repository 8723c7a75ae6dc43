"""Numerical engine for holonomic gates on truncated Fock spaces.

Builds the coherent/squeeze operator families, their Berry connections and
curvatures (closed form and finite-difference), transports loops to
holonomies, audits the holonomy-algebra ranks and searches for gate loops.
"""

from .connection import (
    ClosedFormSource,
    Connection,
    NumericSource,
    closed_form,
    numeric_connection,
    pullback_coefficients,
)
from .curvature import TwoForm, closed_form_curvature, numeric_two_form, span_report
from .fock import FockSpace, build_space, vacuum_degeneracy_check
from .gates import cnot_gate, gate_distance, x_gate
from .holonomy import Loop, load_loop, save_loop, transport
from .operators import MODEL_INFO, ParamPoint, composite, operator
from .synthesis import LoopAnsatz, SynthesisResult, cnot_from_x, synthesize

__all__ = [
    "FockSpace",
    "build_space",
    "vacuum_degeneracy_check",
    "ParamPoint",
    "MODEL_INFO",
    "operator",
    "composite",
    "Connection",
    "ClosedFormSource",
    "NumericSource",
    "closed_form",
    "numeric_connection",
    "pullback_coefficients",
    "TwoForm",
    "closed_form_curvature",
    "numeric_two_form",
    "span_report",
    "Loop",
    "transport",
    "save_loop",
    "load_loop",
    "x_gate",
    "cnot_gate",
    "gate_distance",
    "LoopAnsatz",
    "SynthesisResult",
    "synthesize",
    "cnot_from_x",
]

__version__ = "0.1.0"
