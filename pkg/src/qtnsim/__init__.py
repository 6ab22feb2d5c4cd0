"""qtnsim: quantum-circuit simulation on statevectors or contracted tensor
networks, with path search, index slicing, and three gradient engines.
"""

from . import errors
from .circuit import (Circuit, GateInstance, Measurement, ParamRef,
                      PauliString, UnitaryGate, build_circuit)
from .circuit_json import parse as circuit_from_json, \
    serialize as circuit_to_json
from .compiler import (CompiledCircuit, GradMethod, Mode, TnOptions, compile,
                       evaluate, evaluate_with_stats)
from .gates import GateKind
from .gradients import GradientConfig, jacobian
from .slicing import SlicingConfig, SlicingPlan, greedy_slice, \
    pseudo_slice_cost, two_phase_search

__version__ = "0.1.0"

__all__ = [
    "errors",
    "Circuit", "GateInstance", "Measurement", "ParamRef",
    "PauliString", "UnitaryGate", "build_circuit",
    "circuit_from_json", "circuit_to_json",
    "CompiledCircuit", "GradMethod", "Mode", "TnOptions", "compile",
    "evaluate", "evaluate_with_stats",
    "GateKind",
    "GradientConfig", "jacobian",
    "SlicingConfig", "SlicingPlan", "greedy_slice", "pseudo_slice_cost",
    "two_phase_search",
    "__version__",
]
