"""Deterministic simulator for excitation-modulated memory machines.

The package builds up in layers: symbols and alphabets, a random-access
world (GRAM), the excitation-modulated unit itself, a two-unit brain
assembly, experiment protocols with independent oracles, and a script
language with replayable traces.
"""

from .brain import BrainAssembly, brain_cycle
from .brain import reset as brain_reset
from .experiments import (
    ExperimentReport,
    ProtocolError,
    covering_schedule,
    run_mental_set,
    run_mental_set_endurance,
    run_mental_set_suite,
    run_theorem3,
    run_theorem4,
    t_decay,
    tau_min,
)
from .gram import GramState, RuleKind, classify_rule, gram_new, gram_step
from .pem import CapacityError, CycleIO, Pem, PemParams
from .rng import SplitMix64
from .script import (
    ReplayResult,
    ScriptError,
    Session,
    parse_script,
    replay,
    run_script,
    run_script_text,
)
from .symbols import Alphabet, Symbol, make_alphabet
from .trace import ReplayError

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "BrainAssembly",
    "CapacityError",
    "CycleIO",
    "ExperimentReport",
    "GramState",
    "Pem",
    "PemParams",
    "ProtocolError",
    "ReplayError",
    "ReplayResult",
    "RuleKind",
    "ScriptError",
    "Session",
    "SplitMix64",
    "Symbol",
    "brain_cycle",
    "brain_reset",
    "classify_rule",
    "covering_schedule",
    "gram_new",
    "gram_step",
    "make_alphabet",
    "parse_script",
    "replay",
    "run_mental_set",
    "run_mental_set_endurance",
    "run_mental_set_suite",
    "run_script",
    "run_script_text",
    "run_theorem3",
    "run_theorem4",
    "t_decay",
    "tau_min",
    "__version__",
]
