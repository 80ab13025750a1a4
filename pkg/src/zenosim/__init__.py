"""Zeno-machine and infinite-time Turing machine toolkit.

Two-tape Turing machines simulated finitely, with every infinite stage
replaced by an explicit symbolic limit operation.
"""

from .counter import (
    HalvingCounter,
    compare_counters,
    counter_init,
    halve,
    halve_past_limit,
    last_digit,
    take_limit,
    value,
)
from .machine import (
    Configuration,
    MachineSpec,
    OracleIf,
    RunResult,
    StepOutcome,
    Tape,
    initial_config,
    run,
    step,
    validate_spec,
)
from .dovetail import (
    DovetailState,
    build_program_y,
    classify_halting_profile,
    mark_limit,
    paradox_report,
    run_dovetail,
    u_decide,
)
from .oracles import OracleTable, Stub
from .ordinal import OMEGA, OrdinalBound, OrdinalTime, big_o, bound_add, ord_add, ord_compare
from .progformat import decode_universal, encode_for_universal, parse, parse_file, serialize
from .universal import language_equiv_bounded, right_mover_to_dfa, simulate
from .zenohalt import Exhausted, HaltVerdict, zeno_halt_check
from .zenotime import ZenoSchedule, step_duration, wall_time, wall_time_limit

__version__ = "0.1.0"
