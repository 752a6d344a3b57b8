"""Assembly wiring: associative units behind sensory and motor muxes.

Classic configuration: an optional sensory unit (AS) that learns to
imitate the world, and a motor unit (AM) whose input is (sensory value,
own previous speech) and whose output drives the world and the speech
line. The sensory mux (NS) selects between the world's response and the
AS output; the motor mux (NM) selects between the teacher and the AM
output. The last motor slot feeds back into the AM input through a
one-cycle delay register.

Named-screen configuration: no AS; the AM input is (auditory name,
k visual slots, proprioceptive slot) and the motor is speech alone.
With the proprioceptive refresh wiring on, every cycle runs a second
half-step in which the just-spoken symbol arrives on the last input
slot and recharges the executed location.

One global cycle evaluates in a fixed order: world response (supplied
by the caller), AS interpret, sensory mux, AM interpret, motor mux,
learning commits, feedback register. Muxes are combinational; the only
cross-cycle values are the two registers. When the motor mux points at
the AM while an AS is present, the AS and the world see the previous
cycle's motor (held in a register); none of the shipped protocols
exercise that path.
"""

from __future__ import annotations

from dataclasses import replace

from .pem import CycleIO, Pem
from .rng import SplitMix64
from .symbols import Alphabet, Symbol


def ns_mux(ns_sel: int, world_value: Symbol, imagined: Symbol) -> Symbol:
    """Sensory selector: the world when sel is 1, the AS output when 0."""
    return world_value if ns_sel else imagined


def nm_mux(nm_sel: int, teacher_y: tuple[Symbol, ...], am_y: tuple[Symbol, ...]) -> tuple[Symbol, ...]:
    """Motor selector: the teacher when sel is 1, the AM output when 0."""
    return teacher_y if nm_sel else am_y


class BrainAssembly:
    def __init__(
        self,
        am_unit: Pem,
        as_unit: Pem | None = None,
        aud_alphabet: Alphabet | None = None,
        visual_width: int = 1,
        proprio_refresh: bool = False,
        ns_sel: int = 1,
        nm_sel: int = 1,
        feedback_on: bool = True,
    ):
        if visual_width < 1:
            raise ValueError("visual width must be >= 1")
        if as_unit is not None and aud_alphabet is not None:
            raise ValueError("no wiring defined for both an AS unit and an auditory input")
        if as_unit is not None:
            if as_unit.params.m != 2 or as_unit.params.p != 1:
                raise ValueError("the sensory unit takes (addr, din) and emits one value")
            if visual_width != 1:
                raise ValueError("an AS unit implies a single sensory slot")
            if am_unit.params.p < 2:
                raise ValueError("an AS unit reads the first two motor slots")
            if (as_unit.params.input_alphabets[0] is not am_unit.params.output_alphabets[0]
                    or as_unit.params.input_alphabets[1] is not am_unit.params.output_alphabets[1]):
                raise ValueError("the sensory unit watches motor slots 1 and 2; "
                                 "its input alphabets must be those slots' alphabets")
            sensory_slot = 1 if aud_alphabet is not None else 0
            if as_unit.params.output_alphabets[0] is not am_unit.params.input_alphabets[sensory_slot]:
                raise ValueError("the sensory output feeds the motor unit's sensory slot; "
                                 "their alphabets must be the same object")
        expected_m = (1 if aud_alphabet is not None else 0) + visual_width + 1
        if am_unit.params.m != expected_m:
            raise ValueError(
                f"motor unit needs {expected_m} input slots for this wiring, "
                f"has {am_unit.params.m}"
            )
        fb_in = am_unit.params.input_alphabets[-1]
        fb_out = am_unit.params.output_alphabets[-1]
        if fb_in is not fb_out:
            raise ValueError("feedback wire connects the last motor slot to the last "
                             "input slot; their alphabets must be the same object")
        self.am_unit = am_unit
        self.as_unit = as_unit
        self.aud_alphabet = aud_alphabet
        self.visual_width = visual_width
        self.proprio_refresh = proprio_refresh
        self.ns_sel = ns_sel
        self.nm_sel = nm_sel
        self.feedback_on = feedback_on
        self.feedback_reg: Symbol = fb_in.epsilon
        self.motor_reg: tuple[Symbol, ...] = tuple(a.epsilon for a in am_unit.params.output_alphabets)

    @property
    def empty_motor(self) -> tuple[Symbol, ...]:
        return tuple(a.epsilon for a in self.am_unit.params.output_alphabets)


def reset(assembly: BrainAssembly) -> None:
    """Zero every excitation and clear the registers; long-term memory of
    both units is untouched. Idempotent."""
    if assembly.as_unit is not None:
        assembly.as_unit.reset_e()
    assembly.am_unit.reset_e()
    assembly.feedback_reg = assembly.am_unit.params.input_alphabets[-1].epsilon
    assembly.motor_reg = assembly.empty_motor


def brain_cycle(
    assembly: BrainAssembly,
    world_dout: tuple[Symbol, ...],
    teacher_y: tuple[Symbol, ...] | None,
    aud: Symbol | None,
    wen_as: int,
    wen_am: int,
    rng: SplitMix64,
) -> tuple[tuple[Symbol, ...], dict[str, CycleIO]]:
    """One synchronized cycle; returns (motor output, unit snapshots)."""
    am = assembly.am_unit
    if len(world_dout) != assembly.visual_width:
        raise ValueError(
            f"world response must have {assembly.visual_width} slots, got {len(world_dout)}"
        )
    if teacher_y is None:
        teacher_y = assembly.empty_motor
    elif len(teacher_y) != am.params.p:
        raise ValueError(f"teacher output must have {am.params.p} slots")

    snapshots: dict[str, CycleIO] = {}

    as_pending = None
    sensory = tuple(world_dout)
    if assembly.as_unit is not None:
        motor_seen = teacher_y if assembly.nm_sel else assembly.motor_reg
        as_pending = assembly.as_unit.cycle_start(motor_seen[:2], rng)
        ns_y = ns_mux(assembly.ns_sel, world_dout[0], as_pending.y[0])
        sensory = (ns_y,)

    if assembly.aud_alphabet is not None:
        if aud is None:
            aud = assembly.aud_alphabet.epsilon
        am_x: tuple[Symbol, ...] = (aud,) + sensory
    else:
        if aud is not None:
            raise ValueError("this wiring has no auditory input slot")
        am_x = sensory
    if assembly.feedback_on and not assembly.proprio_refresh:
        am_x = am_x + (assembly.feedback_reg,)
    elif assembly.feedback_on and assembly.nm_sel:
        # refresh wiring during dictation: the proprio wire carries the
        # teacher's current utterance, so a written row records it
        am_x = am_x + (teacher_y[-1],)
    else:
        am_x = am_x + (am.params.input_alphabets[-1].epsilon,)

    am_pending = am.cycle_start(am_x, rng)
    motor = nm_mux(assembly.nm_sel, teacher_y, am_pending.y)

    if as_pending is not None:
        snapshots["AS"] = assembly.as_unit.cycle_finish(as_pending, (sensory[0],), wen_as)
    am_io = am.cycle_finish(am_pending, motor, wen_am)

    if assembly.proprio_refresh and assembly.feedback_on and not assembly.nm_sel:
        # the refresh half-step follows self-executed cycles only
        am.recharge_executed(am_io, motor[-1])
        am_io = replace(am_io, e=am.e.copy())
    snapshots["AM"] = am_io

    if assembly.feedback_on:
        assembly.feedback_reg = motor[-1]
    assembly.motor_reg = motor
    return motor, snapshots
