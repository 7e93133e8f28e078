"""Deterministic event-driven engine for the multi-rail memory.

A :class:`Memory` holds a pool of spin-wave components in shared vapor.
Rails only determine where a component is born and which calibration it
inherits; once stored, components are purely spatial objects that every
subsequent operation can touch. Operations are applied in time order and
the engine is fully deterministic: identical inputs give bit-identical
traces.

A Memory is confined to one logical thread; run distinct instances for
parallel simulations. Sequences and traces are immutable.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Iterable

import numpy as np

from . import physics, seqlang
from .core import (
    DecayMode,
    DomainError,
    DuplicateRailError,
    OpKind,
    OpticalConfig,
    OutOfBandError,
    PhysicsParams,
    RailCalibration,
    Sequence,
    SpinWaveComponent,
    TimeOrderError,
    Trace,
    TraceEvent,
    UnknownRailError,
)

NS_PER_US = 1000.0


class Memory:
    """Multi-rail memory state: parameters, rail calibrations, component pool.

    All mutation goes through :meth:`pump`, :meth:`write`, :meth:`read`
    and :meth:`advance`; time never moves backwards.
    """

    def __init__(self, params: PhysicsParams, rails: Iterable[RailCalibration]):
        rails = tuple(rails)
        if not rails:
            raise DomainError("a memory needs at least one rail")
        self.params = params
        self._cal: dict[float, RailCalibration] = {}
        for cal in rails:
            if cal.f_rail in self._cal:
                raise DuplicateRailError(f"rail {cal.f_rail} MHz declared twice")
            if not params.in_band(cal.f_rail):
                lo, hi = params.band
                raise OutOfBandError(
                    f"rail {cal.f_rail} MHz outside deflector band [{lo}, {hi}] MHz")
            self._cal[cal.f_rail] = cal
        self.components: list[SpinWaveComponent] = []
        self.t_now_ns = 0.0
        self.last_op_t_ns: float | None = None
        # cell diffusion coefficient is fixed for the lifetime of the state
        self._diff = physics.diffusion_coefficient(params)

    @property
    def rails(self) -> tuple[RailCalibration, ...]:
        return tuple(self._cal.values())

    def calibration(self, f_rail: float) -> RailCalibration:
        try:
            return self._cal[f_rail]
        except KeyError:
            raise UnknownRailError(f"rail {f_rail} MHz was not declared") from None

    def advance(self, t_ns: float) -> None:
        """Advance time without performing an operation; components spread."""
        if t_ns < self.t_now_ns:
            raise TimeOrderError(
                f"cannot move from {self.t_now_ns} ns back to {t_ns} ns")
        dt_us = (t_ns - self.t_now_ns) / NS_PER_US
        if dt_us > 0.0 and self.components:
            self.components = [
                replace(c, s2=physics.spread_variance_um2(c.s2, dt_us, self._diff))
                for c in self.components
            ]
        self.t_now_ns = t_ns

    def stored_on(self, f_rail: float) -> float:
        """Total remaining amplitude of components centered on a rail."""
        x = physics.rail_position_um(self.calibration(f_rail).f_rail, self.params)
        return sum((c.amplitude for c in self.components if c.x_center == x), 0.0)

    def pump(self, f_rail: float, t_ns: float) -> None:
        """Optically pump the addressed region, removing residual excitation.

        Every component is scaled by (1 - pump_fidelity * dep(d)); with
        perfect pump fidelity the addressed region is emptied.
        """
        cal = self.calibration(f_rail)
        self.advance(t_ns)
        x_op = physics.rail_position_um(cal.f_rail, self.params)
        fid = self.params.pump_fidelity
        self.components = [
            replace(c, amplitude=c.amplitude * (
                1.0 - fid * physics.depletion_fraction(abs(x_op - c.x_center), self.params)))
            for c in self.components
        ]
        self.last_op_t_ns = t_ns

    def write(self, f_rail: float, t_ns: float, energy: float = 1.0) -> float:
        """Store a pulse on a rail; returns the leakage energy.

        The control field present during a write depletes pre-existing
        components exactly as a read would; whatever it retrieves from
        them is discarded, not added to the leakage.
        """
        cal = self.calibration(f_rail)
        if energy <= 0.0:
            raise DomainError("write energy must be strictly positive")
        self.advance(t_ns)
        x_op = physics.rail_position_um(cal.f_rail, self.params)
        self.components = [
            replace(c, amplitude=c.amplitude * (
                1.0 - physics.depletion_fraction(abs(x_op - c.x_center), self.params)))
            for c in self.components
        ]
        stored = energy * cal.eta_write
        leakage = energy - stored
        self.components.append(SpinWaveComponent(
            amplitude=stored,
            x_center=x_op,
            s2=self.params.sigma0 ** 2,
            t_birth_ns=t_ns,
            tau_us=cal.tau_us,
        ))
        self.last_op_t_ns = t_ns
        return leakage

    def read(self, f_rail: float, t_ns: float) -> float:
        """Retrieve from a rail; returns the total retrieved energy.

        Every component contributes its amplitude scaled by the read
        efficiency, its storage decay, and the overlap of the displaced
        read with its spread Gaussian; afterwards each component loses
        the depletion fraction for its distance.
        """
        cal = self.calibration(f_rail)
        self.advance(t_ns)
        x_op = physics.rail_position_um(cal.f_rail, self.params)
        diffusive = self.params.decay_mode is DecayMode.DIFFUSIVE
        retrieved = 0.0
        updated = []
        for c in self.components:
            d = abs(x_op - c.x_center)
            if diffusive:
                decay = physics.diffusive_retention(c.s2, self.params)
            else:
                age_us = (t_ns - c.t_birth_ns) / NS_PER_US
                decay = physics.temporal_decay(1.0, age_us, c.tau_us)
            retrieved += (c.amplitude * cal.eta_read * decay
                          * physics.overlap_factor(d, c.s2, self.params))
            updated.append(replace(c, amplitude=c.amplitude * (
                1.0 - physics.depletion_fraction(d, self.params))))
        self.components = updated
        self.last_op_t_ns = t_ns
        return retrieved


def new_memory(params: PhysicsParams, rails: Iterable[RailCalibration]) -> Memory:
    """Fresh memory with an empty component pool at t = 0."""
    return Memory(params, rails)


def run_sequence(state: Memory, seq: Sequence) -> Trace:
    """Apply a sequence to a memory, producing one trace event per operation.

    The sequence is validated against the memory's parameters first; any
    error-severity diagnostic aborts the run before the first operation.
    """
    diagnostics = seqlang.validate(seq, state.params)
    errors = [d for d in diagnostics if d.severity == "error"]
    if errors:
        raise seqlang.ValidationFailure(errors)
    events = []
    for op in seq.ops:
        if op.kind is OpKind.WRITE:
            out = state.write(op.f_rail, op.t_ns, op.energy)
        elif op.kind is OpKind.READ:
            out = state.read(op.f_rail, op.t_ns)
        else:
            state.pump(op.f_rail, op.t_ns)
            out = 0.0
        events.append(TraceEvent(
            t_ns=op.t_ns,
            kind=op.kind,
            f_rail=op.f_rail,
            out_energy=out,
            stored_after=state.stored_on(op.f_rail),
        ))
    return Trace(tuple(events))


def render_waveform(trace: Trace, cfg: OpticalConfig, sample_period_ns: float,
                    noise_floor: float = 0.0,
                    span_ns: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Render a trace as a sampled detector waveform.

    Each event becomes a Gaussian pulse of the signal FWHM centered at its
    time, with area equal to its energy; a constant noise floor is added
    to every sample. Returns (times_ns, intensity) arrays covering
    [0, span_ns) at the given period. The default span runs 600 ns past
    the last event so pulse tails are captured.
    """
    if sample_period_ns <= 0.0:
        raise DomainError("sample period must be strictly positive")
    if span_ns is None:
        last = trace.events[-1].t_ns if trace.events else 0.0
        span_ns = last + 600.0
    n = int(np.ceil(span_ns / sample_period_ns))
    t = np.arange(n) * sample_period_ns
    y = np.full(n, float(noise_floor))
    sigma = cfg.fwhm_signal_ns / (2.0 * np.sqrt(2.0 * np.log(2.0)))
    norm = 1.0 / (sigma * np.sqrt(2.0 * np.pi))
    for ev in trace.events:
        if ev.out_energy > 0.0:
            y += ev.out_energy * norm * np.exp(-((t - ev.t_ns) ** 2) / (2.0 * sigma * sigma))
    return t, y
