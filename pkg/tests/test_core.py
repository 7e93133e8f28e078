import dataclasses

import pytest
from hypothesis import given, strategies as st

from vapormem.core import (
    DecayMode,
    DuplicateRailError,
    FitResult,
    OpKind,
    Operation,
    OpticalConfig,
    ParamError,
    RailCalibration,
    Sequence,
    SpinWaveComponent,
    TraceEvent,
    UnknownRailError,
    default_optical,
    default_params,
    default_rails,
)


class TestDefaultParams:
    def test_calibrated_values(self):
        p = default_params()
        assert p.d0 == 0.24
        assert p.t0 == 273.15
        assert p.p0 == 760.0
        assert p.t_cell == 333.15
        assert p.p_buffer == 5.0
        assert p.w_signal == 270.0
        assert p.w_control == 350.0
        assert p.f_center == 200.0
        assert p.f_halfband == 50.0
        assert p.edge_loss == 0.25
        assert p.t_switch == 48.0
        assert p.pump_fidelity == 1.0
        assert p.decay_mode is DecayMode.EMPIRICAL

    def test_lateral_calibration_is_one_radius_per_8mhz(self):
        p = default_params()
        assert p.pos_per_mhz == pytest.approx(270.0 / 8.0)
        assert p.pos_per_mhz == 33.75

    def test_sigma0_is_half_signal_radius(self):
        p = default_params()
        assert p.sigma0 == p.w_signal / 2.0 == 135.0

    def test_bit_stable_across_calls(self):
        assert default_params() == default_params()
        assert default_rails() == default_rails()

    def test_band(self):
        p = default_params()
        assert p.band == (150.0, 250.0)
        assert p.in_band(150.0) and p.in_band(250.0)
        assert not p.in_band(149.999) and not p.in_band(250.001)

    @pytest.mark.parametrize("field,value", [
        ("d0", 0.0), ("d0", -1.0), ("t0", 0.0), ("p_buffer", -5.0),
        ("w_signal", 0.0), ("w_control", -1.0), ("sigma0", 0.0),
        ("w_dep", 0.0), ("m_dep", 0), ("f_halfband", 0.0),
        ("edge_loss", -0.1), ("edge_loss", 1.0), ("t_switch", 0.0),
        ("pump_fidelity", -0.1), ("pump_fidelity", 1.1), ("pos_per_mhz", 0.0),
    ])
    def test_invariants_rejected(self, field, value):
        with pytest.raises(ParamError):
            dataclasses.replace(default_params(), **{field: value})


class TestRailCalibration:
    def test_measured_table(self):
        rails = {c.f_rail: c for c in default_rails()}
        assert set(rails) == {170.0, 190.0, 210.0, 230.0}
        assert rails[190.0].tau_us == 5.4
        assert rails[190.0].eta_mem == 0.35
        assert rails[170.0].tau_us == 4.3 and rails[170.0].tau_err_us == 0.5
        assert rails[210.0].tau_us == 3.3 and rails[210.0].eta_mem == 0.39
        assert rails[230.0].tau_us == 2.6 and rails[230.0].tau_err_us == 0.3

    def test_symmetric_split_rail_230(self):
        cal = {c.f_rail: c for c in default_rails()}[230.0]
        assert cal.eta_write == cal.eta_read == pytest.approx(0.6, abs=1e-15)

    def test_all_rails_within_band(self):
        assert all(150.0 <= c.f_rail <= 250.0 for c in default_rails())

    def test_split_product_default_rails(self):
        for cal in default_rails():
            assert abs(cal.eta_write * cal.eta_read - cal.eta_mem) <= 1e-12 * cal.eta_mem

    @given(eta=st.floats(1e-6, 1.0), share=st.floats(0.0, 1.0))
    def test_split_product_any_share(self, eta, share):
        cal = RailCalibration.from_eta_mem(200.0, 3.0, 0.1, eta, write_share=share)
        assert abs(cal.eta_write * cal.eta_read - cal.eta_mem) <= 1e-12 * cal.eta_mem

    def test_inconsistent_split_rejected(self):
        with pytest.raises(ParamError):
            RailCalibration(190.0, 5.4, 0.7, eta_mem=0.35, eta_write=0.7, eta_read=0.7)

    @pytest.mark.parametrize("kwargs", [
        dict(tau_us=0.0), dict(tau_us=-1.0), dict(eta_mem=0.0), dict(eta_mem=1.5),
    ])
    def test_bad_values_rejected(self, kwargs):
        base = dict(f_rail=190.0, tau_us=5.4, tau_err_us=0.7, eta_mem=0.35)
        base.update(kwargs)
        with pytest.raises(ParamError):
            RailCalibration.from_eta_mem(**base)


class TestOperationAndSequence:
    def test_write_requires_positive_energy(self):
        with pytest.raises(ParamError):
            Operation(0.0, OpKind.WRITE, 190.0, energy=0.0)
        # reads ignore energy entirely
        Operation(0.0, OpKind.READ, 190.0, energy=0.0)

    def test_negative_time_rejected(self):
        with pytest.raises(ParamError):
            Operation(-1.0, OpKind.READ, 190.0)

    def test_unsorted_ops_rejected(self):
        ops = (Operation(400.0, OpKind.WRITE, 190.0), Operation(0.0, OpKind.READ, 190.0))
        with pytest.raises(ParamError):
            Sequence("s", (190.0,), ops)

    def test_equal_times_rejected(self):
        ops = (Operation(400.0, OpKind.WRITE, 190.0), Operation(400.0, OpKind.READ, 190.0))
        with pytest.raises(ParamError):
            Sequence("s", (190.0,), ops)

    def test_undeclared_rail_rejected(self):
        with pytest.raises(UnknownRailError):
            Sequence("s", (190.0,), (Operation(0.0, OpKind.WRITE, 210.0),))

    def test_duplicate_declared_rail_rejected(self):
        with pytest.raises(DuplicateRailError):
            Sequence("s", (190.0, 190.0), ())

    def test_empty_sequence_ok(self):
        seq = Sequence("empty", (), ())
        assert seq.span_ns == 0.0

    def test_src_lines_ignored_by_equality(self):
        ops = (Operation(0.0, OpKind.WRITE, 190.0),)
        a = Sequence("s", (190.0,), ops, src_lines=(3,), rails_line=2)
        b = Sequence("s", (190.0,), ops)
        assert a == b


class TestValueTypes:
    def test_component_invariants(self):
        SpinWaveComponent(0.5, 0.0, 18225.0, 0.0, 5.4)
        with pytest.raises(ParamError):
            SpinWaveComponent(-0.1, 0.0, 18225.0, 0.0, 5.4)
        with pytest.raises(ParamError):
            SpinWaveComponent(0.5, 0.0, 0.0, 0.0, 5.4)

    def test_trace_event_invariants(self):
        TraceEvent(0.0, OpKind.READ, 190.0, 0.0, 0.0)
        with pytest.raises(ParamError):
            TraceEvent(0.0, OpKind.READ, 190.0, -1e-9, 0.0)
        with pytest.raises(ParamError):
            TraceEvent(0.0, OpKind.READ, 190.0, 0.0, -1.0)

    def test_fit_result_invariants(self):
        FitResult(1.0, 3.3, 0.0, 0.0, 0.0)
        with pytest.raises(ParamError):
            FitResult(1.0, 0.0, 0.0, 0.0, 0.0)
        with pytest.raises(ParamError):
            FitResult(1.0, 3.3, 0.0, 0.0, -1.0)

    def test_optical_defaults(self):
        cfg = default_optical()
        assert cfg.fwhm_signal_ns == 25.0
        assert cfg.fwhm_control_ns == 43.75
        assert cfg.norm_detuning_ghz == 2.0
        assert cfg.pump_power_mw == 20.0 and cfg.pump_duration_ns == 900.0
        assert cfg.control_power_mw == 200.0 and cfg.control_gate_ns == 120.0
        with pytest.raises(ParamError):
            OpticalConfig(fwhm_signal_ns=0.0)
