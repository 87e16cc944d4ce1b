import pytest

from ftqec.gadgets import build_ec, build_m
from ftqec.timing import TimingModel, timing


MODEL = TimingModel()


def test_gadget_depths_feed_the_model():
    assert build_ec("X").circuit.n_steps == MODEL.ec_x_depth
    assert build_m("X").circuit.n_steps == MODEL.m_depth
    # the interleaved full gadget takes exactly two extra steps
    assert build_ec("full").circuit.n_steps == MODEL.ec_x_depth + 2


def test_ec_time_identity_all_levels():
    for k in range(1, 11):
        assert MODEL.ec(k) == MODEL.ec_x(k) + 2 * MODEL.gate(k - 1)


def test_gate_recurrence():
    for k in range(1, 11):
        assert MODEL.gate(k) == 2 * MODEL.ec_x(k) + 5 * MODEL.gate(k - 1)
        assert MODEL.gate(k) == 2 * MODEL.ec(k) + MODEL.gate(k - 1)


def test_level_one_gap_is_three_slots():
    assert MODEL.gate(1) - MODEL.n(1) == 3 * MODEL.gate(0)


def test_n_time_inequality():
    for k in range(1, 11):
        assert MODEL.gate(k) - MODEL.n(k) > 2 * MODEL.gate(k - 1) > 0


def test_vn_bounded_by_protected_gate():
    for k in range(1, 11):
        assert MODEL.vn(k) <= MODEL.gate(k)


def test_voter_faster_than_ec_stage():
    for k in range(1, 11):
        assert MODEL.ec_x(k) > MODEL.m(k)


def test_timing_dispatch():
    assert timing(MODEL, "G", 0) == 1
    assert timing(MODEL, "EC", 1) == MODEL.ec(1)
    assert timing(MODEL, "VN_row", 2) == MODEL.vn(2)
    with pytest.raises(ValueError):
        timing(MODEL, "FROB", 1)
    with pytest.raises(ValueError):
        timing(MODEL, "G", -1)
