import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ftca import config
from ftca.engine import oracle_stable, run_full_sweep, run_to_fixed_point, step
from ftca.errors import CellInitiallyActive, GridMismatch
from ftca.grid import Topology
from ftca.rules import all_rules, parse_rule

from conftest import sq


def _topo(kind, n):
    return Topology.square(n) if kind == "sq" else Topology.triangular(2 * ((n + 1) // 2))


def test_step_by_hand():
    c = sq(["000", "101", "000"])
    nxt = step(parse_rule("2", "sq"), c)
    # (1,1) sees both actives; on a 3-torus (0,1) and (2,1) see nothing
    assert nxt.states.tolist() == [[0, 0, 0], [1, 1, 1], [0, 0, 0]]


def test_rule_1_grows_a_diamond():
    c = sq(["0000000", "0000000", "0000000", "0001000", "0000000", "0000000", "0000000"])
    tr = run_to_fixed_point(parse_rule("1", "sq"), c)
    assert tr.time_of((3, 4)) == 1
    assert tr.at(1).active_count() == 5


def test_grid_mismatch():
    with pytest.raises(GridMismatch):
        step(parse_rule("2", "tri"), sq(["00", "00"]))


def test_oracle_refuses_active_cell():
    with pytest.raises(CellInitiallyActive):
        oracle_stable(parse_rule("2", "sq"), sq(["10", "00"]), (0, 0))


@given(st.sampled_from(["sq", "tri"]), st.integers(2, 9), st.floats(0, 0.7),
       st.integers(0, 2**32), st.data())
def test_worklist_matches_full_sweep(kind, n, p, seed, data):
    rules = all_rules(_topo(kind, 2).kind)
    r = data.draw(st.sampled_from(rules))
    c = config.random(_topo(kind, n), p, seed)
    a = run_to_fixed_point(r, c)
    b = run_full_sweep(r, c)
    assert np.array_equal(a.activation_time, b.activation_time)
    assert a.steps_to_fix == b.steps_to_fix


@given(st.integers(2, 8), st.floats(0, 0.6), st.integers(0, 2**32))
def test_freezing_is_monotone_and_fixed(n, p, seed):
    r = parse_rule("24", "sq")
    c = config.random(Topology.square(n), p, seed)
    tr = run_to_fixed_point(r, c)
    prev = c.states
    for t in range(tr.steps_to_fix + 1):
        cur = tr.at(t).states
        assert (cur >= prev).all()
        prev = cur
    assert step(r, tr.fixed_point) == tr.fixed_point


def test_max_steps_truncates():
    c = sq(["1000000"] + ["0000000"] * 6)
    tr = run_to_fixed_point(parse_rule("1", "sq"), c, max_steps=2)
    assert tr.steps_to_fix == 2
    assert tr.activation_time.max() == 2
