import pytest

import shufflab


def test_naive_strategy_cost():
    cost, ops = shufflab.run_strategy("naive", 4, 1)
    assert cost == 10
    assert len(ops) == 4


def test_oracle_small_cell():
    cost, witness = shufflab.optimal_cost(4, 2)
    assert cost == 6
    bins, replayed = shufflab.apply_ops(2, witness)
    assert replayed == cost
    assert sum(bins) == 4


def test_merging_matches_full_search():
    for n in range(1, 7):
        assert shufflab.optimal_cost(n, 2)[0] == shufflab.optimal_cost(n, 2, splits=True)[0]


def test_table_first_bin_count():
    assert shufflab.optimal_cost_table(6, 1) == [0, 1, 3, 6, 10, 15, 21]


def test_illegal_op_raises():
    with pytest.raises(ValueError):
        shufflab.apply_ops(1, [shufflab.ShuffleOp([], [2])])


def test_index_run_metrics():
    m = shufflab.run_index("stepped", 8, 4, 2, 512, 1)
    assert m["N"] == 512
    assert m["u"] > 0
    assert m["A"] >= 1


def test_reduce_certificate_verifies():
    cert = shufflab.reduce("lsm", 2, 1, 2)
    assert cert["verified"]
    assert cert["shuffle_cost"] <= cert["element_cost"]
    assert cert["contaminated"] <= 2


def test_tradeoff_classes():
    assert shufflab.tradeoff_region(1, 1, 1024) != "consistent"
    assert shufflab.tradeoff_region(10, 10, 1024) == "consistent"
