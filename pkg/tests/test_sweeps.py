import pytest

from qfermion.errors import ConfigurationError
from qfermion.sweeps import SweepBlock, block_instances, load_sweeps, sweep_instances, sweep_names


def test_names():
    assert {"small", "medium", "fermionic"} <= set(sweep_names())
    assert load_sweeps()["version"] == 1


def test_sizes_are_stable():
    assert len(sweep_instances("small")) == 25
    assert len(sweep_instances("medium")) == 61
    assert len(sweep_instances("fermionic")) == 1763


def test_medium_bounds():
    for inst in sweep_instances("medium"):
        assert inst.nu.size <= (4 if inst.rank == 1 else 3)
        assert max(inst.lam.coords) <= (4 if inst.rank == 1 else 2)
        assert all(len(c.parts) <= 3 for c in inst.nu)
        assert inst.is_admissible()


def test_block_order_deterministic():
    b = SweepBlock("A", 1, 2, 2, 2)
    assert [i.describe() for i in block_instances(b)] == [i.describe() for i in block_instances(b)]


def test_unknown_sweep():
    with pytest.raises(ConfigurationError):
        sweep_instances("nope")
