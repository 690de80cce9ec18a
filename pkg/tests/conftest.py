import numpy as np
import pytest

from swarmsched.model import CostRates, Task, Vm

ZERO_RATES = CostRates(0.0, 0.0, 0.0)


def make_tasks(lengths, payload=0.0):
    return [Task(i, float(x), 1, payload, payload) for i, x in enumerate(lengths)]


def make_vms(mips, ram=512.0, storage=3072.0, bw=1000.0):
    return [Vm(j, float(x), 1, ram, storage, bw) for j, x in enumerate(mips)]


@pytest.fixture
def toy():
    """Three tasks on two VMs with hand-computable loads."""
    return make_tasks([1000, 2000, 2000]), make_vms([100, 200]), np.array([0, 1, 1])
