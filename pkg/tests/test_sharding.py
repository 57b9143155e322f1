import pytest

from hopforce.graph import popcount
from hopforce.sharding import resolve_jobs, run_sharded


def test_resolve_jobs(monkeypatch):
    monkeypatch.setattr("hopforce.sharding.cpu_count", lambda: 6)
    assert resolve_jobs(0) == 6
    assert resolve_jobs(None) == 6
    assert resolve_jobs(3) == 3


@pytest.mark.parametrize("jobs", [1, 2])
def test_results_keep_task_order(jobs):
    tasks = [0b1011, 0b1, 0, 0b111111, 0b10]
    assert list(run_sharded(popcount, tasks, jobs=jobs)) == [3, 1, 0, 6, 1]


def test_no_tasks():
    assert list(run_sharded(popcount, [], jobs=4)) == []
