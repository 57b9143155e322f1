#!/usr/bin/env python3
"""
Process-pool sharding for batch rows and enumeration chunks

Results always come back in task order so that output does not depend on
the number of workers.
"""
import logging
from multiprocessing import Pool, cpu_count

from tqdm import tqdm


def resolve_jobs(jobs):
    """Worker count; 0 or None means one per CPU"""
    if not jobs or jobs < 0:
        return cpu_count()
    return jobs


def run_sharded(func, tasks, jobs=1, progress=False, desc=None):
    """Yield func(task) for every task, in order

    func must be a module-level function when jobs > 1.
    """
    tasks = list(tasks)
    jobs = min(resolve_jobs(jobs), max(len(tasks), 1))
    bar = tqdm(total=len(tasks), desc=desc, disable=not progress, leave=False)
    logging.debug(f"running {len(tasks)} task(s) on {jobs} worker(s)")
    try:
        if jobs == 1:
            for result in map(func, tasks):
                bar.update(1)
                yield result
        else:
            with Pool(processes=jobs) as pool:
                for result in pool.imap(func, tasks):
                    bar.update(1)
                    yield result
    finally:
        bar.close()
