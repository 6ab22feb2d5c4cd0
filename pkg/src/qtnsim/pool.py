"""Minimal deterministic worker-pool helper.

Results are returned in task-submission order regardless of completion
order, so reductions over them are independent of scheduling.  With
``workers <= 1`` everything runs inline on the calling thread.
"""

from __future__ import annotations

import concurrent.futures
import time


def run_tasks(fn, args: list, workers: int, deadline: float | None = None) -> list:
    """Map fn over args; entries that miss the deadline come back as None.

    The first task is always allowed to finish (callers rely on at least one
    result existing).
    """
    if workers <= 1:
        out = []
        for i, a in enumerate(args):
            if i > 0 and deadline is not None and time.monotonic() > deadline:
                out.append(None)
                continue
            out.append(fn(a))
        return out

    out = [None] * len(args)
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, a) for a in args]
        for i, fut in enumerate(futures):
            if i == 0 or deadline is None:
                out[i] = fut.result()
                continue
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                fut.cancel()
                continue
            try:
                out[i] = fut.result(timeout=remaining)
            except concurrent.futures.TimeoutError:
                fut.cancel()
    return out
