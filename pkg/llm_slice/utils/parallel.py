"""parallel.py - Parallel Processing Utilities

This module provides utilities for running independent simulation jobs using multithreading.

Functions:
    - threaded_map: Multi-threaded mapping of a function to an iterable, results returned in input order.
"""

import threading
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

from tqdm.auto import tqdm


def threaded_map(
    target: Callable,
    args_list: Iterable[Tuple],
    timeout: Optional[float] = None,
    max_n_threads: Optional[int] = None,
    progress_bar=True,
    leave=True,
    desc="Running jobs",
) -> List[Any]:
    """
    Multi-threaded mapping of a function to an iterable of argument tuples.

    Every call runs in its own thread. Return values are collected and handed back
    in the order of `args_list`, so the caller sees a deterministic result regardless
    of which thread finished first. If any call raised, the exception of the earliest
    argument tuple is re-raised after all threads have been joined.

    Parameters:
        target (Callable): The function to apply to each argument tuple.
        args_list (Iterable[Tuple]): Argument tuples, unpacked into `target`.
        timeout (float, optional): The maximum amount of time (in seconds) to wait for a thread to finish. Default is None, which means wait indefinitely.
        max_n_threads (int, optional): The maximum number of threads to run concurrently. Default is None, which means entire args_list will be processed concurrently.
        progress_bar (bool, optional): Enable or disable the progress bar. Default is True.
        leave (bool, optional): Whether to leave the progress bar after completion. Default is True.
        desc (str, optional): Progress bar label. Default is "Running jobs".

    Returns:
        List[Any]: target(*args) for every args in args_list, in input order.

    Example:

        .. code-block:: python

            from llm_slice.utils import threaded_map

            def run_one(mode, seed):
                return Simulation(scenario.with_mode(mode), seed).run()

            # at most 4 runs at a time
            traces = threaded_map(run_one, [("static", 1), ("dynamic", 1)], max_n_threads=4)
    """

    args_list = list(args_list)
    results: Dict[int, Any] = {}
    errors: Dict[int, BaseException] = {}

    def wrapper(index: int, args: Tuple):
        try:
            results[index] = target(*args)
        except BaseException as exc:  # pylint: disable = broad-except
            errors[index] = exc

    bar = tqdm(total=len(args_list), desc=desc, leave=leave, disable=not progress_bar)

    threads: List[threading.Thread] = []
    for n, args in enumerate(args_list):
        # launch thread
        thread = threading.Thread(target=wrapper, args=(n, args), name=f"{n}_{args}"[:50])
        thread.start()
        threads.append(thread)

        # wait for the batch to finish
        if max_n_threads and len(threads) >= max_n_threads:
            for thread in threads:
                thread.join(timeout=timeout)
                bar.update(1)
            threads = []

    # wait for remaining threads to finish
    for thread in threads:
        thread.join(timeout=timeout)
        bar.update(1)
    bar.close()

    if errors:
        raise errors[min(errors)]

    return [results[n] for n in range(len(args_list))]
