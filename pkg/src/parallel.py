from typing import Callable, List, Optional, Sequence, TypeVar

from tqdm import tqdm
from tqdm.contrib.concurrent import process_map

T = TypeVar("T")
R = TypeVar("R")


def run_tasks(
    fn: Callable[[T], R],
    tasks: Sequence[T],
    threads: int = 1,
    desc: Optional[str] = None,
    progress: Optional[bool] = None,
) -> List[R]:
    """
    Map `fn` over `tasks` and return the results in task order.

    With threads > 1 the tasks go to a process pool; `fn` and the task payloads
    must then be picklable (module-level functions, functools.partial).
    `progress=None` lets tqdm decide (bars only on a TTY).
    """
    disable = None if progress is None else not progress
    if threads <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tqdm(tasks, desc=desc, disable=disable, leave=False)]
    chunksize = max(1, len(tasks) // (threads * 4))
    return process_map(
        fn,
        tasks,
        max_workers=threads,
        chunksize=chunksize,
        desc=desc,
        disable=disable,
        leave=False,
    )
