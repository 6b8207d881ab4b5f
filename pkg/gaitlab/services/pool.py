import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional

from ..config import worker_count

logger = logging.getLogger(__name__)


def ordered_map(fn: Callable, items: Iterable, workers: Optional[int] = None) -> List:
    """Map `fn` over `items`, results in input order.

    `workers` of None uses GAITLAB_WORKERS; 1 runs in-process. `fn` must be a
    module-level function for the process pool to pickle it.
    """
    items = list(items)
    workers = worker_count() if workers is None else max(1, int(workers))
    workers = min(workers, len(items)) if items else 1
    if workers <= 1:
        return [fn(item) for item in items]
    logger.debug(f"dispatching {len(items)} tasks to {workers} workers")
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
