import os
from collections.abc import Iterator, Sequence
from typing import TypeVar

from .. import logger
from ..constants import DEFAULT_CHUNK_SIZE, MIN_CHUNK_SIZE

T = TypeVar("T")


def optimal_worker_stats(frontier_size, workers=None, min_chunk_size=MIN_CHUNK_SIZE):
    """
    Pick the number of threads and the chunk size for expanding one BFS level.
    """
    try:
        cpu_cores = os.cpu_count() or 4  # Default to 4 cores if unavailable
        workers = workers or cpu_cores

        # Ensure minimum states per chunk to avoid too many tiny tasks
        max_chunks = max(1, min(frontier_size // min_chunk_size,
                                workers * 4))  # Allow slight oversubscription
        optimal_threads = max(1, min(workers, max_chunks))

        chunk_size = max(min_chunk_size, -(-frontier_size // max_chunks))

        return optimal_threads, chunk_size

    except (TypeError, ValueError, ZeroDivisionError) as e:
        logger.error(f"Using default: {{threads: 4, chunk_size: {DEFAULT_CHUNK_SIZE}}} ({e})")
        return 4, DEFAULT_CHUNK_SIZE


def split_frontier(frontier: Sequence[T], chunk_size: int = DEFAULT_CHUNK_SIZE) -> Iterator[list[T]]:
    """
    Splits a frontier into fixed-size chunks and yields each chunk in order.
    """
    chunk: list[T] = []
    for i, state in enumerate(frontier):
        chunk.append(state)
        if (i + 1) % chunk_size == 0:  # Yield chunk when size is reached
            yield chunk
            chunk = []
    if chunk:  # Yield any remaining states
        yield chunk
