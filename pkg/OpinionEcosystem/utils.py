import os
import tempfile
import multiprocessing as mp
from typing import Callable, Iterable, List


def format_float(x: float) -> str:
    """shortest text that parses back to the same double"""
    return repr(float(x))


def atomic_write(path: str, content: str):
    """Write ``content`` to ``path`` through a temporary file in the same folder.

    The destination is replaced only once the whole content is on disk, so a
    failure never leaves a truncated file behind.
    """
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)

    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def pool_map(func: Callable, items: Iterable, threads: int = 1) -> List:
    """Map ``func`` over ``items``, in a process pool unless ``threads`` is 1.

    :param threads: number of processes, 0 or less for all cores
    :type threads: int
    """
    items = list(items)
    if threads == 1 or len(items) < 2:
        return [func(item) for item in items]

    with mp.Pool(processes=threads if threads >= 1 else mp.cpu_count()) as pool:
        return pool.map(func, items)
