from concurrent.futures import ThreadPoolExecutor


def map_ordered(func, items, threads=1):
    """
    map func over items, with up to `threads` worker threads.
    Results are returned in the order of items regardless of the scheduling, so the output never depends on the
    number of threads. threads <= 1 runs inline.
    """
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as executor:
        return list(executor.map(func, items))
