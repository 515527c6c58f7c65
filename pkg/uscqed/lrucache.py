"""Least Recently Used cache mapping, safe to share between sweep workers.
"""

from __future__ import absolute_import, unicode_literals

import typing

import threading
from collections import OrderedDict

if typing.TYPE_CHECKING:
    from typing import Callable

_K = typing.TypeVar("_K")
_V = typing.TypeVar("_V")


class LRUCache(OrderedDict, typing.Generic[_K, _V]):
    """A dictionary-like container that stores a given maximum items.

    If an additional item is added when the LRUCache is full, the least
    recently used key is discarded to make room for the new item. All
    access goes through a lock so one cache may serve several threads.

    """

    def __init__(self, cache_size):
        # type: (int) -> None
        """Create a new LRUCache with the given size."""
        if cache_size < 1:
            raise ValueError("cache_size must be >= 1")
        self.cache_size = cache_size
        self.hits = 0
        self.misses = 0
        self._lock = threading.RLock()
        super(LRUCache, self).__init__()

    def __setitem__(self, key, value):
        # type: (_K, _V) -> None
        """Store a new value, potentially discarding an old value."""
        with self._lock:
            if key not in self:
                if len(self) >= self.cache_size:
                    OrderedDict.__delitem__(self, next(iter(self)))
            OrderedDict.__setitem__(self, key, value)

    def __getitem__(self, key):
        # type: (_K) -> _V
        """Get the item, but also makes it most recent."""
        with self._lock:
            value = OrderedDict.__getitem__(self, key)
            self.move_to_end(key)
            return value

    def get_or_compute(self, key, factory):
        # type: (_K, Callable[[], _V]) -> _V
        """Return the cached value for ``key``, computing it on a miss.

        The factory runs outside the lock; when two threads miss on the
        same key both compute and the last value stored wins.

        """
        with self._lock:
            if key in self:
                self.hits += 1
                return self[key]
            self.misses += 1
        value = factory()
        self[key] = value
        return value
