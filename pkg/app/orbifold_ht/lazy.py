from threading import RLock
from collections.abc import Mapping


# Several threads may trigger the same fill at once; one lock serializes them.
_fill_lock = RLock()


class LazyTable(Mapping):
    """Read-only mapping whose values are computed on first access.

    ``factory(key)`` builds the value for ``key``; ``keys`` fixes the domain
    up front so iteration and ``len`` never compute anything.
    """

    def __init__(self, keys, factory):
        self._keys = tuple(keys)
        self._key_set = frozenset(self._keys)
        self._factory = factory
        self.data = {}

    def __getitem__(self, key):
        if key not in self._key_set:
            raise KeyError(key)
        try:
            return self.data[key]
        except KeyError:
            pass
        _fill_lock.acquire()
        try:
            if key not in self.data:
                self.data[key] = self._factory(key)
        finally:
            _fill_lock.release()
        return self.data[key]

    def __contains__(self, key):
        return key in self._key_set

    def __iter__(self):
        return iter(self._keys)

    def __len__(self):
        return len(self._keys)

    def filled(self):
        return len(self.data)


class LazyCache(object):
    """Open-domain variant: any hashable key, value built on first use."""

    def __init__(self, factory):
        self._factory = factory
        self.data = {}

    def get(self, key):
        try:
            return self.data[key]
        except KeyError:
            pass
        _fill_lock.acquire()
        try:
            if key not in self.data:
                self.data[key] = self._factory(key)
        finally:
            _fill_lock.release()
        return self.data[key]

    def __len__(self):
        return len(self.data)
