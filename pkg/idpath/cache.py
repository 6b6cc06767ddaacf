from collections import OrderedDict
from typing import Any, Hashable, Optional
import threading

from idpath.settings import settings


class LRUCache:
    """Thread-safe mapping that evicts the least recently used entry beyond `maxsize`."""

    def __init__(self, maxsize: Optional[int] = None):
        self.maxsize = settings.cache_size if maxsize is None else int(maxsize)
        if self.maxsize < 1:
            raise ValueError(f"cache maxsize must be >= 1, got {self.maxsize}")
        self._data: "OrderedDict[Hashable, Any]" = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key: Hashable, default: Any = None) -> Any:
        with self._lock:
            if key not in self._data:
                return default
            self._data.move_to_end(key)
            return self._data[key]

    def put(self, key: Hashable, value: Any) -> None:
        with self._lock:
            self._data[key] = value
            self._data.move_to_end(key)
            while len(self._data) > self.maxsize:
                self._data.popitem(last=False)

    def __contains__(self, key: Hashable) -> bool:
        with self._lock:
            return key in self._data

    def __len__(self) -> int:
        with self._lock:
            return len(self._data)

    def clear(self) -> None:
        with self._lock:
            self._data.clear()
