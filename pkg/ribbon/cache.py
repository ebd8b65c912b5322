"""
Caching system for ribbon-invariants.
Memoizes expensive pure computations (automorphism lists of p-groups,
Smith decompositions) behind thread-safe LRU caches.
"""

import functools
from threading import Lock
from typing import Any, Callable, Dict, Hashable, Optional, TypeVar

from cachetools import LRUCache

from ribbon.config import config
from ribbon.logging_config import get_logger

logger = get_logger(__name__)

T = TypeVar("T")

_MISSING = object()


class ComputationCache:
    """Thread-safe LRU cache with hit/miss statistics."""

    def __init__(self, max_size: int = 256):
        self.max_size = max_size
        self._cache: LRUCache = LRUCache(maxsize=max_size)
        self._lock = Lock()
        self._hits = 0
        self._misses = 0

    def get(self, key: Hashable, default: Any = None) -> Any:
        """Get value from cache."""
        with self._lock:
            value = self._cache.get(key, _MISSING)
            if value is _MISSING:
                self._misses += 1
                return default
            self._hits += 1
            return value

    def set(self, key: Hashable, value: Any) -> None:
        """Store a value, evicting the least recently used entry when full."""
        with self._lock:
            self._cache[key] = value

    def delete(self, key: Hashable) -> bool:
        """Delete key from cache."""
        with self._lock:
            if key in self._cache:
                del self._cache[key]
                return True
            return False

    def clear(self) -> None:
        """Clear all cache entries."""
        with self._lock:
            self._cache.clear()
            self._hits = 0
            self._misses = 0

    def __len__(self) -> int:
        with self._lock:
            return len(self._cache)

    def stats(self) -> Dict[str, Any]:
        """Get cache statistics."""
        with self._lock:
            total_requests = self._hits + self._misses
            hit_rate = (self._hits / total_requests) if total_requests > 0 else 0

            return {
                "size": len(self._cache),
                "max_size": self.max_size,
                "hits": self._hits,
                "misses": self._misses,
                "hit_rate": hit_rate,
                "total_requests": total_requests,
            }


class CachedFunction:
    """Decorator memoizing a pure function on its (hashable) arguments."""

    def __init__(self, cache: ComputationCache):
        self.cache = cache

    def __call__(self, func: Callable[..., T]) -> Callable[..., T]:
        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> T:
            key = (func.__module__, func.__qualname__, args, tuple(sorted(kwargs.items())))

            cached_result = self.cache.get(key, _MISSING)
            if cached_result is not _MISSING:
                logger.debug(f"Cache hit for {func.__name__}")
                return cached_result

            logger.debug(f"Cache miss for {func.__name__}")
            result = func(*args, **kwargs)
            self.cache.set(key, result)
            return result

        wrapper.cache = self.cache
        return wrapper


# Global cache instances
automorphism_cache = ComputationCache(max_size=config.cache_size)
smith_cache = ComputationCache(max_size=config.cache_size)


def cached_automorphisms(func: Optional[Callable[..., T]] = None):
    """Decorator for caching automorphism enumeration results."""
    decorator = CachedFunction(automorphism_cache)
    return decorator(func) if func is not None else decorator


def cached_smith(func: Optional[Callable[..., T]] = None):
    """Decorator for caching Smith decompositions."""
    decorator = CachedFunction(smith_cache)
    return decorator(func) if func is not None else decorator


class CacheManager:
    """Central cache management system."""

    def __init__(self):
        self.caches = {
            "automorphisms": automorphism_cache,
            "smith": smith_cache,
        }

    def get_stats(self) -> Dict[str, Dict[str, Any]]:
        """Get statistics for all caches."""
        return {name: cache.stats() for name, cache in self.caches.items()}

    def clear_all(self) -> None:
        """Clear all caches."""
        for cache in self.caches.values():
            cache.clear()
        logger.debug("All caches cleared")


# Global cache manager
cache_manager = CacheManager()
