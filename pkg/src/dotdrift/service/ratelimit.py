"""Per-client sliding-window rate limiter (in-memory)."""

from __future__ import annotations

import threading
import time
from collections import deque


class SlidingWindowLimiter:
    def __init__(self, limit: int, window_seconds: float = 60.0, clock=time.monotonic):
        self.limit = limit
        self.window_seconds = window_seconds
        self._clock = clock
        self._windows: dict[str, deque] = {}
        self._lock = threading.Lock()

    def allow(self, key: str) -> bool:
        """Record one request for ``key``; False when over the limit."""
        if self.limit <= 0:
            return True
        now = self._clock()
        cutoff = now - self.window_seconds
        with self._lock:
            window = self._windows.setdefault(key, deque())
            while window and window[0] <= cutoff:
                window.popleft()
            if len(window) >= self.limit:
                return False
            window.append(now)
            return True

    def prune(self) -> None:
        """Drop keys with no requests inside the window."""
        cutoff = self._clock() - self.window_seconds
        with self._lock:
            stale = [k for k, w in self._windows.items() if not w or w[-1] <= cutoff]
            for k in stale:
                del self._windows[k]
