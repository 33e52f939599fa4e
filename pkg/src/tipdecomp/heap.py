"""Indexed binary min-heap over dense integer keys with decrease-key.

Entries are ordered by ``(priority, key)``, so equal priorities come out in
ascending key order. Every public mutation is counted, which lets callers
audit the number of queue operations an algorithm performs.
"""

from __future__ import annotations

from typing import Iterable

__all__ = ["AddressablePriorityQueue"]


class AddressablePriorityQueue:
    def __init__(self, capacity: int):
        self._heap: list[int] = []
        self._prio: list[int] = [0] * capacity
        self._pos: list[int] = [-1] * capacity
        self.inserts = 0
        self.pops = 0
        self.decreases = 0
        self.removes = 0

    @classmethod
    def from_priorities(cls, priorities: Iterable[int], keys: Iterable[int] | None = None) -> "AddressablePriorityQueue":
        """Bulk-build in O(n); counts as one insert per entry."""
        prio = list(priorities)
        q = cls(len(prio))
        q._prio = prio
        heap = list(range(len(prio))) if keys is None else list(keys)
        q._heap = heap
        for i, key in enumerate(heap):
            q._pos[key] = i
        for i in reversed(range(len(heap) // 2)):
            q._sift_down(i)
        q.inserts = len(heap)
        return q

    @property
    def operations(self) -> int:
        return self.inserts + self.pops + self.decreases + self.removes

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)

    def __contains__(self, key: int) -> bool:
        return 0 <= key < len(self._pos) and self._pos[key] >= 0

    def priority(self, key: int) -> int:
        if key not in self:
            raise KeyError(key)
        return self._prio[key]

    def peek(self) -> tuple[int, int]:
        if not self._heap:
            raise IndexError("peek from empty queue")
        key = self._heap[0]
        return key, self._prio[key]

    def insert(self, key: int, priority: int) -> None:
        if key in self:
            raise KeyError(f"key {key} already queued")
        self.inserts += 1
        self._prio[key] = priority
        self._pos[key] = len(self._heap)
        self._heap.append(key)
        self._sift_up(len(self._heap) - 1)

    def pop(self) -> tuple[int, int]:
        """Remove and return ``(key, priority)`` of the minimum entry."""
        heap = self._heap
        if not heap:
            raise IndexError("pop from empty queue")
        self.pops += 1
        key = heap[0]
        last = heap.pop()
        self._pos[key] = -1
        if heap:
            heap[0] = last
            self._pos[last] = 0
            self._sift_down(0)
        return key, self._prio[key]

    def decrease_key(self, key: int, priority: int) -> None:
        pos = self._pos[key]
        if pos < 0:
            raise KeyError(key)
        if priority > self._prio[key]:
            raise ValueError("decrease_key cannot raise a priority")
        self.decreases += 1
        self._prio[key] = priority
        self._sift_up(pos)

    def remove(self, key: int) -> None:
        pos = self._pos[key]
        if pos < 0:
            raise KeyError(key)
        self.removes += 1
        heap = self._heap
        last = heap.pop()
        self._pos[key] = -1
        if pos < len(heap):
            heap[pos] = last
            self._pos[last] = pos
            self._sift_up(pos)
            self._sift_down(self._pos[last])

    def _sift_up(self, i: int) -> None:
        heap, prio, pos = self._heap, self._prio, self._pos
        key = heap[i]
        pk = prio[key]
        while i > 0:
            parent = (i - 1) >> 1
            other = heap[parent]
            po = prio[other]
            if po < pk or (po == pk and other < key):
                break
            heap[i] = other
            pos[other] = i
            i = parent
        heap[i] = key
        pos[key] = i

    def _sift_down(self, i: int) -> None:
        heap, prio, pos = self._heap, self._prio, self._pos
        size = len(heap)
        key = heap[i]
        pk = prio[key]
        while True:
            child = 2 * i + 1
            if child >= size:
                break
            c = heap[child]
            pc = prio[c]
            right = child + 1
            if right < size:
                r = heap[right]
                pr = prio[r]
                if pr < pc or (pr == pc and r < c):
                    child, c, pc = right, r, pr
            if pk < pc or (pk == pc and key < c):
                break
            heap[i] = c
            pos[c] = i
            i = child
        heap[i] = key
        pos[key] = i
