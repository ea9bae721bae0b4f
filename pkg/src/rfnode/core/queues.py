from collections import deque


class BoundedQueue:
    """FIFO with a hard capacity and an explicit overflow policy."""

    def __init__(self, capacity: int = 64, policy: str = "drop_newest"):
        if policy not in ("drop_newest", "drop_oldest"):
            raise ValueError(policy)
        self.capacity = capacity
        self.policy = policy
        self.dropped = 0
        self._items = deque()

    def push(self, item) -> bool:
        if len(self._items) >= self.capacity:
            self.dropped += 1
            if self.policy == "drop_newest":
                return False
            self._items.popleft()
        self._items.append(item)
        return True

    def pop(self):
        return self._items.popleft()

    def drain(self, limit=None):
        out = []
        while self._items and (limit is None or len(out) < limit):
            out.append(self._items.popleft())
        return out

    def __len__(self):
        return len(self._items)

    def __bool__(self):
        return bool(self._items)
