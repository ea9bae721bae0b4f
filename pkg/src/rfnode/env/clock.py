class VirtualClock:
    """Integer-microsecond clock, advanced only by explicit charges."""

    def __init__(self, now_us: int = 0):
        self._now = int(now_us)

    @property
    def now(self) -> int:
        return self._now

    @property
    def millis(self) -> int:
        return self._now // 1000

    def advance(self, dt_us: int) -> int:
        if dt_us < 0:
            raise ValueError("clock cannot move backwards")
        self._now += int(dt_us)
        return self._now

    def __repr__(self):
        return f"VirtualClock(now={self._now}us)"
