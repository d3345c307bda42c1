from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ModelParams:
    """Lagrange multiplier ``m`` and spin sign ``eps``."""

    m: float = 0.0
    eps: int = 1

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise ValueError(f"eps must be +1 or -1, got {self.eps!r}")

    @property
    def e(self) -> complex:
        """The recurring constant ``eps * (m/3 + i)``."""
        return self.eps * complex(self.m / 3.0, 1.0)
