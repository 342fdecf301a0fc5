"""Physical constants in the internal unit system.

Everything defaults to one, so that a = hbar * c * mu0 = 1 as well.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Units:
    c: float = 1.0
    mu0: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.c <= 0 or self.mu0 <= 0 or self.hbar <= 0:
            raise ValueError("physical constants must be positive")

    @property
    def eps0(self):
        return 1.0 / (self.c**2 * self.mu0)

    @property
    def action_scale(self):
        """hbar * c * mu0, the natural value of the knot constant ``a``."""
        return self.hbar * self.c * self.mu0

    def to_dict(self):
        return {"c": self.c, "mu0": self.mu0, "hbar": self.hbar, "eps0": self.eps0}


INTERNAL = Units()
