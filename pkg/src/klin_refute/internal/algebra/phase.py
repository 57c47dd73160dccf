"""Exact roots-of-unity phases."""

import cmath
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Phase:
    """The unit complex number ``∏_i ω_{m_i}^{e_i}``, kept as exponents."""

    exponents: tuple[int, ...]
    moduli: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.exponents) != len(self.moduli):
            raise ValueError("exponents and moduli differ in length")
        object.__setattr__(
            self,
            "exponents",
            tuple(e % q for e, q in zip(self.exponents, self.moduli, strict=True)),
        )

    @classmethod
    def one(cls, moduli: tuple[int, ...]) -> "Phase":
        """The phase 1."""
        return cls(tuple(0 for _ in moduli), moduli)

    def __mul__(self, other: "Phase") -> "Phase":
        if other.moduli != self.moduli:
            raise ValueError("phases over different moduli")
        return Phase(
            tuple(a + b for a, b in zip(self.exponents, other.exponents, strict=True)),
            self.moduli,
        )

    def conj(self) -> "Phase":
        """Complex conjugate."""
        return Phase(tuple(-e for e in self.exponents), self.moduli)

    def is_one(self) -> bool:
        """True when every exponent is zero."""
        return not any(self.exponents)

    def combined(self) -> int:
        """The single exponent of ``ω_E`` with ``E = lcm(moduli)``."""
        big = math.lcm(*self.moduli)
        return sum(e * (big // q) for e, q in zip(self.exponents, self.moduli, strict=True)) % big

    def to_complex(self) -> complex:
        """Floating-point value; only for summation."""
        return cmath.exp(2j * math.pi * sum(
            e / q for e, q in zip(self.exponents, self.moduli, strict=True)
        ))
