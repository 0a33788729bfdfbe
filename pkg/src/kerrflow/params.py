"""Black-hole parameters and derived horizon constants.

Geometric units G = c = 1 throughout; lengths in units of the mass M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ExtremalOrSuper, NonpositiveMass

# Spins with |a| >= M*(1 - SUBEXTREME_MARGIN) are rejected as numerically
# extremal; a = 0 is admitted as a testing degenerate.
SUBEXTREME_MARGIN = 1e-12


@dataclass(frozen=True)
class SpacetimeParams:
    """Mass/spin pair with the derived horizon constants.

    r_plus/r_minus are the roots of Delta(r) = r^2 - 2 M r + a^2,
    kappa_plus/kappa_minus the surface gravities, Omega_H the angular
    velocity of the horizon and T_H the Hawking temperature
    kappa_plus / (2 pi).
    """

    M: float
    a: float
    r_plus: float = field(init=False)
    r_minus: float = field(init=False)
    kappa_plus: float = field(init=False)
    kappa_minus: float = field(init=False)
    Omega_H: float = field(init=False)
    T_H: float = field(init=False)

    def __post_init__(self):
        M, a = float(self.M), float(self.a)
        if not (M > 0.0) or not math.isfinite(M):
            raise NonpositiveMass(f"mass must be positive, got {M}")
        if abs(a) != 0.0 and abs(a) > M * (1.0 - SUBEXTREME_MARGIN):
            raise ExtremalOrSuper(
                f"subextreme range required: |a| = {abs(a)} >= M = {M}"
            )
        root = math.sqrt(M * M - a * a)
        r_plus = M + root
        r_minus = M - root
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "r_plus", r_plus)
        object.__setattr__(self, "r_minus", r_minus)
        object.__setattr__(
            self, "kappa_plus", (r_plus - r_minus) / (2.0 * (r_plus**2 + a * a))
        )
        # a = 0 collapses the inner horizon to r = 0 and kappa_minus diverges.
        denom = r_minus**2 + a * a
        kappa_minus = (r_minus - r_plus) / (2.0 * denom) if denom > 0.0 else -math.inf
        object.__setattr__(self, "kappa_minus", kappa_minus)
        object.__setattr__(self, "Omega_H", a / (r_plus**2 + a * a))
        object.__setattr__(self, "T_H", self.kappa_plus / (2.0 * math.pi))

    def delta(self, r):
        """Horizon function Delta(r) = r^2 - 2 M r + a^2 (array-safe)."""
        return r * r - 2.0 * self.M * r + self.a * self.a

    def as_dict(self) -> dict:
        return {
            "M": self.M,
            "a": self.a,
            "r_plus": self.r_plus,
            "r_minus": self.r_minus,
            "kappa_plus": self.kappa_plus,
            "kappa_minus": self.kappa_minus,
            "Omega_H": self.Omega_H,
            "T_H": self.T_H,
        }


def derive_constants(M: float, a: float) -> SpacetimeParams:
    """Validate (M, a) and return the derived horizon constants."""
    return SpacetimeParams(M=M, a=a)
