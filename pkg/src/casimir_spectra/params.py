"""Model parameters of the curved-space oscillator."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .exactnum import exact, rational_sqrt

#: kappa = CURVATURE_CONVENTION * lambda by default (sphere for lambda < 0)
KAPPA_MINUS_LAMBDA = -1
KAPPA_PLUS_LAMBDA = 1


@dataclass(frozen=True)
class ModelParams:
    """Exact (hbar, kappa, omega^2) plus the kappa/lambda sign convention.

    ``convention`` is the factor c in ``kappa = c * lambda``; the default -1
    makes kappa the Gaussian curvature with lambda its negative.
    """

    hbar: Fraction = Fraction(1)
    kappa: Fraction = Fraction(0)
    omega_sq: Fraction = Fraction(1)
    convention: int = KAPPA_MINUS_LAMBDA

    def __post_init__(self):
        for name in ("hbar", "kappa", "omega_sq"):
            object.__setattr__(self, name, exact(getattr(self, name)))
        if self.convention not in (KAPPA_MINUS_LAMBDA, KAPPA_PLUS_LAMBDA):
            raise ValueError("convention must be -1 or +1")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        if self.omega_sq < 0:
            raise ValueError("omega^2 must be non-negative")

    @classmethod
    def from_kappa(cls, kappa, *, omega=None, omega_sq=None, hbar=1, convention=KAPPA_MINUS_LAMBDA):
        return cls(hbar=hbar, kappa=kappa, omega_sq=_omega_sq(omega, omega_sq), convention=convention)

    @classmethod
    def from_lambda(cls, lam, *, omega=None, omega_sq=None, hbar=1, convention=KAPPA_MINUS_LAMBDA):
        return cls(hbar=hbar, kappa=convention * exact(lam), omega_sq=_omega_sq(omega, omega_sq),
                   convention=convention)

    @property
    def lam(self) -> Fraction:
        return self.convention * self.kappa

    @property
    def omega(self) -> float:
        return float(mpmath.sqrt(mpmath.mpf(self.omega_sq.numerator) / self.omega_sq.denominator))

    @property
    def omega_exact(self) -> Fraction | None:
        return rational_sqrt(self.omega_sq)

    def with_convention(self, convention: int) -> "ModelParams":
        """Same lambda, kappa re-derived under another convention."""
        return ModelParams.from_lambda(self.lam, omega_sq=self.omega_sq, hbar=self.hbar, convention=convention)

    def as_dict(self) -> dict:
        return {
            "hbar": str(self.hbar),
            "kappa": str(self.kappa),
            "lambda": str(self.lam),
            "omega_sq": str(self.omega_sq),
            "convention": "kappa=-lambda" if self.convention == KAPPA_MINUS_LAMBDA else "kappa=+lambda",
        }


def _omega_sq(omega, omega_sq) -> Fraction:
    if omega is not None and omega_sq is not None:
        raise ValueError("give omega or omega_sq, not both")
    if omega_sq is not None:
        return exact(omega_sq)
    if omega is None:
        return Fraction(1)
    w = exact(omega)
    if w < 0:
        raise ValueError("omega must be non-negative")
    return w * w
