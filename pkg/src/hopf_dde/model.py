"""Delayed P53-MDM2 negative-feedback model.

State components, in order: x1 (P53 mRNA), y1 (P53 protein), x2 (MDM2
mRNA), y2 (MDM2 protein). The protein of each gene represses the other
through delayed mass-action terms, and P53 protein activates MDM2
transcription through a Hill function f(x) = x^n / (a + x^n):

    x1' = 1 - b1*x1
    y1' = x1 - (a1 + a12*y2(t - tau)) * y1
    x2' = f(y1(t - tau)) - b2*x2
    y2' = x2 - (a2 + a21*y1(t - tau)) * y2

Only y1 and y2 enter with delay, and both with the same delay tau.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .errors import DomainError

# state-vector component indices
IX1, IY1, IX2, IY2 = 0, 1, 2, 3
STATE_NAMES = ("x1", "y1", "x2", "y2")


@dataclasses.dataclass(frozen=True)
class ModelParams:
    """Model rate constants and Hill parameters.

    a1, a2: linear decay rates of the two proteins.
    a12, a21: cross-repression strengths (zero allowed; decouples the loop).
    b1, b2: mRNA decay rates.
    a: Hill half-saturation constant (f(a^(1/n)) = 1/2).
    n: Hill exponent, a positive integer.
    """

    a1: float
    a2: float
    a12: float
    a21: float
    b1: float
    b2: float
    a: float
    n: int

    def __post_init__(self):
        for name in ("a1", "a2", "b1", "b2"):
            v = getattr(self, name)
            if not (0.0 < v <= 1.0):
                raise DomainError(f"{name} must lie in (0, 1], got {v!r}")
        for name in ("a12", "a21"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise DomainError(f"{name} must lie in [0, 1], got {v!r}")
        if not self.a > 0.0:
            raise DomainError(f"a must be positive, got {self.a!r}")
        if not (isinstance(self.n, int) and self.n >= 1):
            raise DomainError(f"n must be an integer >= 1, got {self.n!r}")


#: standard parameter presets used throughout the docs and tests;
#: they differ only in the Hill exponent
PRESETS = {
    name: ModelParams(a1=0.13, a2=0.13, a12=0.02, a21=0.02,
                      b1=0.8, b2=0.01, a=4.0, n=n)
    for name, n in (("n2", 2), ("n4", 4), ("n163", 163), ("n164", 164))
}


def _sigma(x: float, n: int, a: float) -> float:
    # f(x) = x^n/(a+x^n) = 1/(1+exp(ln a - n ln x)) in log space, which
    # stays finite for huge n where x^n alone would over/underflow
    t = math.log(a) - n * math.log(x)
    if t > 700.0:
        return math.exp(-t)
    if t < -700.0:
        return 1.0
    return 1.0 / (1.0 + math.exp(t))


def hill_eval(x: float, p: ModelParams) -> float:
    """Hill function f(x) = x^n / (a + x^n) for x >= 0.

    Evaluated in log space so that large exponents (n in the hundreds)
    neither overflow nor lose the transition region. Returns values in
    [0, 1). Raises DomainError for negative x.
    """
    if x < 0.0:
        raise DomainError(f"hill_eval requires x >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    return _sigma(float(x), p.n, p.a)


def hill_derivs(x: float, p: ModelParams) -> tuple[float, float, float]:
    """First three derivatives of the Hill function at x > 0.

    With sigma = f(x), the log-space form gives
        f'   = (n/x) sigma (1 - sigma)
        f''  = (n/x^2) sigma (1 - sigma) ((n - 1) - 2 n sigma)
        f''' = (n/x^3) sigma (1 - sigma) [(n-1)(n-2)(1-sigma)^2
               - 4(n^2-1) sigma (1-sigma) + (n+1)(n+2) sigma^2]
    which avoids forming x^n directly.
    """
    if x <= 0.0:
        raise DomainError(f"hill_derivs requires x > 0, got {x!r}")
    x = float(x)
    n = float(p.n)
    s = _sigma(x, p.n, p.a)
    u = s * (1.0 - s)
    r1 = (n / x) * u
    r2 = (n / x**2) * u * ((n - 1.0) - 2.0 * n * s)
    r3 = (n / x**3) * u * ((n - 1.0) * (n - 2.0) * (1.0 - s) ** 2
                           - 4.0 * (n * n - 1.0) * s * (1.0 - s)
                           + (n + 1.0) * (n + 2.0) * s * s)
    return r1, r2, r3


def _hill_extended(x: float, n: int, a: float) -> float:
    """Hill function continued to x < 0 via the real integer power.

    The public hill_eval rejects negative arguments; the integrator uses
    this continuation so transients that briefly cross zero keep a smooth
    right-hand side. For even n the function is even; for odd n,
    x^n/(a + x^n) with a real negative numerator.
    """
    if x > 0.0:
        return _sigma(x, n, a)
    if x == 0.0:
        return 0.0
    if n % 2 == 0:
        return _sigma(-x, n, a)
    # odd n, x < 0: x^n < 0; fall back to the direct ratio (presets with
    # huge n are even, so no overflow concern on this branch)
    xn = (-x) ** n
    return -xn / (a - xn)


def rhs(state: np.ndarray, delayed: np.ndarray, p: ModelParams) -> np.ndarray:
    """Right-hand side of the delay system.

    state: (x1, y1, x2, y2) at time t; delayed: the same components at
    t - tau (only y1, y2 of it are used). Components may be negative
    during transients; the Hill term uses the real continuation.
    """
    x1, y1, x2, y2 = (float(state[IX1]), float(state[IY1]),
                      float(state[IX2]), float(state[IY2]))
    y1d = float(delayed[IY1])
    y2d = float(delayed[IY2])
    return np.array([
        1.0 - p.b1 * x1,
        x1 - (p.a1 + p.a12 * y2d) * y1,
        _hill_extended(y1d, p.n, p.a) - p.b2 * x2,
        x2 - (p.a2 + p.a21 * y1d) * y2,
    ])
