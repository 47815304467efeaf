"""Linear stability and Hopf crossing analysis.

Linearizing about a positive equilibrium gives u' = A u + B u(t - tau)
whose characteristic function factors as

    det(lambda I - A - B e^(-lambda tau))
        = (lambda + b1) * Delta(lambda, tau)
    Delta = lambda^3 + b lambda^2 + c lambda + d
            + (g lambda + h) e^(-2 lambda tau)

The delayed terms enter squared because both feedback legs carry the same
delay. Purely imaginary roots lambda = i*omega of Delta satisfy the real
cubic F(z) = z^3 + l1 z^2 + l2 z + l3 at z = omega^2, and each positive
simple root yields a ladder of critical delays tau_k.

Two delay-derivative evaluations are provided. `transversality` is the
implicit-differentiation value (it matches root continuation and is the
ground truth for crossing direction). `transversality_closed_form` is a
trigonometric L1/L2 evaluation that swaps the roles of g and h in two
places relative to the exact form; downstream direction classification is
calibrated against it for comparability with existing reference tables,
and reports flag whenever the two disagree in sign.
"""

from __future__ import annotations

import cmath
import dataclasses
import math

import numpy as np

from .equilibrium import Equilibrium
from .errors import DomainError, SingularSystemError
from .model import ModelParams

_DEGENERATE_DENOM = 1e-12
_UNIT_MODULUS_TOL = 1e-8
_SIMPLE_ROOT_TOL = 1e-10
_AT_BIFURCATION_TOL = 1e-9


@dataclasses.dataclass(frozen=True)
class LinearPair:
    """Instantaneous and delayed Jacobians of the linearized system."""

    A: np.ndarray
    B: np.ndarray


@dataclasses.dataclass(frozen=True)
class CharCoeffs:
    """Coefficients of Delta and of the frequency cubic F."""

    b: float
    c: float
    d: float
    g: float
    h: float
    l1: float
    l2: float
    l3: float


@dataclasses.dataclass(frozen=True)
class HopfPoint:
    """A candidate Hopf crossing: frequency, delay, and delay derivatives.

    dlambda_dtau is the implicit-differentiation value; the _closed fields
    carry the L1/L2 trigonometric evaluation used for classification.
    """

    omega_c: float
    tau_c: float
    dlambda_dtau: complex
    dlambda_dtau_closed: complex
    L1: float
    L2: float


def linearize(p: ModelParams, eq: Equilibrium) -> LinearPair:
    al = p.a1 + p.a12 * eq.y20
    be = p.a2 + p.a21 * eq.y10
    A = np.array([
        [-p.b1, 0.0, 0.0, 0.0],
        [1.0, -al, 0.0, 0.0],
        [0.0, 0.0, -p.b2, 0.0],
        [0.0, 0.0, 1.0, -be],
    ])
    B = np.zeros((4, 4))
    B[1, 3] = -p.a12 * eq.y10
    B[2, 1] = eq.rho1
    B[3, 1] = -p.a21 * eq.y20
    return LinearPair(A=A, B=B)


def char_coeffs(p: ModelParams, eq: Equilibrium) -> CharCoeffs:
    al = p.a1 + p.a12 * eq.y20
    be = p.a2 + p.a21 * eq.y10
    b = al + be + p.b2
    c = al * be + p.b2 * (al + be)
    d = p.b2 * al * be
    g = -p.a12 * eq.y10 * p.a21 * eq.y20
    h = -p.a12 * eq.y10 * (p.b2 * p.a21 * eq.y20 - eq.rho1)
    return CharCoeffs(
        b=b, c=c, d=d, g=g, h=h,
        l1=b * b - 2.0 * c,
        l2=c * c - 2.0 * b * d - g * g,
        l3=d * d - h * h,
    )


def characteristic_residual(lam: complex, tau: float, cc: CharCoeffs) -> complex:
    """Delta(lambda, tau); zero at characteristic roots."""
    return (lam**3 + cc.b * lam**2 + cc.c * lam + cc.d
            + (cc.g * lam + cc.h) * cmath.exp(-2.0 * lam * tau))


def routh_hurwitz_stable(cc: CharCoeffs) -> bool:
    """Stability of the cubic factor at tau = 0.

    At zero delay Delta reduces to lambda^3 + b lambda^2 + (c+g) lambda
    + (d+h); all roots lie in the open left half plane iff b > 0,
    d + h > 0, and b (c + g) > d + h.
    """
    q = cc.c + cc.g
    r = cc.d + cc.h
    return cc.b > 0.0 and r > 0.0 and cc.b * q > r


def _cubic_real_roots(l1: float, l2: float, l3: float) -> list[float]:
    # depressed form t^3 + p t + q, z = t - l1/3
    p = l2 - l1 * l1 / 3.0
    q = 2.0 * l1**3 / 27.0 - l1 * l2 / 3.0 + l3
    shift = -l1 / 3.0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc > 0.0:
        s = math.sqrt(disc)
        t = np.cbrt(-q / 2.0 + s) + np.cbrt(-q / 2.0 - s)
        roots = [t + shift]
    elif p == 0.0 and q == 0.0:
        roots = [shift]
    else:
        # three real roots, trigonometric form
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        theta = math.acos(arg)
        roots = [m * math.cos((theta - 2.0 * math.pi * k) / 3.0) + shift
                 for k in range(3)]
    # one Newton polish pass tightens the closed forms to machine precision
    polished = []
    for z in roots:
        for _ in range(3):
            f = ((z + l1) * z + l2) * z + l3
            df = (3.0 * z + 2.0 * l1) * z + l2
            if df == 0.0:
                break
            z -= f / df
        polished.append(z)
    return polished


def omega_candidates(cc: CharCoeffs) -> list[float]:
    """Positive crossing frequencies omega with F(omega^2) = 0, ascending.

    Only simple roots of the frequency cubic are accepted; a (near-)double
    positive root means the crossing structure is degenerate and raises.
    """
    out = []
    scale = max(1.0, abs(cc.l1), abs(cc.l2), abs(cc.l3))
    for z in _cubic_real_roots(cc.l1, cc.l2, cc.l3):
        if z <= 0.0:
            continue
        df = (3.0 * z + 2.0 * cc.l1) * z + cc.l2
        if abs(df) <= _SIMPLE_ROOT_TOL * scale:
            raise SingularSystemError(
                f"frequency cubic has a non-simple positive root z={z!r}")
        out.append(math.sqrt(z))
    return sorted(out)


def _ratio_G(omega: float, cc: CharCoeffs) -> complex:
    lam = 1j * omega
    den = lam**3 + cc.b * lam**2 + cc.c * lam + cc.d
    if abs(den) < 1e-300:
        raise DomainError("cubic part vanishes at i*omega; ratio undefined")
    return -(cc.g * lam + cc.h) / den


def critical_delays(omega: float, cc: CharCoeffs, k_max: int = 8) -> list[float]:
    """Delay ladder tau_k at which lambda = i*omega solves Delta = 0.

    tau_k = (arg G(i omega) + 2 pi k) / (2 omega) with the argument taken
    in [0, 2 pi), k = 0..k_max. Requires |G(i omega)| = 1 (the defining
    property of a crossing frequency); raises DomainError otherwise.
    """
    if omega <= 0.0:
        raise DomainError(f"omega must be positive, got {omega!r}")
    G = _ratio_G(omega, cc)
    if abs(abs(G) - 1.0) > _UNIT_MODULUS_TOL:
        raise DomainError(
            f"|G(i omega)| = {abs(G)!r} differs from 1; "
            "omega is not a crossing frequency")
    arg = cmath.phase(G)
    if arg < 0.0:
        arg += 2.0 * math.pi
    taus = [(arg + 2.0 * math.pi * k) / (2.0 * omega) for k in range(k_max + 1)]
    return [t for t in taus if t > 0.0]


def transversality(omega_c: float, tau_c: float, cc: CharCoeffs) -> complex:
    """d lambda / d tau at the crossing, by implicit differentiation.

    Matches Newton continuation of the characteristic root. Raises when
    the denominator is near zero (degenerate crossing).
    """
    lam = 1j * omega_c
    E = cmath.exp(-2.0 * lam * tau_c)
    gh = cc.g * lam + cc.h
    num = 2.0 * lam * gh * E
    den = 3.0 * lam**2 + 2.0 * cc.b * lam + cc.c + (cc.g - 2.0 * tau_c * gh) * E
    if abs(den) < _DEGENERATE_DENOM:
        raise SingularSystemError("transversality denominator vanishes")
    return num / den


def transversality_closed_form(
        omega_c: float, tau_c: float, cc: CharCoeffs) -> tuple[complex, float, float]:
    """Trigonometric L1/L2 evaluation of d lambda / d tau.

    Returns (value, L1, L2). This form interchanges g and h in the
    tau-proportional terms and numerator weights relative to the exact
    expression; it is retained because the direction/period classification
    shipped by this package is calibrated against reference tables
    computed with it. Compare with `transversality`, which is exact.
    """
    w, t = omega_c, tau_c
    b, c, g, h = cc.b, cc.c, cc.g, cc.h
    co = math.cos(2.0 * w * t)
    si = math.sin(2.0 * w * t)
    L1 = (c - 3.0 * w * w) * co - 2.0 * b * w * si - 2.0 * g * t + h
    L2 = (c - 3.0 * w * w) * si + 2.0 * b * w * co - 2.0 * h * w * t
    den = L1 * L1 + L2 * L2
    if den < _DEGENERATE_DENOM**2:
        raise SingularSystemError("closed-form denominator vanishes")
    re = 2.0 * (w * g * L2 + w * w * h * L1) / den
    im = 2.0 * (w * g * L1 + w * w * h * L2) / den
    return complex(re, im), L1, L2


def hopf_point(cc: CharCoeffs, omega: float, tau: float) -> HopfPoint:
    """Bundle a crossing (omega, tau) with both delay derivatives."""
    dl = transversality(omega, tau, cc)
    dl_closed, L1, L2 = transversality_closed_form(omega, tau, cc)
    return HopfPoint(omega_c=omega, tau_c=tau, dlambda_dtau=dl,
                     dlambda_dtau_closed=dl_closed, L1=L1, L2=L2)


def hopf_candidates(cc: CharCoeffs, k_max: int = 8) -> list[tuple[float, list[float]]]:
    """All (omega, [tau_k]) ladders, omega ascending."""
    return [(w, critical_delays(w, cc, k_max)) for w in omega_candidates(cc)]


def first_hopf(cc: CharCoeffs, k_max: int = 8) -> HopfPoint | None:
    """The crossing with the smallest positive delay, if any."""
    best = None
    for w, taus in hopf_candidates(cc, k_max):
        if taus and (best is None or taus[0] < best[1]):
            best = (w, taus[0])
    if best is None:
        return None
    return hopf_point(cc, best[0], best[1])


def classify_stability(p: ModelParams, eq: Equilibrium, tau: float) -> str:
    """Verdict at a given delay: 'stable', 'unstable' or 'at-bifurcation'.

    'at-bifurcation' within 1e-9 of any critical delay. Otherwise the
    verdict combines zero-delay stability with the position of tau
    relative to the first crossing (crossings here only destabilize,
    since the frequency cubic has at most one positive simple root with
    an upward crossing for this model class).
    """
    if tau < 0.0:
        raise DomainError(f"delay must be non-negative, got {tau!r}")
    cc = char_coeffs(p, eq)
    all_taus = [t for _, taus in hopf_candidates(cc) for t in taus]
    if any(abs(tau - t) < _AT_BIFURCATION_TOL for t in all_taus):
        return "at-bifurcation"
    if not routh_hurwitz_stable(cc):
        return "unstable"
    if not all_taus or tau < min(all_taus):
        return "stable"
    return "unstable"
