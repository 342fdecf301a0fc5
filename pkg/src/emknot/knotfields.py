"""
Closed-form torus-knot electromagnetic fields.

The family is labelled by four positive integers (n, m, l, s). At T = 0 every
pair of magnetic lines is a pair of linked (n, m) torus knots and every pair of
electric lines a pair of linked (l, s) torus knots. The Hopfion is (1, 1, 1, 1).

All coordinates are dimensionless: X = x/L0, T = c t/L0. Every evaluator is
vectorised; X, Y, Z, T may be scalars or broadcast-compatible arrays and vector
results carry a trailing axis of length 3.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .errors import QuadratureNotConverged, SingularPoint
from .units import INTERNAL

SINGULAR_EPS = 1e-300


@dataclass(frozen=True)
class KnotParams:
    """Integers (n, m, l, s) selecting a knot plus the scale constants a and L0."""

    n: int
    m: int
    l: int  # noqa: E741
    s: int
    a: float = 1.0
    L0: float = 1.0

    def __post_init__(self):
        for name in ("n", "m", "l", "s"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if not self.a > 0 or not self.L0 > 0:
            raise ValueError("a and L0 must be positive")

    @classmethod
    def hopfion(cls, **kw):
        return cls(1, 1, 1, 1, **kw)

    @classmethod
    def parse(cls, text, **kw):
        """Build from a string such as ``"2,3,1,1"``."""
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != 4:
            raise ValueError(f"expected four comma-separated integers, got {text!r}")
        return cls(*(int(p) for p in parts), **kw)

    @property
    def integers(self):
        return (self.n, self.m, self.l, self.s)

    @property
    def is_null(self):
        # Only when all four integers coincide is E.B = 0 identically.
        return self.n == self.m == self.l == self.s

    def to_dict(self):
        return {"n": self.n, "m": self.m, "l": self.l, "s": self.s, "a": self.a, "L0": self.L0}


class SpacetimePoint(NamedTuple):
    X: float
    Y: float
    Z: float
    T: float = 0.0

    @property
    def R2(self):
        return self.X**2 + self.Y**2 + self.Z**2


class EMField(NamedTuple):
    """Electric and magnetic 3-vectors (trailing axis of length 3)."""

    E: np.ndarray
    B: np.ndarray


class ScalarTriple(NamedTuple):
    A: np.ndarray
    P: np.ndarray
    Q: np.ndarray


class BaseIntegrals(NamedTuple):
    I1c: np.ndarray
    I2c: np.ndarray
    I1s: np.ndarray
    I2s: np.ndarray


def _stack(x, y, z):
    x, y, z = np.broadcast_arrays(x, y, z)
    return np.stack([x, y, z], axis=-1)


def scalar_apq(X, Y, Z, T):
    """Return the scalars A, P, Q that parametrise the closed-form solution."""
    R2 = X * X + Y * Y + Z * Z
    A = (R2 - T * T + 1.0) / 2.0
    P = T * (T * T - 3.0 * A * A)
    Q = A * (A * A - 3.0 * T * T)
    return ScalarTriple(A, P, Q)


def eval_h_vectors(X, Y, Z, T, params):
    """The four polynomial vectors H1..H4. H1, H2 build B; H3, H4 build E."""
    n, m, l, s = params.integers
    X, Y, Z, T = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (X, Y, Z, T)))
    shell_z = (-1.0 - Z * Z + X * X + Y * Y + T * T) / 2.0
    shell_x = (1.0 + X * X - Y * Y - Z * Z - T * T) / 2.0
    H1 = _stack(-n * X * Z + m * Y + s * T, -n * Y * Z - m * X - l * T * Z, n * shell_z + l * T * Y)
    H2 = _stack(s * shell_x - m * T * Y, s * X * Y - l * Z + m * T * X, s * X * Z + l * Y + n * T)
    H3 = _stack(-m * X * Z + n * Y + l * T, -m * Y * Z - n * X - s * T * Z, m * shell_z + s * T * Y)
    H4 = _stack(l * shell_x - n * T * Y, l * X * Y - s * Z + n * T * X, l * X * Z + s * Y + m * T)
    return H1, H2, H3, H4


def eval_eb(X, Y, Z, T, params, units=INTERNAL, eps=SINGULAR_EPS):
    """Electric and magnetic field of the knot at dimensionless (X, Y, Z, T).

    Raises
    ------
    SingularPoint
        If (A^2 + T^2)^3 drops below ``eps`` anywhere. For real points this
        cannot happen in exact arithmetic; the check guards against underflow.
    """
    X, Y, Z, T = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (X, Y, Z, T)))
    A, P, Q = scalar_apq(X, Y, Z, T)
    denom = (A * A + T * T) ** 3
    if np.any(~(denom >= eps)):
        raise SingularPoint("closed-form denominator (A^2+T^2)^3 underflowed")
    H1, H2, H3, H4 = eval_h_vectors(X, Y, Z, T, params)
    scale = np.sqrt(params.a) / (np.pi * params.L0**2) / denom
    B = (scale * Q)[..., None] * H1 + (scale * P)[..., None] * H2
    E = units.c * ((scale * Q)[..., None] * H4 - (scale * P)[..., None] * H3)
    return EMField(E, B)


def eval_initial(X, Y, Z, params, units=INTERNAL):
    """Initial fields E0, B0 at T = 0, from their own closed forms."""
    n, m, l, s = params.integers
    X, Y, Z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (X, Y, Z)))
    R2 = X * X + Y * Y + Z * Z
    pref = 8.0 * np.sqrt(params.a) / (np.pi * params.L0**2 * (1.0 + R2) ** 3)
    B = pref[..., None] * _stack(m * Y - n * X * Z, -m * X - n * Y * Z, n * (X * X + Y * Y - Z * Z - 1.0) / 2.0)
    E = (units.c * pref)[..., None] * _stack(l * (X * X - Y * Y - Z * Z + 1.0) / 2.0, l * X * Y - s * Z, l * X * Z + s * Y)
    return EMField(E, B)


def base_integrals(A, T, params=None, eps=SINGULAR_EPS):
    """Closed forms of the four radial base integrals, prefactor sqrt(a)/(2 pi L0^2) included.

    I1c and I1s carry the kernel e^{-K}/K, I2c and I2s the kernel e^{-K}.
    """
    A = np.asarray(A, dtype=float)
    T = np.asarray(T, dtype=float)
    D = A * A + T * T
    if np.any(~(D > eps)):
        raise SingularPoint("A^2 + T^2 underflowed")
    pref = 1.0 / (2.0 * np.pi)
    if params is not None:
        pref *= np.sqrt(params.a) / params.L0**2
    return BaseIntegrals(
        pref * A / D,
        pref * (A * A - T * T + 2.0 * A * T * T) / D**2,
        pref * T / D,
        pref * (T**3 + 2.0 * A * T - A * A * T) / D**2,
    )


def base_integrals_oracle(point, T, params=None, k_max=60.0, epsabs=1e-13, limit=500):
    """Numerical quadrature of the four base integrals.

    After the angular integral, the Fourier kernel over directions becomes
    4 pi sin(KR)/(KR), leaving a 1D integral in K on [0, k_max]. ``point`` may be
    a 3-vector or the radius R itself.

    Raises
    ------
    QuadratureNotConverged
        If QUADPACK reports a failure or an error estimate above ``100*epsabs``.
    """
    R = float(np.linalg.norm(point)) if np.ndim(point) else abs(float(point))
    T = float(T)

    def radial(K):
        return np.exp(-K) * np.sinc(K * R / np.pi)

    kernels = (
        lambda K: K * radial(K) * np.cos(K * T),
        lambda K: K * K * radial(K) * np.cos(K * T),
        lambda K: K * radial(K) * np.sin(K * T),
        lambda K: K * K * radial(K) * np.sin(K * T),
    )
    pref = 1.0 / np.pi  # (1/4pi^2) * 4pi, rescaled below for a and L0
    if params is not None:
        pref *= np.sqrt(params.a) / params.L0**2
    values = []
    for f in kernels:
        val, err, info = integrate.quad(f, 0.0, k_max, epsabs=epsabs, epsrel=1e-12, limit=limit, full_output=1)[:3]
        if err > 100 * epsabs and err > 1e-10 * abs(val):
            raise QuadratureNotConverged(f"radial quadrature error {err:.3g} at R={R}, T={T}")
        values.append(pref * val)
    return BaseIntegrals(*values)
