"""
Circular-polarisation analysis: helicity frames, amplitudes a_R and a_L,
Coulomb-gauge potentials, helicity integrals and classical photon numbers.

Wavevectors passed to the closed forms here are physical, k = K / L0; with the
default L0 = 1 there is no distinction. Grid-based routines work in units of L0.
"""

from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .errors import GridMismatch, NotTransversal, QuadratureNotConverged, ZeroWavevector
from .spectral import SpectralField, analytic_spectrum, dft_inverse, kspace, propagate_spectra
from .units import INTERNAL

_SQRT2 = np.sqrt(2.0)


def _dot(a, b):
    # bilinear, no conjugation
    return np.einsum("...i,...i->...", a, b)


@dataclass(frozen=True, eq=False)
class HelicityFrame:
    """Per-k orthogonal frame with |e1|^2 = |e2|^2 = 1/2 and e1 x e2 = e_k / 2."""

    e_k: np.ndarray
    e1: np.ndarray
    e2: np.ndarray

    @property
    def e_R(self):
        return self.e1 + 1j * self.e2

    @property
    def e_L(self):
        return self.e1 - 1j * self.e2


class AmplitudePair(NamedTuple):
    a_R: np.ndarray
    a_L: np.ndarray


class PhotonNumbers(NamedTuple):
    N_R: float
    N_L: float
    N_R_closed: float
    N_L_closed: float
    abserr: float


def _reference_direction(axis):
    # coordinate axis least aligned with ``axis``, made orthogonal to it
    e = np.zeros(3)
    e[np.argmin(np.abs(axis))] = 1.0
    w = e - np.dot(e, axis) * axis
    return w / np.linalg.norm(w)


def helicity_frame(k, polar_axis=(0.0, 0.0, 1.0)):
    """Spherical-coordinate frame around ``polar_axis``.

    e1 = phi_hat / sqrt(2) and e2 = -theta_hat / sqrt(2). Azimuth is undefined
    on the polar axis. There phi_hat is the fixed vector u x w, with w the
    coordinate direction least aligned with u, and its sign follows the sign of
    k.u so that e1(-k) = -e1(k) holds everywhere.

    Raises
    ------
    ZeroWavevector
        If any ``k`` is the zero vector.
    """
    k = np.asarray(k, dtype=float)
    u = np.asarray(polar_axis, dtype=float)
    u = u / np.linalg.norm(u)
    kmag = np.linalg.norm(k, axis=-1)
    if np.any(kmag == 0):
        raise ZeroWavevector("helicity frame needs |k| > 0")
    e_k = k / kmag[..., None]
    p = np.cross(u, e_k)
    rho = np.linalg.norm(p, axis=-1)
    on_axis = rho < 1e-14
    phi_hat = p / np.where(on_axis, 1.0, rho)[..., None]
    if np.any(on_axis):
        fallback = np.cross(u, _reference_direction(u))
        side = np.sign(_dot(e_k, u))
        phi_hat = np.where(on_axis[..., None], side[..., None] * fallback, phi_hat)
    theta_hat = np.cross(phi_hat, e_k)
    return HelicityFrame(e_k, phi_hat / _SQRT2, -theta_hat / _SQRT2)


def amplitude_vectors(E0k, B0k, k, units=INTERNAL):
    """Frame-free products a_R e_R and a_L e_L from the initial-data spectra."""
    k = np.asarray(k, dtype=float)
    kmag = np.linalg.norm(k, axis=-1)
    if np.any(kmag == 0):
        raise ZeroWavevector("amplitudes need |k| > 0")
    e_k = k / kmag[..., None]
    norm = (1.0 / (2.0 * np.sqrt(units.action_scale) * np.sqrt(2.0 * kmag)))[..., None]
    Bc, Ec = np.conj(B0k), np.conj(E0k)
    right = Bc - 1j / units.c * Ec
    left = Bc + 1j / units.c * Ec
    aR_vec = norm * (right + 1j * np.cross(e_k, right))
    aL_vec = -norm * (left - 1j * np.cross(e_k, left))
    return aR_vec, aL_vec


def amplitudes_from_spectra(E0k, B0k, k, frame=None, units=INTERNAL, tol=1e-8):
    """Helicity amplitudes (a_R, a_L) at wavevector(s) ``k``.

    Raises
    ------
    ZeroWavevector
        If |k| = 0.
    NotTransversal
        If e_k . E0k or e_k . B0k exceeds ``tol`` times the spectrum magnitude.
    """
    E0k = np.asarray(E0k, dtype=complex)
    B0k = np.asarray(B0k, dtype=complex)
    if frame is None:
        frame = helicity_frame(k)
    scale = np.linalg.norm(E0k, axis=-1) / units.c + np.linalg.norm(B0k, axis=-1)
    longitudinal = np.abs(_dot(frame.e_k, E0k)) / units.c + np.abs(_dot(frame.e_k, B0k))
    if np.any(longitudinal > tol * scale + 1e-300):
        raise NotTransversal("spectra have a component along e_k")
    aR_vec, aL_vec = amplitude_vectors(E0k, B0k, k, units)
    # e_R . e_L = 1 and e_R . e_R = 0 pick out each coefficient
    return AmplitudePair(_dot(aR_vec, frame.e_L), _dot(aL_vec, frame.e_R))


def _knot_vectors(k):
    Kx, Ky, Kz = k[..., 0], k[..., 1], k[..., 2]
    zero = np.zeros_like(Kx)
    return (
        np.stack([Kx * Kz, Ky * Kz, -(Kx**2) - Ky**2], axis=-1),
        np.stack([zero, Kz, -Ky], axis=-1),
        np.stack([Ky**2 + Kz**2, -Kx * Ky, -Kx * Kz], axis=-1),
        np.stack([Ky, -Kx, zero], axis=-1),
    )


def _dimensionless_k(params, k):
    K = np.asarray(k, dtype=float) * params.L0
    Kmag = np.linalg.norm(K, axis=-1)
    if np.any(Kmag == 0):
        raise ZeroWavevector("closed-form amplitudes need K > 0")
    return K, Kmag


def analytic_amplitudes(params, k, units=INTERNAL):
    """Closed-form a_R e_R and a_L e_L of the knot family."""
    n, m, l, s = params.integers
    K, Kmag = _dimensionless_k(params, k)
    v1, v2, v3, v4 = _knot_vectors(K)
    pref = np.sqrt(params.a / units.action_scale) * params.L0**1.5 / (4.0 * np.sqrt(np.pi))
    pref = (pref * np.exp(-Kmag) / np.sqrt(Kmag))[..., None]
    iK = (1.0 / Kmag)[..., None]
    aR = pref * ((n + m) * iK * v1 + (l + s) * v2 - 1j * ((l + s) * iK * v3 + (n + m) * v4))
    aL = pref * ((m - n) * iK * v1 + (s - l) * v2 - 1j * ((l - s) * iK * v3 + (n - m) * v4))
    return aR, aL


def spectral_density(params, k, units=INTERNAL):
    """|a_R|^2 and |a_L|^2 of the knot family in closed form.

    The mixed term is 2 (n+-m)(l+-s) K K_y, which is what expanding the
    squared moduli of :func:`analytic_amplitudes` gives. It is odd in K_y and
    drops out of the photon numbers.
    """
    n, m, l, s = params.integers
    K, Kmag = _dimensionless_k(params, k)
    Kx, Ky, Kz = K[..., 0], K[..., 1], K[..., 2]
    pref = params.a / units.action_scale * params.L0**3 / (8.0 * np.pi) * np.exp(-2.0 * Kmag) / Kmag

    def dens(p, q):
        return pref * (p**2 * (Kx**2 + Ky**2) + q**2 * (Ky**2 + Kz**2) + 2.0 * p * q * Kmag * Ky)

    return dens(n + m, l + s), dens(n - m, l - s)


def photon_numbers_closed(params, units=INTERNAL):
    ratio = params.a / units.action_scale
    n, m, l, s = params.integers
    return ratio * ((n + m) ** 2 + (l + s) ** 2) / 8.0, ratio * ((n - m) ** 2 + (l - s) ** 2) / 8.0


def angular_nodes(n_theta=8, n_phi=16):
    """Product Gauss-Legendre (in cos theta) x uniform (in phi) rule on the unit sphere."""
    mu, w_mu = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * np.pi * (np.arange(n_phi) + 0.5) / n_phi
    MU, PHI = np.meshgrid(mu, phi, indexing="ij")
    sin_t = np.sqrt(1.0 - MU**2)
    dirs = np.stack([sin_t * np.cos(PHI), sin_t * np.sin(PHI), MU], axis=-1).reshape(-1, 3)
    weights = np.repeat(w_mu, n_phi) * (2.0 * np.pi / n_phi)
    return dirs, weights


def photon_numbers(
    params,
    units=INTERNAL,
    route="frame",
    polar_axis=(0.0, 0.0, 1.0),
    n_theta=8,
    n_phi=16,
    k_max=40.0,
    epsabs=1e-12,
    limit=200,
):
    """Classical photon numbers N_R, N_L by k-space quadrature, plus the closed forms.

    ``route="frame"`` extracts |a_R|^2 and |a_L|^2 from the closed-form spectra
    through a helicity frame built around ``polar_axis``; ``route="density"``
    integrates the closed-form densities directly. The radial integral over
    [0, k_max] (dimensionless K) is adaptive Gauss-Kronrod; the angular rule is
    exact for the quadratic angular dependence of these densities.

    Raises
    ------
    QuadratureNotConverged
        If the adaptive radial integration fails within ``limit`` subdivisions.
    """
    if limit <= 0:
        raise ValueError("quadrature budget must be positive")
    if route not in ("frame", "density"):
        raise ValueError(f"unknown route {route!r}")
    dirs, weights = angular_nodes(n_theta, n_phi)
    L0 = params.L0

    def integrand(K):
        Kvec = K * dirs
        k = Kvec / L0
        if route == "frame":
            sp = analytic_spectrum(Kvec, params, units)
            frame = helicity_frame(k, polar_axis)
            aR, aL = amplitudes_from_spectra(sp.E, sp.B, k, frame, units)
            dR, dL = np.abs(aR) ** 2, np.abs(aL) ** 2
        else:
            dR, dL = spectral_density(params, k, units)
        return K * K * np.array([weights @ dR, weights @ dL])

    res, err, info = integrate.quad_vec(integrand, 0.0, k_max, epsabs=epsabs, epsrel=1e-12, limit=limit, full_output=True)
    if not info.success:
        raise QuadratureNotConverged(f"photon-number quadrature failed: {info.message}")
    res = res / L0**3
    N_R_closed, N_L_closed = photon_numbers_closed(params, units)
    return PhotonNumbers(float(res[0]), float(res[1]), N_R_closed, N_L_closed, float(np.max(err)) / L0**3)


def em_helicity(N_R, N_L, units=INTERNAL):
    """Electromagnetic helicity h = hbar (N_R - N_L)."""
    return units.hbar * (N_R - N_L)


def coulomb_potential_spectra(Ek, Bk):
    """Transverse potentials with curl A = B and curl C = E: A_k = -i e_k x B_k / k."""
    ks = kspace(Ek.grid)
    inv_k = np.divide(1.0, ks.kmag, out=np.zeros_like(ks.kmag), where=ks.kmag > 0)[..., None]
    A = -1j * np.cross(ks.ek, Bk.modes) * inv_k
    C = -1j * np.cross(ks.ek, Ek.modes) * inv_k
    return SpectralField(Ek.grid, A), SpectralField(Ek.grid, C)


def coulomb_potentials(state, t):
    """Coulomb-gauge potentials A and C on the grid at time ``t``.

    Raises
    ------
    NotTransversal, RealityViolated
        As for :func:`emknot.spectral.propagate`.
    """
    state.check()
    Ek, Bk = propagate_spectra(state, t)
    Ak, Ck = coulomb_potential_spectra(Ek, Bk)
    return dft_inverse(Ak), dft_inverse(Ck)


def helicity_integrals(A, B, C, E, units=INTERNAL):
    """Magnetic and electric helicity, (1/2 c mu0) int A.B and (eps0/2c) int C.E."""
    if len({f.grid for f in (A, B, C, E)}) != 1:
        raise GridMismatch("helicity integrands must share one grid")
    dv = A.grid.spacing**3
    h_m = np.sum(A.samples * B.samples) * dv / (2.0 * units.c * units.mu0)
    h_e = np.sum(C.samples * E.samples) * dv * units.eps0 / (2.0 * units.c)
    return float(h_m), float(h_e)


def helicity_at(state, t, units=INTERNAL):
    """(h_m, h_e) of the propagated state at time ``t`` from real-space integrals."""
    state.check()
    Ek, Bk = propagate_spectra(state, t)
    Ak, Ck = coulomb_potential_spectra(Ek, Bk)
    fields = [dft_inverse(F) for F in (Ak, Bk, Ck, Ek)]
    return helicity_integrals(*fields, units=units)


@dataclass
class HelicityReport:
    h_m: float
    h_e: float
    h: float
    N_R: float
    N_L: float
    params: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def helicity_report(params, state, times=(0.0,), units=INTERNAL, tolerances=None, **quad_kw):
    """Real-space helicities at ``times`` plus closed-form and quadrature photon numbers."""
    series = []
    for t in times:
        h_m, h_e = helicity_at(state, t, units)
        series.append({"T": float(t), "h_m": h_m, "h_e": h_e, "h": h_m + h_e})
    pn = photon_numbers(params, units, **quad_kw)
    h_photons = em_helicity(pn.N_R_closed, pn.N_L_closed, units)
    first = series[0]
    extras = {
        "series": series,
        "N_R_quadrature": pn.N_R,
        "N_L_quadrature": pn.N_L,
        "N_R_closed": pn.N_R_closed,
        "N_L_closed": pn.N_L_closed,
        "h_from_photons": h_photons,
        "delta_h_realspace_vs_photons": first["h"] - h_photons,
        "delta_N_R_quadrature_vs_closed": pn.N_R - pn.N_R_closed,
        "delta_N_L_quadrature_vs_closed": pn.N_L - pn.N_L_closed,
        "units": units.to_dict(),
    }
    return HelicityReport(
        h_m=first["h_m"],
        h_e=first["h_e"],
        h=first["h"],
        N_R=pn.N_R_closed,
        N_L=pn.N_L_closed,
        params=params.to_dict(),
        grid=state.grid.to_dict(),
        tolerances=dict(tolerances or {}),
        extras=extras,
    )
