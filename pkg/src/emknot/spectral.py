"""
Fourier-transform solution of the vacuum Cauchy problem on a periodic grid.

Transform convention
--------------------
The analysis integral is F(k) = (2 pi)^{-3/2} \\int d^3r f(r) e^{+i k.r} and the
synthesis integral f(r) = (2 pi)^{-3/2} \\int d^3k F(k) e^{-i k.r}. On the grid
both integrals become Riemann sums with measures dx^3 and dk^3, so discrete
spectra approximate continuum spectra directly and round trips are exact.

The domain is [-extent, extent)^3; coordinates and wavenumbers are
dimensionless (L0 = 1) and the speed of light is one, so omega = |k|.
Vector fields are arrays of shape (n, n, n, 3) indexed (x, y, z, component).
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from .errors import GridMismatch, NotTransversal, RealityViolated
from .knotfields import EMField, eval_initial
from .units import INTERNAL

TRANSVERSE_TOL = 1e-8
REALITY_TOL = 1e-10


@dataclass(frozen=True)
class GridSpec:
    """Cubic periodic grid with ``n_per_axis`` samples on [-extent, extent)."""

    n_per_axis: int
    extent: float

    def __post_init__(self):
        if int(self.n_per_axis) != self.n_per_axis or self.n_per_axis < 8:
            raise ValueError("n_per_axis must be an integer >= 8")
        if not self.extent > 0:
            raise ValueError("extent must be positive")
        object.__setattr__(self, "n_per_axis", int(self.n_per_axis))
        object.__setattr__(self, "extent", float(self.extent))

    @property
    def n(self):
        return self.n_per_axis

    @property
    def spacing(self):
        return 2.0 * self.extent / self.n_per_axis

    @property
    def dk(self):
        return np.pi / self.extent

    @property
    def shape(self):
        return (self.n, self.n, self.n)

    def axis(self):
        return -self.extent + self.spacing * np.arange(self.n)

    def mesh(self):
        x = self.axis()
        return np.meshgrid(x, x, x, indexing="ij")

    def wavenumbers(self):
        return 2.0 * np.pi * sfft.fftfreq(self.n, self.spacing)

    def k_mesh(self):
        k = self.wavenumbers()
        return np.meshgrid(k, k, k, indexing="ij")

    def inner_mask(self, fraction=0.5):
        """Points inside the central box of half-width ``fraction * extent``."""
        X, Y, Z = self.mesh()
        lim = fraction * self.extent
        return (np.abs(X) < lim) & (np.abs(Y) < lim) & (np.abs(Z) < lim)

    def to_dict(self):
        return {"n_per_axis": self.n, "extent": self.extent}


class _KSpace:
    """Cached per-grid wavevector arrays. Read-only after construction."""

    def __init__(self, grid):
        KX, KY, KZ = grid.k_mesh()
        self.k = np.stack([KX, KY, KZ], axis=-1)
        self.kmag = np.sqrt(KX**2 + KY**2 + KZ**2)
        safe = np.where(self.kmag == 0, 1.0, self.kmag)
        self.ek = self.k / safe[..., None]
        self.ek[self.kmag == 0] = 0.0
        kn = np.abs(grid.wavenumbers()).max()
        nyq = (np.abs(KX) == kn) | (np.abs(KY) == kn) | (np.abs(KZ) == kn)
        # modes without an unambiguous direction: k = 0 and any Nyquist plane
        self.dead = nyq | (self.kmag == 0)
        sign = (-1.0) ** np.arange(grid.n)
        # e^{-i k.origin} with origin = -extent reduces to (-1)^(i+j+k)
        self.phase = sign[:, None, None] * sign[None, :, None] * sign[None, None, :]
        for arr in (self.k, self.kmag, self.ek, self.dead, self.phase):
            arr.setflags(write=False)


_KSPACE_CACHE = {}


def kspace(grid):
    ks = _KSPACE_CACHE.get(grid)
    if ks is None:
        if len(_KSPACE_CACHE) > 4:
            _KSPACE_CACHE.clear()
        ks = _KSPACE_CACHE[grid] = _KSpace(grid)
    return ks


@dataclass(frozen=True, eq=False)
class RealVectorFieldGrid:
    grid: GridSpec
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.samples.shape != self.grid.shape + (3,):
            raise GridMismatch(f"samples shape {self.samples.shape} does not match grid {self.grid.shape + (3,)}")

    def norm_l2(self, mask=None):
        s = self.samples if mask is None else self.samples[mask]
        return float(np.sqrt(np.sum(s * s) * self.grid.spacing**3))


@dataclass(frozen=True, eq=False)
class SpectralField:
    grid: GridSpec
    modes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.modes.shape != self.grid.shape + (3,):
            raise GridMismatch(f"modes shape {self.modes.shape} does not match grid {self.grid.shape + (3,)}")

    def norm_l2(self):
        return float(np.sqrt(np.sum(np.abs(self.modes) ** 2) * self.grid.dk**3))


def _check_same_grid(*fields):
    grids = {f.grid for f in fields}
    if len(grids) != 1:
        raise GridMismatch(f"fields live on different grids: {sorted(map(repr, grids))}")


def dft_forward(f):
    """Real grid field -> spectrum approximating the continuum analysis integral."""
    g = f.grid
    ks = kspace(g)
    F = sfft.ifftn(f.samples, axes=(0, 1, 2), norm="forward")
    F *= (g.spacing**3 / (2.0 * np.pi) ** 1.5) * ks.phase[..., None]
    return SpectralField(g, F)


def _synthesize(grid, modes):
    """Synthesis sum over the leading three axes; complex result."""
    ph = kspace(grid).phase
    if modes.ndim == 4:
        ph = ph[..., None]
    f = sfft.fftn(modes * ph, axes=(0, 1, 2))
    f *= grid.dk**3 / (2.0 * np.pi) ** 1.5
    return f


def dft_inverse(F, reality_tol=REALITY_TOL):
    """Spectrum -> real grid field.

    Raises
    ------
    RealityViolated
        If the imaginary residue exceeds ``reality_tol`` relative to the real part.
    """
    g = F.grid
    f = _synthesize(g, F.modes)
    scale = np.abs(f.real).max()
    resid = np.abs(f.imag).max()
    if resid > reality_tol * max(scale, np.finfo(float).tiny):
        raise RealityViolated(f"imaginary residue {resid:.3g} vs real scale {scale:.3g}")
    return RealVectorFieldGrid(g, np.ascontiguousarray(f.real))


def mirror(F):
    """Modes at -k, in the same index layout as ``F``."""
    return np.roll(np.flip(F, axis=(0, 1, 2)), 1, axis=(0, 1, 2))


def hermitian_error(F):
    """max |F(-k) - conj F(k)| relative to max |F|; zero for spectra of real fields."""
    m = F.modes
    scale = np.abs(m).max()
    if scale == 0:
        return 0.0
    return float(np.abs(mirror(m) - np.conj(m)).max() / scale)


def transversality_error(F):
    """Relative L2 size of the longitudinal part e_k (e_k . F)."""
    ks = kspace(F.grid)
    total = np.sqrt(np.sum(np.abs(F.modes) ** 2))
    if total == 0:
        return 0.0
    long = np.einsum("...i,...i->...", ks.ek, F.modes)
    return float(np.sqrt(np.sum(np.abs(long) ** 2)) / total)


def transverse_project(F):
    """Remove the longitudinal part of every mode; zero k = 0 and Nyquist modes."""
    ks = kspace(F.grid)
    m = F.modes - ks.ek * np.einsum("...i,...i->...", ks.ek, F.modes)[..., None]
    m[ks.dead] = 0.0
    return SpectralField(F.grid, m)


def spectral_divergence(F):
    """Spectrum of div f. Synthesis uses e^{-ik.r}, so grad -> -i k."""
    ks = kspace(F.grid)
    return -1j * np.einsum("...i,...i->...", ks.k, F.modes)


def spectral_curl(F):
    ks = kspace(F.grid)
    return SpectralField(F.grid, -1j * np.cross(ks.k, F.modes))


def cross_ek(F):
    return np.cross(kspace(F.grid).ek, F.modes)


@dataclass(frozen=True, eq=False)
class CauchyState:
    """Transverse, Hermitian initial-data spectra.

    ``initial`` optionally keeps the real-space samples the spectra were built
    from; :func:`propagate` returns them untouched at t = 0.
    """

    E0k: SpectralField
    B0k: SpectralField
    initial: EMField | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        _check_same_grid(self.E0k, self.B0k)

    @property
    def grid(self):
        return self.E0k.grid

    @classmethod
    def from_grids(cls, E, B, project=True, tol=TRANSVERSE_TOL):
        """Build a state from sampled initial fields.

        With ``project=False`` the sampled data must already be transverse to
        within ``tol``; otherwise :class:`NotTransversal` is raised.
        """
        _check_same_grid(E, B)
        Ek, Bk = dft_forward(E), dft_forward(B)
        if not project:
            for name, F in (("E", Ek), ("B", Bk)):
                err = transversality_error(F)
                if err > tol:
                    raise NotTransversal(
                        f"initial {name} has longitudinal fraction {err:.3g} > {tol:.3g}; "
                        "its divergence is not zero (project it first)"
                    )
        return cls(transverse_project(Ek), transverse_project(Bk), EMField(E.samples, B.samples))

    def check(self, tol=TRANSVERSE_TOL):
        for name, F in (("E0k", self.E0k), ("B0k", self.B0k)):
            err = transversality_error(F)
            if err > tol:
                raise NotTransversal(f"{name} longitudinal fraction {err:.3g} exceeds {tol:.3g}")


def sample_initial(grid, params):
    """Knot initial data E0, B0 sampled on ``grid``."""
    _require_unit_length(params)
    X, Y, Z = grid.mesh()
    E, B = eval_initial(X, Y, Z, params)
    return RealVectorFieldGrid(grid, E), RealVectorFieldGrid(grid, B)


def knot_state(grid, params):
    """Cauchy state from sampled knot initial data, projected to transverse."""
    E, B = sample_initial(grid, params)
    return CauchyState.from_grids(E, B, project=True)


def analytic_spectrum(k, params, units=INTERNAL):
    """Closed-form spectra of the knot initial data.

    ``k`` is the dimensionless wavevector K = L0 k with shape (..., 3). Returns
    ``EMField(E=E0k, B=B0k)`` with complex components, both zero at K = 0.
    """
    n, m, l, s = params.integers
    k = np.asarray(k, dtype=float)
    Kx, Ky, Kz = k[..., 0], k[..., 1], k[..., 2]
    K = np.sqrt(Kx**2 + Ky**2 + Kz**2)
    invK = np.divide(1.0, K, out=np.zeros_like(K), where=K > 0)
    pref = params.L0 * np.sqrt(params.a) * np.exp(-K) / np.sqrt(2.0 * np.pi)
    zero = np.zeros_like(K)
    poloidal_b = np.stack([Kx * Kz, Ky * Kz, -(Kx**2) - Ky**2], axis=-1)
    toroidal_b = np.stack([Ky, -Kx, zero], axis=-1)
    poloidal_e = np.stack([Ky**2 + Kz**2, -Kx * Ky, -Kx * Kz], axis=-1)
    toroidal_e = np.stack([zero, -Kz, Ky], axis=-1)
    B = pref[..., None] * (n * invK[..., None] * poloidal_b + 1j * m * toroidal_b)
    E = (units.c * pref)[..., None] * (l * invK[..., None] * poloidal_e + 1j * s * toroidal_e)
    return EMField(E, B)


def _require_unit_length(params):
    if params.L0 != 1.0:
        raise ValueError("grid coordinates are measured in units of L0; use L0 = 1 on grids")


def analytic_state(grid, params):
    """Cauchy state built directly from the closed-form spectra."""
    _require_unit_length(params)
    ks = kspace(grid)
    E, B = analytic_spectrum(ks.k, params)
    E[ks.dead] = 0.0
    B[ks.dead] = 0.0
    return CauchyState(SpectralField(grid, E), SpectralField(grid, B))


def propagate_spectra(state, t):
    """Per-mode rotation E0k cos(wt) - i e_k x B0k sin(wt), B0k cos(wt) + i e_k x E0k sin(wt)."""
    ks = kspace(state.grid)
    c = np.cos(ks.kmag * t)[..., None]
    s = np.sin(ks.kmag * t)[..., None]
    E0, B0 = state.E0k.modes, state.B0k.modes
    Ek = E0 * c - 1j * np.cross(ks.ek, B0) * s
    Bk = B0 * c + 1j * np.cross(ks.ek, E0) * s
    return SpectralField(state.grid, Ek), SpectralField(state.grid, Bk)


def propagate(state, t, tol=TRANSVERSE_TOL):
    """Real-space E and B at dimensionless time ``t``.

    Raises
    ------
    NotTransversal
        If the state spectra are not transverse to within ``tol``.
    RealityViolated
        If the synthesised fields have an imaginary residue above 1e-10.
    """
    state.check(tol)
    if t == 0 and state.initial is not None:
        g = state.grid
        return RealVectorFieldGrid(g, state.initial.E), RealVectorFieldGrid(g, state.initial.B)
    Ek, Bk = propagate_spectra(state, t)
    return dft_inverse(Ek), dft_inverse(Bk)


def field_energy(E, B):
    """Riemann sum of (|E|^2 + |B|^2)/2."""
    _check_same_grid(E, B)
    return float(0.5 * np.sum(E.samples**2 + B.samples**2) * E.grid.spacing**3)


def spectral_energy(Ek, Bk):
    """Same energy by Parseval, directly from the modes."""
    return float(0.5 * (np.sum(np.abs(Ek.modes) ** 2) + np.sum(np.abs(Bk.modes) ** 2)) * Ek.grid.dk**3)


@dataclass(frozen=True)
class MaxwellResidual:
    """Max and L2 norms of the four vacuum-Maxwell residuals at one time."""

    t: float
    dt: float
    field_l2: float
    max_norm: dict
    l2_norm: dict

    @property
    def relative_l2(self):
        scale = self.field_l2 if self.field_l2 > 0 else 1.0
        return {k: v / scale for k, v in self.l2_norm.items()}

    def to_dict(self):
        return {
            "t": self.t,
            "dt": self.dt,
            "field_l2": self.field_l2,
            "max": dict(self.max_norm),
            "l2": dict(self.l2_norm),
            "relative_l2": self.relative_l2,
        }


def maxwell_residual(state, t, dt=1e-3):
    """Residuals of div E, div B, dB/dt + curl E and dE/dt - curl B.

    Spatial derivatives are spectral on the real grid at ``t``; time derivatives
    are centred differences of :func:`propagate` at t +/- dt.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    state.check()
    g = state.grid

    def fields(time):
        Ek, Bk = propagate_spectra(state, time)
        return dft_inverse(Ek), dft_inverse(Bk)

    E, B = fields(t)
    Ep, Bp = fields(t + dt)
    Em, Bm = fields(t - dt)
    Ek, Bk = dft_forward(E), dft_forward(B)

    def real(modes):
        return _synthesize(g, modes).real

    div_e = real(spectral_divergence(Ek))
    div_b = real(spectral_divergence(Bk))
    faraday = (Bp.samples - Bm.samples) / (2 * dt) + real(spectral_curl(Ek).modes)
    ampere = (Ep.samples - Em.samples) / (2 * dt) - real(spectral_curl(Bk).modes)
    dv = g.spacing**3
    out_max, out_l2 = {}, {}
    for name, r in (("div_E", div_e), ("div_B", div_b), ("faraday", faraday), ("ampere", ampere)):
        out_max[name] = float(np.abs(r).max())
        out_l2[name] = float(np.sqrt(np.sum(r * r) * dv))
    field_l2 = float(np.sqrt(np.sum(E.samples**2 + B.samples**2) * dv))
    return MaxwellResidual(float(t), float(dt), field_l2, out_max, out_l2)


def relative_l2_error(E, B, E_ref, B_ref, mask=None):
    """sqrt(sum |dE|^2 + |dB|^2) / sqrt(sum |E_ref|^2 + |B_ref|^2) over ``mask``."""
    sel = (lambda a: a) if mask is None else (lambda a: a[mask])
    num = np.sum(sel(E - E_ref) ** 2) + np.sum(sel(B - B_ref) ** 2)
    den = np.sum(sel(E_ref) ** 2) + np.sum(sel(B_ref) ** 2)
    return float(np.sqrt(num / den))
