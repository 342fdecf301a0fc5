"""
Canned verification suites behind ``emknot verify``.

Each check returns a :class:`Check`; a suite passes when all of its checks do.
Quick mode shrinks the grid to n=64, extent=8 and multiplies every
grid-dependent tolerance by four.
"""

from dataclasses import asdict, dataclass

import numpy as np

from . import fieldlines, helicity, spectral
from .knotfields import KnotParams, base_integrals, base_integrals_oracle, eval_eb, scalar_apq

SUITES = ("maxwell", "fourier", "helicity", "topology")
QUICK_FACTOR = 4.0


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.suite}/{self.name}: {self.value:.3e} (tol {self.tolerance:.1e}) {self.detail}".rstrip()

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class Settings:
    n: int = 128
    extent: float = 16.0
    factor: float = 1.0
    seed: int = 12345

    @classmethod
    def quick(cls):
        return cls(n=64, extent=8.0, factor=QUICK_FACTOR)

    @property
    def grid(self):
        return spectral.GridSpec(self.n, self.extent)


def _check(suite, name, value, tol, detail=""):
    value = float(value)
    return Check(suite, name, bool(value < tol), value, float(tol), detail)


def _fd_jacobian(params, x, h):
    """d/dX_j of E and B by central differences in (X, Y, Z, T)."""
    dE, dB = [], []
    for j in range(4):
        e = np.zeros(4)
        e[j] = h
        Ep, Bp = eval_eb(*(x + e), params)
        Em, Bm = eval_eb(*(x - e), params)
        dE.append((Ep - Em) / (2 * h))
        dB.append((Bp - Bm) / (2 * h))
    return dE, dB


def _curl(d):
    return np.array([d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0]])


def closed_form_residuals(params, npoints=20, h=1e-3, radius=4.0, t_range=(0.0, 2.0), seed=0):
    """Max finite-difference divergence and curl residuals of the closed form."""
    rng = np.random.default_rng(seed)
    worst_div = worst_curl = 0.0
    for _ in range(npoints):
        direction = rng.normal(size=3)
        r = radius * rng.uniform() ** (1 / 3)
        x = np.append(r * direction / np.linalg.norm(direction), rng.uniform(*t_range))
        dE, dB = _fd_jacobian(params, x, h)
        div = max(abs(dE[0][0] + dE[1][1] + dE[2][2]), abs(dB[0][0] + dB[1][1] + dB[2][2]))
        curl = max(np.abs(dB[3] + _curl(dE)).max(), np.abs(dE[3] - _curl(dB)).max())
        worst_div, worst_curl = max(worst_div, div), max(worst_curl, curl)
    return worst_div, worst_curl


def null_measures(params, times, npoints=500, radius=3.0, seed=0):
    """max |E.B|/(|E||B|) and max ||E|-|B||/|B| over random points at each time."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-radius, radius, size=(npoints, 3))
    cos_max = mag_max = 0.0
    for T in times:
        E, B = eval_eb(pts[:, 0], pts[:, 1], pts[:, 2], T, params)
        nE, nB = np.linalg.norm(E, axis=-1), np.linalg.norm(B, axis=-1)
        cos_max = max(cos_max, np.max(np.abs(np.sum(E * B, axis=-1)) / (nE * nB)))
        mag_max = max(mag_max, np.max(np.abs(nE - nB) / nB))
    return cos_max, mag_max


def propagation_error(state, params, T, mask):
    E, B = spectral.propagate(state, T)
    X, Y, Z = state.grid.mesh()
    Ec, Bc = eval_eb(X[mask], Y[mask], Z[mask], T, params)
    return spectral.relative_l2_error(E.samples[mask], B.samples[mask], Ec, Bc)


def frame_identity_error(k, polar_axis=(0.0, 0.0, 1.0)):
    """Largest violation of any helicity-frame identity over the rows of ``k``."""
    f = helicity.helicity_frame(k, polar_axis)
    fm = helicity.helicity_frame(-k, polar_axis)
    dot = helicity._dot
    eR, eL, ek, e1, e2 = f.e_R, f.e_L, f.e_k, f.e1, f.e2
    residues = [
        dot(e1, e1) - 0.5,
        dot(e2, e2) - 0.5,
        dot(e1, e2),
        dot(e1, ek),
        dot(e2, ek),
        np.cross(e1, e2) - ek / 2,
        np.cross(ek, e1) - e2,
        np.cross(e2, ek) - e1,
        fm.e1 + e1,
        fm.e2 - e2,
        np.conj(eR) - eL,
        fm.e_R + eL,
        fm.e_L + eR,
        dot(ek, eR),
        dot(ek, eL),
        dot(eR, eR),
        dot(eL, eL),
        dot(eR, eL) - 1,
        np.cross(eR, eR),
        np.cross(ek, eR) + 1j * eR,
        np.cross(ek, eL) - 1j * eL,
        np.cross(eR, eL) + 1j * ek,
    ]
    return max(float(np.max(np.abs(r))) for r in residues)


def suite_maxwell(st):
    out = []
    hop, mixed = KnotParams.hopfion(), KnotParams(1, 2, 1, 1)
    for p in (hop, mixed):
        div, curl = closed_form_residuals(p, seed=st.seed)
        tag = "".join(map(str, p.integers))
        out.append(_check("maxwell", f"closed_form_divergence_{tag}", div, 1e-6))
        out.append(_check("maxwell", f"closed_form_curl_{tag}", curl, 1e-4))
    state = spectral.knot_state(st.grid, hop)
    res = spectral.maxwell_residual(state, 0.5, 1e-3)
    rel = res.relative_l2
    out.append(_check("maxwell", "spectral_div", max(rel["div_E"], rel["div_B"]), 1e-10))
    out.append(_check("maxwell", "spectral_curl_time", max(rel["faraday"], rel["ampere"]), 1e-4 * st.factor))
    cos_max, mag_max = null_measures(hop, (0.0, 1.0), seed=st.seed)
    out.append(_check("maxwell", "hopfion_null_EdotB", cos_max, 1e-6))
    out.append(_check("maxwell", "hopfion_null_magnitude", mag_max, 1e-6))
    cos_mixed, _ = null_measures(mixed, (0.0, 1.0), seed=st.seed)
    out.append(Check("maxwell", "non_null_1211", bool(cos_mixed > 1e-3), cos_mixed, 1e-3, "needs value > tol"))
    return out


def suite_fourier(st):
    out = []
    g = st.grid
    hop = KnotParams.hopfion()
    E0, B0 = spectral.sample_initial(g, hop)
    back = spectral.dft_inverse(spectral.dft_forward(B0))
    out.append(_check("fourier", "roundtrip", np.abs(back.samples - B0.samples).max() / np.abs(B0.samples).max(), 1e-10))
    Bk = spectral.dft_forward(B0)
    out.append(_check("fourier", "hermitian", spectral.hermitian_error(Bk), 1e-12))
    ana = spectral.analytic_spectrum(spectral.kspace(g).k, hop)
    err = np.linalg.norm(Bk.modes - ana.B) / np.linalg.norm(ana.B)
    out.append(_check("fourier", "analytic_spectrum_B", err, 0.01 * st.factor))
    bases = []
    for (R, T) in [(0.0, 0.0), (0.5, 1.0), (2.0, 3.0), (4.0, 4.0)]:
        A = scalar_apq(R, 0.0, 0.0, T).A
        bases.append(np.max(np.abs(np.subtract(base_integrals(A, T), base_integrals_oracle(R, T)))))
    out.append(_check("fourier", "base_integrals_oracle", max(bases), 1e-6))
    mask = g.inner_mask()
    for p in (hop, KnotParams(1, 2, 1, 1)):
        state = spectral.knot_state(g, p)
        tag = "".join(map(str, p.integers))
        for T in (0.5, 1.0, 2.0):
            out.append(_check("fourier", f"propagate_{tag}_T{T:g}", propagation_error(state, p, T, mask), 0.01 * st.factor))
        energies = [spectral.field_energy(*spectral.propagate(state, T)) for T in (0.5, 1.0, 2.0)]
        e0 = spectral.spectral_energy(state.E0k, state.B0k)
        drift = max(abs(e - e0) for e in energies) / e0
        out.append(_check("fourier", f"energy_{tag}", drift, 0.005))
    return out


def suite_helicity(st):
    out = []
    hop = KnotParams.hopfion()
    pn = helicity.photon_numbers(hop)
    out.append(_check("helicity", "hopfion_N_R", abs(pn.N_R - 1.0), 1e-6))
    out.append(_check("helicity", "hopfion_N_L", abs(pn.N_L), 1e-9))
    p = KnotParams(2, 3, 4, 5)
    pn = helicity.photon_numbers(p)
    out.append(_check("helicity", "N_2345", max(abs(pn.N_R - 13.25), abs(pn.N_L - 0.25)), 1e-6))
    rng = np.random.default_rng(st.seed)
    k = rng.normal(size=(1000, 3))
    out.append(_check("helicity", "frame_algebra", frame_identity_error(k), 1e-12))
    alt = helicity.photon_numbers(p, polar_axis=(1.0, 1.0, 0.0))
    out.append(_check("helicity", "frame_independence", max(abs(alt.N_R - pn.N_R), abs(alt.N_L - pn.N_L)), 1e-9))
    state = spectral.knot_state(st.grid, hop)
    hs = [sum(helicity.helicity_at(state, T)) for T in (0.0, 0.5, 1.0)]
    out.append(_check("helicity", "hopfion_h_equals_1", abs(hs[0] - 1.0), 0.02 * st.factor))
    out.append(_check("helicity", "hopfion_h_conserved", (max(hs) - min(hs)) / abs(hs[0]), 0.01))
    mixed = KnotParams(1, 2, 1, 1)
    ms = spectral.knot_state(st.grid, mixed)
    dT = 1e-2
    hp, hm_ = helicity.helicity_at(ms, 0.5 + dT), helicity.helicity_at(ms, 0.5 - dT)
    dhm, dhe = (hp[0] - hm_[0]) / (2 * dT), (hp[1] - hm_[1]) / (2 * dT)
    out.append(_check("helicity", "exchange_1211", abs(dhm + dhe) / max(abs(dhm), abs(dhe)), 0.05))
    return out


def suite_topology(st):
    out = []
    cases = [
        (KnotParams.hopfion(), "B", 1),
        (KnotParams(2, 3, 1, 1), "B", 6),
        (KnotParams(2, 3, 1, 1), "E", 1),
    ]
    for p, fld, expected in cases:
        M = fieldlines.linking_matrix(p, fld, 0.0)
        vals = M.off_diagonal()
        dev = np.inf if np.isnan(vals).any() else float(np.max(np.abs(vals - expected)))
        tag = "".join(map(str, p.integers))
        out.append(_check("topology", f"linking_{tag}_{fld}", dev, 0.1, f"expected {expected}"))
    return out


RUNNERS = {
    "maxwell": suite_maxwell,
    "fourier": suite_fourier,
    "helicity": suite_helicity,
    "topology": suite_topology,
}


def run(suite="all", quick=False):
    st = Settings.quick() if quick else Settings()
    names = SUITES if suite == "all" else (suite,)
    checks = []
    for name in names:
        checks.extend(RUNNERS[name](st))
    return checks
