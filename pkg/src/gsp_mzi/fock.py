"""Independent brute-force engine in a truncated Fock basis.

States enter as Schmidt-coefficient sequences over photon pairs, propagate
through the interferometer by exact rotations within each total-photon
sector (the rotation generator is block tridiagonal, so each sector is an
eigendecomposition of a real symmetric tridiagonal matrix), lose photons
through explicit Kraus sums, and yield every metric by direct summation.
Nothing here touches the generating-function machinery; agreement between
the two engines is the repository's master equivalence property.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from .errors import CutoffOverflowError, DomainError, NumericFailureError
from .loss import LossConfig, Placement
from .metrology import PhasePoint
from .states import GspParams, QuadraturePhases

__all__ = [
    "HARD_CUTOFF",
    "SchmidtState",
    "TwoModeState",
    "choose_cutoff",
    "build_gsp_schmidt",
    "build_tmsv",
    "build_ps_tmsv",
    "build_pa_tmsv",
    "oracle_moment",
    "oracle_apn",
    "oracle_antibunching",
    "oracle_quadrature_variances",
    "oracle_squeezing_db",
    "oracle_delta_db",
    "oracle_qfi",
    "apply_mzi",
    "oracle_parity",
    "oracle_parity_external",
    "oracle_parity_internal",
    "oracle_sensitivity",
]

HARD_CUTOFF = 512


@dataclass(frozen=True)
class SchmidtState:
    """Pure two-mode state sum_j c_j |j, j> with real coefficients."""

    coeffs: np.ndarray
    cutoff: int
    normalized: bool = True

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        object.__setattr__(self, "coeffs", coeffs)
        if coeffs.ndim != 1 or len(coeffs) != self.cutoff + 1:
            raise ValueError("coefficient vector must have length cutoff + 1")
        if self.normalized and abs(coeffs @ coeffs - 1.0) > 1e-12:
            raise NumericFailureError("Schmidt coefficients are not normalized")


@dataclass(frozen=True)
class TwoModeState:
    """Dense two-mode amplitudes psi[n_a, n_b]."""

    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def photon_number_distribution(self) -> np.ndarray:
        """Probability of each total photon number (anti-diagonal sums)."""
        prob = np.abs(self.amplitudes) ** 2
        size = prob.shape[0]
        out = np.zeros(2 * size - 1)
        for total in range(2 * size - 1):
            ks = np.arange(max(0, total - size + 1), min(total, size - 1) + 1)
            out[total] = prob[ks, total - ks].sum()
        return out


# ---------------------------------------------------------------------------
# state builders


def _gsp_weight_amplitudes(p: GspParams, count: int) -> np.ndarray:
    j = np.arange(count, dtype=float)
    return p.z**j * (p.s * (j + 1.0) + p.t * j) ** (p.m + p.n)


def choose_cutoff(p: GspParams, tol: float = 1e-13) -> int:
    """Smallest pair cutoff whose tail weight is negligible at ``tol``.

    Extends the unnormalized weight sum until ten consecutive terms each
    contribute less than tol times the running total.
    """
    if not 0.0 < tol <= 1e-6:
        raise DomainError(f"cutoff tolerance must lie in (0, 1e-6], got {tol}")
    total = 0.0
    run = 0
    last_significant = 0
    for j in range(HARD_CUTOFF + 1):
        amp = p.z**j * (p.s * (j + 1.0) + p.t * j) ** (p.m + p.n)
        w = amp * amp
        total += w
        if j > 0 and w < tol * total:
            run += 1
            if run >= 10:
                return last_significant
        else:
            run = 0
            last_significant = j
    raise CutoffOverflowError(
        f"needed more than {HARD_CUTOFF} photon pairs for {p} at tol={tol}"
    )


def _normalized(amps: np.ndarray) -> np.ndarray:
    norm = math.sqrt(float(amps @ amps))
    if norm == 0.0 or not math.isfinite(norm):
        raise NumericFailureError("state amplitudes do not normalize")
    return amps / norm


def build_gsp_schmidt(p: GspParams, cutoff: int | None = None) -> SchmidtState:
    """Schmidt coefficients c_j proportional to z^j [s(j+1) + t j]^(m+n)."""
    if cutoff is None:
        cutoff = choose_cutoff(p)
    amps = _gsp_weight_amplitudes(p, cutoff + 1)
    return SchmidtState(_normalized(amps), cutoff)


def build_tmsv(z: float, cutoff: int | None = None) -> SchmidtState:
    return build_gsp_schmidt(GspParams(s=1.0, m=0, n=0, z=z), cutoff)


def build_ps_tmsv(z: float, cutoff: int | None = None) -> SchmidtState:
    """Both modes lose one photon: c_k proportional to (k+1) z^k."""
    if cutoff is None:
        cutoff = choose_cutoff(GspParams(s=1.0, m=1, n=0, z=z))
    k = np.arange(cutoff + 1, dtype=float)
    return SchmidtState(_normalized((k + 1.0) * z**k), cutoff)


def build_pa_tmsv(z: float, cutoff: int | None = None) -> SchmidtState:
    """Both modes gain one photon: c_k proportional to k z^k, c_0 = 0."""
    if cutoff is None:
        cutoff = choose_cutoff(GspParams(s=0.0, m=1, n=0, z=z))
    k = np.arange(cutoff + 1, dtype=float)
    return SchmidtState(_normalized(k * z**k), cutoff)


# ---------------------------------------------------------------------------
# moments by direct ladder-operator action


def oracle_moment(st: SchmidtState, l: int, k: int, h: int, g: int) -> complex:
    """<a^l b^k adag^h bdag^g> summed term by term over the Schmidt expansion.

    Vanishes identically unless l - h == k - g: the bra pair index must shift
    equally in both modes.
    """
    for o in (l, k, h, g):
        if int(o) != o or not 0 <= o <= 4:
            raise DomainError(f"moment orders must be integers in [0, 4], got {(l, k, h, g)}")
    if l - h != k - g:
        return 0j
    c = st.coeffs
    shift = h - l  # bra index i = j + shift
    j = np.arange(st.cutoff + 1, dtype=float)
    valid = (j + shift >= 0) & (j + shift <= st.cutoff)
    j = j[valid]
    i = j + shift
    factor = np.ones_like(j)
    for r in range(1, h + 1):
        factor *= j + r
    for r in range(1, g + 1):
        factor *= j + r
    for r in range(1, l + 1):
        factor *= i + r
    for r in range(1, k + 1):
        factor *= i + r
    terms = c[valid.nonzero()[0]] * c[(j + shift).astype(int)] * np.sqrt(factor)
    return complex(terms.sum())


def oracle_apn(st: SchmidtState) -> float:
    """Per-mode mean photon number."""
    j = np.arange(st.cutoff + 1, dtype=float)
    return float(st.coeffs**2 @ j)


def _pair_moment(st: SchmidtState, power: int) -> float:
    j = np.arange(st.cutoff + 1, dtype=float)
    return float(st.coeffs**2 @ j**power)


def oracle_antibunching(st: SchmidtState) -> float:
    mean = _pair_moment(st, 1)
    mean_sq = _pair_moment(st, 2)
    if mean_sq <= 0.0:
        raise DomainError("degenerate number correlation")
    # <adag^2 a^2> = <j(j-1)> per mode; the cross correlation is <j^2>
    return (mean_sq - mean) / mean_sq - 1.0


def oracle_pair_coherence(st: SchmidtState) -> float:
    """<ab> = sum_j c_j c_{j+1} (j+1)."""
    c = st.coeffs
    j = np.arange(st.cutoff, dtype=float)
    return float((c[:-1] * c[1:] * (j + 1.0)).sum())


def oracle_quadrature_variances(
    st: SchmidtState, phases: QuadraturePhases = QuadraturePhases()
) -> tuple[float, float]:
    na = oracle_apn(st)
    ab = oracle_pair_coherence(st)
    c = math.cos(phases.theta1 + phases.theta2)
    return 1.0 + 2.0 * na + 2.0 * ab * c, 1.0 + 2.0 * na - 2.0 * ab * c


def oracle_squeezing_db(st: SchmidtState) -> float:
    v1, _ = oracle_quadrature_variances(st)
    return 10.0 * math.log10(v1)


def oracle_delta_db(st: SchmidtState, reference: SchmidtState) -> float:
    v1, _ = oracle_quadrature_variances(st)
    v1_ref, _ = oracle_quadrature_variances(reference)
    return 10.0 * math.log10(v1 / v1_ref)


def oracle_qfi(st: SchmidtState) -> float:
    """4 Var(J2) by direct summation; equals 2<j> + 2<j^2> plus cross terms."""
    diag = 2.0 * _pair_moment(st, 1) + 2.0 * _pair_moment(st, 2)
    cross = oracle_moment(st, 0, 2, 2, 0) + oracle_moment(st, 2, 0, 0, 2)
    j2 = (oracle_moment(st, 0, 1, 1, 0) - oracle_moment(st, 1, 0, 0, 1)) / 2j
    return diag - cross.real - 4.0 * abs(j2) ** 2


# ---------------------------------------------------------------------------
# sector rotations
#
# Within the total-photon-N sector (basis index k = n_a), the generator
# J2 = (adag b - a bdag)/(2i) equals D M Ddag with D = diag(i^k) and M the
# real symmetric tridiagonal matrix with off-diagonal -sqrt((k+1)(N-k))/2,
# while J1 = (adag b + a bdag)/2 equals -M.  One cached eigendecomposition
# of M per sector therefore serves every rotation angle of both generators.


@lru_cache(maxsize=4096)
def _sector_eigen(nphot: int):
    if nphot == 0:
        return np.zeros(1), np.ones((1, 1))
    k = np.arange(nphot, dtype=float)
    off = -0.5 * np.sqrt((k + 1.0) * (nphot - k))
    lam, vec = eigh_tridiagonal(np.zeros(nphot + 1), off)
    return lam, vec


def _j2_rotation_column(nphot: int, angle: float, src: int) -> np.ndarray:
    """Column ``src`` of exp(-i angle J2) in the sector of ``nphot`` photons."""
    lam, vec = _sector_eigen(nphot)
    d = 1j ** np.arange(nphot + 1)
    t = np.conj(d[src]) * vec[src, :]
    return d * (vec @ (np.exp(-1j * angle * lam) * t))


def _j2_rotation_matrix(nphot: int, angle: float) -> np.ndarray:
    lam, vec = _sector_eigen(nphot)
    d = 1j ** np.arange(nphot + 1)
    core = (vec * np.exp(-1j * angle * lam)) @ vec.T
    return (d[:, None] * core) * np.conj(d)[None, :]


@lru_cache(maxsize=4096)
def _first_bs_column(nphot: int) -> np.ndarray:
    """Column n_a = nphot/2 of the first splitter exp(-i (pi/2) J1)."""
    lam, vec = _sector_eigen(nphot)
    src = nphot // 2
    return vec @ (np.exp(1j * (math.pi / 2.0) * lam) * vec[src, :])


@lru_cache(maxsize=4096)
def _parity_through_second_bs(nphot: int) -> np.ndarray:
    """B2dag (-1)^(n_b) B2 with B2 = exp(+i (pi/2) J1), as a sector block."""
    lam, vec = _sector_eigen(nphot)
    b2 = (vec * np.exp(-1j * (math.pi / 2.0) * lam)) @ vec.T
    n_b = nphot - np.arange(nphot + 1)
    parity = np.where(n_b % 2 == 1, -1.0, 1.0)
    return b2.conj().T @ (parity[:, None] * b2)


def apply_mzi(st: SchmidtState, mzi_angle: float) -> TwoModeState:
    """Propagate through exp(-i angle J2), exactly within each sector."""
    size = 2 * st.cutoff + 1
    out = np.zeros((size, size), dtype=np.complex128)
    for j, c in enumerate(st.coeffs):
        if c == 0.0:
            continue
        nphot = 2 * j
        col = c * _j2_rotation_column(nphot, mzi_angle, j)
        ks = np.arange(nphot + 1)
        out[ks, nphot - ks] += col
    state = TwoModeState(out)
    if abs(state.norm() - 1.0) > 1e-9:
        raise NumericFailureError(f"rotation lost norm: {state.norm()}")
    return state


def _detected_mode_expectation(tm: TwoModeState, weights: np.ndarray) -> float:
    prob = np.abs(tm.amplitudes) ** 2
    return float(prob.sum(axis=0) @ weights)


def oracle_parity(st: SchmidtState, pp: PhasePoint) -> float:
    """Parity of the detected mode on the rotated state."""
    tm = apply_mzi(st, pp.mzi_angle)
    size = tm.amplitudes.shape[1]
    signs = np.where(np.arange(size) % 2 == 1, -1.0, 1.0)
    return _detected_mode_expectation(tm, signs)


def oracle_parity_external(st: SchmidtState, pp: PhasePoint, eta1: float) -> float:
    """Detector-side loss via the dual observable (1 - 2 eta1)^(n_b)."""
    if not 0.0 < eta1 <= 1.0:
        raise DomainError(f"transmissivity must lie in (0, 1], got {eta1}")
    tm = apply_mzi(st, pp.mzi_angle)
    size = tm.amplitudes.shape[1]
    weights = (1.0 - 2.0 * eta1) ** np.arange(size, dtype=float)
    return _detected_mode_expectation(tm, weights)


def _pre_loss_state(st: SchmidtState, angle: float) -> np.ndarray:
    """State after the first splitter and the phase shifter."""
    size = 2 * st.cutoff + 1
    psi = np.zeros((size, size), dtype=np.complex128)
    for j, c in enumerate(st.coeffs):
        if c == 0.0:
            continue
        nphot = 2 * j
        ks = np.arange(nphot + 1)
        col = c * _first_bs_column(nphot) * np.exp(-1j * angle * (ks - j))
        psi[ks, nphot - ks] += col
    return psi


def _damping_branches(psi: np.ndarray, eta: float) -> np.ndarray:
    """Kraus branches of amplitude damping on mode b, stacked along axis 0.

    Branch count adapts until the captured trace is within 1e-14 of one.
    """
    size = psi.shape[1]
    if eta == 1.0:
        return psi[None, :, :]
    n = np.arange(size, dtype=float)
    log_eta = math.log(eta)
    log_loss = math.log1p(-eta)
    branches = []
    captured = 0.0
    for kk in range(size):
        kept = size - kk
        nb = n[:kept]
        log_f = 0.5 * (
            gammaln(nb + kk + 1.0)
            - gammaln(kk + 1.0)
            - gammaln(nb + 1.0)
            + nb * log_eta
            + kk * log_loss
        )
        branch = np.zeros_like(psi)
        branch[:, :kept] = psi[:, kk:] * np.exp(log_f)[None, :]
        branches.append(branch)
        captured += float(np.linalg.norm(branch) ** 2)
        if 1.0 - captured < 1e-14:
            break
    return np.stack(branches)


def oracle_parity_internal(st: SchmidtState, pp: PhasePoint, eta2: float) -> float:
    """Loss between phase shifter and second splitter, as an explicit Kraus sum."""
    if not 0.0 < eta2 <= 1.0:
        raise DomainError(f"transmissivity must lie in (0, 1], got {eta2}")
    psi = _pre_loss_state(st, pp.mzi_angle)
    branches = _damping_branches(psi, eta2)
    size = psi.shape[0]
    value = 0.0
    for nphot in range(size):
        ks = np.arange(nphot + 1)
        block = branches[:, ks, nphot - ks]  # (branches, sector dim)
        if not block.any():
            continue
        obs = _parity_through_second_bs(nphot)
        value += float(np.sum((block.conj() @ obs) * block).real)
    return value


def _parity_function(st: SchmidtState, loss: LossConfig | None):
    if loss is None:
        return lambda phi: oracle_parity(st, PhasePoint(phi))
    if loss.placement is Placement.EXTERNAL:
        return lambda phi: oracle_parity_external(st, PhasePoint(phi), loss.eta)
    return lambda phi: oracle_parity_internal(st, PhasePoint(phi), loss.eta)


def oracle_sensitivity(st: SchmidtState, pp: PhasePoint, loss: LossConfig | None = None) -> float:
    """Error-propagation uncertainty from central differences of the parity.

    The step is scaled to the signal's expected feature width (set by the
    Fisher information), then Richardson-extrapolated with a step-halving
    convergence check.
    """
    f = _parity_function(st, loss)
    phi = pp.detection_phase
    value = f(phi)
    width_scale = math.sqrt(max(oracle_qfi(st), 1.0))
    h = min(1e-3, max(1e-5, 0.05 / width_scale))

    def central(step):
        return (f(phi + step) - f(phi - step)) / (2.0 * step)

    d1 = central(h)
    d2 = central(h / 2.0)
    deriv = (4.0 * d2 - d1) / 3.0
    if abs(d2 - d1) > 1e-4 * abs(deriv):
        # curvature too strong for two levels; add one and compare extrapolants
        d4 = central(h / 4.0)
        coarse = deriv
        deriv = (4.0 * d4 - d2) / 3.0
        if abs(deriv - coarse) > max(2e-6 * abs(deriv), 1e-10):
            raise NumericFailureError(
                f"parity derivative did not converge at detection phase {phi}"
            )
    if abs(deriv) < 1e-12:
        raise DomainError(f"parity signal is stationary at detection phase {phi}")
    return math.sqrt(max(0.0, 1.0 - value * value)) / abs(deriv)
