"""
Gaussian-state conventions, state types and diagnostics.

Quadratures are ordered [x+, p+, x-, p-] with x = (a + a^dag)/sqrt(2) and
p = (a - a^dag)/(i sqrt(2)), so the vacuum variance is 1/2 per quadrature.
Natural units: hbar = k_B = 1.

Photon numbers are totals over both modes. The closed-form <N+1> starts at
2*nbar + 1 for a thermal state, which only matches a two-mode total.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ringlight.core.config import settings
from ringlight.core.exceptions import DomainError, PhysicalityError
from ringlight.core.logging import get_logger

logger = get_logger(__name__)

QUADRATURE_ORDER: Tuple[str, ...] = ("x+", "p+", "x-", "p-")
VACUUM_VARIANCE = 0.5

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
OMEGA = np.block([[J2, np.zeros((2, 2))], [np.zeros((2, 2)), J2]])

# Partial transposition of the -k mode flips the sign of p-.
PARTIAL_TRANSPOSE = np.diag([1.0, 1.0, 1.0, -1.0])


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


def symmetrize(cov: np.ndarray) -> np.ndarray:
    """Return (cov + cov^T)/2."""
    cov = np.asarray(cov, dtype=float)
    return 0.5 * (cov + cov.T)


@dataclass(frozen=True)
class BathParams:
    """Markovian bath: coupling rate gamma and mean occupation nbar."""
    gamma: float = 0.0
    nbar: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.gamma) or self.gamma < 0:
            raise DomainError(f"gamma must be >= 0, got {self.gamma}")
        if not np.isfinite(self.nbar) or self.nbar < 0:
            raise DomainError(f"nbar must be >= 0, got {self.nbar}")


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Mean vector and covariance matrix of the (+k, -k) mode pair."""
    mean: np.ndarray = field(default_factory=lambda: np.zeros(4))
    cov: np.ndarray = field(default_factory=lambda: VACUUM_VARIANCE * np.eye(4))

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.asarray(self.cov, dtype=float)
        if mean.shape != (4,) or cov.shape != (4, 4):
            raise DomainError(
                f"expected mean (4,) and cov (4, 4), got {mean.shape} and {cov.shape}"
            )
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise DomainError("state contains non-finite entries")
        object.__setattr__(self, "mean", _frozen(mean))
        object.__setattr__(self, "cov", _frozen(symmetrize(cov)))

    @classmethod
    def vacuum(cls) -> "GaussianState":
        return cls()

    def transformed(self, S: np.ndarray, shift: Optional[np.ndarray] = None) -> "GaussianState":
        """Apply x -> S x (+ shift) to the state."""
        mean = S @ self.mean if shift is None else S @ self.mean + shift
        return GaussianState(mean=mean, cov=S @ self.cov @ S.T)


def thermal_state(nbar: float) -> GaussianState:
    """
    Thermal state with nbar quanta per mode.

    This is also the stationary covariance of the unmodulated bath dynamics.
    """
    if nbar < 0:
        raise DomainError(f"nbar must be >= 0, got {nbar}")
    return GaussianState(mean=np.zeros(4), cov=(nbar + 0.5) * np.eye(4))


def two_mode_squeezed_state(r: float) -> GaussianState:
    """Two-mode squeezed vacuum with squeezing parameter r."""
    c = 0.5 * np.cosh(2 * r)
    s = 0.5 * np.sinh(2 * r)
    diag = c * np.eye(2)
    off = s * np.diag([1.0, -1.0])
    return GaussianState(mean=np.zeros(4), cov=np.block([[diag, off], [off, diag]]))


def bath_occupation(freq_over_temp: float) -> float:
    """
    Bose-Einstein occupation 1/(exp(hbar w / k_B T) - 1).

    Zero temperature is not a valid input here; callers use nbar = 0 for it.
    """
    if not freq_over_temp > 0:
        raise DomainError(f"hbar*w/(k_B*T) must be > 0, got {freq_over_temp}")
    with np.errstate(over="ignore"):
        return float(1.0 / np.expm1(freq_over_temp))


def photon_number(state: GaussianState) -> float:
    """Total photon number <N> over both modes."""
    return float((np.trace(state.cov) + state.mean @ state.mean - 2.0) / 2.0)


def symplectic_eigenvalues(cov: np.ndarray) -> Tuple[float, float]:
    """
    The two symplectic eigenvalues of a 4x4 covariance matrix, ascending.

    Computed from the moduli of the eigenvalues of Omega @ cov; each value
    appears twice in that spectrum.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (4, 4):
        raise DomainError(f"expected a 4x4 covariance, got {cov.shape}")
    if np.min(np.linalg.eigvalsh(symmetrize(cov))) <= 0:
        raise DomainError("covariance matrix is not positive definite")
    moduli = np.sort(np.abs(np.linalg.eigvals(OMEGA @ cov)))
    return float(moduli[0]), float(moduli[2])


def symplectic_eigenvalues_from_invariants(delta: float, det: float) -> Tuple[float, float]:
    """
    Two-mode symplectic eigenvalues from Delta and det, ascending.

    The larger one comes from the quadratic formula; the smaller one is
    sqrt(det)/nu_large, which stays accurate when det << Delta^2.
    """
    if not (delta > 0 and det > 0):
        raise DomainError(f"need Delta > 0 and det > 0, got {delta}, {det}")
    disc = np.sqrt(max(delta ** 2 - 4.0 * det, 0.0))
    large = np.sqrt(0.5 * (delta + disc))
    return float(np.sqrt(det) / large), float(large)


def symplectic_eigenvalues_invariant(cov: np.ndarray) -> Tuple[float, float]:
    """
    Two-mode symplectic eigenvalues from the Delta invariant.

    nu^2 solves nu^4 - Delta nu^2 + det cov = 0 with
    Delta = det A + det B + 2 det C for cov = [[A, C], [C^T, B]].
    """
    cov = np.asarray(cov, dtype=float)
    A, B, C = cov[:2, :2], cov[2:, 2:], cov[:2, 2:]
    delta = np.linalg.det(A) + np.linalg.det(B) + 2 * np.linalg.det(C)
    return symplectic_eigenvalues_from_invariants(float(delta), float(np.linalg.det(cov)))


def require_physical(smallest: float, tol: Optional[float] = None) -> float:
    """Raise PhysicalityError if a symplectic eigenvalue is below 1/2 - tol."""
    tol = settings.physicality_tol if tol is None else tol
    if smallest < VACUUM_VARIANCE - tol:
        logger.error("unphysical covariance", min_symplectic_eigenvalue=smallest)
        raise PhysicalityError(
            f"smallest symplectic eigenvalue {smallest:.3e} < 1/2",
            min_symplectic_eigenvalue=smallest,
        )
    return smallest


def check_physical(state_or_cov, tol: Optional[float] = None) -> float:
    """
    Raise PhysicalityError unless both symplectic eigenvalues are >= 1/2 - tol.

    Returns the smallest symplectic eigenvalue.
    """
    cov = state_or_cov.cov if isinstance(state_or_cov, GaussianState) else state_or_cov
    try:
        smallest, _ = symplectic_eigenvalues(cov)
    except DomainError as exc:
        raise PhysicalityError(str(exc)) from exc
    return require_physical(smallest, tol)


def logarithmic_negativity(cov: np.ndarray) -> float:
    """
    Logarithmic negativity (base 2) of the +k / -k bipartition.

    Evaluated on the entries of ``cov``, so errors in those entries set a floor
    on the smallest partially transposed eigenvalue. Long runs evaluate it
    from tracked block invariants instead (``dynamics.MixedFrameMoments``).
    """
    cov = np.asarray(cov, dtype=float)
    check_physical(cov)
    pt = PARTIAL_TRANSPOSE @ cov @ PARTIAL_TRANSPOSE
    smallest, _ = symplectic_eigenvalues(pt)
    return logneg_from_eigenvalue(smallest)


def logneg_from_eigenvalue(smallest_pt: float) -> float:
    """max(0, -log2(2 nu~)) for the smallest partially transposed eigenvalue nu~."""
    return float(max(0.0, -np.log2(2.0 * smallest_pt)))


def purity(cov: np.ndarray) -> float:
    """Tr(rho^2) = 1/(4 sqrt(det cov)); equals 1 iff the state is pure."""
    return float(1.0 / (4.0 * np.sqrt(np.linalg.det(np.asarray(cov, dtype=float)))))


def max_entanglement_bound(n_total: float) -> float:
    """log2(<N> + 1): entanglement of the maximally entangled symmetric state."""
    if n_total < 0:
        raise DomainError(f"photon number must be >= 0, got {n_total}")
    return float(np.log2(n_total + 1.0))


def logneg_energy_bound(n_total: float) -> float:
    """
    Largest logarithmic negativity reachable with ``n_total`` photons.

    arccosh(<N> + 1)/ln 2, saturated by the two-mode squeezed vacuum. It exceeds
    ``max_entanglement_bound`` by at most one bit.
    """
    if n_total < 0:
        raise DomainError(f"photon number must be >= 0, got {n_total}")
    return float(np.arccosh(n_total + 1.0) / np.log(2.0))
