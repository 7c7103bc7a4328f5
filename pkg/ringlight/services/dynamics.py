"""
Moment-equation dynamics of the (+k, -k) mode pair.

With collective dissipation the first and second moments obey

    dx/dt     = (A - gamma/2 Lambda) x
    dSigma/dt = A Sigma + Sigma A^T - gamma/2 (Lambda Sigma + Sigma Lambda
                - 2 Lambda Sigma_inf)

where A(t) = f(t) Omega + g(t) G is the drift of the effective Hamiltonian
f N + i g S. The orthogonal symplectic mixing Gamma sends (x+, x-) to the
symmetric and antisymmetric combinations; there A is block diagonal and the
dissipation acts only on the symmetric ("+") block. The antisymmetric
("-") block is a decoherence-free subspace.

Direct integration runs in that frame as two independent systems, one for
the damped block P with its cross block and one for the DFS block Q.

Frequency jumps of piecewise-constant profiles are applied as exact maps
K = exp(w G), w = -1/2 log(f_next/f_prev); no kick is applied at t = 0 and a
sample taken exactly at a jump reports the post-jump state.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad_vec, solve_ivp

from ringlight.core.config import settings
from ringlight.core.exceptions import (
    DomainError, IntegrationError, NumericalError, QuadratureError,
)
from ringlight.core.logging import get_logger
from ringlight.services.gaussian import (
    OMEGA, BathParams, GaussianState, check_physical, logarithmic_negativity,
    logneg_from_eigenvalue, max_entanglement_bound, photon_number, purity,
    require_physical, symmetrize, symplectic_eigenvalues_from_invariants,
)
from ringlight.services.modulation import Kick, ModulationProfile

logger = get_logger(__name__)

I2 = np.eye(2)
Z2 = np.zeros((2, 2))

# g-coefficient of the drift: x+' = g x-, p+' = -g p-, and the mirror terms.
PUMP_GENERATOR = np.array([
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 0.0, 0.0],
])

MIXING = np.block([[I2, I2], [I2, -I2]]) / np.sqrt(2.0)
COLLECTIVE_DISSIPATION = np.block([[I2, I2], [I2, I2]])


class Block(str, Enum):
    """Decoupled blocks in the mixed frame: "+" is damped, "-" is the DFS."""
    PLUS = "+"
    MINUS = "-"

    @property
    def sign(self) -> float:
        return 1.0 if self is Block.PLUS else -1.0


def as_block(block) -> Block:
    try:
        return Block(block)
    except ValueError:
        raise DomainError(f"block must be '+' or '-', got {block!r}") from None


@dataclass(frozen=True, eq=False)
class FrameAndBath:
    """Mixed-frame transform and the bath matrices for occupation nbar."""
    gamma_frame: np.ndarray
    lambda_diss: np.ndarray
    lambda_prime: np.ndarray
    sigma_inf: np.ndarray

    def to_primed(self, state: GaussianState) -> GaussianState:
        return state.transformed(self.gamma_frame)

    def from_primed(self, state: GaussianState) -> GaussianState:
        return state.transformed(self.gamma_frame.T)


@dataclass(frozen=True, eq=False)
class MixedFrameMoments:
    """
    Mean and covariance in the mixed frame [x'+, p'+, x'-, p'-] with the
    determinant of each diagonal block carried alongside.

    det_plus follows its own equation and det_minus is conserved, so neither
    is recomputed from entries that have grown by many orders of magnitude.
    With a zero cross block the partial transpose only swaps p'+ and p'-; its
    invariants are then Delta~ = tr(P J Q J^T) and det P det Q, and the small
    eigenvalue follows without cancellation.
    """
    mean: np.ndarray
    cov: np.ndarray
    det_plus: float
    det_minus: float

    @classmethod
    def from_state(cls, state: GaussianState) -> "MixedFrameMoments":
        mean = MIXING @ state.mean
        cov = MIXING @ state.cov @ MIXING.T
        scale = max(1.0, float(np.abs(cov).max()))
        if np.all(np.abs(cov[:2, 2:]) <= settings.decoupling_tol * scale):
            cov[:2, 2:] = 0.0
            cov[2:, :2] = 0.0
        return cls(mean=mean, cov=cov, det_plus=float(np.linalg.det(cov[:2, :2])),
                   det_minus=float(np.linalg.det(cov[2:, 2:])))

    @property
    def plus(self) -> np.ndarray:
        return self.cov[:2, :2]

    @property
    def minus(self) -> np.ndarray:
        return self.cov[2:, 2:]

    @property
    def decoupled(self) -> bool:
        return not np.any(self.cov[:2, 2:])

    def state(self) -> GaussianState:
        return GaussianState(mean=MIXING.T @ self.mean, cov=MIXING.T @ self.cov @ MIXING)

    def kicked(self, kick: Kick) -> "MixedFrameMoments":
        K = np.block([[block_kick(kick, Block.PLUS), Z2], [Z2, block_kick(kick, Block.MINUS)]])
        return replace(self, mean=K @ self.mean, cov=K @ self.cov @ K.T)

    def symplectic_eigenvalues(self) -> Tuple[float, float]:
        """sqrt(det P) and sqrt(det Q), ascending; exact only when decoupled."""
        low, high = sorted((self.det_plus, self.det_minus))
        return float(np.sqrt(low)), float(np.sqrt(high))

    def partial_transpose_invariants(self) -> Tuple[float, float]:
        P, Q = self.plus, self.minus
        delta = P[0, 0] * Q[1, 1] + P[1, 1] * Q[0, 0] - 2.0 * P[0, 1] * Q[0, 1]
        return float(delta), float(self.det_plus * self.det_minus)

    def log_negativity(self) -> float:
        smallest, _ = symplectic_eigenvalues_from_invariants(*self.partial_transpose_invariants())
        return logneg_from_eigenvalue(smallest)

    def purity(self) -> float:
        return float(1.0 / (4.0 * np.sqrt(self.det_plus * self.det_minus)))

    def photon_number(self) -> float:
        return float((np.trace(self.cov) + self.mean @ self.mean - 2.0) / 2.0)


def _checked_times(times: Sequence[float], count: int) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if times.size != count:
        raise ValueError("times and states differ in length")
    if np.any(np.diff(times) < 0):
        raise ValueError("time grid must be monotone")
    return times


@dataclass(frozen=True, eq=False)
class SimulationResult:
    """Sampled trajectory with derived observables."""
    times: np.ndarray
    states: Tuple[GaussianState, ...]
    photon_number: np.ndarray
    log_negativity: np.ndarray
    purity: np.ndarray
    max_entanglement: np.ndarray

    @classmethod
    def from_states(cls, times: Sequence[float],
                    states: Sequence[GaussianState]) -> "SimulationResult":
        """Observables evaluated on the covariance entries of each state."""
        times = _checked_times(times, len(states))
        for state in states:
            check_physical(state)
        n = np.array([photon_number(s) for s in states])
        return cls(
            times=times,
            states=tuple(states),
            photon_number=n,
            log_negativity=np.array([logarithmic_negativity(s.cov) for s in states]),
            purity=np.array([purity(s.cov) for s in states]),
            max_entanglement=np.array([max_entanglement_bound(max(x, 0.0)) for x in n]),
        )

    @classmethod
    def from_mixed_frame(cls, times: Sequence[float],
                         moments: Sequence[MixedFrameMoments]) -> "SimulationResult":
        """
        Observables from the block invariants of each sample.

        Falls back to ``from_states`` when a cross block is present.
        """
        if not all(m.decoupled for m in moments):
            logger.debug("cross block present, evaluating on covariance entries")
            return cls.from_states(times, [m.state() for m in moments])
        times = _checked_times(times, len(moments))
        for m in moments:
            require_physical(m.symplectic_eigenvalues()[0])
        n = np.array([m.photon_number() for m in moments])
        return cls(
            times=times,
            states=tuple(m.state() for m in moments),
            photon_number=n,
            log_negativity=np.array([m.log_negativity() for m in moments]),
            purity=np.array([m.purity() for m in moments]),
            max_entanglement=np.array([max_entanglement_bound(max(x, 0.0)) for x in n]),
        )

    @property
    def entanglement_ratio(self) -> np.ndarray:
        """E_N / E_max, zero where E_max vanishes."""
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = self.log_negativity / self.max_entanglement
        return np.where(self.max_entanglement > 0, ratio, 0.0)

    def stroboscopic_indices(self, period: float) -> np.ndarray:
        """Indices of samples at t = n T."""
        cycles = self.times / period
        return np.flatnonzero(np.abs(cycles - np.round(cycles)) < 1e-9)

    def at_stroboscopic(self, period: float) -> "SimulationResult":
        """The rows sampled at t = n T."""
        idx = self.stroboscopic_indices(period)
        return SimulationResult(
            times=self.times[idx],
            states=tuple(self.states[i] for i in idx),
            photon_number=self.photon_number[idx],
            log_negativity=self.log_negativity[idx],
            purity=self.purity[idx],
            max_entanglement=self.max_entanglement[idx],
        )

    def final_state(self) -> GaussianState:
        return self.states[-1]


def drift_matrix(f: float, g: float) -> np.ndarray:
    """
    Drift A of the closed dynamics, dx/dt = A x.

    Rows: x+' = f p+ + g x-, p+' = -f x+ - g p-, x-' = f p- + g x+,
    p-' = -f x- - g p+. A Omega + Omega A^T = 0 for every (f, g).
    """
    return f * OMEGA + g * PUMP_GENERATOR


def block_drift(f: float, g: float, block) -> np.ndarray:
    """
    Generator of one decoupled block: [[s g, f], [-f, -s g]], s = +1 for "+".

    Equals the corresponding diagonal block of Gamma A Gamma^T.
    """
    s = as_block(block).sign
    return np.array([[s * g, f], [-f, -s * g]])


def rotation(theta: float) -> np.ndarray:
    """Free evolution of one block by angle theta = f t."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def block_kick(kick: Kick, block) -> np.ndarray:
    """Sudden-jump map of one block: diag(1/s, s) for "+", diag(s, 1/s) for "-"."""
    w = as_block(block).sign * kick.weight
    return np.diag([np.exp(w), np.exp(-w)])


def jump_map(f_prev: float, f_next: float) -> np.ndarray:
    """4x4 map exp(w G) across a jump f_prev -> f_next; G^2 = I."""
    w = Kick(0.0, f_prev, f_next).weight
    return np.cosh(w) * np.eye(4) + np.sinh(w) * PUMP_GENERATOR


def frame_and_bath(nbar: float) -> FrameAndBath:
    """
    Mixing matrix Gamma, dissipation Lambda and the thermal covariance.

    Lambda is the collective-jump dissipation [[I, I], [I, I]]; in the mixed
    frame it becomes diag(2, 2, 0, 0), leaving a two-dimensional kernel.
    """
    if nbar < 0:
        raise DomainError(f"nbar must be >= 0, got {nbar}")
    lambda_prime = MIXING @ COLLECTIVE_DISSIPATION @ np.linalg.inv(MIXING)
    expected = np.diag([2.0, 2.0, 0.0, 0.0])
    if not np.allclose(lambda_prime, expected, atol=1e-12):
        raise NumericalError("mixing does not diagonalize the dissipation")
    return FrameAndBath(
        gamma_frame=MIXING.copy(),
        lambda_diss=COLLECTIVE_DISSIPATION.copy(),
        lambda_prime=expected,
        sigma_inf=(nbar + 0.5) * np.eye(4),
    )


# --------------------------------------------------------------------------
# Direct integration of the moment equations
# --------------------------------------------------------------------------

def _split(moments: MixedFrameMoments) -> Tuple[np.ndarray, np.ndarray]:
    """
    ODE vectors of the two independent parts: the damped part
    [mean+, P, C, det P] and the decoherence-free part [mean-, Q].
    """
    cov = moments.cov
    damped = np.concatenate([moments.mean[:2], cov[:2, :2].reshape(-1),
                             cov[:2, 2:].reshape(-1), [moments.det_plus]])
    free = np.concatenate([moments.mean[2:], cov[2:, 2:].reshape(-1)])
    return damped, free


def _join(damped: np.ndarray, free: np.ndarray, det_minus: float) -> MixedFrameMoments:
    P = damped[2:6].reshape(2, 2)
    C = damped[6:10].reshape(2, 2)
    Q = free[2:6].reshape(2, 2)
    return MixedFrameMoments(mean=np.concatenate([damped[:2], free[:2]]),
                             cov=np.block([[P, C], [C.T, Q]]),
                             det_plus=float(damped[10]), det_minus=det_minus)


def _damped_rhs(blocks: Callable[[float], Tuple[np.ndarray, np.ndarray]], bath: BathParams):
    """
    dP/dt = D+ P + P D+^T + (2 nbar + 1) gamma I with D+ = M+ - gamma I,
    dC/dt = D+ C + C M-^T, and d(det P)/dt = -4 gamma det P
    + (2 nbar + 1) gamma tr P.
    """
    gamma = bath.gamma
    rate = (2.0 * bath.nbar + 1.0) * gamma

    def rhs(t, y):
        plus, minus = blocks(t)
        D = plus - gamma * I2
        P = y[2:6].reshape(2, 2)
        P = 0.5 * (P + P.T)
        C = y[6:10].reshape(2, 2)
        dP = D @ P + P @ D.T + rate * I2
        dC = D @ C + C @ minus.T
        ddet = -4.0 * gamma * y[10] + rate * (P[0, 0] + P[1, 1])
        return np.concatenate([D @ y[:2], dP.reshape(-1), dC.reshape(-1), [ddet]])

    return rhs


def _free_rhs(blocks: Callable[[float], Tuple[np.ndarray, np.ndarray]]):
    """dQ/dt = M- Q + Q M-^T; the bath never enters."""
    def rhs(t, y):
        _, minus = blocks(t)
        Q = y[2:6].reshape(2, 2)
        Q = 0.5 * (Q + Q.T)
        return np.concatenate([minus @ y[:2], (minus @ Q + Q @ minus.T).reshape(-1)])

    return rhs


def _solve(rhs, t0: float, t1: float, y0: np.ndarray, t_eval, dt_max: float):
    sol = solve_ivp(
        rhs, (t0, t1), y0, method="RK45", t_eval=t_eval,
        rtol=settings.ode_rtol, atol=settings.ode_atol,
        max_step=dt_max, dense_output=False,
    )
    if sol.status < 0:
        last = float(sol.t[-1]) if sol.t.size else t0
        logger.error("integration failed", message=sol.message, last_good_time=last)
        raise IntegrationError(f"integration failed: {sol.message}", last_good_time=last)
    return sol


def sample_grid(period: float, t_end: float, samples_per_period: int) -> np.ndarray:
    count = int(np.floor(t_end / period * samples_per_period + 1e-9))
    times = (np.arange(count + 1) / samples_per_period) * period
    if t_end - times[-1] > 1e-12 * max(1.0, t_end):
        times = np.append(times, t_end)
    return times


def _jump_schedule(profile: ModulationProfile,
                   t_end: float) -> List[Tuple[float, float, float, Optional[Kick]]]:
    """
    Constant-frequency segments (start, end, f) up to t_end, each with the
    kick applied at its end (None for the final partial segment).
    """
    T = profile.period
    kicks = profile.kicks()
    segments = []
    start, m = 0.0, 0
    tol = 1e-12 * max(1.0, t_end)
    while start < t_end - tol:
        if kicks:
            boundaries = [(m * T + k.time, k) for k in kicks]
        else:
            boundaries = [((m + 1) * T, None)]
        for end, kick in boundaries:
            if end <= start + tol:
                continue
            f = profile.frequency_at(0.5 * (start + end))
            if end >= t_end - tol:
                at_jump = abs(end - t_end) <= tol
                segments.append((start, t_end, f, kick if at_jump else None))
                return segments
            segments.append((start, end, f, kick))
            start = end
        m += 1
    return segments


def integrate_moments(state0: GaussianState, profile: ModulationProfile,
                      bath: BathParams, t_end: float,
                      dt_max: float = np.inf,
                      samples_per_period: int = 20,
                      times: Optional[Sequence[float]] = None) -> SimulationResult:
    """
    Integrate mean and covariance directly with adaptive RK4(5).

    The equations are solved in the mixed frame as two independent systems,
    the damped part with det P carried alongside and the decoherence-free
    part, whose det Q is conserved. Observables come from these invariants,
    which keeps E_N resolved after the covariance has grown by many orders of
    magnitude. Piecewise-constant profiles are integrated segment by segment
    with the exact block kicks between segments. Samples default to
    ``samples_per_period`` points per period plus ``t_end``.
    """
    check_physical(state0)
    if not t_end > 0:
        raise DomainError(f"t_end must be > 0, got {t_end}")
    grid = (sample_grid(profile.period, t_end, samples_per_period)
            if times is None else np.asarray(times, dtype=float))
    if np.any(np.diff(grid) < 0) or grid[0] < 0 or grid[-1] > t_end * (1 + 1e-12):
        raise DomainError("sample times must be monotone within [0, t_end]")

    initial = MixedFrameMoments.from_state(state0)
    det_minus = initial.det_minus

    def solve_both(blocks, start, end, current, t_eval):
        damped, free = _split(current)
        sol_damped = _solve(_damped_rhs(blocks, bath), start, end, damped, t_eval, dt_max)
        sol_free = _solve(_free_rhs(blocks), start, end, free, t_eval, dt_max)
        return sol_damped, sol_free

    if not profile.is_piecewise_constant:
        def blocks(t):
            f, g = profile.frequency_at(t), profile.pump_rate_at(t)
            return block_drift(f, g, Block.PLUS), block_drift(f, g, Block.MINUS)

        sol_damped, sol_free = solve_both(blocks, 0.0, t_end, initial, grid)
        moments = [_join(sol_damped.y[:, i], sol_free.y[:, i], det_minus)
                   for i in range(grid.size)]
        logger.debug("moments integrated", kind=profile.kind, t_end=t_end,
                     evaluations=sol_damped.nfev + sol_free.nfev)
        return SimulationResult.from_mixed_frame(grid, moments)

    schedule = _jump_schedule(profile, t_end)
    current = initial
    samples: List[Optional[MixedFrameMoments]] = [None] * grid.size
    tol = 1e-12 * max(1.0, t_end)
    for i in np.flatnonzero(grid <= tol):
        samples[i] = initial
    for start, end, f, kick in schedule:
        rotating = (block_drift(f, 0.0, Block.PLUS), block_drift(f, 0.0, Block.MINUS))
        inside = np.flatnonzero((grid > start + tol) & (grid < end - tol))
        sol_damped, sol_free = solve_both(lambda t, b=rotating: b, start, end, current,
                                          np.concatenate([grid[inside], [end]]))
        for j, i in enumerate(inside):
            samples[i] = _join(sol_damped.y[:, j], sol_free.y[:, j], det_minus)
        current = _join(sol_damped.y[:, -1], sol_free.y[:, -1], det_minus)
        if kick is not None:
            current = current.kicked(kick)
        for i in np.flatnonzero(np.abs(grid - end) <= tol):
            samples[i] = current
    logger.debug("moments integrated", kind=profile.kind, t_end=t_end,
                 segments=len(schedule))
    return SimulationResult.from_mixed_frame(grid, samples)


# --------------------------------------------------------------------------
# Block propagators
# --------------------------------------------------------------------------

def _rectangular_period_map(profile: ModulationProfile, block: Block) -> np.ndarray:
    U = I2
    for (start, end, f), kick in zip(profile.segments(), _kicks_or_none(profile)):
        U = rotation(f * (end - start)) @ U
        if kick is not None:
            U = block_kick(kick, block) @ U
    return U


def _kicks_or_none(profile) -> Tuple[Optional[Kick], ...]:
    kicks = profile.kicks()
    return kicks if kicks else (None, None)


def _rectangular_propagator(profile: ModulationProfile, block: Block) -> Callable[[float], np.ndarray]:
    """Exact U(t) for a piecewise-constant profile."""
    T = profile.period
    M = _rectangular_period_map(profile, block)
    kicks = _kicks_or_none(profile)
    (_, t1, f1), (_, _, f2) = profile.segments()
    first_kick = I2 if kicks[0] is None else block_kick(kicks[0], block)
    mid = first_kick @ rotation(f1 * t1)

    def U(t: float) -> np.ndarray:
        m = int(np.floor(t / T + 1e-12))
        tau = max(t - m * T, 0.0)
        if tau < t1:
            within = rotation(f1 * tau)
        else:
            within = rotation(f2 * (tau - t1)) @ mid
        return within @ np.linalg.matrix_power(M, m)

    return U


def _smooth_propagator(profile: ModulationProfile, block: Block, t: float,
                       dense: bool = False):
    s = block.sign

    def rhs(time, u):
        f = profile.frequency_at(time)
        g = profile.pump_rate_at(time)
        u = u.reshape(2, 2)
        return (np.array([[s * g, f], [-f, -s * g]]) @ u).reshape(-1)

    sol = solve_ivp(rhs, (0.0, t), I2.reshape(-1), method="RK45",
                    rtol=settings.ode_rtol, atol=settings.ode_atol,
                    dense_output=dense)
    if sol.status < 0:
        last = float(sol.t[-1]) if sol.t.size else 0.0
        raise IntegrationError(f"propagator integration failed: {sol.message}",
                               last_good_time=last)
    return sol


def block_propagator(profile: ModulationProfile, block, t: float) -> np.ndarray:
    """
    U(t) solving dU/dt = M(t) U, U(0) = I, for one decoupled block.

    Exact product of rotations and kicks for piecewise-constant profiles,
    adaptive RK4(5) otherwise. det U = 1.
    """
    block = as_block(block)
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if t == 0:
        return I2.copy()
    if profile.is_constant:
        return rotation(profile.frequency_at(0.0) * t)
    if profile.is_piecewise_constant:
        return _rectangular_propagator(profile, block)(t)
    sol = _smooth_propagator(profile, block, t)
    return sol.y[:, -1].reshape(2, 2)


def propagator(profile: ModulationProfile, t: float) -> np.ndarray:
    """Closed-system 4x4 propagator S(t) = Gamma^T diag(U+, U-) Gamma."""
    U = np.block([[block_propagator(profile, Block.PLUS, t), Z2],
                  [Z2, block_propagator(profile, Block.MINUS, t)]])
    return MIXING.T @ U @ MIXING


# --------------------------------------------------------------------------
# Finite-temperature solution through propagators
# --------------------------------------------------------------------------

def _particular_block(profile: ModulationProfile, bath: BathParams, t: float,
                      U_plus: Callable[[float], np.ndarray],
                      breakpoints: Sequence[float]) -> np.ndarray:
    """
    2 gamma W(t) [int_0^t (W^T W)^-1 ds] W(t)^T with W(s) = exp(-gamma s) U+(s).
    """
    gamma = bath.gamma

    def integrand(s):
        U = U_plus(s)
        return np.exp(2.0 * gamma * s) * np.linalg.inv(U.T @ U)

    points = [p for p in breakpoints if 0.0 < p < t]
    integral, err, info = quad_vec(
        integrand, 0.0, t, epsabs=1e-14, epsrel=settings.quad_epsrel,
        norm="max", points=points or None,
        limit=max(10000, 4 * len(points)), full_output=True,
    )
    if not info.success:
        logger.error("particular integral did not converge", t=t, error=float(err),
                     status=info.status)
        raise QuadratureError(f"particular integral did not converge: {info.message}")
    W = np.exp(-gamma * t) * U_plus(t)
    return symmetrize(2.0 * gamma * W @ integral @ W.T)


def thermal_covariance_solution(state0: GaussianState, profile: ModulationProfile,
                                bath: BathParams, t: float) -> GaussianState:
    """
    State at time t assembled from the block propagators.

    In the mixed frame the mean evolves with U_th = exp(-gamma/2 Lambda' t) U
    and the covariance is U_th Sigma'_0 U_th^T + diag(V, 0) (nbar + 1/2),
    where V is the particular solution on the damped block.
    """
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if t == 0:
        return state0
    frame = frame_and_bath(bath.nbar)
    primed = frame.to_primed(state0)

    if profile.is_piecewise_constant:
        U_plus = _rectangular_propagator(profile, Block.PLUS)
        U_minus_t = _rectangular_propagator(profile, Block.MINUS)(t)
        T = profile.period
        breakpoints = [m * T + k.time for m in range(int(np.ceil(t / T)) + 1)
                       for k in profile.kicks()]
    else:
        sol = _smooth_propagator(profile, Block.PLUS, t, dense=True)

        def U_plus(s, sol=sol):
            return sol.sol(s).reshape(2, 2)

        U_minus_t = block_propagator(profile, Block.MINUS, t)
        breakpoints = list(sol.t[1:-1])

    decay = np.exp(-bath.gamma * t)
    U_th = np.block([[decay * U_plus(t), Z2], [Z2, U_minus_t]])
    mean = U_th @ primed.mean
    cov = U_th @ primed.cov @ U_th.T
    if bath.gamma > 0:
        V = _particular_block(profile, bath, t, U_plus, breakpoints)
        cov[:2, :2] += (bath.nbar + 0.5) * V
    return frame.from_primed(GaussianState(mean=mean, cov=cov))
