"""Emulation of a Rydberg analog processor solving the cluster spin problem.

The resource Hamiltonian is, in the conventions of :mod:`operators`,

    H(tau) = sum_{i<j} V_ij n_i n_j + (Omega(tau)/2) sum_i sigma_i^x
             - sum_i delta_i(tau) n_i

with V_ij the pairwise van der Waals interaction C6 / r_ij^6 (each
unordered pair once; two atoms at distance r cost exactly C6/r^6 when
both are excited).  Matching the Ising cluster Hamiltonian requires
V_ij = -4 K_ij for the targeted couplings K_ij; the suite either imposes
this exactly ("ideal" interactions) or approximates it with optimized
atom positions (:mod:`geometry`).

Annealing runs backwards along the spectrum: the register starts in
|g...g>, which the initial detuning makes the *most excited* state of
H(0), and the drive ramps keep the state on the top of the spectrum
until H(tau_max) coincides (up to a global sigma^x conjugation and an
additive constant) with minus the cluster Hamiltonian whose ground state
carries the wanted correlations.  The reachable magnetization branch is
the one continuously connected to the all-ground register, i.e. the
negative-mbar branch; observables of interest (Z, correlations) are
branch-symmetric.

Dephasing is a Lindblad master equation with jump operators n_i at a
uniform rate gamma.  Because the jump operators are diagonal, the
dissipator reduces to elementwise damping of coherences:
d rho_ab/dtau += -(gamma/2) * hamming(a, b) * rho_ab.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import apply_diag_flips
from .operators import (
    SpinHamiltonian,
    check_site_count,
    magnetizations,
    occupation_bits,
    occupation_diagonal,
    pair_occupation_diagonal,
    zz_correlations,
)
from .units import TWO_PI

# Hardware-realistic default, rad * um^6 / us; only the absolute length
# scale of the optimized patterns depends on it.
DEFAULT_C6 = 5.42e6

# Default initial detuning coefficient (rad/us): +2*pi*5 makes |g...g>
# the most excited state of the starting Hamiltonian.
DEFAULT_DELTA_START = TWO_PI * 5.0

DEFAULT_TAU_MAX = 4.0
DEFAULT_TAU_RAMP = 0.05
DEFAULT_DT = 1e-3

LOCAL_ERROR_PER_TIME = 1e-8
NORM_DRIFT_TOL = 1e-8
TRACE_DRIFT_TOL = 1e-8
HERMITICITY_TOL = 1e-10
POSITIVITY_TOL = -1e-8
MAX_DENSITY_SITES = 9


class EvolutionError(RuntimeError):
    """Propagation aborted: invariant violation or step-size underflow."""


@dataclass(frozen=True)
class AtomArray:
    """Planar atom positions (um) with a van der Waals coefficient."""

    positions: np.ndarray
    c6: float = DEFAULT_C6

    def __post_init__(self):
        pos = np.ascontiguousarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise ValueError("positions must be an (N, 2) array")
        if not np.all(np.isfinite(pos)):
            raise ValueError("positions must be finite")
        d = pos[:, None, :] - pos[None, :, :]
        r2 = (d**2).sum(axis=-1)
        np.fill_diagonal(r2, np.inf)
        if np.min(r2) <= 0.0:
            raise ValueError("coincident atoms")
        object.__setattr__(self, "positions", pos)

    @property
    def n_sites(self) -> int:
        return self.positions.shape[0]

    def interaction_matrix(self) -> np.ndarray:
        """Pairwise C6 / r^6 couplings, zero diagonal."""
        d = self.positions[:, None, :] - self.positions[None, :, :]
        r2 = (d**2).sum(axis=-1)
        np.fill_diagonal(r2, np.inf)
        return self.c6 / r2**3


def ideal_interactions(coupling_values: np.ndarray) -> np.ndarray:
    """Interaction matrix realizing the spin couplings exactly (V = -4K)."""
    v = -4.0 * np.asarray(coupling_values, dtype=float)
    v = v.copy()
    np.fill_diagonal(v, 0.0)
    return v


@dataclass(frozen=True)
class DriveSchedule:
    """Piecewise-linear global Rabi and per-site detuning waveforms.

    ``times`` are the sorted breakpoints spanning [0, tau_max]; ``omega``
    holds the Rabi value at each breakpoint and ``detuning`` a per-site
    row per breakpoint.
    """

    times: np.ndarray
    omega: np.ndarray
    detuning: np.ndarray

    def __post_init__(self):
        times = np.ascontiguousarray(self.times, dtype=float)
        omega = np.ascontiguousarray(self.omega, dtype=float)
        det = np.ascontiguousarray(self.detuning, dtype=float)
        if times.ndim != 1 or times.size < 2:
            raise ValueError("need at least two breakpoints")
        if np.any(np.diff(times) < 0):
            raise ValueError("breakpoints must be sorted")
        if times[0] != 0.0:
            raise ValueError("waveforms must start at tau = 0")
        if omega.shape != times.shape:
            raise ValueError("one Rabi value per breakpoint required")
        if np.any(omega < 0):
            raise ValueError("Rabi frequency must be nonnegative")
        if det.ndim != 2 or det.shape[0] != times.size:
            raise ValueError("detuning must be (n_breakpoints, n_sites)")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "detuning", det)

    @property
    def tau_max(self) -> float:
        return float(self.times[-1])

    @property
    def n_sites(self) -> int:
        return self.detuning.shape[1]

    def omega_at(self, tau: float) -> float:
        return float(np.interp(tau, self.times, self.omega))

    def detuning_at(self, tau: float) -> np.ndarray:
        tau = min(max(tau, 0.0), self.tau_max)
        k = int(np.searchsorted(self.times, tau, side="right")) - 1
        k = min(max(k, 0), len(self.times) - 2)
        t0, t1 = self.times[k], self.times[k + 1]
        if t1 == t0:
            return self.detuning[k + 1].copy()
        w = (tau - t0) / (t1 - t0)
        return (1.0 - w) * self.detuning[k] + w * self.detuning[k + 1]


@dataclass
class QuantumState:
    """Pure state vector or density matrix of the register."""

    array: np.ndarray
    n_sites: int

    @classmethod
    def pure(cls, amplitudes: np.ndarray, n_sites: int) -> "QuantumState":
        v = np.ascontiguousarray(amplitudes, dtype=complex)
        if v.shape != (1 << n_sites,):
            raise ValueError("amplitude vector has wrong length")
        return cls(array=v, n_sites=n_sites)

    @classmethod
    def density(cls, rho: np.ndarray, n_sites: int) -> "QuantumState":
        m = np.ascontiguousarray(rho, dtype=complex)
        if m.shape != (1 << n_sites, 1 << n_sites):
            raise ValueError("density matrix has wrong shape")
        return cls(array=m, n_sites=n_sites)

    @property
    def is_density(self) -> bool:
        return self.array.ndim == 2

    def to_density(self) -> "QuantumState":
        if self.is_density:
            return self
        return QuantumState.density(np.outer(self.array, self.array.conj()), self.n_sites)

    def probabilities(self) -> np.ndarray:
        if self.is_density:
            return np.real(np.diag(self.array)).copy()
        return np.abs(self.array) ** 2

    def mean_magnetization(self) -> float:
        return float(magnetizations(self.probabilities(), self.n_sites).mean())

    def site_magnetizations(self) -> np.ndarray:
        return magnetizations(self.probabilities(), self.n_sites)

    def correlations(self) -> np.ndarray:
        return zz_correlations(self.probabilities(), self.n_sites)

    def validate(self) -> None:
        if self.is_density:
            tr = float(np.real(np.trace(self.array)))
            if abs(tr - 1.0) > 1e-8:
                raise EvolutionError(f"trace {tr} deviates from 1 beyond 1e-8")
            herm = float(np.max(np.abs(self.array - self.array.conj().T)))
            if herm > HERMITICITY_TOL:
                raise EvolutionError(f"hermiticity residual {herm:.3e} beyond 1e-10")
            w = np.linalg.eigvalsh(self.array)
            if float(w.min()) < POSITIVITY_TOL:
                raise EvolutionError(f"negative eigenvalue {w.min():.3e} beyond -1e-8")
        else:
            nrm = float(np.linalg.norm(self.array))
            if abs(nrm - 1.0) > 1e-9:
                raise EvolutionError(f"norm {nrm} deviates from 1 beyond 1e-9")


def prepare_initial_state(n_sites: int, kind: str, amplitudes=None) -> QuantumState:
    """Product state of the register: all_ground, all_excited, or custom.

    ``custom`` takes per-site (a, b) amplitude pairs for (|g>, |r>) and
    normalizes each factor.
    """
    check_site_count(n_sites)
    dim = 1 << n_sites
    if kind == "all_ground":
        v = np.zeros(dim, dtype=complex)
        v[0] = 1.0
    elif kind == "all_excited":
        v = np.zeros(dim, dtype=complex)
        v[dim - 1] = 1.0
    elif kind == "custom":
        if amplitudes is None:
            raise ValueError("custom product state needs per-site amplitudes")
        pairs = np.asarray(amplitudes, dtype=complex)
        if pairs.shape != (n_sites, 2):
            raise ValueError("amplitudes must be (n_sites, 2)")
        norm_pairs = pairs / np.linalg.norm(pairs, axis=1, keepdims=True)
        bits = occupation_bits(n_sites).astype(int)
        v = np.ones(dim, dtype=complex)
        for i in range(n_sites):
            v *= np.where(bits[:, i] == 1, norm_pairs[i, 1], norm_pairs[i, 0])
    else:
        raise ValueError(f"unknown initial-state kind: {kind!r}")
    return QuantumState.pure(v, n_sites)


def build_rydberg_hamiltonian(
    array: AtomArray | np.ndarray, omega: float, delta: np.ndarray
) -> SpinHamiltonian:
    """Resource Hamiltonian at fixed drive values.

    ``array`` may be an AtomArray or a precomputed interaction matrix.
    """
    v = array.interaction_matrix() if isinstance(array, AtomArray) else np.asarray(array, float)
    n = v.shape[0]
    delta = np.asarray(delta, dtype=float)
    if np.isscalar(delta) or delta.shape == ():
        delta = np.full(n, float(delta))
    if delta.shape != (n,):
        raise ValueError(f"expected {n} detunings")
    diag = pair_occupation_diagonal(v) - occupation_diagonal(delta, n)
    flips = np.full(n, omega / 2.0)
    return SpinHamiltonian(n_sites=n, diag=diag, flip_coeffs=flips)


def final_detunings(
    interactions: np.ndarray, ext_neighbors: np.ndarray, mean_bond: float, mbar: float
) -> np.ndarray:
    """Detunings that realize the cluster Hamiltonian at the end of a ramp.

    Half of the summed pair interaction compensates the z-bias of the
    n.n form; the remainder imprints the mean-field embedding
    (4 * z_i * mean_bond * mbar, i.e. twice the longitudinal field h_i).
    """
    v = np.asarray(interactions, dtype=float)
    return 0.5 * v.sum(axis=1) + 4.0 * np.asarray(ext_neighbors, float) * mean_bond * mbar


def make_anneal_schedule(
    u: float,
    interactions: np.ndarray,
    ext_neighbors: np.ndarray,
    mean_bond: float,
    mbar: float,
    tau_max: float = DEFAULT_TAU_MAX,
    delta_start: float = DEFAULT_DELTA_START,
) -> DriveSchedule:
    """Linear ramps from the extremal-state preparation point to the target.

    Rabi 0 -> u/2; each detuning delta_start -> its interaction-
    compensating value plus the mean-field offset.  ``delta_start`` must
    be positive so the all-ground register starts as the most excited
    state of the initial Hamiltonian.
    """
    if tau_max <= 0:
        raise ValueError("tau_max must be positive")
    if delta_start <= 0:
        raise ValueError(
            "initial detuning coefficient must be positive to start from the "
            "extremal (most excited) state of the initial Hamiltonian"
        )
    n = np.asarray(interactions).shape[0]
    d_final = final_detunings(interactions, ext_neighbors, mean_bond, mbar)
    times = np.array([0.0, tau_max])
    omega = np.array([0.0, u / 2.0])
    det = np.vstack([np.full(n, delta_start), d_final])
    return DriveSchedule(times=times, omega=omega, detuning=det)


def make_quench_schedule(
    u_f: float,
    tau_ramp: float,
    duration: float,
    detuning: np.ndarray,
) -> DriveSchedule:
    """Rabi switch-on 0 -> u_f/2 over tau_ramp, detunings held constant.

    ``tau_ramp = 0`` is the ideal step drive.  ``detuning`` holds the
    interaction-compensating values (plus any stationary mean-field
    offset) for every site.
    """
    if not 0 <= tau_ramp < duration:
        raise ValueError("need 0 <= tau_ramp < duration")
    detuning = np.asarray(detuning, dtype=float)
    n = detuning.shape[0]
    if tau_ramp == 0.0:
        times = np.array([0.0, duration])
        omega = np.array([u_f / 2.0, u_f / 2.0])
        det = np.vstack([detuning, detuning])
    else:
        times = np.array([0.0, tau_ramp, duration])
        omega = np.array([0.0, u_f / 2.0, u_f / 2.0])
        det = np.vstack([detuning, detuning, detuning])
    return DriveSchedule(times=times, omega=omega, detuning=det)


# ---------------------------------------------------------------------------
# propagation
# ---------------------------------------------------------------------------


class _Propagator:
    """Right-hand sides for the coherent and dephasing master equations."""

    def __init__(self, schedule: DriveSchedule, interactions: np.ndarray, gamma: float):
        self.schedule = schedule
        n = schedule.n_sites
        self.n_sites = n
        self.static_diag = pair_occupation_diagonal(np.asarray(interactions, float))
        self.bits = occupation_bits(n)
        self.gamma = gamma
        self._flips = np.empty(n)
        if gamma > 0.0:
            if n > MAX_DENSITY_SITES:
                raise EvolutionError(
                    f"density-matrix propagation limited to {MAX_DENSITY_SITES} sites"
                )
            # diagonal jump operators: dissipator = -(gamma/2) * hamming(a,b) * rho_ab
            idx = np.arange(1 << n)
            ham = np.zeros((1 << n, 1 << n))
            for i in range(n):
                bi = (idx >> i) & 1
                ham += np.not_equal.outer(bi, bi)
            self.damping = 0.5 * gamma * ham

    def hamiltonian_at(self, tau: float) -> SpinHamiltonian:
        diag = self.static_diag - self.bits @ self.schedule.detuning_at(tau)
        flips = np.full(self.n_sites, self.schedule.omega_at(tau) / 2.0)
        return SpinHamiltonian(self.n_sites, diag, flips)

    def _diag_flips(self, tau: float):
        diag = self.static_diag - self.bits @ self.schedule.detuning_at(tau)
        self._flips.fill(self.schedule.omega_at(tau) / 2.0)
        return diag, self._flips

    def rhs_pure(self, psi: np.ndarray, tau: float) -> np.ndarray:
        diag, flips = self._diag_flips(tau)
        return -1j * apply_diag_flips(diag, flips, psi)

    def rhs_density(self, rho: np.ndarray, tau: float) -> np.ndarray:
        diag, flips = self._diag_flips(tau)
        hrho = apply_diag_flips(diag, flips, rho)
        out = -1j * (hrho - hrho.conj().T)
        if self.gamma > 0.0:
            out -= self.damping * rho
        return out


def _rk4_step(rhs, y, tau, dt):
    k1 = rhs(y, tau)
    k2 = rhs(y + 0.5 * dt * k1, tau + 0.5 * dt)
    k3 = rhs(y + 0.5 * dt * k2, tau + 0.5 * dt)
    k4 = rhs(y + dt * k3, tau + dt)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _calibrate_step(rhs, y0, probe_times, dt, tau_max):
    """Halve the step until the step-doubling error satisfies the budget."""
    dt = float(dt)
    for _ in range(24):
        worst = 0.0
        for tp in probe_times:
            tp = min(tp, tau_max - dt)
            full = _rk4_step(rhs, y0, tp, dt)
            half = _rk4_step(rhs, y0, tp, 0.5 * dt)
            half = _rk4_step(rhs, half, tp + 0.5 * dt, 0.5 * dt)
            err = float(np.linalg.norm((full - half).ravel()))
            worst = max(worst, err / dt)
        if worst <= LOCAL_ERROR_PER_TIME:
            return dt
        dt *= 0.5
        if dt < 1e-8:
            raise EvolutionError("step-size underflow while meeting the error budget")
    raise EvolutionError("step calibration did not terminate")


def evolve(
    initial: QuantumState,
    schedule: DriveSchedule,
    interactions: np.ndarray | AtomArray,
    gamma: float,
    sample_times,
    dt: float = DEFAULT_DT,
) -> list[QuantumState]:
    """Propagate through the drive schedule, returning snapshots.

    gamma = 0 with a pure initial state integrates the Schrodinger
    equation; otherwise the state is promoted to a density matrix and the
    dephasing Lindblad equation is integrated.  Fixed-step RK4; the step
    is halved from ``dt`` until a step-doubling probe meets the local
    error budget of 1e-8 per unit time.  Snapshots are norm- (resp.
    trace-) renormalized copies; drift beyond 1e-8 aborts.
    """
    if gamma < 0:
        raise ValueError("dephasing rate must be nonnegative")
    if isinstance(interactions, AtomArray):
        interactions = interactions.interaction_matrix()
    sample_times = np.atleast_1d(np.asarray(sample_times, dtype=float))
    if np.any(sample_times < 0) or np.any(sample_times > schedule.tau_max + 1e-12):
        raise ValueError("sample times must lie within the schedule domain")

    prop = _Propagator(schedule, interactions, gamma)
    use_density = gamma > 0.0 or initial.is_density
    if use_density:
        state = initial.to_density().array.copy()
        rhs = prop.rhs_density
        drift_ref = float(np.real(np.trace(state)))
    else:
        state = initial.array.astype(complex).copy()
        rhs = prop.rhs_pure
        drift_ref = float(np.linalg.norm(state))

    events = np.unique(np.concatenate([schedule.times, sample_times]))
    probe = [0.0, 0.45 * schedule.tau_max, 0.9 * schedule.tau_max]
    dt = _calibrate_step(rhs, state, probe, dt, max(schedule.tau_max, dt))

    wanted = {float(t) for t in sample_times}
    snapshots: dict[float, QuantumState] = {}

    def take_snapshot(tau):
        if use_density:
            tr = float(np.real(np.trace(state)))
            if abs(tr - drift_ref) > TRACE_DRIFT_TOL:
                raise EvolutionError(f"trace drift {tr - drift_ref:.3e} at tau={tau}")
            snap = QuantumState.density(state / tr, prop.n_sites)
        else:
            nrm = float(np.linalg.norm(state))
            if abs(nrm - drift_ref) > NORM_DRIFT_TOL:
                raise EvolutionError(f"norm drift {nrm - drift_ref:.3e} at tau={tau}")
            snap = QuantumState.pure(state / nrm, prop.n_sites)
        snap.validate()
        snapshots[tau] = snap

    tau = 0.0
    if 0.0 in wanted:
        take_snapshot(0.0)
    for target in events[events > 0]:
        span = target - tau
        if span <= 0:
            continue
        n_steps = max(1, int(np.ceil(span / dt - 1e-12)))
        h = span / n_steps
        for _ in range(n_steps):
            state = _rk4_step(rhs, state, tau, h)
            tau += h
        tau = float(target)
        if float(target) in wanted:
            take_snapshot(float(target))

    return [snapshots[float(t)] for t in sample_times]
