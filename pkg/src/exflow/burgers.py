"""Time integration of the 1D viscous/fractional Burgers equation.

The dissipation term is integrated exactly in coefficient space through an
integrating factor; the advective flux -(1/2) d/dx u^2 is advanced with an
explicit three-stage third-order Runge-Kutta on the transformed variable.
Trajectories checkpoint enough states to replay any intermediate step
bit-identically, which the adjoint sweep relies on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.fft as _fft

from .errors import DivergenceError
from .spectral import (
    TWO_PI,
    GridSpec,
    PhysicsParams,
    SpectralField,
    _dealias_mask,
    _ksq,
    _pair_weights,
    _wavenumbers,
)

OUTCOME_COMPLETED = "completed"
OUTCOME_BLOWUP = "blowup_suspected"


@dataclass(frozen=True)
class TimeStepPolicy:
    cfl: float = 0.3
    dt_max: float = 1e-3
    dt_min: float = 1e-13

    def __post_init__(self):
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.dt_min > self.dt_max:
            raise ValueError("dt_min must not exceed dt_max")


class _Workspace:
    """Per-grid spectral operators for the raw-array hot loop."""

    def __init__(self, grid: GridSpec, params: PhysicsParams):
        self.grid = grid
        self.n = grid.n
        self.mask = _dealias_mask(grid)
        k = _wavenumbers(grid)[0]
        self.ik = TWO_PI * 1j * k * self.mask
        self.gamma = params.nu * (TWO_PI**2 * _ksq(grid)) ** params.alpha
        self.ens_weight = _pair_weights(grid) * (TWO_PI**2 * _ksq(grid))
        self.pair_w = _pair_weights(grid)

    def physical(self, uhat: np.ndarray) -> np.ndarray:
        return _fft.irfft(uhat * self.n, self.n)

    def analyze(self, u: np.ndarray) -> np.ndarray:
        return _fft.rfft(u) / self.n

    def nonlinear(self, uhat: np.ndarray, u_phys: np.ndarray | None = None) -> np.ndarray:
        """-(1/2) d/dx (u^2), dealiased."""
        u = self.physical(uhat) if u_phys is None else u_phys
        return -0.5 * self.ik * self.analyze(u * u)

    def kinetic(self, uhat: np.ndarray) -> float:
        return 0.5 * float(np.sum(self.pair_w * (uhat.real**2 + uhat.imag**2)))

    def enstrophy(self, uhat: np.ndarray) -> float:
        return 0.5 * float(np.sum(self.ens_weight * (uhat.real**2 + uhat.imag**2)))


def _step_raw(ws: _Workspace, uhat: np.ndarray, dt: float, *,
              include_nonlinear: bool = True,
              u_phys: np.ndarray | None = None) -> np.ndarray:
    """One integrating-factor RK3 step."""
    eh = np.exp(-ws.gamma * dt)
    if not include_nonlinear:
        return eh * uhat
    eh2 = np.sqrt(eh)
    n1 = ws.nonlinear(uhat, u_phys)
    ua = eh2 * (uhat + (0.5 * dt) * n1)
    n2 = ws.nonlinear(ua)
    ub = eh * uhat + dt * (2.0 * eh2 * n2 - eh * n1)
    n3 = ws.nonlinear(ub)
    return eh * uhat + (dt / 6.0) * (eh * n1 + 4.0 * eh2 * n2 + n3)


def step(u: SpectralField, dt: float, params: PhysicsParams, *,
         include_nonlinear: bool = True) -> SpectralField:
    """Advance one step of size dt; dissipation handled exactly."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    ws = _Workspace(u.grid, params)
    out = _step_raw(ws, u.coeffs * _dealias_mask(u.grid), dt,
                    include_nonlinear=include_nonlinear)
    out[0] = 0.0
    if not np.all(np.isfinite(out)):
        raise DivergenceError("non-finite state after step")
    return SpectralField(u.grid, out, zero_mean=True)


@dataclass
class Trajectory:
    """Forward solution with checkpointed states and per-step diagnostics."""

    grid: GridSpec
    params: PhysicsParams
    policy: TimeStepPolicy
    times: np.ndarray            # per step boundary, length nsteps + 1
    dts: np.ndarray              # length nsteps
    stored_idx: list[int]        # step indices with a stored state
    stored_states: list[np.ndarray]
    kinetic_series: np.ndarray   # per step boundary
    enstrophy_series: np.ndarray
    umax_series: np.ndarray
    outcome: str = OUTCOME_COMPLETED
    info: dict = field(default_factory=dict)

    @property
    def t_final(self) -> float:
        return float(self.times[-1])

    @property
    def nsteps(self) -> int:
        return len(self.dts)

    def state(self, pos: int) -> SpectralField:
        return SpectralField(self.grid, self.stored_states[pos], zero_mean=True)

    @property
    def initial_state(self) -> SpectralField:
        return self.state(0)

    @property
    def final_state(self) -> SpectralField:
        return self.state(len(self.stored_states) - 1)

    @property
    def max_enstrophy(self) -> float:
        return float(np.max(self.enstrophy_series))

    @property
    def argmax_enstrophy_time(self) -> float:
        return float(self.times[int(np.argmax(self.enstrophy_series))])

    def replay_segment(self, pos: int) -> list[np.ndarray]:
        """States at every step in [stored_idx[pos], stored_idx[pos+1]]."""
        ws = _Workspace(self.grid, self.params)
        i0, i1 = self.stored_idx[pos], self.stored_idx[pos + 1]
        states = [self.stored_states[pos]]
        for s in range(i0, i1):
            states.append(_step_raw(ws, states[-1], self.dts[s]))
        return states


def solve(u0: SpectralField, T: float, params: PhysicsParams,
          policy: TimeStepPolicy | None = None, *,
          store: str = "all",
          checkpoint_bytes: int = 1 << 30,
          tail_threshold: float | None = None,
          blowup_check_every: int = 16) -> Trajectory:
    """Integrate to exactly t = T with adaptive advective CFL steps.

    store: "all" keeps every step up to the memory budget (the stride doubles
    whenever the budget is exceeded); "ends" keeps only the initial and final
    states.
    """
    if T <= 0:
        raise ValueError(f"T must be positive, got {T}")
    if policy is None:
        policy = TimeStepPolicy()
    grid = u0.grid
    ws = _Workspace(grid, params)
    mask = _dealias_mask(grid)

    uhat = (u0.coeffs * mask).copy()
    uhat[0] = 0.0

    dx = 1.0 / grid.n
    times = [0.0]
    dts: list[float] = []
    stored_idx = [0]
    stored_states = [uhat.copy()]
    kin = [ws.kinetic(uhat)]
    ens = [ws.enstrophy(uhat)]
    state_bytes = uhat.nbytes
    budget_states = max(4, checkpoint_bytes // max(state_bytes, 1))
    stride = 1

    u_phys = ws.physical(uhat)
    umax = float(np.max(np.abs(u_phys)))
    umaxs = [umax]
    outcome = OUTCOME_COMPLETED
    info: dict = {}
    slope_limit = 0.5 * math.pi * grid.kmax  # times umax: k_max/4 front criterion
    max_tail = 0.0

    t = 0.0
    step_no = 0
    while t < T:
        if not math.isfinite(umax):
            raise DivergenceError(f"non-finite state at t={t:.6g}")
        dt = policy.dt_max if umax == 0.0 else min(policy.dt_max,
                                                   policy.cfl * dx / umax)
        if dt < policy.dt_min:
            raise DivergenceError(
                f"time step collapsed below dt_min at t={t:.6g} (umax={umax:.3g})"
            )
        last = t + dt >= T
        if last:
            dt = T - t
        uhat = _step_raw(ws, uhat, dt, u_phys=u_phys)
        step_no += 1
        t = T if last else t + dt
        times.append(t)
        dts.append(dt)
        kin.append(ws.kinetic(uhat))
        ens.append(ws.enstrophy(uhat))
        u_phys = ws.physical(uhat)
        umax = float(np.max(np.abs(u_phys)))
        umaxs.append(umax)

        if store == "all" and step_no % stride == 0:
            stored_idx.append(step_no)
            stored_states.append(uhat.copy())
            if len(stored_states) > budget_states:
                # drop every other checkpoint (keep the initial state)
                stored_idx = stored_idx[::2]
                stored_states = stored_states[::2]
                stride *= 2

        if step_no % blowup_check_every == 0 or last:
            sxmax = float(np.max(np.abs(_fft.irfft(ws.ik * uhat * grid.n, grid.n))))
            if sxmax > slope_limit * max(umax, 1e-300):
                outcome = OUTCOME_BLOWUP
                info = {"t_detected": t, "sxmax": sxmax, "umax": umax,
                        "slope_limit": slope_limit * umax}
            if tail_threshold is not None:
                frac = _tail_fraction_raw(ws, uhat)
                max_tail = max(max_tail, frac)
            if outcome == OUTCOME_BLOWUP:
                break

    if stored_idx[-1] != step_no:
        stored_idx.append(step_no)
        stored_states.append(uhat.copy())
    if store == "ends" and len(stored_states) > 2:
        stored_idx = [stored_idx[0], stored_idx[-1]]
        stored_states = [stored_states[0], stored_states[-1]]
    if tail_threshold is not None:
        info["max_tail_fraction"] = max_tail
        info["tail_ok"] = max_tail < tail_threshold

    return Trajectory(
        grid=grid, params=params, policy=policy,
        times=np.asarray(times), dts=np.asarray(dts),
        stored_idx=stored_idx, stored_states=stored_states,
        kinetic_series=np.asarray(kin), enstrophy_series=np.asarray(ens),
        umax_series=np.asarray(umaxs), outcome=outcome, info=info,
    )


def _tail_fraction_raw(ws: _Workspace, uhat: np.ndarray) -> float:
    dens = ws.ens_weight * (uhat.real**2 + uhat.imag**2)
    kmax = ws.grid.kmax
    total = float(np.sum(dens[: kmax + 1]))
    if total <= 0:
        return 0.0
    return float(np.sum(dens[kmax // 2 + 1: kmax + 1])) / total


def diagnostics(traj: Trajectory) -> list[dict]:
    """One record {t, K, E, umax, sxmax} per stored time."""
    ws = _Workspace(traj.grid, traj.params)
    out = []
    for pos, idx in enumerate(traj.stored_idx):
        uhat = traj.stored_states[pos]
        sx = _fft.irfft(ws.ik * uhat * traj.grid.n, traj.grid.n)
        out.append({
            "t": float(traj.times[idx]),
            "K": float(traj.kinetic_series[idx]),
            "E": float(traj.enstrophy_series[idx]),
            "umax": float(traj.umax_series[idx]),
            "sxmax": float(np.max(np.abs(sx))),
        })
    return out


def write_diagnostics_jsonl(traj: Trajectory, path) -> None:
    with Path(path).open("w") as fh:
        for rec in diagnostics(traj):
            fh.write(json.dumps(rec) + "\n")
