"""2D wavepacket dynamics of a photoelectron in the trap saddle potential.

The freed electron moves in V(x, y, t) = (m w_e^2 / 2)(y^2 - x^2) * drive,
anti-trapping along x (toward the detectors) and trapping along y; drive
is 1 in static mode or cos(w_rf t).  Propagation uses a Strang-split
spectral stepper (exact kinetic step in Fourier space), so grid point
counts must be powers of two.  Detector slabs and the grid-boundary
absorber are smooth complex-absorbing masks applied once per step; the
norm removed inside each detector slab accumulates as that detector's
capture probability.  Hard projective removal is deliberately avoided:
with v*dt several orders below a de Broglie wavelength it acts as a
continuous position measurement and Zeno-reflects flux off the slab.

Momentum-grid surrogate: the physical initial state (10 nm source, which
fixes the velocity spread sigma_v = hbar/(2 m 10nm) ~ 5.8e3 m/s, and the
~1e5 m/s arrival velocities) spans 4 decades of wavenumber that no
desk-scale grid holds at once.  The stepper therefore evolves with
hbar_eff = hbar_scale * hbar and anchors the initial packet by sigma_v,
not by source size.  Velocities, times, the potential, and therefore
arrival statistics and capture fractions are unchanged; only the
position-space fringe texture is coarsened.  hbar_scale=1 recovers the
literal equation and is rejected by the resolution heuristics at the
default grid, which is the honest statement that the literal parameters
are unrepresentable in 512x256.

Classical reference: x(t) = (v0/w) sinh(w t) on the anti-trapped axis —
exact for wavepacket means by Ehrenfest's theorem in a quadratic
potential.  Trap-stability analysis solves the Mathieu equation
y'' + (a - 2 q cos 2 tau) y = 0 by explicit Floquet monodromy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
from scipy.integrate import solve_ivp

__all__ = [
    "E_CHARGE", "M_ELECTRON", "HBAR", "M_CA40", "SIGMA_V_DEFAULT",
    "ConfigurationError",
    "TrapConfig", "Wavepacket", "EffSample", "EfficiencyTrace",
    "PropagationResult", "Snapshot",
    "saddle_potential", "gaussian_wavepacket", "propagate",
    "classical_trajectory",
    "MathieuParams", "mathieu_q", "mathieu_stable", "stability_boundary",
    "TimescaleEstimate", "electron_timescale",
]

E_CHARGE = 1.602176634e-19
M_ELECTRON = 9.1093837015e-31
HBAR = 1.0545718176461565e-34
M_CA40 = 39.962590863 * 1.66053906660e-27

# velocity spread of a 10 nm minimum-uncertainty electron packet (m/s);
# the invariant the hbar_eff surrogate preserves
SIGMA_V_DEFAULT = HBAR / (2.0 * M_ELECTRON * 10e-9)


class ConfigurationError(Exception):
    """Grid/stepper resolution or stability heuristics violated."""


@dataclass(frozen=True)
class TrapConfig:
    omega_e: float = 2.5e9                     # saddle curvature (rad/s)
    omega_rf: float = 2.0 * math.pi * 25e6     # drive frequency (rad/s)
    static_mode: bool = True
    detectors: tuple[tuple[float, float], ...] = ((30e-6, 20e-6), (-30e-6, 20e-6))
    extent_x: float = 100e-6
    extent_y: float = 50e-6
    points_x: int = 512
    points_y: int = 256
    dt: float = 1e-13
    absorber_width_frac: float = 0.10
    absorber_gain: float = 12.0                # CAP strength, boundary frame
    detector_gain: float = 12.0                # CAP strength, detector slabs
    hbar_scale: float = 64.0
    mass: float = M_ELECTRON

    def __post_init__(self):
        if not (self.extent_x > 0 and self.extent_y > 0):
            raise ValueError("grid extents must be positive")
        if self.points_x < 2 or self.points_y < 2:
            raise ValueError("need at least 2 grid points per axis")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if not 0.0 <= self.absorber_width_frac < 0.5:
            raise ValueError("absorber_width_frac must lie in [0, 0.5)")
        if self.hbar_scale <= 0 or self.mass <= 0:
            raise ValueError("hbar_scale and mass must be positive")
        if self.omega_e < 0 or self.omega_rf <= 0:
            raise ValueError("omega_e must be >= 0 and omega_rf > 0")
        for cx, w in self.detectors:
            if w <= 0:
                raise ValueError("detector width must be positive")
            if abs(cx) + w / 2.0 > self.extent_x / 2.0:
                raise ValueError(f"detector at {cx} m extends outside the grid")

    @property
    def hbar_eff(self) -> float:
        return self.hbar_scale * HBAR

    @property
    def dx(self) -> float:
        return self.extent_x / self.points_x

    @property
    def dy(self) -> float:
        return self.extent_y / self.points_y

    def x_axis(self) -> np.ndarray:
        return (np.arange(self.points_x) - self.points_x / 2.0) * self.dx

    def y_axis(self) -> np.ndarray:
        return (np.arange(self.points_y) - self.points_y / 2.0) * self.dy


def saddle_potential(config: TrapConfig, x, y, t: float = 0.0):
    """V = (m w_e^2/2)(y^2 - x^2), times cos(w_rf t) when driven."""
    drive = 1.0 if config.static_mode else math.cos(config.omega_rf * t)
    return 0.5 * config.mass * config.omega_e**2 * (np.square(y) - np.square(x)) * drive


@dataclass
class Wavepacket:
    psi: np.ndarray          # complex amplitudes, shape (points_x, points_y)
    sigma0: float            # initial grid-space width (m)
    v0: float                # initial +x velocity (m/s)
    t: float = 0.0

    def norm_squared(self, config: TrapConfig) -> float:
        return float(np.sum(np.abs(self.psi) ** 2) * config.dx * config.dy)

    def mean_position(self, config: TrapConfig) -> tuple[float, float]:
        p = np.abs(self.psi) ** 2
        w = p.sum()
        x = config.x_axis()
        y = config.y_axis()
        return (float((p.sum(axis=1) @ x) / w), float((p.sum(axis=0) @ y) / w))

    def widths(self, config: TrapConfig) -> tuple[float, float]:
        p = np.abs(self.psi) ** 2
        w = p.sum()
        x = config.x_axis()
        y = config.y_axis()
        px = p.sum(axis=1) / w
        py = p.sum(axis=0) / w
        mx = px @ x
        my = py @ y
        return (float(math.sqrt(px @ (x - mx) ** 2)), float(math.sqrt(py @ (y - my) ** 2)))


def gaussian_wavepacket(
    config: TrapConfig,
    v0: float = 7e3,
    sigma_v: float = SIGMA_V_DEFAULT,
    sigma0: float | None = None,
    center: tuple[float, float] = (0.0, 0.0),
) -> Wavepacket:
    """Isotropic Gaussian with mean velocity (v0, 0).

    By default the width is set from the velocity spread: sigma0 =
    hbar_eff/(2 m sigma_v), minimum-uncertainty under the configured
    hbar_eff.  Passing sigma0 pins the grid-space width directly.
    """
    if sigma0 is None:
        if sigma_v <= 0:
            raise ValueError("sigma_v must be positive")
        sigma0 = config.hbar_eff / (2.0 * config.mass * sigma_v)
    if sigma0 <= 0:
        raise ValueError("sigma0 must be positive")
    x = config.x_axis()[:, None]
    y = config.y_axis()[None, :]
    k0 = config.mass * v0 / config.hbar_eff
    env = np.exp(-((x - center[0]) ** 2 + (y - center[1]) ** 2) / (4.0 * sigma0**2))
    psi = env.astype(np.complex128) * np.exp(1j * k0 * x)
    psi /= math.sqrt(np.sum(np.abs(psi) ** 2) * config.dx * config.dy)
    return Wavepacket(psi=psi, sigma0=sigma0, v0=v0, t=0.0)


class EffSample(NamedTuple):
    t: float
    captured: tuple[float, ...]   # per detector, cumulative
    total_captured: float
    norm_remaining: float
    mean_x: float
    mean_y: float
    sigma_x: float
    sigma_y: float


@dataclass(frozen=True)
class EfficiencyTrace:
    samples: tuple[EffSample, ...]

    def csv_rows(self) -> list[tuple]:
        """(t_ns, p_detector_1, ..., p_total, norm_remaining) rows."""
        return [(s.t * 1e9, *s.captured, s.total_captured, s.norm_remaining)
                for s in self.samples]


@dataclass(frozen=True)
class Snapshot:
    t: float
    density: np.ndarray  # |psi|^2 on the grid


@dataclass(frozen=True)
class PropagationResult:
    trace: EfficiencyTrace
    wavepacket: Wavepacket
    snapshots: tuple[Snapshot, ...] = ()


def _resolution_checks(wp: Wavepacket, config: TrapConfig) -> None:
    for npts, label in ((config.points_x, "points_x"), (config.points_y, "points_y")):
        if npts & (npts - 1):
            raise ConfigurationError(f"{label}={npts} is not a power of two "
                                     "(spectral stepper)")
    if wp.sigma0 < 2.0 * max(config.dx, config.dy):
        raise ConfigurationError(
            f"initial width {wp.sigma0:.3e} m under-resolved: need >= 2 grid "
            f"spacings ({2 * max(config.dx, config.dy):.3e} m); a larger "
            "hbar_scale or finer grid is required")
    k0 = config.mass * abs(wp.v0) / config.hbar_eff
    k_spread = 1.0 / (2.0 * wp.sigma0)
    k_nyq = math.pi / config.dx
    if k0 + 4.0 * k_spread > 0.9 * k_nyq:
        raise ConfigurationError(
            f"momentum content k0+4sk = {k0 + 4 * k_spread:.3e} rad/m exceeds "
            f"90% of the grid Nyquist wavenumber {k_nyq:.3e} rad/m")
    # phase advanced per step by the potential corners / kinetic Nyquist edge
    v_corner = abs(saddle_potential(
        config, config.extent_x / 2.0, config.extent_y / 2.0, 0.0))
    if v_corner * config.dt / config.hbar_eff > 0.5:
        raise ConfigurationError("potential phase per step exceeds 0.5 rad; reduce dt")
    k2_max = (math.pi / config.dx) ** 2 + (math.pi / config.dy) ** 2
    if config.hbar_eff * k2_max / (2 * config.mass) * config.dt > 2.0:
        raise ConfigurationError("kinetic phase per step exceeds 2 rad; reduce dt")


def _cap_masks(wp: Wavepacket, config: TrapConfig):
    """Per-step damping factors for detector slabs and the boundary frame.

    Quadratic-ramp absorbing potential W = gain * hbar_eff * v_char/width * u^2
    with u the fractional penetration depth; damping factor exp(-W dt/hbar_eff).
    v_char covers both the injection velocity and the saddle-accelerated
    arrival velocity at the slab's outer edge.
    """
    x = config.x_axis()
    y = config.y_axis()
    dt = config.dt

    detector_damps = []  # (slice, damping column vector over the slab)
    for cx, w in config.detectors:
        a, b = cx - w / 2.0, cx + w / 2.0
        inner, outer = (a, b) if cx >= 0 else (b, a)
        idx = np.nonzero((x >= min(a, b)) & (x <= max(a, b)))[0]
        if idx.size == 0:
            continue
        sl = slice(idx[0], idx[-1] + 1)
        u = np.abs(x[sl] - inner) / w
        v_char = math.hypot(wp.v0, config.omega_e * abs(outer))
        w0 = config.detector_gain * config.hbar_eff * v_char / w
        damp = np.exp(-w0 * u**2 * dt / config.hbar_eff)
        detector_damps.append((sl, damp[:, None]))

    boundary = None
    if config.absorber_width_frac > 0.0:
        wx = config.absorber_width_frac * config.extent_x
        wy = config.absorber_width_frac * config.extent_y
        ux = np.clip((np.abs(x) - (config.extent_x / 2.0 - wx)) / wx, 0.0, None)
        uy = np.clip((np.abs(y) - (config.extent_y / 2.0 - wy)) / wy, 0.0, None)
        v_char = math.hypot(wp.v0, config.omega_e * config.extent_x / 2.0)
        w0x = config.absorber_gain * config.hbar_eff * v_char / wx
        w0y = config.absorber_gain * config.hbar_eff * v_char / wy
        w_frame = w0x * ux[:, None] ** 2 + w0y * uy[None, :] ** 2
        boundary = np.exp(-w_frame * dt / config.hbar_eff)
    return detector_damps, boundary


def propagate(
    wp: Wavepacket,
    config: TrapConfig,
    t_final: float,
    sample_interval: float = 5e-12,
    snapshot_times: tuple[float, ...] = (),
) -> PropagationResult:
    """Advance the packet to t_final, accumulating detector capture.

    Strang splitting V/2 - T - V/2 per step; detector and boundary masks
    applied after each step.  The returned trace samples cumulative
    per-detector capture, total capture, remaining norm, and packet
    position/width moments roughly every sample_interval.
    """
    if t_final <= 0:
        raise ValueError("t_final must be positive")
    if sample_interval < config.dt:
        raise ValueError("sample_interval must be >= dt")
    _resolution_checks(wp, config)

    dt = config.dt
    hbar = config.hbar_eff
    x = config.x_axis()[:, None]
    y = config.y_axis()[None, :]

    v_grid = 0.5 * config.mass * config.omega_e**2 * (np.square(y) - np.square(x))
    kx = 2.0 * math.pi * np.fft.fftfreq(config.points_x, config.dx)[:, None]
    ky = 2.0 * math.pi * np.fft.fftfreq(config.points_y, config.dy)[None, :]
    kin_phase = np.exp(-1j * hbar * (kx**2 + ky**2) / (2.0 * config.mass) * dt)
    half_phase_static = np.exp(-1j * v_grid * dt / (2.0 * hbar))

    detector_damps, boundary = _cap_masks(wp, config)
    cell = config.dx * config.dy

    psi = wp.psi.astype(np.complex128, copy=True)
    n_steps = int(round(t_final / dt))
    stride = max(1, int(round(sample_interval / dt)))
    captured = [0.0] * len(config.detectors)
    want_snaps = sorted(set(
        min(max(int(round(ts / dt)), 0), n_steps) for ts in snapshot_times))

    samples = []
    snaps = []

    def record(step: int) -> None:
        w = Wavepacket(psi=psi, sigma0=wp.sigma0, v0=wp.v0, t=step * dt)
        mx, my = w.mean_position(config)
        sx, sy = w.widths(config)
        total = math.fsum(captured)
        samples.append(EffSample(
            t=step * dt, captured=tuple(captured), total_captured=total,
            norm_remaining=w.norm_squared(config),
            mean_x=mx, mean_y=my, sigma_x=sx, sigma_y=sy))

    record(0)
    if want_snaps and want_snaps[0] == 0:
        snaps.append(Snapshot(t=0.0, density=np.abs(psi) ** 2))
        want_snaps.pop(0)

    for step in range(1, n_steps + 1):
        if config.static_mode:
            half = half_phase_static
        else:
            drive = math.cos(config.omega_rf * ((step - 0.5) * dt))
            half = np.exp(-1j * v_grid * (drive * dt / (2.0 * hbar)))
        psi *= half
        psi = np.fft.ifft2(kin_phase * np.fft.fft2(psi))
        psi *= half

        for i, (sl, damp) in enumerate(detector_damps):
            seg = psi[sl]
            captured[i] += float(np.sum(np.abs(seg) ** 2 * (1.0 - damp**2)) * cell)
            seg *= damp
        if boundary is not None:
            psi *= boundary

        if step % stride == 0 or step == n_steps:
            record(step)
        if want_snaps and step == want_snaps[0]:
            snaps.append(Snapshot(t=step * dt, density=np.abs(psi) ** 2))
            want_snaps.pop(0)

    out_wp = Wavepacket(psi=psi, sigma0=wp.sigma0, v0=wp.v0, t=n_steps * dt)
    return PropagationResult(trace=EfficiencyTrace(samples=tuple(samples)),
                             wavepacket=out_wp, snapshots=tuple(snaps))


def classical_trajectory(config: TrapConfig, v0: float, t: float) -> tuple[float, float]:
    """(x, v) on the anti-trapped axis: x = (v0/w) sinh(wt), v = v0 cosh(wt)."""
    if not config.static_mode:
        raise ValueError("classical trajectory is defined for the static saddle")
    wt = config.omega_e * t
    if abs(wt) < 1e-6:
        # series in (wt)^2; exact ballistic limit at omega_e = 0
        x = v0 * t * (1.0 + wt**2 / 6.0 + wt**4 / 120.0)
        v = v0 * (1.0 + wt**2 / 2.0 + wt**4 / 24.0)
        return (x, v)
    return (v0 / config.omega_e * math.sinh(wt), v0 * math.cosh(wt))


# ---------------------------------------------------------------------------
# Mathieu / Floquet stability

@dataclass(frozen=True)
class MathieuParams:
    a: float
    q: float
    charge: float = 1.0       # multiples of e
    mass: float = M_CA40
    v_rf: float = 0.0
    r0: float = 0.0
    omega_rf: float = 2.0 * math.pi * 25e6


def mathieu_q(charge: float, mass: float, v_rf: float, r0: float,
              omega_rf: float) -> float:
    """Standard RF-trap parameter q = 2 Q e V_rf / (m r0^2 w_rf^2)."""
    if mass <= 0 or r0 <= 0 or omega_rf <= 0:
        raise ValueError("mass, r0 and omega_rf must be positive")
    return 2.0 * charge * E_CHARGE * v_rf / (mass * r0**2 * omega_rf**2)


def _monodromy_trace(a: float, q: float) -> float:
    def rhs(tau, yv):
        c = a - 2.0 * q * math.cos(2.0 * tau)
        return [yv[1], -c * yv[0], yv[3], -c * yv[2]]

    with np.errstate(over="ignore", invalid="ignore"):
        sol = solve_ivp(rhs, (0.0, math.pi), [1.0, 0.0, 0.0, 1.0],
                        method="DOP853", rtol=1e-10, atol=1e-12,
                        dense_output=False)
    if not sol.success or not np.all(np.isfinite(sol.y[:, -1])):
        return math.inf
    return float(sol.y[0, -1] + sol.y[3, -1])


def mathieu_stable(a: float, q: float) -> bool:
    """Floquet stability of y'' + (a - 2q cos 2tau) y = 0: |tr M(pi)| <= 2.

    Solutions that overflow the integrator are reported unstable.  A 1e-9
    tolerance on the trace keeps the marginal free case (0, 0) stable.
    """
    if not (math.isfinite(a) and math.isfinite(q)):
        raise ValueError("a and q must be finite")
    tr = _monodromy_trace(a, q)
    return math.isfinite(tr) and abs(tr) <= 2.0 + 1e-9


def stability_boundary(a: float = 0.0, q_lo: float = 0.5, q_hi: float = 1.5,
                       tol: float = 1e-4) -> float:
    """Bisect the first stable/unstable transition in q at fixed a."""
    if not mathieu_stable(a, q_lo) or mathieu_stable(a, q_hi):
        raise ValueError("bracket must satisfy stable(q_lo) and not stable(q_hi)")
    while q_hi - q_lo > tol:
        mid = 0.5 * (q_lo + q_hi)
        if mathieu_stable(a, mid):
            q_lo = mid
        else:
            q_hi = mid
    return 0.5 * (q_lo + q_hi)


class TimescaleEstimate(NamedTuple):
    formula_s: float    # (1/w_rf) sqrt(m_e/m_ion)
    reference_s: float  # quoted characteristic value for comparison


def electron_timescale(omega_rf: float, m_ion: float = M_CA40) -> TimescaleEstimate:
    """Characteristic electron timescale; the formula and the quoted 0.5 ns
    reference disagree by ~20x at 2*pi*25 MHz, so both are returned."""
    if omega_rf <= 0 or m_ion <= 0:
        raise ValueError("omega_rf and m_ion must be positive")
    return TimescaleEstimate(
        formula_s=math.sqrt(M_ELECTRON / m_ion) / omega_rf,
        reference_s=0.5e-9,
    )
