"""Damped harmonic oscillator: closed-form analytics and RK4 simulation.

Closed forms
    analytic_position(): exact underdamped free response for given x(0), v(0)
    period(), cycle_time(): damped period T = 2*pi/omega_d and t_i = i*T
    amplitude_at(): per-cycle amplitude law A_i = A0 * r**i
    cycles_to_threshold(), oscillation_count(): how many cycles keep
        A_i/A0 above the halting threshold gamma0 (infinite when mu = 0)
    friction_for_count(): closed-form inversion, the mu that yields exactly
        M threshold-qualifying cycles

Numerics
    integrate(): fixed-step classical Runge-Kutta of x'' = -(k/m) x - (mu/m) x'
    extract_peaks(): per-cycle amplitudes from a sampled trajectory
    energy(): instantaneous mechanical energy

All motion is measured as displacement from the equilibrium point; the
simulation accepts an equilibrium offset so that translation invariance of
the amplitude encoding can be exercised directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

#: Returned by oscillation_count when the motion never crosses the threshold.
UNBOUNDED = math.inf

# Absolute slack when flooring the real-valued cycle count: a mu produced by
# friction_for_count makes the count land exactly on an integer, and the last
# floating-point bit must not flip it down.
_FLOOR_SLACK = 1e-9


class DomainError(ValueError):
    """Parameter outside its physical domain (mass, stiffness, threshold...)."""


class OverdampedError(ValueError):
    """mu >= 2*sqrt(k*m): no oscillation, the cycle analytics do not apply."""


class StepSizeError(ValueError):
    """Integration step too coarse for the oscillation period."""


class NoPeaksError(ValueError):
    """The sampled trajectory contains no full oscillation cycle."""


@dataclass(frozen=True)
class OscillatorParams:
    """Mass-spring-friction system plus the halting threshold gamma0.

    gamma0 is the dimensionless amplitude ratio A_i/A0 below (or at) which
    the system counts as at rest.  Construction checks signs and ranges;
    the underdamped requirement mu < 2*sqrt(k*m) is checked by the cycle
    analytics, which raise OverdampedError past it.
    """

    m: float
    k: float
    mu: float = 0.0
    gamma0: float = 0.1

    def __post_init__(self):
        if not self.m > 0:
            raise DomainError(f"mass must be positive (got {self.m})")
        if not self.k > 0:
            raise DomainError(f"stiffness must be positive (got {self.k})")
        if self.mu < 0:
            raise DomainError(f"friction must be non-negative (got {self.mu})")
        if not 0 < self.gamma0 < 1:
            raise DomainError(f"gamma0 must lie in (0, 1) (got {self.gamma0})")


def _require_underdamped(params):
    if params.mu >= 2.0 * math.sqrt(params.k * params.m):
        raise OverdampedError(
            f"mu={params.mu} >= 2*sqrt(k*m)={2.0 * math.sqrt(params.k * params.m)}")


def omega_d(params):
    """Damped angular frequency (1/2)*sqrt(4k/m - mu^2/m^2), rad/s."""
    _require_underdamped(params)
    m, k, mu = params.m, params.k, params.mu
    return 0.5 * math.sqrt(4.0 * k / m - mu * mu / (m * m))


def decay_rate(params):
    """Envelope decay exponent mu/(2m), 1/s."""
    return params.mu / (2.0 * params.m)


def period(params):
    """Oscillation period T = 2*pi/omega_d, s."""
    return 2.0 * math.pi / omega_d(params)


def cycle_time(params, i):
    """Time t_i = i*T at which the i-th full cycle completes."""
    if i < 1:
        raise ValueError("cycle index starts at 1")
    return i * period(params)


def cycle_amplitude_ratio(params):
    """Per-cycle amplitude ratio r = exp(-pi*(mu/m)/omega_d); 1 when mu = 0."""
    return math.exp(-math.pi * (params.mu / params.m) / omega_d(params))


def amplitude_at(params, a0, i):
    """Amplitude A_i = a0 * r**i after i full cycles (A_0 = a0)."""
    if i < 0:
        raise ValueError("cycle index must be non-negative")
    return a0 * cycle_amplitude_ratio(params) ** i


def cycles_to_threshold(params):
    """Real-valued number of cycles until A_i/A0 reaches gamma0.

    Solves A_i/A0 = gamma0 for i:

        f(mu) = |ln gamma0| * sqrt(4k/m - mu^2/m^2) / (2*pi*mu/m)

    Diverges as mu -> 0: an undamped oscillator never meets the threshold,
    so UNBOUNDED is returned for mu = 0.
    """
    _require_underdamped(params)
    m, k, mu = params.m, params.k, params.mu
    if mu == 0:
        return UNBOUNDED
    span = math.sqrt(4.0 * k / m - mu * mu / (m * m))
    return abs(math.log(params.gamma0)) * span / (2.0 * math.pi * mu / m)


def oscillation_count(params):
    """Whole cycles performed before rest: floor of cycles_to_threshold.

    Returns UNBOUNDED for mu = 0.  The boundary cycle (amplitude ratio equal
    to gamma0, as produced by friction_for_count) counts as performed.
    """
    f = cycles_to_threshold(params)
    if f == UNBOUNDED:
        return UNBOUNDED
    return math.floor(f + _FLOOR_SLACK)


def friction_for_count(m, k, gamma0, count):
    """Friction mu giving exactly `count` threshold-qualifying cycles.

    Closed-form inversion of cycles_to_threshold:

        mu = 2*sqrt(k*m)*|ln gamma0| / sqrt(4*pi^2*count^2 + ln^2 gamma0)

    The result is always underdamped and satisfies
    cycles_to_threshold == count to rounding.
    """
    if count != int(count) or count < 1:
        raise DomainError(f"count must be a positive integer (got {count!r})")
    return _friction_for_cycles(m, k, gamma0, float(count))


def _friction_for_cycles(m, k, gamma0, cycles):
    # Same inversion for a real-valued cycle target; used by property tests.
    if m <= 0 or k <= 0:
        raise DomainError("mass and stiffness must be positive")
    if not 0 < gamma0 < 1:
        raise DomainError(f"gamma0 must lie in (0, 1) (got {gamma0})")
    if cycles <= 0:
        raise DomainError("cycle target must be positive")
    log2 = math.log(gamma0) ** 2
    return 2.0 * math.sqrt(k * m * log2 / (4.0 * math.pi ** 2 * cycles ** 2 + log2))


@dataclass(frozen=True)
class AnalyticMotion:
    """Closed-form motion for initial displacement x0 and velocity v0.

    x0 is the signed initial displacement from equilibrium; a0 is its
    magnitude (the initial amplitude entering the A_i law).
    """

    params: OscillatorParams
    x0: float
    v0: float = 0.0

    @property
    def a0(self):
        return abs(self.x0)

    @property
    def omega_d(self):
        return omega_d(self.params)

    @property
    def decay_rate(self):
        return decay_rate(self.params)


def analytic_position(motion, t):
    """Exact underdamped displacement at time t for the motion's x(0), v(0).

        x(t) = e^(-delta*t) * ( x0*cos(w*t) + (v0 + delta*x0)/w * sin(w*t) )

    with delta = mu/(2m) and w the damped angular frequency.  Released from
    rest (v0 = 0) the full-cycle returns land exactly at t_i = i*T with
    |x(t_i)| = A0 * r**i, the per-cycle amplitude law.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    w = omega_d(motion.params)
    delta = decay_rate(motion.params)
    envelope = math.exp(-delta * t)
    return envelope * (motion.x0 * math.cos(w * t)
                       + (motion.v0 + delta * motion.x0) / w * math.sin(w * t))


@dataclass(frozen=True)
class SimConfig:
    """Initial conditions and discretisation for one simulation run.

    x0 and equilibrium are absolute coordinates; the spring restores toward
    `equilibrium`.  The step must resolve the period: integrate() rejects
    dt >= T/100.
    """

    x0: float
    v0: float = 0.0
    dt: float = 1e-4
    t_max: float = 8.0
    equilibrium: float = 0.0

    def __post_init__(self):
        if not self.dt > 0:
            raise DomainError(f"dt must be positive (got {self.dt})")
        if not self.t_max > 0:
            raise DomainError(f"t_max must be positive (got {self.t_max})")


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled trajectory: time, position, velocity, energy."""

    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    energy: np.ndarray

    def __len__(self):
        return self.t.size

    def write_csv(self, path):
        """Write "t,x,v,energy" rows at full double precision."""
        data = np.column_stack([self.t, self.x, self.v, self.energy])
        np.savetxt(path, data, fmt="%.17g", delimiter=",",
                   header="t,x,v,energy", comments="")


def energy(params, x, v):
    """Mechanical energy (1/2) m v^2 + (1/2) k x^2 for displacement x."""
    return 0.5 * params.m * v * v + 0.5 * params.k * x * x


def integrate(params, sim):
    """Classical fixed-step RK4 integration of the damped oscillator.

    Integrates x'' = -(k/m)(x - x_eq) - (mu/m) x' from (sim.x0, sim.v0) with
    step sim.dt up to sim.t_max.  Sample times are i*dt exactly, so repeated
    runs with identical inputs are bit-stable.  Raises StepSizeError unless
    dt < T/100.
    """
    T = period(params)
    if not sim.dt < T / 100.0:
        raise StepSizeError(f"dt={sim.dt} too coarse; need dt < T/100 = {T / 100.0:.6g}")
    w2 = params.k / params.m
    c = params.mu / params.m
    xeq = sim.equilibrium
    n = int(round(sim.t_max / sim.dt))
    xs = np.empty(n + 1)
    vs = np.empty(n + 1)
    x = float(sim.x0)
    v = float(sim.v0)
    xs[0] = x
    vs[0] = v
    h = sim.dt
    h2 = 0.5 * h
    h6 = h / 6.0
    for i in range(1, n + 1):
        a1 = -w2 * (x - xeq) - c * v
        k2x = v + h2 * a1
        a2 = -w2 * (x + h2 * v - xeq) - c * k2x
        k3x = v + h2 * a2
        a3 = -w2 * (x + h2 * k2x - xeq) - c * k3x
        k4x = v + h * a3
        a4 = -w2 * (x + h * k3x - xeq) - c * k4x
        x = x + h6 * (v + 2.0 * k2x + 2.0 * k3x + k4x)
        v = v + h6 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        xs[i] = x
        vs[i] = v
    t = np.arange(n + 1) * h
    d = xs - xeq
    E = 0.5 * params.m * vs * vs + 0.5 * params.k * d * d
    return TimeSeries(t=t, x=xs, v=vs, energy=E)


class CyclePeak(NamedTuple):
    index: int
    time: float
    amplitude: float


def extract_peaks(series, equilibrium=0.0):
    """Per-cycle amplitudes A_i at the full-cycle returns of a trajectory.

    A full-cycle return is an extremum of the displacement on the same side
    of equilibrium as the starting point, i.e. a sample where the velocity
    changes sign while sign(x - eq) matches sign(x(0) - eq).  Each peak's
    time and amplitude are refined by a quadratic fit through the three
    bracketing samples.  Peaks are numbered from 1 in time order.

    Raises NoPeaksError when the series is too short to contain a full cycle
    (or has no oscillatory extremum at all).
    """
    d = series.x - equilibrium
    if d[0] == 0.0:
        raise NoPeaksError("starting displacement is zero; no amplitude reference")
    sign0 = 1.0 if d[0] > 0 else -1.0
    s = d * sign0
    sv = series.v * sign0
    # velocity + -> <=0 between j and j+1 marks an extremum on the start side
    crossings = np.flatnonzero((sv[:-1] > 0.0) & (sv[1:] <= 0.0))
    dt = float(series.t[1] - series.t[0])
    peaks = []
    for j in crossings:
        center = int(j if s[j] >= s[j + 1] else j + 1)
        if center == 0 or center == len(s) - 1:
            continue
        if s[center] <= 0.0:
            continue
        ym, y0, yp = s[center - 1], s[center], s[center + 1]
        den = ym - 2.0 * y0 + yp
        if den == 0.0:
            t_peak, a_peak = float(series.t[center]), float(y0)
        else:
            offset = 0.5 * (ym - yp) / den
            t_peak = float(series.t[center] + offset * dt)
            a_peak = float(y0 - 0.25 * (ym - yp) * offset)
        peaks.append(CyclePeak(len(peaks) + 1, t_peak, a_peak))
    if not peaks:
        raise NoPeaksError("no full oscillation cycle in the sampled span")
    return peaks


def peaks_document(params, peaks):
    """JSON-ready summary of parameters and extracted per-cycle amplitudes."""
    return {
        "m": params.m,
        "k": params.k,
        "mu": params.mu,
        "gamma0": params.gamma0,
        "peaks": [{"i": p.index, "t": p.time, "A": p.amplitude} for p in peaks],
    }
