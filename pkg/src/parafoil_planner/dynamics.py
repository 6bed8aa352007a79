"""Equilibrium-glide parafoil kinematics and trajectory propagation.

The parafoil is modeled as a point mass in straight or equilibrium turning
glide: airspeed ``V`` and glide ratio ``L/D`` are constant, the bank angle
``phi`` is the only control input and takes effect instantly.  The state is
``(x, y, h, psi)`` with

    x'   =  V cos(gamma) cos(psi) + wx
    y'   = -V cos(gamma) sin(psi) + wy
    h'   =  V sin(gamma) + wh
    psi' = -(g / V) tan(phi)

where ``gamma = arctan(-1 / (cos(phi) * L/D))`` is the (negative) flight
angle and ``(wx, wy, wh)`` is a constant wind vector.

All angles are radians; headings are kept in ``(-pi, pi]``.  Distances are
meters, time is seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

TAU = math.tau

#: Default integrator step [s].  Collision and goal predicates downstream
#: assume samples no farther apart than this.
DEFAULT_STEP = 0.05

#: Global bank-angle bound [rad] applied to every control input.
MAX_BANK = math.pi / 6


class IntegrationFaultError(RuntimeError):
    """Propagation produced a non-finite state."""


class NoWindDirectionError(ValueError):
    """The anti-wind heading is undefined because horizontal wind is zero."""


def wrap_angle(a: float) -> float:
    """Wrap an angle into ``(-pi, pi]``."""
    a = math.remainder(a, TAU)
    if a <= -math.pi:
        a += TAU
    return a


class ParafoilState(NamedTuple):
    """Planar position, altitude above ground and heading."""

    x: float
    y: float
    h: float
    psi: float


@dataclass(frozen=True)
class ParafoilParams:
    """Constant parafoil characteristics: airspeed and glide ratio."""

    v: float
    glide_ratio: float
    g: float = 9.81

    def __post_init__(self) -> None:
        if not (self.v > 0 and self.glide_ratio > 0 and self.g > 0):
            raise ValueError(
                f"airspeed, glide ratio and g must be positive, got "
                f"v={self.v}, glide_ratio={self.glide_ratio}, g={self.g}"
            )


@dataclass(frozen=True)
class Wind:
    """Constant wind vector; ``wh`` is positive upward."""

    wx: float = 0.0
    wy: float = 0.0
    wh: float = 0.0

    def __post_init__(self) -> None:
        if not all(map(math.isfinite, (self.wx, self.wy, self.wh))):
            raise ValueError("wind components must be finite")

    @property
    def horizontal_speed(self) -> float:
        return math.hypot(self.wx, self.wy)


@dataclass(frozen=True)
class ControlSegment:
    """A piece of the control record.

    Sampled segments hold a constant bank angle ``phi``.  Approach-law
    segments (``is_approach_law=True``) ignore ``phi`` and recompute the
    bank from the current heading at every integrator step via
    :func:`final_approach_bank`; the anti-wind heading is derived from the
    wind vector at propagation time, so the segment itself stays tiny.
    """

    phi: float
    duration: float
    is_approach_law: bool = False

    def __post_init__(self) -> None:
        if self.duration <= 0:
            raise ValueError(f"segment duration must be positive, got {self.duration}")
        if not self.is_approach_law and abs(self.phi) > MAX_BANK + 1e-12:
            raise ValueError(f"sampled bank angle {self.phi} exceeds bound {MAX_BANK}")


def flight_angle(phi: float, glide_ratio: float) -> float:
    """Flight angle of the velocity vector for a given bank angle.

    Always negative (the parafoil descends); banking steepens the glide
    because the lift vector tilts away from vertical.
    """
    return math.atan(-1.0 / (math.cos(phi) * glide_ratio))


def state_derivative(
    s: ParafoilState, phi: float, params: ParafoilParams, wind: Wind
) -> tuple[float, float, float, float]:
    """Time derivative ``(x', y', h', psi')`` of the glide model."""
    gamma = flight_angle(phi, params.glide_ratio)
    vh = params.v * math.cos(gamma)
    return (
        vh * math.cos(s.psi) + wind.wx,
        -vh * math.sin(s.psi) + wind.wy,
        params.v * math.sin(gamma) + wind.wh,
        -(params.g / params.v) * math.tan(phi),
    )


def rk4_step(
    s: ParafoilState, phi: float, params: ParafoilParams, wind: Wind, dt: float
) -> ParafoilState:
    """One classical 4th-order Runge-Kutta step with constant bank angle.

    Reference implementation; :func:`propagate` uses an algebraically
    reduced form of the same update (the heading rate is constant over the
    step, so stages two and three coincide).
    """
    k1 = state_derivative(s, phi, params, wind)
    s2 = ParafoilState(*(a + 0.5 * dt * b for a, b in zip(s, k1)))
    k2 = state_derivative(s2, phi, params, wind)
    s3 = ParafoilState(*(a + 0.5 * dt * b for a, b in zip(s, k2)))
    k3 = state_derivative(s3, phi, params, wind)
    s4 = ParafoilState(*(a + dt * b for a, b in zip(s, k3)))
    k4 = state_derivative(s4, phi, params, wind)
    return ParafoilState(
        *(
            a + dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
            for a, b1, b2, b3, b4 in zip(s, k1, k2, k3, k4)
        )
    )


def glide_constants(
    phi: float, params: ParafoilParams, wind: Wind
) -> tuple[float, float, float]:
    """Constants ``(A, B, C)`` of the glide model for a fixed bank angle.

    ``A`` is horizontal airspeed, ``B`` the vertical speed including wind,
    ``C`` the heading rate.  ``x' = A cos(psi) + wx``, ``y' = -A sin(psi)
    + wy``, ``h' = B``, ``psi' = C``.
    """
    gamma = flight_angle(phi, params.glide_ratio)
    a = params.v * math.cos(gamma)
    b = params.v * math.sin(gamma) + wind.wh
    c = -(params.g / params.v) * math.tan(phi)
    return a, b, c


@dataclass
class PropagatedPath:
    """Result of :func:`propagate`.

    ``samples`` holds ``(t, state)`` pairs including the initial state at
    ``t=0``; ``phis[i]`` is the bank angle applied over the step from
    ``samples[i]`` to ``samples[i+1]``.  ``hit_ground`` marks early
    termination at the first sample with ``h <= 0``.
    """

    samples: list[tuple[float, ParafoilState]]
    phis: list[float]
    hit_ground: bool

    @property
    def endpoint(self) -> ParafoilState:
        return self.samples[-1][1]

    @property
    def duration(self) -> float:
        return self.samples[-1][0]


def propagate(
    s0: ParafoilState,
    segment: ControlSegment,
    params: ParafoilParams,
    wind: Wind,
    step: float = DEFAULT_STEP,
    approach_threshold_h: float | None = None,
) -> PropagatedPath:
    """Integrate the glide model over one control segment.

    Fixed-step RK4 at ``step`` seconds.  The heading is wrapped into
    ``(-pi, pi]`` after every step.  Integration stops at the first sample
    with ``h <= 0`` (``hit_ground``).

    When ``approach_threshold_h`` is given and the horizontal wind is
    nonzero, any step starting at or below that altitude applies the
    anti-wind approach law instead of the segment's constant bank, mirroring
    the planner's final-approach override.  Approach-law segments apply the
    law from the start; with zero horizontal wind they fall back to the
    stored constant (the anti-wind heading is undefined).
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if not all(map(math.isfinite, s0)):
        raise IntegrationFaultError(f"non-finite initial state {s0}")
    n_steps = max(1, round(segment.duration / step))

    lam = anti_wind_heading(wind) if wind.horizontal_speed > 0.0 else None
    law_always = segment.is_approach_law and lam is not None
    law_below = approach_threshold_h if lam is not None else None

    x, y, h, _ = s0
    psi = wrap_angle(s0.psi)

    cos, sin, rem = math.cos, math.sin, math.remainder
    pi = math.pi
    wxdt = wind.wx * step
    wydt = wind.wy * step

    samples = [(0.0, ParafoilState(x, y, h, psi))]
    phis: list[float] = []
    hit_ground = h <= 0.0

    phi_prev = None
    a = b = c = half = full = kx = bdt = 0.0
    i = 0
    while i < n_steps and not hit_ground:
        if law_always or (law_below is not None and h <= law_below):
            phi = final_approach_bank(psi, lam)
        else:
            phi = segment.phi
        if phi != phi_prev:
            a, b, c = glide_constants(phi, params, wind)
            half = 0.5 * c * step
            full = c * step
            kx = a * step / 6.0
            bdt = b * step
            phi_prev = phi

        pm = psi + half
        pe = psi + full
        x += wxdt + kx * (cos(psi) + 4.0 * cos(pm) + cos(pe))
        y += wydt - kx * (sin(psi) + 4.0 * sin(pm) + sin(pe))
        h += bdt
        psi = rem(pe, TAU)
        if psi <= -pi:
            psi += TAU

        i += 1
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(h)):
            raise IntegrationFaultError(
                f"non-finite state at t={i * step:.2f}: ({x}, {y}, {h}, {psi})"
            )
        phis.append(phi)
        samples.append((i * step, ParafoilState(x, y, h, psi)))
        if h <= 0.0:
            hit_ground = True

    return PropagatedPath(samples=samples, phis=phis, hit_ground=hit_ground)


def analytic_constant_control(
    s0: ParafoilState,
    phi: float,
    t: float,
    params: ParafoilParams,
    wind: Wind,
) -> ParafoilState:
    """Closed-form state after flying a constant bank angle for ``t`` seconds.

    With constant ``phi`` the flight angle and heading rate are constant,
    so the heading is linear in time and the horizontal track is a circular
    arc (a straight line for ``phi=0``) drifting with the wind.  Used as an
    exact oracle for the numeric integrator.
    """
    a, b, c = glide_constants(phi, params, wind)
    x0, y0, h0, psi0 = s0
    if c == 0.0:
        x = x0 + (a * math.cos(psi0) + wind.wx) * t
        y = y0 + (-a * math.sin(psi0) + wind.wy) * t
    else:
        psi_t = psi0 + c * t
        x = x0 + (a / c) * (math.sin(psi_t) - math.sin(psi0)) + wind.wx * t
        y = y0 + (a / c) * (math.cos(psi_t) - math.cos(psi0)) + wind.wy * t
    return ParafoilState(x, y, h0 + b * t, wrap_angle(psi0 + c * t))


def anti_wind_heading(wind: Wind) -> float:
    """Heading at which the air-relative velocity directly opposes the wind.

    Landing happens into the wind; under this model's sign convention
    (``y' = -V sin(psi) + wy``) that heading is ``atan2(wy, -wx)``.
    """
    if wind.horizontal_speed == 0.0:
        raise NoWindDirectionError("horizontal wind is zero, anti-wind heading undefined")
    return wrap_angle(math.atan2(wind.wy, -wind.wx))


def final_approach_bank(psi: float, lambda_w: float, bound: float = MAX_BANK) -> float:
    """Proportional bank command steering the heading onto ``lambda_w``.

    Half the wrapped heading error, clamped to the global bank bound.  The
    wrap avoids commanding a full extra turn across the ``+-pi`` seam.
    """
    err = math.remainder(psi - lambda_w, TAU)
    if err <= -math.pi:
        err += TAU
    phi = 0.5 * err
    if phi > bound:
        return bound
    if phi < -bound:
        return -bound
    return phi
