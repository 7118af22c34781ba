"""Nonlinear plant dynamics, fixed-step integration, and linearization.

Plants are plain data: a derivative function plus dimensions and named
parameters.  Integration is explicit Euler with the control recomputed on
every step, mirroring the simulation loops the gains were validated on.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class BlowupError(RuntimeError):
    """Dynamics produced a non-finite derivative; carries time and state."""

    def __init__(self, message, t=None, state=None):
        super().__init__(message)
        self.t = t
        self.state = state


@dataclass(frozen=True)
class PlantModel:
    name: str
    state_dim: int
    input_dim: int
    deriv: Callable  # (state, input) -> state derivative
    analytic_linearization: Optional[Callable] = None  # (state) -> (A, B)
    params: dict = field(default_factory=dict)


@dataclass
class SimSpec:
    """Fixed-step simulation settings.

    decimation stores every k-th step in the trajectory (the initial state
    is always stored); it never changes the integration or event checks.
    """

    dt: float
    t_end: float
    stop_success: Optional[Callable] = None
    stop_failure: Optional[Callable] = None
    decimation: int = 1

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_end < self.dt:
            raise ValueError("t_end must be at least dt")
        if self.decimation < 1:
            raise ValueError("decimation must be >= 1")


@dataclass
class Trajectory:
    times: list
    states: list
    inputs: list
    terminal_event: str  # success | failure | destination | timeout


def step_euler(plant, x, u, dt):
    """One explicit Euler step: x + dt * deriv(x, u)."""
    x = np.asarray(x, dtype=float)
    u = np.atleast_1d(np.asarray(u, dtype=float))
    dx = np.asarray(plant.deriv(x, u), dtype=float)
    if not np.all(np.isfinite(dx)):
        raise BlowupError(f"non-finite derivative for plant '{plant.name}' at state {x}", state=x)
    return x + dt * dx


def simulate(plant, controller, x0, spec):
    """Run Euler steps from x0 until stop_success, stop_failure, or t_end.

    controller is called as controller(t, state) once per step (control
    period equals dt).  Success is checked before failure after each step,
    matching the reference simulation loops.
    """
    x = np.asarray(x0, dtype=float).copy()
    u = np.atleast_1d(np.asarray(controller(0.0, x), dtype=float))
    times, states, inputs = [0.0], [x.copy()], [u.copy()]
    event = "timeout"
    n_steps = round(spec.t_end / spec.dt)
    for k in range(1, n_steps + 1):
        t = k * spec.dt
        try:
            x = step_euler(plant, x, u, spec.dt)
        except BlowupError as exc:
            raise BlowupError(f"{exc} (t={t:.6g})", t=t, state=exc.state) from None
        fired = None
        if spec.stop_success is not None and spec.stop_success(x):
            fired = "success"
        elif spec.stop_failure is not None and spec.stop_failure(x):
            fired = "failure"
        if fired is None and k < n_steps:
            u = np.atleast_1d(np.asarray(controller(t, x), dtype=float))
        if k % spec.decimation == 0:
            times.append(t)
            states.append(x.copy())
            inputs.append(u.copy())
        if fired is not None:
            event = fired
            break
    return Trajectory(times, states, inputs, event)


def linearize(plant, x0, u0):
    """(A, B) at (x0, u0): analytic when declared, else central differences."""
    x0 = np.asarray(x0, dtype=float)
    u0 = np.atleast_1d(np.asarray(u0, dtype=float))
    if plant.analytic_linearization is not None:
        return plant.analytic_linearization(x0)
    h = 1e-6
    n, m = plant.state_dim, plant.input_dim
    A = np.zeros((n, n))
    B = np.zeros((n, m))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        A[:, j] = (np.asarray(plant.deriv(x0 + e, u0), dtype=float)
                   - np.asarray(plant.deriv(x0 - e, u0), dtype=float)) / (2 * h)
    for j in range(m):
        e = np.zeros(m)
        e[j] = h
        B[:, j] = (np.asarray(plant.deriv(x0, u0 + e), dtype=float)
                   - np.asarray(plant.deriv(x0, u0 - e), dtype=float)) / (2 * h)
    return A, B


def sip_factored_model(theta, L=1.0, g=10.0):
    """State-dependent (A, B) that factor the pendulum-on-cart dynamics.

    State order (theta, theta_dot, x, x_dot), input cart acceleration.
    A21 = (g/L) sin(theta)/theta with the small-angle branch A21 = g/L for
    |theta| < 0.1; B2 = -cos(theta)/L in every branch.  Wherever the
    trigonometric branch applies (theta = 0 or |theta| >= 0.1) the
    factorization deriv == A(x) x + B(x) u is exact; the small-angle branch
    replaces sin(theta) by theta, as the adaptive controller does.
    """
    if abs(theta) < 0.1:
        a21 = g / L
    else:
        a21 = (g / L) * math.sin(theta) / theta
    b2 = -math.cos(theta) / L
    A = np.array([
        [0.0, 1.0, 0.0, 0.0],
        [a21, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 0.0, 0.0],
    ])
    B = np.array([0.0, b2, 0.0, 1.0])
    return A, B


def sip_plant(L=1.0, g=10.0):
    """Single inverted pendulum on a cart, state (theta, theta_dot, x, x_dot).

    theta_dd = (g sin(theta) - a cos(theta)) / L and x_dd = a for cart
    acceleration input a.  This is the true nonlinear plant; the guarded
    small-angle branch lives only in sip_factored_model, which controllers
    use as their design model.
    """
    def deriv(x, u):
        y = x[0]
        a = u[0]
        ydd = (g * math.sin(y) - a * math.cos(y)) / L
        return np.array([x[1], ydd, x[3], a])

    return PlantModel("sip", 4, 1, deriv, params={"L": L, "g": g})


def dip_plant(m1=1.0, m2=1.0, L1=1.0, L2=1.0, g=10.0):
    """Serial double inverted pendulum on an acceleration-driven cart.

    Point masses at the tips of massless links; state
    (theta1, theta1_dot, theta2, theta2_dot, x, x_dot), input cart
    acceleration.  Angular accelerations come from the 2x2 Lagrangian
    mass-matrix solve.
    """
    def deriv(x, u):
        y1, dy1, y2, dy2, _, dpos = x
        a = u[0]
        c12 = math.cos(y1 - y2)
        s12 = math.sin(y1 - y2)
        M = np.array([[(m1 + m2) * L1, m2 * L2 * c12],
                      [L1 * c12, L2]])
        r = np.array([(m1 + m2) * (g * math.sin(y1) - a * math.cos(y1)) - m2 * L2 * dy2 ** 2 * s12,
                      g * math.sin(y2) - a * math.cos(y2) + L1 * dy1 ** 2 * s12])
        dd = np.linalg.solve(M, r)
        return np.array([dy1, dd[0], dy2, dd[1], dpos, a])

    return PlantModel("dip", 6, 1, deriv,
                      params={"m1": m1, "m2": m2, "L1": L1, "L2": L2, "g": g})


def motorcycle_plant(L=1.5, H=1.0, tau_beta=0.02, g=10.0, v=10.0):
    """Planar motorcycle: kinematic bicycle, steering lag, inverted-pendulum roll.

    State (x, y, phi, beta, roll, roll_rate); input is the commanded
    steering angle. Speed v is a fixed parameter.
    """
    def deriv(s, u):
        _, _, phi, beta, roll, droll = s
        tb = math.tan(beta)
        return np.array([
            v * math.cos(phi),
            v * math.sin(phi),
            (v / L) * tb,
            (u[0] - beta) / tau_beta,
            droll,
            (g / H) * math.sin(roll) - (v ** 2 / (H * L)) * tb * math.cos(roll),
        ])

    return PlantModel("motorcycle", 6, 1, deriv,
                      params={"L": L, "H": H, "tau_beta": tau_beta, "g": g, "v": v})


def motorcycle_lateral_plant(L=1.5, H=1.0, g=10.0, v=10.0):
    """Simplified lateral motorcycle model used for gain design.

    State (y, phi, roll, roll_rate) in line-aligned coordinates; input is
    the steering angle directly (no lag).  Its linearization at upright
    straight-line motion is the design model A, B.
    """
    def deriv(s, u):
        _, phi, roll, droll = s
        tb = math.tan(u[0])
        return np.array([
            v * math.sin(phi),
            (v / L) * tb,
            droll,
            (g / H) * math.sin(roll) - (v ** 2 / (H * L)) * tb * math.cos(roll),
        ])

    return PlantModel("motorcycle_lateral", 4, 1, deriv,
                      params={"L": L, "H": H, "g": g, "v": v})


def point2d_plant():
    """2-D nonlinear point: dx = x sin(y), dy = y + u."""
    def deriv(s, u):
        x, y = s
        return np.array([x * math.sin(y), y + u[0]])

    def lin(s):
        x, y = s
        A = np.array([[math.sin(y), x * math.cos(y)],
                      [0.0, 1.0]])
        B = np.array([[0.0], [1.0]])
        return A, B

    return PlantModel("point2d", 2, 1, deriv, analytic_linearization=lin)
