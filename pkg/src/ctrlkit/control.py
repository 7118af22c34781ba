"""Runtime control laws.

PID, full-state feedback with sliding-mode targets, motorcycle line
guidance, adaptive gain scheduling, online least-squares identification,
and the CBF / CLF-CBF safety filters.

Stateful pieces (PID, the identification window, the guidance line switch)
are classes owned by one simulation loop; everything else is a pure
function.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .models import sip_factored_model
from .numerics import least_squares, qp_small
from .synthesis import design_gain_matrix, sip_partial_design_model

logger = logging.getLogger(__name__)

# |Lgh| at or below this makes the scalar barrier filter powerless; the
# reference is passed through unchanged and the activation is logged.
CBF_SINGULARITY_THRESHOLD = 1e-4


class PidController:
    """Discrete PID: P*e + I*(accumulated e*dt) + D*(e - prev_e)/dt.

    The first step uses prev_error = e, so the derivative term starts at 0.
    """

    def __init__(self, p, i, d, dt):
        if dt <= 0:
            raise ValueError("dt must be positive")
        self.p = p
        self.i = i
        self.d = d
        self.dt = dt
        self.integral_accum = 0.0
        self.prev_error = None

    def step(self, e):
        if self.prev_error is None:
            self.prev_error = e
        self.integral_accum += e * self.dt
        out = (self.p * e
               + self.i * self.integral_accum
               + self.d * (e - self.prev_error) / self.dt)
        self.prev_error = e
        return out


def pid_step(ctl, e):
    """Advance a PidController one step and return its output."""
    return ctl.step(e)


def fsfc(K, x, x_E=0.0):
    """Full-state feedback toward a (possibly moving) target: -k'(x - x_E)."""
    K = np.asarray(K, dtype=float).ravel()
    x = np.asarray(x, dtype=float).ravel()
    return float(-(K @ (x - np.asarray(x_E, dtype=float))))


@dataclass(frozen=True)
class SlidingTargetDIP:
    """Cart-position sliding target that walks toward 0 at rate s_v."""

    x0: float
    s_v: float = 8.0

    def __post_init__(self):
        if self.s_v <= 0:
            raise ValueError("slide rate must be positive")


def dip_sliding_target(tgt, t):
    """Sliding-mode target state (0,0,0,0, sign(x0)*max(|x0|-s_v*t, 0), 0)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    out = np.zeros(6)
    out[4] = math.copysign(max(abs(tgt.x0) - tgt.s_v * t, 0.0), tgt.x0)
    return out


class MotorcycleGuidance:
    """Two-line guidance: slide on line 1, switch to line 2 near the corner.

    Lines are parametrized by poses (x, y, heading); their intersection is
    the turning point.  The switch to line 2 happens once, when the
    motorcycle comes within the preview distance of the turning point.
    """

    def __init__(self, pose_I, pose_D, preview=6.0):
        if preview <= 0:
            raise ValueError("preview distance must be positive")
        xI, yI, phiI = (float(v) for v in pose_I)
        xD, yD, phiD = (float(v) for v in pose_D)
        det = math.sin(phiI - phiD)
        if abs(det) < 1e-12:
            raise ValueError("guidance lines are parallel; no turning point exists")
        mat = np.array([[math.cos(phiI), -math.cos(phiD)],
                        [math.sin(phiI), -math.sin(phiD)]])
        tID = np.linalg.solve(mat, np.array([xD - xI, yD - yI]))
        self.pose_I = (xI, yI, phiI)
        self.pose_D = (xD, yD, phiD)
        self.turning_point = (xI + math.cos(phiI) * tID[0], yI + math.sin(phiI) * tID[0])
        self.preview = preview
        self.active_line = 1

    def step(self, pose, roll, roll_rate, K):
        """Steering command -k'[y_bar, phi_bar, roll, roll_rate] on the active line."""
        x, y, phi = pose[0], pose[1], pose[2]
        if self.active_line == 1:
            xM, yM = self.turning_point
            if math.hypot(x - xM, y - yM) < self.preview:
                self.active_line = 2
        xS, yS, phiS = self.pose_I if self.active_line == 1 else self.pose_D
        y_bar = -math.sin(phiS) * (x - xS) + math.cos(phiS) * (y - yS)
        phi_bar = phi - phiS
        K = np.asarray(K, dtype=float).ravel()
        return float(-(K @ np.array([y_bar, phi_bar, roll, roll_rate])))


def adaptive_gain(theta, mode, desired_eigs, L=1.0, g=10.0, theta_max=0.4 * math.pi):
    """Angle-scheduled pole-placement gain for the 3-state pendulum model.

    mode "per-period" re-runs pole placement on the factored model frozen at
    the current angle (small-angle branch included); mode "lookup" selects
    among three gains precomputed at theta in {0, pi/4, theta_max} with
    region boundaries |theta| < pi/6 and |theta| < pi/3.
    """
    if mode == "per-period":
        A4, B4 = sip_factored_model(theta, L, g)
        idx = np.array([0, 1, 3])
        return design_gain_matrix(A4[np.ix_(idx, idx)], B4[idx], desired_eigs)
    if mode == "lookup":
        if abs(theta) < math.pi / 6:
            design_theta = 0.0
        elif abs(theta) < math.pi / 3:
            design_theta = math.pi / 4
        else:
            design_theta = theta_max
        A, B = sip_partial_design_model(design_theta, L, g)
        return design_gain_matrix(A, B, desired_eigs)
    raise ValueError(f"unknown adaptive mode {mode!r}")


class SysIdWindow:
    """Fixed-capacity window of (regressor, response) rows, newest on top.

    push() shifts every stored row down one slot and writes the new row at
    the top.  The window is warm once capacity rows have been pushed;
    solving is only permitted when warm.
    """

    def __init__(self, capacity, regressor_dim):
        if capacity < 1 or regressor_dim < 1:
            raise ValueError("capacity and regressor_dim must be positive")
        self.X = np.zeros((capacity, regressor_dim))
        self.y = np.zeros(capacity)
        self._pushed = 0

    @property
    def capacity(self):
        return self.X.shape[0]

    @property
    def warm(self):
        return self._pushed >= self.capacity

    def push(self, regressor, response):
        self.X[1:] = self.X[:-1]
        self.y[1:] = self.y[:-1]
        self.X[0] = np.asarray(regressor, dtype=float)
        self.y[0] = float(response)
        self._pushed += 1


def sysid_solve(window):
    """Least-squares parameter estimate from a warm identification window.

    Raises if the window is cold or the stacked regressors are rank
    deficient (unidentifiable); callers keep their previous estimate then.
    """
    if not window.warm:
        raise ValueError("identification window is not warm yet")
    return least_squares(window.X, window.y)


@dataclass(frozen=True)
class BarrierSpec:
    """Barrier h with gradient and a linear extended class-K gain alpha(h)=alpha_gain*h."""

    h: Callable
    grad_h: Callable
    alpha_gain: float

    def __post_init__(self):
        if self.alpha_gain <= 0:
            raise ValueError("alpha_gain must be positive")


@dataclass(frozen=True)
class ClfSpec:
    """Lyapunov function V with gradient and linear gamma(V)=gamma_gain*V."""

    V: Callable
    grad_V: Callable
    gamma_gain: float

    def __post_init__(self):
        if self.gamma_gain <= 0:
            raise ValueError("gamma_gain must be positive")


def cbf_filter_scalar(u_ref, Lfh, Lgh, alpha_h):
    """Closed form of the one-dimensional safety QP.

    Clips the reference to the safe side when the barrier constraint has
    authority; when |Lgh| <= 1e-4 the constraint row is singular and the
    reference passes through unchanged (the activation is logged, because
    safety is not enforced on that step).
    """
    if Lgh > CBF_SINGULARITY_THRESHOLD:
        return max(u_ref, -(Lfh + alpha_h) / Lgh)
    if Lgh < -CBF_SINGULARITY_THRESHOLD:
        return min(u_ref, -(Lfh + alpha_h) / Lgh)
    logger.info("barrier filter singularity guard active (Lgh=%.3e); reference passed through", Lgh)
    return u_ref


def clf_cbf_step(u_ref, LfV, LgV, gamma_V, Lfh, Lgh, alpha_h, lam=0.25, H=1.0):
    """Relaxed stabilize-and-stay-safe program in the variables (u, delta).

    Minimizes H/2*(u - u_ref)^2 + lam/2*delta^2 subject to the relaxed
    Lyapunov-decrease row LfV + LgV*u <= -gamma_V + delta and the hard
    barrier row Lfh + Lgh*u >= -alpha_h.  gamma_V and alpha_h are the
    already-evaluated gamma(V(x)) and alpha(h(x)).
    """
    if lam <= 0 or H <= 0:
        raise ValueError("lam and H must be positive")
    H_qp = np.array([[H, 0.0], [0.0, lam]])
    c = np.array([-H * u_ref, 0.0])
    A = np.array([[LgV, -1.0], [-Lgh, 0.0]])
    b = np.array([-LfV - gamma_V, Lfh + alpha_h])
    z = qp_small(H_qp, c, A, b)
    if z is None:
        raise RuntimeError(
            "relaxed safety program infeasible "
            f"(LfV={LfV:.6g}, LgV={LgV:.6g}, Lfh={Lfh:.6g}, Lgh={Lgh:.6g})")
    return float(z[0]), float(z[1])


def lyapunov_ref_2d(x, y):
    """Stabilizing reference for the 2-D point: -x^2 sin(y)/y - 2y.

    The |y| <= 1e-4 branch uses the limit value sin(y)/y -> 1.
    """
    if abs(y) > 1e-4:
        return -x * x * math.sin(y) / y - 2 * y
    return -x * x - 2 * y
