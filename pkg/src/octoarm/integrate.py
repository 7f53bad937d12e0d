"""Fixed-step classical Runge-Kutta integration."""

import numpy as np

from .errors import IntegrationDiverged


def rk4_step(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4(f, y0, t):
    """Integrate ``y' = f(t, y)`` over the sample times ``t``.

    The grid ``t`` need not be uniform; one classical RK4 step is taken
    between consecutive samples.

    Returns:
        array of shape ``(len(t),) + shape(y0)``.

    Raises:
        IntegrationDiverged: if a step produces a non-finite value. The
            exception carries ``(t_k, y_k)`` of the last finite sample.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y0, dtype=float)
    out = np.empty((t.size,) + y.shape)
    out[0] = y
    for k in range(t.size - 1):
        y = rk4_step(f, t[k], y, t[k + 1] - t[k])
        if not np.all(np.isfinite(y)):
            raise IntegrationDiverged(
                f"non-finite state at t={t[k + 1]:.6g}", last_state=(t[k], out[k].copy())
            )
        out[k + 1] = y
    return out
