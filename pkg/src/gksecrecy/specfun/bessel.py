"""Exponentially scaled modified Bessel K of real order, and the Kummer-U
values tied to it.

Public scalar entry points wrap scipy's AMOS-backed kve (already the
Temme-series / continued-fraction evaluation in scaled form). The series
evaluators additionally need whole ladders of orders nu0 - t for t = 0..N at
fixed argument, with N in the hundreds, where even e^x K_nu(x) overflows a
double; those are computed in log scale by the stable upward three-term
recurrence seeded from scipy at fractional order.
"""

import math

import numpy as np
from scipy.special import kve as _scipy_kve

from ..exceptions import DomainError

__all__ = [
    "bessel_k_scaled",
    "log_bessel_k_scaled",
    "log_kve_ladder",
    "log_kve_orders",
    "kummer_u_bessel_family",
    "log_kummer_u_orders",
]

_HALF_LOG_PI = 0.5 * math.log(math.pi)


def bessel_k_scaled(nu: float, x: float) -> float:
    """e^x K_nu(x) for real order nu and x > 0; symmetric in nu <-> -nu."""
    if not x > 0.0:
        raise DomainError(f"bessel_k_scaled requires x > 0, got {x}")
    value = float(_scipy_kve(abs(nu), x))
    if math.isfinite(value):
        return value
    # scaled value overflows the double range (very large order, small x)
    return math.inf


def log_bessel_k_scaled(nu: float, x: float) -> float:
    """log(e^x K_nu(x)), valid far beyond the overflow range of the linear form."""
    if not x > 0.0:
        raise DomainError(f"log_bessel_k_scaled requires x > 0, got {x}")
    anu = abs(nu)
    value = float(_scipy_kve(anu, x))
    if math.isfinite(value) and value > 0.0:
        return math.log(value)
    frac, steps = anu % 1.0, int(anu // 1.0)
    ladder = log_kve_ladder(frac, steps, np.array([x]))
    return float(ladder[steps, 0])


def log_kve_ladder(nu0: float, tmax: int, x: np.ndarray) -> np.ndarray:
    """Matrix of log(e^x K_{nu0+t}(x)) for t = 0..tmax, x a positive vector.

    Upward recurrence K_{v+1} = (2v/x) K_v + K_{v-1}; all terms positive, so
    each step is a logaddexp and the recurrence is stable in this direction.
    Requires 0 <= nu0 (the seed orders nu0 and nu0+1 stay in scipy's
    representable range for any x > 0 of interest).
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("ladder argument must be positive")
    if nu0 < 0.0:
        raise DomainError("ladder base order must be non-negative")
    out = np.empty((tmax + 1, x.size))
    out[0] = np.log(_scipy_kve(nu0, x))
    if tmax == 0:
        return out
    out[1] = np.log(_scipy_kve(nu0 + 1.0, x))
    log_x = np.log(x)
    for t in range(1, tmax):
        nu = nu0 + t
        out[t + 1] = np.logaddexp(math.log(2.0 * nu) - log_x + out[t], out[t - 1])
    return out


def log_kve_orders(orders: np.ndarray, x: np.ndarray) -> np.ndarray:
    """log(e^x K_order(x)) on the grid orders x arguments, shape (O, X).

    Orders may be any reals (symmetry in the sign is applied); ladders are
    built per distinct fractional part of |order|, so order sets of the form
    base - t (the series use case) cost two recurrence sweeps total.
    """
    orders = np.asarray(orders, dtype=float)
    x = np.asarray(x, dtype=float)
    aord = np.abs(orders)
    out = np.empty((orders.size, x.size))
    fracs = np.round(aord % 1.0, 12)
    for frac in np.unique(fracs):
        mask = fracs == frac
        steps = np.rint(aord[mask] - frac).astype(int)
        ladder = log_kve_ladder(float(frac), int(steps.max()), x)
        out[mask] = ladder[steps]
    return out


def kummer_u_bessel_family(nu: float, x: float) -> float:
    """U(nu + 1/2, 2 nu + 1, 2 x), the confluent family the secrecy quadrature
    needs, via the exact rearrangement U = e^x K_nu(x) (2x)^{-nu} / sqrt(pi)."""
    if not x > 0.0:
        raise DomainError(f"kummer_u_bessel_family requires x > 0, got {x}")
    log_u = log_bessel_k_scaled(nu, x) - nu * math.log(2.0 * x) - _HALF_LOG_PI
    return math.exp(log_u)


def log_kummer_u_orders(orders: np.ndarray, x: np.ndarray) -> np.ndarray:
    """log U(order + 1/2, 2 order + 1, 2x) on the grid orders x arguments."""
    x = np.asarray(x, dtype=float)
    orders = np.asarray(orders, dtype=float)
    log_k = log_kve_orders(orders, x)
    return log_k - orders[:, None] * np.log(2.0 * x)[None, :] - _HALF_LOG_PI
