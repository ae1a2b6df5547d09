"""Real gamma-family helpers with explicit sign tracking.

Everything downstream (negative-binomial weights, series coefficients,
Meijer-G residues) multiplies long chains of gamma factors, so the core
representation here is (log|value|, sign) pairs that only get exponentiated
at the final combination step.
"""

import math

from ..exceptions import DomainError

__all__ = ["ln_gamma", "pochhammer", "log_pochhammer", "is_nonpositive_integer"]


def is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def ln_gamma(x: float):
    """Return (log|Gamma(x)|, sign) for real non-pole x.

    sign is +1 or -1; Gamma is negative between consecutive nonpositive
    even/odd integers, which math.lgamma does not report on its own.
    """
    if is_nonpositive_integer(x):
        raise DomainError(f"Gamma pole at x={x}")
    value = math.lgamma(x)
    if x > 0.0:
        return value, 1
    # Gamma alternates sign between consecutive negative integers:
    # negative on (-1,0), positive on (-2,-1), ...
    sign = -1 if (int(math.floor(x)) % 2 != 0) else 1
    return value, sign


def pochhammer(x: float, n: int) -> float:
    """Rising factorial (x)_n = Gamma(x+n)/Gamma(x), with (x)_0 = 1 for all x."""
    log_val, sign = log_pochhammer(x, n)
    if log_val == -math.inf:
        return 0.0
    return sign * math.exp(log_val)


def log_pochhammer(x: float, n: int):
    """(log|(x)_n|, sign); the zero value (x)_n = 0 is encoded as (-inf, 1).

    Zeros occur when x is a nonpositive integer with n > -x, in particular
    (0)_n = 0 for n >= 1, the identity that collapses the correlated-shadow
    series when the two shadow shapes coincide.
    """
    if n < 0:
        raise DomainError("pochhammer order must be a non-negative integer")
    if n == 0:
        return 0.0, 1
    if is_nonpositive_integer(x):
        # (x)_n = x (x+1) ... (x+n-1): hits the factor 0 once n > -x
        if n - 1 >= -x:
            return -math.inf, 1
        log_val = 0.0
        sign = 1
        for k in range(n):
            term = x + k
            log_val += math.log(abs(term))
            if term < 0:
                sign = -sign
        return log_val, sign
    if x > 0.0:
        return math.lgamma(x + n) - math.lgamma(x), 1
    la, sa = ln_gamma(x + n)
    lb, sb = ln_gamma(x)
    return la - lb, sa * sb
