"""Small Meijer G engine for the parameter families this package needs.

Definition used (real parameters, z > 0):

    G^{m,n}_{p,q}[z | a; b]
      = (1/2*pi*i) int_L  P(s) z^{-s} ds,
    P(s) = prod_{j<=m} Gamma(b_j+s) prod_{h<=n} Gamma(1-a_h-s)
           / ( prod_{h>n} Gamma(a_h+s) prod_{j>m} Gamma(1-b_j-s) )

with L a vertical line separating the ascending pole ladders of the
Gamma(b_j+s) ("left poles") from the descending ladders of Gamma(1-a_h-s)
("right poles").

Primary evaluation is direct numerical integration along L: the offset is
placed near the minimum of |P(s) z^{-s}| on the real axis (keeping the
integrand scale matched to the result, which kills the cancellation that a
fixed offset suffers for extreme z), the trapezoid step is set from the
distance to the nearest pole, nodes are truncated once the integrand falls
1e-18 below its peak, and the sum is accumulated in log scale. Step
halving provides the convergence estimate.

A residue-series path (sum over left or right pole ladders) is kept as an
independent secondary route: it cross-checks the contour and it is the
primary route for parameter sets with zero exponential decay along L
(2(m+n) = p+q, e.g. the unit-step reduction), where the line integral is
only conditionally convergent. Coincident or integer-separated b
parameters (higher-order poles) are handled on the contour natively and in
the residue path by nudging the colliding parameters +-1e-6 and averaging.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, loggamma

from ..exceptions import DomainError, PrecisionError, UnsupportedParametersError
from .gammafns import is_nonpositive_integer, ln_gamma

__all__ = ["MeijerSpec", "meijer_g", "meijer_g_log"]

_DECAY_LOG_DROP = 45.0  # stop extending nodes once 1e-18 below peak (ln 1e18 ~ 41.4)
_MAX_NODES = 400_000
_NUDGE = 1e-6


@dataclass(frozen=True)
class MeijerSpec:
    """Order (m, n) and parameter lists (a of length p, b of length q)."""

    m: int
    n: int
    a: tuple = field(default=())
    b: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        p, q = self.p, self.q
        if not (0 <= self.m <= q and 0 <= self.n <= p):
            raise DomainError("need 0 <= m <= q and 0 <= n <= p")
        if p > 4 or q > 4 or (p == 0 and q == 0):
            raise UnsupportedParametersError("orders restricted to 1 <= p+q, p,q <= 4")
        for h in range(self.n):
            for j in range(self.m):
                diff = self.a[h] - self.b[j]
                if diff >= 1.0 - 1e-12 and abs(diff - round(diff)) < 1e-12:
                    raise UnsupportedParametersError(
                        f"pole of Gamma(b_{j}+s) coincides with pole of "
                        f"Gamma(1-a_{h}-s): a-b = {diff}"
                    )

    @property
    def p(self) -> int:
        return len(self.a)

    @property
    def q(self) -> int:
        return len(self.b)

    @property
    def decay_exponent(self) -> int:
        """kappa = 2(m+n) - p - q; contour integrand decays like e^{-kappa pi |t| / 2}."""
        return 2 * (self.m + self.n) - self.p - self.q


def _dist_to_pole_ladder(t: float) -> float:
    """Distance from t to the set {0, -1, -2, ...} (ladder extends downward)."""
    if t > 0.0:
        return t
    return abs(t - round(t))


def _factor_args(spec: MeijerSpec):
    """Integrand factor arguments: P(s) = prod Gamma(np+s) Gamma(nm-s) / prod Gamma(dp+s) Gamma(dm-s)."""
    num_plus = list(spec.b[: spec.m])
    num_minus = [1.0 - av for av in spec.a[: spec.n]]
    den_plus = list(spec.a[spec.n :])
    den_minus = [1.0 - bv for bv in spec.b[spec.m :]]
    return num_plus, num_minus, den_plus, den_minus


def _contour_window(spec: MeijerSpec):
    c_lo = -min(spec.b[: spec.m]) if spec.m else -math.inf
    c_hi = min(1.0 - av for av in spec.a[: spec.n]) if spec.n else math.inf
    return c_lo, c_hi


def _ln_p_rows(num_plus, num_minus, den_plus, den_minus, s):
    """Complex log of the Gamma product on nodes s; factor args are row vectors.

    Returns shape (R, L) for s of shape (L,).
    """
    n_rows = next(arr.shape[0] for arr in (num_plus + num_minus + den_plus + den_minus))
    total = np.zeros((n_rows, s.size), dtype=complex)
    first = True
    for arr in num_plus:
        v = loggamma(arr[:, None] + s[None, :])
        total = v if first else total + v
        first = False
    for arr in num_minus:
        v = loggamma(arr[:, None] - s[None, :])
        total = v if first else total + v
        first = False
    for arr in den_plus:
        total = total - loggamma(arr[:, None] + s[None, :])
    for arr in den_minus:
        total = total - loggamma(arr[:, None] - s[None, :])
    return total


def _contour_rows(num_plus, num_minus, den_plus, den_minus, lnz, c, d, rtol):
    """Trapezoid Mellin-Barnes along Re(s)=c for a batch of parameter rows.

    All rows share the offset c and strip half-width d. Returns
    (log|G| (R,), sign (R,), converged (R,) bool).
    """
    factor_rows = num_plus + num_minus + den_plus + den_minus
    n_rows = factor_rows[0].shape[0]

    h = min(0.35, 2.0 * math.pi * min(d, 1.0) / 46.0)

    def ln_f(t):
        s = c + 1j * t
        out = _ln_p_rows(num_plus, num_minus, den_plus, den_minus, s)
        return out - lnz * s[None, :]

    # establish extent at the initial step, growing in blocks until every
    # row has dropped _DECAY_LOG_DROP below its running peak
    block = 128
    ts = [np.array([0.0])]
    vals = [ln_f(ts[0])]
    peak = vals[0].real.max(axis=1)
    t_edge = 0.0
    while True:
        t_new = t_edge + h * (1.0 + np.arange(block))
        v_new = ln_f(t_new)
        ts.append(t_new)
        vals.append(v_new)
        t_edge = t_new[-1]
        peak = np.maximum(peak, v_new.real.max(axis=1))
        if np.all(v_new.real.max(axis=1) < peak - _DECAY_LOG_DROP):
            break
        if sum(t.size for t in ts) > _MAX_NODES:
            raise PrecisionError("Mellin-Barnes contour failed to decay within node budget")

    t_all = np.concatenate(ts)
    v_all = np.concatenate(vals, axis=1)

    for _ in range(4):
        # trapezoid at current step h using all nodes that are multiples of h,
        # and at step 2h using the even subset -> convergence estimate for free
        scale = v_all.real.max(axis=1)
        w = np.exp(v_all - scale[:, None])
        ratio = t_all / h
        on_grid = np.abs(ratio - np.rint(ratio)) < 1e-6
        idx = np.flatnonzero(on_grid)
        tg = t_all[idx]
        wg = w[:, idx]
        half0 = 0.5 * wg[:, tg < 0.5 * h].sum(axis=1)
        pos = tg > 0.5 * h
        s_fine = half0 + wg[:, pos].sum(axis=1)
        ratio2 = tg / (2 * h)
        even = np.abs(ratio2 - np.rint(ratio2)) < 1e-6
        s_coarse = half0 + wg[:, pos & even].sum(axis=1)

        g_fine = (h / math.pi) * s_fine.real
        g_coarse = (2 * h / math.pi) * s_coarse.real
        mag = (h / math.pi) * np.abs(wg).sum(axis=1)
        ok = np.abs(g_fine - g_coarse) <= rtol * np.abs(g_fine) + 1e-300
        if np.all(ok):
            cancelled = np.abs(g_fine) <= 1e-14 * mag
            if np.any(cancelled):
                raise PrecisionError(
                    "contour integral cancels below double precision",
                    error_estimate=float(np.max(1e-14 * mag * np.exp(scale))),
                )
            log_g = scale + np.log(np.abs(g_fine) + 1e-300)
            sign = np.where(g_fine >= 0.0, 1, -1)
            log_g[np.abs(g_fine) < 1e-299] = -math.inf
            return log_g, sign, np.ones(n_rows, dtype=bool)

        # refine: add midpoints at h/2 over the established extent
        h = h / 2.0
        t_mid = h + 2 * h * np.arange(int(t_edge / (2 * h)) + 1)
        t_mid = t_mid[t_mid <= t_edge + 1e-12]
        if t_all.size + t_mid.size > _MAX_NODES:
            break
        v_mid = ln_f(t_mid)
        t_all = np.concatenate([t_all, t_mid])
        v_all = np.concatenate([v_all, v_mid], axis=1)

    raise PrecisionError(
        "Mellin-Barnes contour did not converge at requested tolerance",
        error_estimate=float(np.max(np.abs(g_fine - g_coarse) * np.exp(scale))),
    )


def _offset_objective(spec, lnz, c_values):
    """ln |P(c + 0.3i) z^-(c+0.3i)| for candidate offsets (off axis to dodge
    denominator zeros on the real line)."""
    num_plus, num_minus, den_plus, den_minus = _factor_args(spec)
    s = np.asarray(c_values, dtype=complex) + 0.3j
    total = np.zeros(s.shape)
    for v in num_plus:
        total += loggamma(v + s).real
    for v in num_minus:
        total += loggamma(v - s).real
    for v in den_plus:
        total -= loggamma(v + s).real
    for v in den_minus:
        total -= loggamma(v - s).real
    return total - lnz * s.real


def _choose_offset(spec: MeijerSpec, lnz: float) -> float:
    c_lo, c_hi = _contour_window(spec)
    if c_lo >= c_hi - 1e-9:
        raise UnsupportedParametersError(
            f"no contour separates the pole ladders (window [{c_lo}, {c_hi}])"
        )
    if math.isfinite(c_lo) and math.isfinite(c_hi):
        margin = min(0.25, 0.2 * (c_hi - c_lo))
        cands = np.linspace(c_lo + margin, c_hi - margin, 41)
    elif math.isfinite(c_lo):  # open to the right
        excess = max(spec.q - spec.p, 1)
        span = 10.0 + 4.0 * math.exp(max(lnz, 0.0) / excess)
        cands = c_lo + 0.05 + np.geomspace(1e-2, span, 48)
    elif math.isfinite(c_hi):  # open to the left
        excess = max(spec.p - spec.q, 1)
        span = 10.0 + 4.0 * math.exp(max(-lnz, 0.0) / excess)
        cands = c_hi - 0.05 - np.geomspace(1e-2, span, 48)
    else:
        raise UnsupportedParametersError("integrand has no poles; not a Meijer G use case")
    obj = _offset_objective(spec, lnz, cands)
    return float(cands[int(np.argmin(obj))])


def _strip_halfwidth(spec: MeijerSpec, c: float) -> float:
    d = math.inf
    for j in range(spec.m):
        d = min(d, _dist_to_pole_ladder(c + spec.b[j]))
    for h in range(spec.n):
        d = min(d, _dist_to_pole_ladder((1.0 - spec.a[h]) - c))
    if not math.isfinite(d):
        d = 1.0
    if d <= 1e-9:
        raise UnsupportedParametersError("contour pinched between pole ladders")
    return d


def _contour_log(spec: MeijerSpec, z: float, rtol: float):
    lnz = math.log(z)
    c = _choose_offset(spec, lnz)
    d = _strip_halfwidth(spec, c)
    num_plus, num_minus, den_plus, den_minus = _factor_args(spec)
    as_rows = lambda vals: [np.array([v]) for v in vals]
    log_g, sign, _ = _contour_rows(
        as_rows(num_plus), as_rows(num_minus), as_rows(den_plus), as_rows(den_minus),
        lnz, c, d, rtol,
    )
    return float(log_g[0]), int(sign[0])


def _log_gamma_or_zero(x: float):
    """(log|Gamma(x)|, sign, is_pole); poles map to 'term vanishes' for 1/Gamma."""
    if is_nonpositive_integer(round(x) if abs(x - round(x)) < 1e-13 else x):
        return math.inf, 1, True
    lg, sg = ln_gamma(x)
    return lg, sg, False


def _residue_series_once(spec: MeijerSpec, z: float, side: str, max_terms=600):
    """Sum of residues over one pole family; assumes simple poles."""
    lnz = math.log(z)
    num_plus, num_minus, den_plus, den_minus = _factor_args(spec)
    total = 0.0
    log_scale = None
    if side == "left":
        anchors = num_plus
    else:
        anchors = num_minus
    if not anchors:
        return 0.0, 0.0
    peak = -math.inf
    for jj, anchor in enumerate(anchors):
        tail_small = 0
        for ell in range(max_terms):
            # pole: anchor + s0 = -ell (left) / anchor - s0 = -ell (right)
            s0 = (-anchor - ell) if side == "left" else (anchor + ell)
            log_t = -math.lgamma(ell + 1)
            sign_t = 1 if (ell % 2 == 0) else -1
            bad = False
            for kk, arg in enumerate(num_plus):
                if side == "left" and kk == jj:
                    continue
                lg, sg, pole = _log_gamma_or_zero(arg + s0)
                if pole:
                    raise UnsupportedParametersError("higher-order pole in residue series")
                log_t += lg
                sign_t *= sg
            for kk, arg in enumerate(num_minus):
                if side == "right" and kk == jj:
                    continue
                lg, sg, pole = _log_gamma_or_zero(arg - s0)
                if pole:
                    raise UnsupportedParametersError("higher-order pole in residue series")
                log_t += lg
                sign_t *= sg
            vanished = False
            for arg in den_plus:
                lg, sg, pole = _log_gamma_or_zero(arg + s0)
                if pole:
                    vanished = True
                    break
                log_t -= lg
                sign_t *= sg
            if not vanished:
                for arg in den_minus:
                    lg, sg, pole = _log_gamma_or_zero(arg - s0)
                    if pole:
                        vanished = True
                        break
                    log_t -= lg
                    sign_t *= sg
            if vanished:
                term = 0.0
            else:
                log_t -= s0 * lnz
                if side == "right":
                    pass  # -sum of residues with residue sign -(-1)^ell/ell! folds to +
                term = sign_t * math.exp(log_t)
                peak = max(peak, log_t)
            total += term
            scale = abs(total) if total != 0.0 else math.exp(peak - 25) if peak > -math.inf else 1e-300
            if term == 0.0 or abs(term) < 1e-17 * scale:
                tail_small += 1
                if tail_small >= 3 and ell >= 2:
                    break
            else:
                tail_small = 0
        else:
            raise PrecisionError("residue series did not converge within term budget")
    # conditioning estimate: digits lost to cancellation against the peak term
    err = math.exp(peak - 36.0) if peak > -math.inf else 0.0
    return total, err


def _has_integer_separation(values) -> bool:
    vals = list(values)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            diff = vals[i] - vals[j]
            if abs(diff - round(diff)) < 1e-9:
                return True
    return False


def _residue_value(spec: MeijerSpec, z: float, side: str):
    group = spec.b[: spec.m] if side == "left" else spec.a[: spec.n]
    if not _has_integer_separation(group):
        val, err = _residue_series_once(spec, z, side)
        return val, err
    # nudge colliding parameters apart symmetrically and average
    results = []
    for direction in (+1.0, -1.0):
        if side == "left":
            b = tuple(
                bv + direction * _NUDGE * (j + 1) if j < spec.m else bv
                for j, bv in enumerate(spec.b)
            )
            nudged = MeijerSpec(spec.m, spec.n, spec.a, b)
        else:
            a = tuple(
                av + direction * _NUDGE * (h + 1) if h < spec.n else av
                for h, av in enumerate(spec.a)
            )
            nudged = MeijerSpec(spec.m, spec.n, a, spec.b)
        val, err = _residue_series_once(nudged, z, side)
        results.append((val, err))
    # the +-eps evaluations each carry an O(1/eps) part that the average
    # cancels, leaving O(eps^2) truncation plus the individual roundoff
    val = 0.5 * (results[0][0] + results[1][0])
    err = max(results[0][1], results[1][1]) + 100.0 * _NUDGE**2 * abs(val)
    return val, err


def _residue_log(spec: MeijerSpec, z: float, rtol: float):
    kappa = spec.decay_exponent
    if spec.p == spec.q:
        side = "left" if z < 1.0 else "right"
        if abs(z - 1.0) < 1e-12 and kappa <= 0:
            raise UnsupportedParametersError("residue series undefined at z = 1 for p = q")
    elif spec.q > spec.p:
        side = "left"
    else:
        side = "right"
    if side == "left" and spec.m == 0:
        return -math.inf, 1
    if side == "right" and spec.n == 0:
        return -math.inf, 1
    val, err = _residue_value(spec, z, side)
    if val == 0.0:
        return -math.inf, 1
    if err > max(rtol, 1e-8) * abs(val):
        raise PrecisionError(
            "residue series lost too many digits to cancellation",
            partial=val,
            error_estimate=err,
        )
    return math.log(abs(val)), (1 if val >= 0 else -1)


def meijer_g_log(spec: MeijerSpec, z: float, rtol: float = 1e-11, method: str = "auto"):
    """(log|G|, sign) of the Meijer G-function at z > 0.

    method: "auto" picks the contour when the integrand decays exponentially
    along the vertical line and falls back to residue summation for the
    boundary-decay families; "contour"/"residue" force a path.
    """
    if not z > 0.0:
        raise DomainError(f"meijer_g requires z > 0, got {z}")
    if method == "contour":
        return _contour_log(spec, z, rtol)
    if method == "residue":
        return _residue_log(spec, z, rtol)
    if method != "auto":
        raise DomainError(f"unknown method {method!r}")
    if spec.decay_exponent > 0:
        return _contour_log(spec, z, rtol)
    return _residue_log(spec, z, rtol)


def meijer_g(spec: MeijerSpec, z: float, rtol: float = 1e-11, method: str = "auto") -> float:
    """Meijer G value as a float (may overflow to +-inf for extreme parameters;
    use meijer_g_log where the magnitude itself is gamma-sized)."""
    log_g, sign = meijer_g_log(spec, z, rtol=rtol, method=method)
    if log_g == -math.inf:
        return 0.0
    return sign * math.exp(log_g)
