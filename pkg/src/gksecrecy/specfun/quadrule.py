"""Gaussian quadrature for the weight e^{-x^2} on the half line [0, inf).

The rule is generated from the exact moments mu_n = Gamma((n+1)/2)/2 through
the Chebyshev moment algorithm (three-term recurrence coefficients) followed
by eigen-decomposition of the Jacobi matrix (Golub-Welsch). The moment
problem is notoriously ill-conditioned in double precision, so the whole
construction runs in 60-digit mpmath arithmetic and only the final nodes and
weights are rounded to float64.

The secrecy evaluator always uses the 15-point rule; the generator takes the
point count as a parameter so the construction itself can be tested at other
orders.
"""

from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np

from ..exceptions import DomainError

__all__ = ["GaussRule15", "gauss_rule_15", "halfline_gauss_rule"]


@dataclass(frozen=True)
class GaussRule15:
    """Nodes and weights of the 15-point rule for int_0^inf e^{-x^2} f(x) dx."""

    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values: np.ndarray) -> float:
        """Weighted sum for integrand values sampled at the nodes."""
        return float(np.dot(self.weights, values))


def _halfline_moments(count: int, ctx):
    # mu_n = int_0^inf e^{-x^2} x^n dx = Gamma((n+1)/2) / 2
    return [ctx.gamma(ctx.mpf(n + 1) / 2) / 2 for n in range(count)]


def _chebyshev_recurrence(moments, npts, ctx):
    """Recurrence coefficients (alpha_k, beta_k) from modified=raw moments."""
    alpha = [ctx.mpf(0)] * npts
    beta = [ctx.mpf(0)] * npts
    sigma_prev = [ctx.mpf(0)] * (2 * npts)
    sigma = list(moments)
    alpha[0] = moments[1] / moments[0]
    beta[0] = moments[0]
    for k in range(1, npts):
        sigma_next = [ctx.mpf(0)] * (2 * npts)
        for l in range(k, 2 * npts - k):
            sigma_next[l] = (
                sigma[l + 1]
                - alpha[k - 1] * sigma[l]
                - beta[k - 1] * sigma_prev[l]
            )
        alpha[k] = sigma_next[k + 1] / sigma_next[k] - sigma[k] / sigma[k - 1]
        beta[k] = sigma_next[k] / sigma[k - 1]
        sigma_prev, sigma = sigma, sigma_next
    return alpha, beta


def halfline_gauss_rule(npts: int):
    """Nodes and weights (float64 arrays) of the npts-point half-line rule."""
    if npts < 1:
        raise DomainError("point count must be >= 1")
    with mp.workdps(60):
        ctx = mp.mp
        moments = _halfline_moments(2 * npts, ctx)
        alpha, beta = _chebyshev_recurrence(moments, npts, ctx)
        jac = mp.zeros(npts)
        for k in range(npts):
            jac[k, k] = alpha[k]
        for k in range(1, npts):
            off = ctx.sqrt(beta[k])
            jac[k, k - 1] = off
            jac[k - 1, k] = off
        eigvals, eigvecs = mp.eigsy(jac)
        nodes = [eigvals[k] for k in range(npts)]
        weights = [beta[0] * eigvecs[0, k] ** 2 for k in range(npts)]
        order = sorted(range(npts), key=lambda k: nodes[k])
        nodes_f = np.array([float(nodes[k]) for k in order])
        weights_f = np.array([float(weights[k]) for k in order])
    if not (np.all(np.diff(nodes_f) > 0) and nodes_f[0] > 0 and np.all(weights_f > 0)):
        raise RuntimeError("half-line rule construction produced an invalid rule")
    return nodes_f, weights_f


@lru_cache(maxsize=None)
def _rule_15():
    nodes, weights = halfline_gauss_rule(15)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return GaussRule15(nodes=nodes, weights=weights)


def gauss_rule_15() -> GaussRule15:
    """The fixed 15-point rule used by the secrecy quadrature formula."""
    return _rule_15()
