"""Independent oracles: exhaustive subset enumeration, dense lambda grids,
the duality between the two subset conditions and a plain decomposition."""
from dataclasses import dataclass
from ergoweights.base.errors import OracleSizeError, ParameterError
from ergoweights.base.sample import OrbitSample
from ergoweights.model.dyadic import IntegerInterval, build_prefix_sums
from ergoweights.model.estimators import window_value
from ergoweights.model.frontiers import sorted_mass_fractions
from ergoweights.model.windows import WindowFamily
import numpy as np

ORACLE_MAX_K = 14
LAMBDA_GRID_SIZE = 10 ** 4


@dataclass
class OracleResult:
    """Exhaustive extremal values of one window

    Parameters
    ----------
    target : `str`
        'cf', 'am', 'amhat' or 'lambda'

    window : `IntegerInterval`
        The window

    t, v : `np.ndarray`
        Mass fractions of every subset (subset frontiers only)

    value : `float`
        Supremum of the lambda ratio (lambda target only)
    """
    target: str
    window: IntegerInterval
    t: np.ndarray = None
    v: np.ndarray = None
    value: float = None

    def extremal_at(self, budgets, rtol=1e-12):
        """Largest v over subsets whose t is within each budget"""
        budgets = np.atleast_1d(np.asarray(budgets, dtype=float))
        out = np.empty(budgets.size)
        for i, b in enumerate(budgets):
            out[i] = self.v[self.t <= b * (1. + rtol)].max()
        return out


def _subset_masks(k):
    return (np.arange(2 ** k)[:, None] >> np.arange(k)) & 1


def brute_force_oracle(sample, window, target, beta=.5, weighted=True):
    """Extremal values of a window by exhaustive enumeration

    Parameters
    ----------
    sample : `OrbitSample`
        The sample

    window : `IntegerInterval`
        Window with at most 14 indices

    target : `str`
        'cf' or 'am' (omega*g-mass against g-mass budget), 'amhat'
        (g-mass against omega*g-mass budget) or 'lambda'

    beta : `float`, default=.5
        Parameter of the lambda target

    weighted : `bool`, default=True
        If `False` g is replaced by 1

    Returns
    -------
    result : `OracleResult`
        Subset points, or the supremum for 'lambda'
    """
    window.check_within(sample.N)
    k = window.length
    if target not in ("cf", "am", "amhat", "lambda"):
        raise ParameterError("``target`` must be one of 'cf', 'am', 'amhat', "
                             "'lambda'")
    if k > ORACLE_MAX_K:
        raise OracleSizeError("the oracle enumerates at most %d indices, got "
                              "%d" % (ORACLE_MAX_K, k))
    omega = np.array(sample.omega[window.start:window.stop])
    g = np.array(sample.g[window.start:window.stop]) if weighted \
        else np.ones(k)
    if target == "lambda":
        return OracleResult(target, window,
                            value=_lambda_grid_sup(omega, g, beta))
    masks = _subset_masks(k)
    g_mass = masks @ g / g.sum()
    wg_mass = masks @ (omega * g) / (omega * g).sum()
    if target == "amhat":
        return OracleResult(target, window, t=wg_mass, v=g_mass)
    return OracleResult(target, window, t=g_mass, v=wg_mass)


def _lambda_grid_sup(omega, g, beta):
    avg = np.sum(omega * g) / np.sum(g)
    top = 2. * omega.max()
    j = np.arange(LAMBDA_GRID_SIZE + 1)
    grid = avg * (top / avg) ** (j / LAMBDA_GRID_SIZE)
    best = 0.
    for chunk in np.array_split(grid, max(1, grid.size // 2048)):
        above = omega[None, :] > chunk[:, None]
        num = (above * (omega * g)[None, :]).sum(axis=1)
        den = ((omega[None, :] > beta * chunk[:, None]) * g[None, :]).sum(1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(den > 0, num / (chunk * den), 0.)
        best = max(best, float(ratio.max()))
    return max(best, _lambda_right_limits(omega, g, beta, avg))


def _lambda_right_limits(omega, g, beta, avg):
    """Right limits of the lambda ratio at its jumps, with sets taken by
    pairwise comparisons of omega entries and no division inside them"""
    wg = omega * g
    best = 0.
    # lambda -> omega_i+: {omega > omega_i} over g-mass of {omega > beta omega_i}
    for i in np.flatnonzero(omega >= avg):
        num = wg[omega > omega[i]].sum()
        den = g[omega > beta * omega[i]].sum()
        if den > 0:
            best = max(best, num / (omega[i] * den))
    # lambda -> (omega_i / beta)+: {beta omega > omega_i} over {omega > omega_i}
    for i in np.flatnonzero(omega >= beta * avg):
        num = wg[beta * omega > omega[i]].sum()
        den = g[omega > omega[i]].sum()
        if den > 0:
            best = max(best, beta * num / (omega[i] * den))
    return float(best)


def _predicate_holds(t, v, alpha, beta):
    """Every greedy prefix with t <= alpha has v <= beta"""
    m = (t <= alpha).sum(axis=1)
    rows = np.flatnonzero(m > 0)
    reached = v[rows, m[rows] - 1]
    return bool(np.all(reached <= beta))


def duality_check(sample, alpha, beta):
    """Evaluates the two sides of the duality between the subset conditions

    P1: for omega with g = 1, on every window, every set A with
    sum_A omega <= alpha sum omega has #A <= beta k.
    P2: for the weight 1 / omega relative to g = omega, on every window,
    every set A with sum_A g <= alpha sum g has
    sum_A g / omega <= beta sum g / omega.

    Both are evaluated on the sorted greedy prefixes, which carry the
    extremal subsets of each budget.

    Parameters
    ----------
    sample : `OrbitSample`
        The sample, its g is ignored

    alpha : `float`
        Budget fraction in (0, 1)

    beta : `float`
        Bound fraction in (0, 1)

    Returns
    -------
    p1, p2 : `bool`
        The two predicates
    """
    if not 0 < alpha < 1 or not 0 < beta < 1:
        raise ParameterError("``alpha`` and ``beta`` must lie in (0, 1)")
    family = WindowFamily()
    plain = build_prefix_sums(sample.with_unit_g())
    dual = build_prefix_sums(OrbitSample(1. / sample.omega, sample.omega))
    p1, p2 = True, True
    for k in family.lengths(sample.N):
        starts = family.starts(sample.N, k)
        if p1:
            t, v = sorted_mass_fractions(plain, starts, k, "amhat")
            p1 = _predicate_holds(t, v, alpha, beta)
        if p2:
            t, v = sorted_mass_fractions(dual, starts, k, "am")
            p2 = _predicate_holds(t, v, alpha, beta)
        if not (p1 or p2):
            break
    return p1, p2


def reference_decomposition(omega, window, threshold):
    """Unweighted decomposition written with plain lists, an oracle for
    ``decompose`` with g = 1

    Returns
    -------
    selected : `list` of `tuple`
        (start, length) of the selected intervals, sorted by start

    residual : `list` of `int`
        Indices outside the selected intervals
    """
    values = [float(x) for x in omega]
    selected, residual = [], []
    stack = [(window.start, window.length)]
    while stack:
        start, length = stack.pop()
        half = (length - 1) // 2 + 1
        for s, n in ((start + half, length - half), (start, half)):
            mean = sum(values[s:s + n]) / n
            if mean > threshold:
                selected.append((s, n))
            elif n >= 2:
                stack.append((s, n))
            else:
                residual.append(s)
    return sorted(selected), sorted(residual)


def oracle_discrepancies(sample, window, beta=.5):
    """Relative gaps between the estimators and the oracles on one window

    Returns
    -------
    gaps : `dict`
        'cf', 'am' and 'amhat': largest relative gap between a breakpoint
        and the exhaustive extremal value at its budget; 'lambda': relative
        gap between the exact supremum and the dense grid supremum
    """
    ps = build_prefix_sums(sample)
    starts = np.array([window.start])
    gaps = {}
    for kind in ("cf", "am", "amhat"):
        t, v = sorted_mass_fractions(ps, starts, window.length, kind)
        exact = brute_force_oracle(sample, window, kind).extremal_at(t[0])
        gaps[kind] = float(np.max(np.abs(exact - v[0]) / v[0]))
    value = float(window_value(ps, "lambda", {"beta": beta}, window)[0])
    oracle = brute_force_oracle(sample, window, "lambda", beta=beta).value
    gaps["lambda"] = abs(value - oracle) / max(abs(value), 1e-300) \
        if value != oracle else 0.
    return gaps
