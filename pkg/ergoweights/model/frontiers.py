"""Subset envelopes of a window.

For a budget on one mass, the subsets maximizing the other mass are the
sorted prefixes (a knapsack whose value/weight ratios are the omega_i), so
the envelope of every subset point is the chord through the sorted prefix
breakpoints.
"""
from dataclasses import dataclass
from ergoweights.base.base import EQUAL_TOL
from ergoweights.base.errors import ParameterError
from ergoweights.model.dyadic import IntegerInterval
from ergoweights.model.windows import window_matrix
import numpy as np

KIND_COLUMNS = {
    "cf-frontier": ("t", "v"),
    "amhat-frontier": ("t", "v"),
    "am-curve": ("alpha", "beta"),
    "amhat-curve": ("alpha", "beta"),
    "avg-delta-curve": ("gamma", "delta"),
}


@dataclass(frozen=True, eq=False)
class FrontierCurve:
    """Breakpoints of a nondecreasing curve through the implicit origin

    Parameters
    ----------
    kind : `str`
        One of 'cf-frontier', 'amhat-frontier', 'am-curve', 'amhat-curve',
        'avg-delta-curve'

    t : `np.ndarray`
        Strictly increasing abscissas in [0, 1]

    v : `np.ndarray`
        Nondecreasing ordinates in [0, 1]
    """
    kind: str
    t: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        if self.kind not in KIND_COLUMNS:
            raise ParameterError("unknown curve kind %r" % self.kind)
        t = np.array(self.t, dtype=float)
        v = np.array(self.v, dtype=float)
        if t.shape != v.shape or t.ndim != 1:
            raise ValueError("``t`` and ``v`` must be 1d of equal length")
        if np.any(np.diff(t) <= 0):
            raise ValueError("``t`` must be strictly increasing")
        if np.any(np.diff(v) < -EQUAL_TOL):
            raise ValueError("``v`` must be nondecreasing")
        t.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "v", v)

    @property
    def columns(self):
        return KIND_COLUMNS[self.kind]

    def evaluate(self, x):
        """Piecewise-linear interpolation, the origin included"""
        return np.interp(x, np.concatenate(([0.], self.t)),
                         np.concatenate(([0.], self.v)))

    def to_dict(self):
        a, b = self.columns
        return {"kind": self.kind, a: self.t.tolist(), b: self.v.tolist()}


def sorted_mass_fractions(ps, starts, k, kind):
    """Breakpoints of the window envelopes, one row per window

    Parameters
    ----------
    ps : `PrefixSums`
        Prefix sums of the sample

    starts : `np.ndarray`
        Window starts

    k : `int`
        Window length

    kind : `str`
        'cf' or 'am' (omega descending, t is the g-mass fraction, v the
        omega*g-mass fraction), or 'amhat' (omega ascending, t is the
        omega*g-mass fraction, v the g-mass fraction)

    Returns
    -------
    t, v : `np.ndarray`, shape=(len(starts), k)
        Cumulative mass fractions, last column exactly 1
    """
    W = window_matrix(ps.omega, starts, k)
    G = window_matrix(ps.g, starts, k)
    if kind in ("cf", "am"):
        order = np.argsort(-W, axis=1, kind="stable")
    elif kind == "amhat":
        order = np.argsort(W, axis=1, kind="stable")
    else:
        raise ParameterError("``kind`` must be one of 'cf', 'am', 'amhat'")
    Ws = np.take_along_axis(W, order, axis=1)
    Gs = np.take_along_axis(G, order, axis=1)
    g_mass = np.cumsum(Gs, axis=1)
    wg_mass = np.cumsum(Ws * Gs, axis=1)
    g_mass /= g_mass[:, -1:]
    wg_mass /= wg_mass[:, -1:]
    if kind == "amhat":
        return wg_mass, g_mass
    return g_mass, wg_mass


def envelope_at(t, v, x):
    """Evaluates every row envelope (origin included) at the abscissas x

    Parameters
    ----------
    t, v : `np.ndarray`, shape=(n, k)
        Breakpoints, t increasing along rows with last column 1

    x : `np.ndarray`, shape=(m,)
        Abscissas in (0, 1]

    Returns
    -------
    out : `np.ndarray`, shape=(n, m)
        Envelope values
    """
    n = t.shape[0]
    T = np.concatenate((np.zeros((n, 1)), t), axis=1)
    V = np.concatenate((np.zeros((n, 1)), v), axis=1)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((n, x.size))
    rows = np.arange(n)
    for i, a in enumerate(x):
        j = np.clip((T < a).sum(axis=1), 1, T.shape[1] - 1)
        t0, t1 = T[rows, j - 1], T[rows, j]
        v0, v1 = V[rows, j - 1], V[rows, j]
        val = v0 + (a - t0) * (v1 - v0) / (t1 - t0)
        out[:, i] = np.where(a == t1, v1, np.minimum(val, v1))
    return out


def frontier_curve(ps, kind, window):
    """Envelope of the subset points of one window

    Parameters
    ----------
    ps : `PrefixSums`
        Prefix sums of the sample

    kind : `str`
        'cf', 'am' or 'amhat'

    window : `IntegerInterval`
        The window

    Returns
    -------
    curve : `FrontierCurve`
        Breakpoints m = 1..k of the envelope
    """
    window.check_within(ps.N)
    t, v = sorted_mass_fractions(ps, np.array([window.start]), window.length,
                                 kind)
    return FrontierCurve("amhat-frontier" if kind == "amhat"
                         else "cf-frontier", t[0], v[0])


@dataclass
class CFCheck:
    """Result of a check of v <= C t^eps at every cf breakpoint

    Parameters
    ----------
    passed : `bool`
        Whether every breakpoint satisfies the inequality

    worst_ratio : `float`
        Largest v / (C t^eps) over windows and breakpoints

    witness : `IntegerInterval`
        Window holding the worst breakpoint

    breakpoint : `tuple`
        The worst breakpoint (t, v)
    """
    C: float
    eps: float
    passed: bool
    worst_ratio: float
    witness: IntegerInterval
    breakpoint: tuple

    def to_dict(self):
        return {"C": self.C, "eps": self.eps, "passed": self.passed,
                "worst_ratio": self.worst_ratio,
                "witness": self.witness.to_list(),
                "breakpoint": list(self.breakpoint)}


def cf_ratio_kernel(C, eps):
    def kernel(ps, starts, k):
        t, v = sorted_mass_fractions(ps, starts, k, "cf")
        return (v / (C * t ** eps)).max(axis=1)
    return kernel


def cf_exponent_kernel(C):
    """Minus the largest feasible eps of each window"""
    log_c = np.log(C)

    def kernel(ps, starts, k):
        t, v = sorted_mass_fractions(ps, starts, k, "cf")
        inside = t < 1.
        with np.errstate(divide="ignore", invalid="ignore"):
            eps = np.where(inside, (log_c - np.log(v)) / -np.log(t), np.inf)
        return -eps.min(axis=1)
    return kernel


def check_cf_parameters(C, eps=None):
    if not np.isfinite(C) or C < 1. - EQUAL_TOL:
        raise ParameterError("``C`` must be >= 1, got %r" % C)
    if eps is not None and not 0 < eps < 1:
        raise ParameterError("``eps`` must lie in (0, 1), got %r" % eps)
