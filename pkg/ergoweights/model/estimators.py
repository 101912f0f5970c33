"""Best constants and feasibility curves of the weight classes.

Every estimator takes prefix sums, a window family and a mode. In the
'unweighted' mode g is replaced by 1. The supremum over windows is taken by
``scan_windows``.
"""
from dataclasses import dataclass, field
from ergoweights.base.base import DEFAULT_S_GRID, DEFAULT_GAMMA_GRID, \
    DEFAULT_ALPHA_GRID, VERDICT_TOL, check_open_unit_grid
from ergoweights.base.errors import ParameterError, UnsupportedModeError
from ergoweights.model.dyadic import IDENTITY, LOG, left_length, ap_dual, \
    power
from ergoweights.model.frontiers import FrontierCurve, CFCheck, \
    check_cf_parameters, cf_exponent_kernel, cf_ratio_kernel, envelope_at, \
    sorted_mass_fractions
from ergoweights.model.windows import scan_windows, window_matrix
from scipy.special import xlogy
import numpy as np

# Analytic lower bound of every scalar constant
CLASS_FLOORS = {
    "ap": 1., "rh": 1., "exp": 1., "sw": 1., "med": 1., "doubling": 1.,
    "log": 0., "lambda": 0., "cf": 0.,
}

UNWEIGHTED_ONLY = ("exp", "sw", "med")


@dataclass
class ClassConstantReport:
    """Measured best constant (or feasibility curve) of one class

    Parameters
    ----------
    class_id : `str`
        Class identifier, eg. 'ap', 'rh', 'am', 'avg'

    params : `dict`
        Class parameters, the mode and the window family

    value : `float` or `FrontierCurve`
        Best constant, or curve for curve-valued classes

    witness : `IntegerInterval` or `list`
        Window attaining the supremum, one per grid point for curves

    finite : `bool`
        Whether the scalar value is finite

    curve : `dict`, default=None
        Extra per-parameter values, eg. the per-s constants of 'sw'
    """
    class_id: str
    params: dict
    value: object
    witness: object
    finite: bool = True
    curve: dict = field(default=None)

    def __post_init__(self):
        floor = CLASS_FLOORS.get(self.class_id)
        if floor is not None and not isinstance(self.value, FrontierCurve):
            if self.value < floor - VERDICT_TOL * max(1., floor):
                raise AssertionError(
                    "%s constant %r is below its floor %r (witness %r)"
                    % (self.class_id, self.value, floor, self.witness))

    @property
    def is_curve(self):
        return isinstance(self.value, FrontierCurve)

    def to_dict(self):
        out = {"class": self.class_id, "params": self.params}
        if self.is_curve:
            out["curve"] = self.value.to_dict()
            out["witness"] = [w.to_list() for w in self.witness]
        else:
            out["value"] = float(self.value)
            out["witness"] = self.witness.to_list()
        out["finite"] = bool(self.finite)
        if self.curve is not None:
            out["per_parameter"] = self.curve
        return out


def _mode_prefix_sums(ps, weighted, class_id):
    if weighted and class_id in UNWEIGHTED_ONLY and not ps.is_unweighted:
        raise UnsupportedModeError("``%s`` is only defined in the unweighted "
                                   "mode" % class_id)
    return ps if weighted else ps.unweighted()


def _mode(weighted):
    return "weighted" if weighted else "unweighted"


def _check_exponent(val, name):
    if not np.isfinite(val) or val <= 1:
        raise ParameterError("``%s`` must be > 1, got %r" % (name, val))
    return float(val)


def _lambda_kernel(beta):
    def kernel(ps, starts, k):
        W = window_matrix(ps.omega, starts, k)
        G = window_matrix(ps.g, starts, k)
        avg = ps.averages(IDENTITY, starts, k)
        order = np.argsort(W, axis=1, kind="stable")
        S = np.take_along_axis(W, order, axis=1)
        Gs = np.take_along_axis(G, order, axis=1)
        n = S.shape[0]
        zero = np.zeros((n, 1))
        # suffix[:, j] sums the sorted entries j..k-1
        wg_suffix = np.concatenate(
            (np.cumsum((S * Gs)[:, ::-1], axis=1)[:, ::-1], zero), axis=1)
        g_suffix = np.concatenate(
            (np.cumsum(Gs[:, ::-1], axis=1)[:, ::-1], zero), axis=1)
        c = np.concatenate((avg[:, None], S, S / beta), axis=1)
        # for c = S / beta the set {omega > beta * c} is {omega > S} exactly
        beta_c = np.concatenate((beta * avg[:, None], beta * S, S), axis=1)
        below = c <= avg[:, None]
        c = np.where(below, avg[:, None], c)
        beta_c = np.where(below, beta * avg[:, None], beta_c)
        num = np.take_along_axis(wg_suffix, count_le(S, c), axis=1)
        den = np.take_along_axis(g_suffix, count_le(S, beta_c), axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(den > 0, num / (c * den), 0.)
        return ratio.max(axis=1)
    return kernel


def count_le(S, Q):
    """Row-wise number of entries of the sorted rows S that are <= Q

    Parameters
    ----------
    S : `np.ndarray`, shape=(n, k)
        Rows sorted increasingly

    Q : `np.ndarray`, shape=(n, m)
        Queries

    Returns
    -------
    counts : `np.ndarray`, shape=(n, m)
        Integer counts in [0, k]
    """
    n, k = S.shape
    m = Q.shape[1]
    combined = np.concatenate((S, Q), axis=1)
    tag = np.concatenate((np.zeros((n, k), dtype=int),
                          np.ones((n, m), dtype=int)), axis=1)
    # values come before equal queries
    order = np.lexsort((tag, combined), axis=1)
    sorted_tag = np.take_along_axis(tag, order, axis=1)
    seen = np.cumsum(1 - sorted_tag, axis=1)
    rows, cols = np.nonzero(sorted_tag)
    counts = np.empty((n, m), dtype=int)
    counts[rows, order[rows, cols] - k] = seen[rows, cols]
    return counts


def _kernel_for(class_id, params):
    """Window kernel and the transforms it reads"""
    if class_id == "ap":
        p = params["p"]

        def kernel(ps, starts, k):
            return (ps.averages(IDENTITY, starts, k)
                    * ps.averages(ap_dual(p), starts, k) ** (p - 1.))
        return kernel, [IDENTITY, ap_dual(p)], 1

    if class_id == "rh":
        q = params["q"]

        def kernel(ps, starts, k):
            return (ps.averages(power(q), starts, k) ** (1. / q)
                    / ps.averages(IDENTITY, starts, k))
        return kernel, [IDENTITY, power(q)], 1

    if class_id == "exp":
        def kernel(ps, starts, k):
            return (ps.averages(IDENTITY, starts, k)
                    * np.exp(-ps.averages(LOG, starts, k)))
        return kernel, [IDENTITY, LOG], 1

    if class_id == "sw":
        s_grid = params["s_grid"]

        def kernel(ps, starts, k):
            avg = ps.averages(IDENTITY, starts, k)
            return np.stack([avg / ps.averages(power(s), starts, k) ** (1. / s)
                             for s in s_grid], axis=1)
        return kernel, [IDENTITY] + [power(s) for s in s_grid], len(s_grid)

    if class_id == "avg":
        gamma_grid = params["gamma_grid"]

        def kernel(ps, starts, k):
            W = window_matrix(ps.omega, starts, k)
            G = window_matrix(ps.g, starts, k)
            avg = ps.averages(IDENTITY, starts, k)[:, None]
            total = G.sum(axis=1)
            return np.stack([(G * (W <= gamma * avg)).sum(axis=1) / total
                             for gamma in gamma_grid], axis=1)
        return kernel, [IDENTITY], len(gamma_grid)

    if class_id == "lambda":
        return _lambda_kernel(params["beta"]), [IDENTITY], 1

    if class_id == "log":
        def kernel(ps, starts, k):
            W = window_matrix(ps.omega, starts, k)
            G = window_matrix(ps.g, starts, k)
            r = W / ps.averages(IDENTITY, starts, k)[:, None]
            terms = np.where(r > 1., xlogy(r, r), 0.)
            return (terms * G).sum(axis=1) / G.sum(axis=1)
        return kernel, [IDENTITY], 1

    if class_id == "med":
        def kernel(ps, starts, k):
            W = window_matrix(ps.omega, starts, k)
            med = np.sort(W, axis=1)[:, (k + 1) // 2 - 1]
            return ps.averages(IDENTITY, starts, k) / med
        return kernel, [IDENTITY], 1

    if class_id == "doubling":
        role = params["role"]

        def kernel(ps, starts, k):
            sums = ps.g_sums if role == "g" else ps.unweighted().sums(IDENTITY)
            n_left = left_length(k)
            total = sums[starts + k] - sums[starts]
            left = sums[starts + n_left] - sums[starts]
            right = sums[starts + k] - sums[starts + n_left]
            return np.maximum(total / left, total / right)
        return kernel, [IDENTITY], 1

    if class_id in ("am", "amhat"):
        alpha_grid = params["alpha_grid"]

        def kernel(ps, starts, k):
            t, v = sorted_mass_fractions(ps, starts, k, class_id)
            return envelope_at(t, v, alpha_grid)
        return kernel, [], len(alpha_grid)

    if class_id == "cf":
        return cf_exponent_kernel(params["C"]), [], 1

    raise ParameterError("unknown class %r" % class_id)


def _family_for(class_id, family):
    return family.with_k_min(2) if class_id == "doubling" else family


def _scan(class_id, params, ps, family, weighted, n_jobs):
    ps = _mode_prefix_sums(ps, weighted, class_id)
    kernel, transforms, width = _kernel_for(class_id, params)
    ps = ps.with_transforms(transforms)
    family = _family_for(class_id, family)
    return scan_windows(ps, family, kernel, width=width, n_jobs=n_jobs), family


def _params(params, family, weighted):
    out = dict(params)
    for key, val in out.items():
        if isinstance(val, np.ndarray):
            out[key] = val.tolist()
    out["mode"] = _mode(weighted)
    out["windows"] = family.describe()
    return out


def _constant_report(class_id, params, ps, family, weighted, n_jobs):
    result, family = _scan(class_id, params, ps, family, weighted, n_jobs)
    value = float(result.values[0])
    return ClassConstantReport(class_id, _params(params, family, weighted),
                               value, result.witness(0),
                               finite=bool(np.isfinite(value)))


def window_value(ps, class_id, params, window, weighted=True):
    """Value of one window for the class, eg. to re-evaluate a witness

    Parameters
    ----------
    ps : `PrefixSums`
        Prefix sums of the sample

    class_id : `str`
        Class identifier

    params : `dict`
        Class parameters as stored in the report

    window : `IntegerInterval`
        The window

    weighted : `bool`, default=True
        Mode of the report

    Returns
    -------
    value : `np.ndarray`
        Kernel output of the window, one entry per grid point
    """
    window.check_within(ps.N)
    ps = _mode_prefix_sums(ps, weighted, class_id)
    kernel, transforms, width = _kernel_for(class_id, params)
    ps = ps.with_transforms(transforms)
    out = kernel(ps, np.array([window.start]), window.length)
    return np.asarray(out, dtype=float).reshape(width)


def ap_constant(ps, family, p, weighted=True, n_jobs=1):
    """A_p constant: sup of avg(omega) avg(omega^(-1/(p-1)))^(p-1)

    Parameters
    ----------
    ps : `PrefixSums`
        Prefix sums of the sample

    family : `WindowFamily`
        Windows of the supremum

    p : `float`
        Exponent > 1

    weighted : `bool`, default=True
        Averages relative to g if `True`, plain averages otherwise

    n_jobs : `int`, default=1
        Number of threads

    Returns
    -------
    report : `ClassConstantReport`
        The constant and its witness window
    """
    p = _check_exponent(p, "p")
    return _constant_report("ap", {"p": p}, ps, family, weighted, n_jobs)


def rh_constant(ps, family, q, weighted=True, n_jobs=1):
    """Reverse Hölder constant: sup of avg(omega^q)^(1/q) / avg(omega)
    """
    q = _check_exponent(q, "q")
    return _constant_report("rh", {"q": q}, ps, family, weighted, n_jobs)


def exp_constant(ps, family, weighted=False, n_jobs=1):
    """Arithmetic over geometric mean, unweighted only"""
    return _constant_report("exp", {}, ps, family, weighted, n_jobs)


def sw_constant(ps, family, s_grid=DEFAULT_S_GRID, weighted=False, n_jobs=1):
    """Sup over windows and s of avg(omega) / avg(omega^s)^(1/s)

    Parameters
    ----------
    ps : `PrefixSums`
        Prefix sums of the sample

    family : `WindowFamily`
        Windows of the supremum

    s_grid : `list` of `float`
        Sorted values in (0, 1)

    weighted : `bool`, default=False
        Must be `False` unless g is identically 1

    n_jobs : `int`, default=1
        Number of threads

    Returns
    -------
    report : `ClassConstantReport`
        Maximum over the grid, ``report.curve`` holds the per-s constants
    """
    s_grid = check_open_unit_grid(s_grid, "s_grid")
    if np.any(np.diff(s_grid) == 0):
        raise ParameterError("``s_grid`` values must be distinct")
    params = {"s_grid": s_grid}
    result, family = _scan("sw", params, ps, family, weighted, n_jobs)
    best = int(np.argmax(result.values))
    value = float(result.values[best])
    curve = {"s": s_grid.tolist(), "value": result.values.tolist(),
             "witness": [w.to_list() for w in result.witnesses()]}
    return ClassConstantReport("sw", _params(params, family, weighted), value,
                               result.witness(best),
                               finite=bool(np.isfinite(value)), curve=curve)


def _curve_report(class_id, kind, grid, params, ps, family, weighted, n_jobs):
    result, family = _scan(class_id, params, ps, family, weighted, n_jobs)
    curve = FrontierCurve(kind, grid, result.values)
    return ClassConstantReport(class_id, _params(params, family, weighted),
                               curve, result.witnesses(),
                               finite=bool(np.all(np.isfinite(result.values))))


def avg_delta_curve(ps, family, gamma_grid=DEFAULT_GAMMA_GRID, weighted=True,
                    n_jobs=1):
    """delta(gamma): largest g-fraction of a window where omega is at most
    gamma times the window average

    Parameters
    ----------
    ps : `PrefixSums`
        Prefix sums of the sample

    family : `WindowFamily`
        Windows of the supremum

    gamma_grid : `list` of `float`
        Increasing values in (0, 1)

    weighted : `bool`, default=True
        Mode

    n_jobs : `int`, default=1
        Number of threads

    Returns
    -------
    report : `ClassConstantReport`
        Report whose value is the 'avg-delta-curve'
    """
    grid = check_open_unit_grid(gamma_grid, "gamma_grid")
    return _curve_report("avg", "avg-delta-curve", grid, {"gamma_grid": grid},
                         ps, family, weighted, n_jobs)


def am_curve(ps, family, alpha_grid=DEFAULT_ALPHA_GRID, weighted=True,
             n_jobs=1):
    """beta(alpha): largest omega*g-fraction carried by a set of g-fraction
    at most alpha, over windows"""
    grid = check_open_unit_grid(alpha_grid, "alpha_grid")
    return _curve_report("am", "am-curve", grid, {"alpha_grid": grid}, ps,
                         family, weighted, n_jobs)


def amhat_curve(ps, family, alpha_grid=DEFAULT_ALPHA_GRID, weighted=True,
                n_jobs=1):
    """beta(alpha): largest g-fraction carried by a set of omega*g-fraction
    at most alpha, over windows"""
    grid = check_open_unit_grid(alpha_grid, "alpha_grid")
    return _curve_report("amhat", "amhat-curve", grid, {"alpha_grid": grid},
                         ps, family, weighted, n_jobs)


def lambda_constant(ps, family, beta, weighted=True, n_jobs=1):
    """Sup over windows and lambda > avg of
    sum_{omega > lambda} omega g / (lambda sum_{omega > beta lambda} g)

    The ratio only jumps at the window average, at the omega_i and at the
    omega_i / beta, and decreases in between, so it is evaluated at those
    points with strict inequalities (right limits).

    Parameters
    ----------
    ps : `PrefixSums`
        Prefix sums of the sample

    family : `WindowFamily`
        Windows of the supremum

    beta : `float`
        In (0, 1)

    weighted : `bool`, default=True
        Mode

    n_jobs : `int`, default=1
        Number of threads

    Returns
    -------
    report : `ClassConstantReport`
        The constant and its witness
    """
    if not 0 < beta < 1:
        raise ParameterError("``beta`` must lie in (0, 1), got %r" % beta)
    return _constant_report("lambda", {"beta": float(beta)}, ps, family,
                            weighted, n_jobs)


def log_constant(ps, family, weighted=True, n_jobs=1):
    """Sup of the average of r log+ r with r = omega / avg(omega)"""
    return _constant_report("log", {}, ps, family, weighted, n_jobs)


def median(sample, window):
    """Lower median, the ceil(k/2)-th smallest value of the window"""
    window.check_within(sample.N)
    values = np.sort(sample.omega[window.start:window.stop])
    return float(values[(window.length + 1) // 2 - 1])


def med_constant(ps, family, weighted=False, n_jobs=1):
    """Sup of the window mean over the window lower median"""
    return _constant_report("med", {}, ps, family, weighted, n_jobs)


def doubling_constant(ps, family, role="g", n_jobs=1):
    """Sup over windows of length >= 2 and both children of
    sum(h over window) / sum(h over child), h being g or omega

    Parameters
    ----------
    ps : `PrefixSums`
        Prefix sums of the sample

    family : `WindowFamily`
        Windows, lengths below 2 are skipped

    role : `str`, default='g'
        'g' or 'omega'

    n_jobs : `int`, default=1
        Number of threads

    Returns
    -------
    report : `ClassConstantReport`
        The constant and its witness
    """
    if role not in ("g", "omega"):
        raise ParameterError("``role`` must be either 'g' or 'omega'")
    return _constant_report("doubling", {"role": role}, ps, family, True,
                            n_jobs)


def cf_exponent(ps, family, C, weighted=True, n_jobs=1):
    """Largest eps with v <= C t^eps at every cf breakpoint of every window

    Returns
    -------
    report : `ClassConstantReport`
        Value eps*(C), infinite (and not finite) when no breakpoint
        constrains eps, the witness holds the binding window
    """
    check_cf_parameters(C)
    result, family = _scan("cf", {"C": float(C)}, ps, family, weighted, n_jobs)
    value = -float(result.values[0])
    return ClassConstantReport("cf", _params({"C": float(C)}, family,
                                             weighted),
                               value, result.witness(0),
                               finite=bool(np.isfinite(value)))


def cf_check(ps, family, C, eps, weighted=True, n_jobs=1):
    """Checks v <= C t^eps at every cf breakpoint of every window

    Breakpoints suffice: the envelope is piecewise linear and C t^eps is
    concave.

    Parameters
    ----------
    ps : `PrefixSums`
        Prefix sums of the sample

    family : `WindowFamily`
        Windows

    C : `float`
        Constant >= 1

    eps : `float`
        Exponent in (0, 1)

    weighted : `bool`, default=True
        Mode

    n_jobs : `int`, default=1
        Number of threads

    Returns
    -------
    report : `CFCheck`
        Pass flag, worst ratio and where it occurs
    """
    check_cf_parameters(C, eps)
    ps = ps if weighted else ps.unweighted()
    result = scan_windows(ps, family, cf_ratio_kernel(C, eps), n_jobs=n_jobs)
    witness = result.witness(0)
    t, v = sorted_mass_fractions(ps, np.array([witness.start]),
                                 witness.length, "cf")
    i = int(np.argmax(v[0] / (C * t[0] ** eps)))
    worst = float(result.values[0])
    return CFCheck(float(C), float(eps), bool(worst <= 1. + 1e-12), worst,
                   witness, (float(t[0, i]), float(v[0, i])))


def power_mean_curve(ps, window, s_grid=DEFAULT_S_GRID):
    """Power means avg(omega^s)^(1/s) of one window on the s grid, and its
    geometric mean (unweighted)

    Returns
    -------
    means : `np.ndarray`
        One power mean per grid value

    geometric_mean : `float`
        exp(avg(log omega))
    """
    s_grid = check_open_unit_grid(s_grid, "s_grid")
    ps = ps.unweighted().with_transforms([LOG] + [power(s) for s in s_grid])
    starts = np.array([window.start])
    means = np.array([ps.averages(power(s), starts, window.length)[0]
                      ** (1. / s) for s in s_grid])
    return means, float(np.exp(ps.averages(LOG, starts, window.length)[0]))




def curve_values(ps, family, class_id, grid, weighted=True, n_jobs=1):
    """Sup over windows of the 'am', 'amhat' or 'avg' kernel at grid values
    given in any order

    Returns
    -------
    values : `np.ndarray`
        One supremum per grid value
    """
    grid = check_open_unit_grid(grid, "grid")
    key = "gamma_grid" if class_id == "avg" else "alpha_grid"
    if class_id not in ("am", "amhat", "avg"):
        raise ParameterError("``class_id`` must be one of 'am', 'amhat', "
                             "'avg'")
    result, _ = _scan(class_id, {key: grid}, ps, family, weighted, n_jobs)
    return result.values
