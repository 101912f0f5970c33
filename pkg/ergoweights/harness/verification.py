from dataclasses import dataclass, field
from ergoweights.analysis import ClassAnalyzer
from ergoweights.base.base import Solver, DEFAULT_GAMMA_GRID, passes, \
    relative_slack, free_parameter_grid
from ergoweights.base.errors import DependencyError, ParameterError
from ergoweights.base.sample import OrbitSample
from ergoweights.harness.transfers import EDGES, transfer_constants
from ergoweights.model.dyadic import build_prefix_sums
from ergoweights.model.estimators import rh_constant, sw_constant, \
    cf_check, curve_values
from ergoweights.model.windows import WindowFamily
import numpy as np

# Class reports every edge reads its source constants from
EDGE_REQUIREMENTS = {
    "T1": ("avg", "lambda", "doubling_g"), "T2": ("lambda",), "T3": ("rh",),
    "T4": ("cf",), "T5": ("amhat",), "T6": ("am",), "T7": ("rh", "log"),
    "T8": ("log",), "T9": ("ap", "exp"), "T10": ("exp",),
    "T11": ("exp", "sw"), "T12": ("sw", "med"), "T13": ("med",),
    "T14": ("ap",), "T15": ("ap", "doubling_omega"),
}


@dataclass
class EdgeVerdict:
    """Check of one transferred bound against the measured target

    Parameters
    ----------
    edge : `str`
        Edge identifier

    source : `dict`
        Measured source constants

    bound : `dict`
        Transferred target constants

    target : `dict`
        Measured target values

    status : `str`
        'pass', 'fail' or 'infeasible'

    slack : `float`
        (bound - measured) / max(1, bound), smallest over grid points
    """
    edge: str
    source: dict
    bound: dict
    target: dict
    status: str
    slack: float = None
    note: str = ""

    @property
    def passed(self):
        return self.status == "pass"

    @property
    def failed(self):
        return self.status == "fail"

    def to_dict(self):
        return {"edge": self.edge, "status": self.status, "slack": self.slack,
                "source": self.source, "bound": self.bound,
                "target": self.target, "note": self.note}


def _as_list(x):
    return np.asarray(x, dtype=float).tolist()


def _infeasible(edge, source, note="no admissible free parameter"):
    return EdgeVerdict(edge, source, {}, {}, "infeasible", None, note)


def _verdict(edge, source, bound, measured, bound_key="C", target=None,
             note=""):
    """Verdict of measured <= bound[bound_key], pointwise for arrays"""
    limit = np.atleast_1d(np.asarray(bound[bound_key], dtype=float))
    measured_ = np.atleast_1d(np.asarray(measured, dtype=float))
    ok = [passes(b, m) for b, m in zip(limit, measured_)]
    slack = min(relative_slack(b, m) for b, m in zip(limit, measured_))
    if target is None:
        target = {"value": measured if np.ndim(measured) == 0
                  else _as_list(measured)}
    return EdgeVerdict(edge, source, bound, target,
                       "pass" if all(ok) else "fail", float(slack), note)


@dataclass
class _Context:
    sample: OrbitSample
    reports: dict
    family: WindowFamily
    grid: np.ndarray
    n_jobs: int
    ps: object = field(default=None)

    def __post_init__(self):
        self.ps = build_prefix_sums(self.sample)

    def sup(self, class_id, values, weighted=True):
        return curve_values(self.ps, self.family, class_id, values,
                            weighted=weighted, n_jobs=self.n_jobs)


def _t1(ctx):
    lam = ctx.reports["lambda"]
    beta = lam.params["beta"]
    if not ctx.family.closed_under_subintervals:
        return _infeasible("T1", {"gamma": beta}, "window family is not "
                           "closed under sub-intervals")
    avg = ctx.reports["avg"].value
    hit = np.flatnonzero(np.isclose(avg.t, beta, rtol=0, atol=1e-15))
    delta = float(avg.v[hit[0]]) if hit.size \
        else float(ctx.sup("avg", [beta])[0])
    d_g = ctx.reports["doubling_g"].value
    source = {"gamma": beta, "delta": delta, "D_g": d_g}
    rule = transfer_constants("T1", {"gamma": beta, "delta": delta},
                              {"D_g": d_g}, ctx.grid)
    if not rule.feasible:
        return _infeasible("T1", source)
    return _verdict("T1", source, rule.target, lam.value)


def _t2(ctx):
    lam = ctx.reports["lambda"]
    source = {"C": lam.value, "beta": lam.params["beta"]}
    rule = transfer_constants("T2", source, grid=ctx.grid)
    if not rule.feasible:
        return _infeasible("T2", source)
    measured = rh_constant(ctx.ps, ctx.family, rule.target["q"],
                           n_jobs=ctx.n_jobs).value
    return _verdict("T2", source, rule.target, measured)


def _t3(ctx):
    rh = ctx.reports["rh"]
    source = {"C": rh.value, "q": rh.params["q"]}
    rule = transfer_constants("T3", source, grid=ctx.grid)
    if not rule.feasible:
        return _infeasible("T3", source)
    check = cf_check(ctx.ps, ctx.family, rule.target["C"],
                     rule.target["eps"], n_jobs=ctx.n_jobs)
    bound = dict(rule.target, ratio=1.)
    return _verdict("T3", source, bound, check.worst_ratio, "ratio",
                    target=check.to_dict())


def _t4(ctx):
    cf = ctx.reports["cf"]
    C, eps_max = cf.params["C"], cf.value
    eps = ctx.grid[ctx.grid <= eps_max]
    source = {"C": C, "eps_max": eps_max}
    if not eps.size:
        return _infeasible("T4", source, "no grid exponent below the "
                                         "measured frontier")
    source["eps"] = float(eps[-1])
    rule = transfer_constants("T4", {"C": C, "eps": source["eps"]},
                              grid=ctx.grid)
    if not rule.feasible:
        return _infeasible("T4", source)
    measured = ctx.sup("amhat", [rule.target["alpha"]])[0]
    return _verdict("T4", source, rule.target, measured, "beta")


def _t5(ctx):
    amhat = ctx.reports["amhat"].value
    sources, alphas, betas = [], [], []
    for a1, b1 in zip(amhat.t, amhat.v):
        rule = transfer_constants("T5", {"alpha": a1, "beta": b1},
                                  grid=ctx.grid)
        if b1 < 1 and rule.feasible:
            sources.append((float(a1), float(b1)))
            alphas.append(rule.target["alpha"])
            betas.append(rule.target["beta"])
    if not sources:
        return _infeasible("T5", {"alpha": _as_list(amhat.t),
                                  "beta": _as_list(amhat.v)})
    source = {"alpha": [s[0] for s in sources],
              "beta": [s[1] for s in sources]}
    measured = ctx.sup("am", alphas)
    return _verdict("T5", source, {"alpha": alphas, "beta": betas}, measured,
                    "beta")


def _t6(ctx):
    am = ctx.reports["am"].value
    keep = am.v < 1
    if not keep.any():
        return _infeasible("T6", {"alpha": _as_list(am.t),
                                  "beta": _as_list(am.v)})
    source = {"alpha": _as_list(am.t[keep]), "beta": _as_list(am.v[keep])}
    gammas, deltas = [], []
    for a, b in zip(am.t[keep], am.v[keep]):
        target = transfer_constants("T6", {"alpha": a, "beta": b},
                                    grid=ctx.grid).target
        gammas.append(target["gamma"])
        deltas.append(target["delta"])
    measured = ctx.sup("avg", gammas)
    return _verdict("T6", source, {"gamma": gammas, "delta": deltas},
                    measured, "delta")


def _t7(ctx):
    rh = ctx.reports["rh"]
    source = {"C": rh.value, "q": rh.params["q"]}
    rule = transfer_constants("T7", source, grid=ctx.grid)
    if not rule.feasible:
        return _infeasible("T7", source)
    return _verdict("T7", source, rule.target, ctx.reports["log"].value)


def _t8(ctx):
    source = {"C": ctx.reports["log"].value}
    rule = transfer_constants("T8", source, grid=ctx.grid)
    if not rule.feasible:
        return _infeasible("T8", source)
    measured = ctx.sup("am", [rule.target["alpha"]])[0]
    return _verdict("T8", source, rule.target, measured, "beta")


def _t9(ctx):
    ap = ctx.reports["ap"]
    source = {"C": ap.value, "p": ap.params["p"]}
    rule = transfer_constants("T9", source, grid=ctx.grid)
    return _verdict("T9", source, rule.target, ctx.reports["exp"].value)


def _t10(ctx):
    source = {"C": ctx.reports["exp"].value}
    avg = ctx.reports.get("avg")
    gammas = avg.value.t if avg is not None else DEFAULT_GAMMA_GRID
    rule = transfer_constants("T10", source, {"gamma_grid": gammas},
                              ctx.grid)
    bound = rule.target
    active = ~np.asarray(bound["vacuous"])
    if not active.any():
        return EdgeVerdict("T10", source, bound, {}, "pass", None,
                           "every transferred delta is >= 1")
    measured = ctx.sup("avg", np.asarray(bound["gamma"])[active],
                       weighted=False)
    limit = {"gamma": _as_list(np.asarray(bound["gamma"])[active]),
             "delta": _as_list(np.asarray(bound["delta"])[active])}
    return _verdict("T10", source, limit, measured, "delta")


def _t11(ctx):
    source = {"C": ctx.reports["exp"].value}
    rule = transfer_constants("T11", source, grid=ctx.grid)
    return _verdict("T11", source, rule.target, ctx.reports["sw"].value)


def _t12(ctx):
    sw = sw_constant(ctx.ps, ctx.family, ctx.grid, n_jobs=ctx.n_jobs)
    source = {"s": sw.curve["s"], "C": sw.curve["value"]}
    rule = transfer_constants("T12", source, grid=ctx.grid)
    if not rule.feasible:
        return _infeasible("T12", {"C": sw.value})
    return _verdict("T12", {"s": rule.target["s"], "C": sw.value},
                    rule.target, ctx.reports["med"].value)


def _t13(ctx):
    source = {"C": ctx.reports["med"].value}
    rule = transfer_constants("T13", source, grid=ctx.grid)
    if not rule.feasible:
        return _infeasible("T13", source)
    measured = ctx.sup("am", [rule.target["alpha"]], weighted=False)[0]
    return _verdict("T13", source, rule.target, measured, "beta")


def _t14(ctx):
    ap = ctx.reports["ap"]
    p = ap.params["p"]
    q = p / (p - 1.)
    omega = ctx.sample.omega
    dual = build_prefix_sums(OrbitSample(1. / omega, omega))
    rh = rh_constant(dual, ctx.family, q, n_jobs=ctx.n_jobs)
    source = {"C": rh.value, "q": q}
    rule = transfer_constants("T14", source, grid=ctx.grid)
    if not rule.feasible:
        return _infeasible("T14", source)
    return _verdict("T14", source, rule.target, ap.value)


def _t15(ctx):
    ap = ctx.reports["ap"]
    source = {"C": ap.value, "p": ap.params["p"]}
    rule = transfer_constants("T15", source, grid=ctx.grid)
    return _verdict("T15", source, rule.target,
                    ctx.reports["doubling_omega"].value)


_CHECKS = {"T1": _t1, "T2": _t2, "T3": _t3, "T4": _t4, "T5": _t5, "T6": _t6,
           "T7": _t7, "T8": _t8, "T9": _t9, "T10": _t10, "T11": _t11,
           "T12": _t12, "T13": _t13, "T14": _t14, "T15": _t15}


def _resolve_edges(edges):
    if edges == "all":
        return EDGES
    edges = tuple(edges)
    unknown = set(edges) - set(EDGES)
    if unknown:
        raise ParameterError("unknown edge(s) %s" % sorted(unknown))
    return tuple(e for e in EDGES if e in edges)


def required_classes(edges="all"):
    """Class reports needed to verify ``edges``"""
    needed = set()
    for edge in _resolve_edges(edges):
        needed.update(EDGE_REQUIREMENTS[edge])
    return needed


def verify_edges(sample, reports, family=None, edges="all", grid=None,
                 n_jobs=1):
    """Checks every transferred bound against the sample

    Parameters
    ----------
    sample : `OrbitSample`
        The sample the reports were measured on

    reports : `dict`
        Class name -> `ClassConstantReport`, as returned by
        ``ClassAnalyzer.run``

    family : `WindowFamily`, default=None
        Windows the reports were measured on, every window if None

    edges : `list` of `str` or 'all', default='all'
        Edges to verify, in any order, verdicts follow the edge order

    grid : `np.ndarray`, default=None
        Free parameter grid, ``free_parameter_grid()`` if None

    n_jobs : `int`, default=1
        Number of threads of the window scans

    Returns
    -------
    verdicts : `list` of `EdgeVerdict`
        One verdict per edge
    """
    edges = _resolve_edges(edges)
    missing = required_classes(edges) - set(reports)
    if missing:
        raise DependencyError(missing)
    ctx = _Context(sample, reports, WindowFamily() if family is None
                   else family,
                   free_parameter_grid() if grid is None else grid, n_jobs)
    return [_CHECKS[edge](ctx) for edge in edges]


class ImplicationHarness(Solver):
    """Verifies the edges on a batch of samples

    Parameters
    ----------
    edges : `list` of `str` or 'all', default='all'
        Edges to verify

    family : `WindowFamily`, default=None
        Windows, every window if None

    analyzer_params : `dict`, default=None
        Keyword arguments of the `ClassAnalyzer` measuring the sources

    verbose : `bool`, default=True
        If `True`, prints a line per verdict

    n_jobs : `int`, default=1
        Number of threads of the window scans
    """

    def __init__(self, edges="all", family=None, analyzer_params=None,
                 verbose=True, n_jobs=1):
        Solver.__init__(self, verbose=verbose, n_jobs=n_jobs)
        self.edges = _resolve_edges(edges)
        self.family = WindowFamily() if family is None else family
        self.analyzer_params = dict(analyzer_params or {})
        self.history.print_order = ["n_row", "case", "edge", "status",
                                    "slack"]
        self.history.print_style["case"] = "%d"

    def run(self, samples):
        """Verifies every edge on every sample

        Parameters
        ----------
        samples : `list` of `OrbitSample`
            The samples

        Returns
        -------
        verdicts : `list` of `list` of `EdgeVerdict`
            Verdicts of each sample
        """
        self._start_run()
        classes = required_classes(self.edges)
        out = []
        n_row = 0
        for case, sample in enumerate(samples):
            analyzer = ClassAnalyzer(classes=classes, family=self.family,
                                     verbose=False, n_jobs=self.n_jobs,
                                     **self.analyzer_params)
            reports = analyzer.run(sample)
            verdicts = verify_edges(sample, reports, self.family, self.edges,
                                    n_jobs=self.n_jobs)
            for verdict in verdicts:
                self.history.update(n_row=n_row, case=case, edge=verdict.edge,
                                    status=verdict.status,
                                    slack=verdict.slack)
                if self.verbose:
                    self.history.print_history()
                n_row += 1
            out.append(verdicts)
        self._end_run()
        return out
