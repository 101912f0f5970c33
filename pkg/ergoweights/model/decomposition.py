"""Weighted Calderón–Zygmund decomposition of a window on the dyadic grid
generated by ``split_interval``."""
from dataclasses import dataclass, field
from ergoweights.base.base import EQUAL_TOL
from ergoweights.base.errors import ThresholdError
from ergoweights.model.dyadic import IDENTITY, IntegerInterval, \
    split_interval, weighted_average
import numpy as np


@dataclass(frozen=True)
class SelectedInterval:
    """A selected interval, its weighted average of omega and its expansion
    sum(g over parent) / sum(g over interval)"""
    interval: IntegerInterval
    average: float
    expansion: float

    def to_dict(self):
        return {"interval": self.interval.to_list(), "avg": self.average,
                "expansion": self.expansion}


@dataclass(frozen=True)
class CZSelection:
    """Output of ``decompose``

    Parameters
    ----------
    threshold : `float`
        The threshold lambda

    window : `IntegerInterval`
        The decomposed window

    selected : `tuple` of `SelectedInterval`
        Selected intervals sorted by start

    residual : `tuple` of `int`
        Window indices outside every selected interval
    """
    threshold: float
    window: IntegerInterval
    selected: tuple = ()
    residual: tuple = ()

    def to_dict(self):
        return {"lambda": self.threshold, "window": self.window.to_list(),
                "selected": [s.to_dict() for s in self.selected],
                "residual": list(self.residual)}


def decompose(ps, window, threshold):
    """Selects the maximal dyadic sub-intervals of ``window`` whose weighted
    average of omega exceeds ``threshold``

    Children are visited left then right. A child with average above the
    threshold is selected, a child of length >= 2 otherwise is split again
    and a singleton otherwise joins the residual.

    Parameters
    ----------
    ps : `PrefixSums`
        Prefix sums of the sample

    window : `IntegerInterval`
        Window of length >= 2

    threshold : `float`
        Strictly larger than the weighted average of omega over the window

    Returns
    -------
    selection : `CZSelection`
        The selected intervals and the residual indices
    """
    window.check_within(ps.N)
    if window.length < 2:
        raise ThresholdError("the window must hold at least 2 indices")
    ps = ps.with_transforms([IDENTITY])
    window_avg = weighted_average(ps, window)
    if not threshold > window_avg:
        raise ThresholdError("``lambda`` must be > the window average %r, "
                             "got %r" % (window_avg, threshold))
    g_sums = ps.g_sums
    selected, residual = [], []

    def visit(parent):
        parent_g = g_sums[parent.stop] - g_sums[parent.start]
        for child in split_interval(parent):
            avg = weighted_average(ps, child)
            if avg > threshold:
                child_g = g_sums[child.stop] - g_sums[child.start]
                selected.append(SelectedInterval(child, avg,
                                                 float(parent_g / child_g)))
            elif child.length >= 2:
                visit(child)
            else:
                residual.append(child.start)

    visit(window)
    return CZSelection(float(threshold), window, tuple(selected),
                       tuple(residual))


@dataclass
class CheckResult:
    passed: bool = True
    location: object = None
    message: str = ""

    def fail(self, location, message):
        if self.passed:
            self.passed = False
            self.location = location
            self.message = message


@dataclass
class SelectionCheck:
    """Pass/fail of every selection invariant with the first counterexample
    """
    checks: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks.values())

    def failed(self):
        return [name for name, c in self.checks.items() if not c.passed]

    def to_dict(self):
        return {name: {"passed": c.passed, "location": c.location,
                       "message": c.message}
                for name, c in self.checks.items()}


def _direct_average(omega, g, interval):
    idx = slice(interval.start, interval.stop)
    return float(np.sum(omega[idx] * g[idx]) / np.sum(g[idx]))


def _grid_parent(window, interval):
    """Parent of ``interval`` on the dyadic grid of ``window``, None when
    ``interval`` is not on that grid"""
    parent = window
    while parent.length >= 2:
        for child in split_interval(parent):
            if child == interval:
                return parent
        left, right = split_interval(parent)
        parent = left if interval.start < right.start else right
        if not (parent.start <= interval.start
                and interval.stop <= parent.stop):
            return None
    return None


def verify_selection(ps, sel, tol=EQUAL_TOL):
    """Re-checks a selection by direct summation over the sample

    Checks are 'disjoint' (selected intervals disjoint and inside the
    window), 'residual_complement', 'lower_bound' (lambda < average),
    'upper_bound' (average <= expansion * lambda), 'residual_bound'
    (omega_j <= lambda) and 'maximal' (the grid parent has average
    <= lambda and the recorded expansion is its g ratio).

    Parameters
    ----------
    ps : `PrefixSums`
        Prefix sums the selection was produced for

    sel : `CZSelection`
        The selection

    tol : `float`, default=1e-12
        Relative tolerance of the average comparisons

    Returns
    -------
    report : `SelectionCheck`
        One `CheckResult` per invariant
    """
    omega, g = ps.omega, ps.g
    lam, window = sel.threshold, sel.window
    names = ["disjoint", "residual_complement", "lower_bound", "upper_bound",
             "residual_bound", "maximal"]
    report = SelectionCheck({name: CheckResult() for name in names})
    checks = report.checks

    def inside(iv):
        return 0 <= iv.start and iv.stop <= ps.N

    if not inside(window):
        checks["disjoint"].fail(window.to_list(), "window outside the sample")
    covered = np.zeros(ps.N, dtype=int)
    for s in sel.selected:
        iv = s.interval
        if iv.start < window.start or iv.stop > window.stop:
            checks["disjoint"].fail(iv.to_list(), "interval outside window")
        if not inside(iv):
            checks["disjoint"].fail(iv.to_list(), "interval outside the sample")
            continue
        covered[iv.start:iv.stop] += 1
    overlap = np.flatnonzero(covered > 1)
    if overlap.size:
        checks["disjoint"].fail(int(overlap[0]), "index in two intervals")

    expected = [j for j in range(max(window.start, 0), min(window.stop, ps.N))
                if covered[j] == 0]
    if list(sel.residual) != expected:
        bad = sorted(set(sel.residual).symmetric_difference(expected))
        checks["residual_complement"].fail(
            bad[0] if bad else None, "residual differs from uncovered indices")

    for s in sel.selected:
        iv = s.interval
        if not inside(iv):
            continue
        avg = _direct_average(omega, g, iv)
        if not avg > lam * (1. - tol):
            checks["lower_bound"].fail(
                iv.to_list(), "average %r <= lambda %r" % (avg, lam))
        if not avg <= s.expansion * lam * (1. + tol):
            checks["upper_bound"].fail(
                iv.to_list(), "average %r > expansion * lambda %r"
                              % (avg, s.expansion * lam))
        parent = _grid_parent(window, iv)
        if parent is None:
            checks["maximal"].fail(iv.to_list(), "interval not on the grid")
            continue
        if not inside(parent):
            checks["maximal"].fail(iv.to_list(), "parent outside the sample")
            continue
        parent_avg = _direct_average(omega, g, parent)
        ratio = (np.sum(g[parent.start:parent.stop])
                 / np.sum(g[iv.start:iv.stop]))
        if parent != window and parent_avg > lam * (1. + tol):
            checks["maximal"].fail(iv.to_list(), "parent average %r > lambda"
                                   % parent_avg)
        elif abs(ratio - s.expansion) > tol * ratio:
            checks["maximal"].fail(iv.to_list(), "expansion %r != %r"
                                   % (s.expansion, ratio))

    for j in sel.residual:
        if not 0 <= j < ps.N:
            checks["residual_bound"].fail(int(j), "index outside the sample")
        elif omega[j] > lam:
            checks["residual_bound"].fail(
                int(j), "omega_%d = %r > lambda" % (j, omega[j]))
    return report
