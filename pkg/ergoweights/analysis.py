from time import time
from ergoweights.base.base import Solver, DEFAULT_S_GRID, \
    DEFAULT_GAMMA_GRID, DEFAULT_ALPHA_GRID
from ergoweights.model.dyadic import build_prefix_sums
from ergoweights.model.estimators import ap_constant, rh_constant, \
    exp_constant, sw_constant, avg_delta_curve, am_curve, amhat_curve, \
    lambda_constant, log_constant, med_constant, doubling_constant, \
    cf_exponent
from ergoweights.model.windows import WindowFamily
import numpy as np

ALL_CLASSES = ("ap", "rh", "exp", "sw", "avg", "lambda", "cf", "am", "amhat",
               "log", "med", "doubling_g", "doubling_omega")

# Classes measured without g, whatever the sample
UNWEIGHTED_CLASSES = ("ap", "exp", "sw", "med")


class ClassAnalyzer(Solver):
    """Measures the best constants of a list of weight classes on a sample

    Parameters
    ----------
    classes : `list` of `str` or 'all', default='all'
        Classes to measure, among 'ap', 'rh', 'exp', 'sw', 'avg', 'lambda',
        'cf', 'am', 'amhat', 'log', 'med', 'doubling_g', 'doubling_omega'

    family : `WindowFamily`, default=None
        Windows of the suprema, every window if None

    p : `float`, default=2.
        Exponent of the A_p class

    q : `float`, default=2.
        Exponent of the reverse Hölder class

    beta : `float`, default=.5
        Parameter of the lambda class

    cf_C : `float`, default=2.
        Constant at which the CF exponent frontier is measured

    s_grid : `list` of `float`, default=(.5, .25, .1, .01, 1e-3)
        Grid of the SW class

    gamma_grid : `list` of `float`, default=(.05, ..., .95)
        Grid of the A^avg curve

    alpha_grid : `list` of `float`, default=(.05, ..., .95)
        Grid of the A^M and Â^M curves

    verbose : `bool`, default=True
        If `True`, prints a line per measured class

    n_jobs : `int`, default=1
        Number of threads of the window scans
    """

    def __init__(self, classes="all", family=None, p=2., q=2., beta=.5,
                 cf_C=2., s_grid=DEFAULT_S_GRID, gamma_grid=DEFAULT_GAMMA_GRID,
                 alpha_grid=DEFAULT_ALPHA_GRID, verbose=True, n_jobs=1):
        Solver.__init__(self, verbose=verbose, n_jobs=n_jobs)
        self.classes = classes
        self.family = WindowFamily() if family is None else family
        self.p = p
        self.q = q
        self.beta = beta
        self.cf_C = cf_C
        self.s_grid = s_grid
        self.gamma_grid = gamma_grid
        self.alpha_grid = alpha_grid
        self.history.print_order = ["n_row", "name", "value", "time"]
        self.reports = None

    @property
    def classes(self):
        return self._classes

    @classes.setter
    def classes(self, val):
        if val == "all":
            val = ALL_CLASSES
        val = tuple(val)
        unknown = set(val) - set(ALL_CLASSES)
        if unknown:
            raise ValueError("``classes`` must be 'all' or a list in %s, got "
                             "%s" % (list(ALL_CLASSES), sorted(unknown)))
        # measured in a fixed order
        self._classes = tuple(c for c in ALL_CLASSES if c in val)

    def _measure(self, name, ps):
        family, n_jobs = self.family, self.n_jobs
        if name == "ap":
            return ap_constant(ps, family, self.p, weighted=False,
                               n_jobs=n_jobs)
        if name == "rh":
            return rh_constant(ps, family, self.q, n_jobs=n_jobs)
        if name == "exp":
            return exp_constant(ps, family, n_jobs=n_jobs)
        if name == "sw":
            return sw_constant(ps, family, self.s_grid, n_jobs=n_jobs)
        if name == "avg":
            return avg_delta_curve(ps, family, self.gamma_grid, n_jobs=n_jobs)
        if name == "lambda":
            return lambda_constant(ps, family, self.beta, n_jobs=n_jobs)
        if name == "cf":
            return cf_exponent(ps, family, self.cf_C, n_jobs=n_jobs)
        if name == "am":
            return am_curve(ps, family, self.alpha_grid, n_jobs=n_jobs)
        if name == "amhat":
            return amhat_curve(ps, family, self.alpha_grid, n_jobs=n_jobs)
        if name == "log":
            return log_constant(ps, family, n_jobs=n_jobs)
        if name == "med":
            return med_constant(ps, family, n_jobs=n_jobs)
        if name == "doubling_g":
            return doubling_constant(ps, family, "g", n_jobs=n_jobs)
        return doubling_constant(ps, family, "omega", n_jobs=n_jobs)

    def run(self, sample):
        """Measures every configured class

        Parameters
        ----------
        sample : `OrbitSample`
            The sample

        Returns
        -------
        reports : `dict`
            Class name -> `ClassConstantReport`, in a fixed order
        """
        self._start_run()
        ps = build_prefix_sums(sample)
        reports = {}
        for i, name in enumerate(self.classes):
            t_start = time()
            report = self._measure(name, ps)
            reports[name] = report
            if report.is_curve:
                value = float(np.max(report.value.v))
            else:
                value = report.value
            self.history.update(n_row=i, name=name, value=value,
                                time=time() - t_start)
            if self.verbose:
                self.history.print_history()
        self.reports = reports
        self._end_run()
        return reports
