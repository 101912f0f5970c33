from datetime import datetime
from ergoweights.base.history import History
from time import time
import numpy as np

# Relative tolerance used when a measured target is compared to a bound
VERDICT_TOL = 1e-9
# Relative tolerance between independently computed equal quantities
EQUAL_TOL = 1e-12

DEFAULT_S_GRID = (0.5, 0.25, 0.1, 0.01, 1e-3)
DEFAULT_GAMMA_GRID = tuple(round(0.05 * j, 2) for j in range(1, 20))
DEFAULT_ALPHA_GRID = DEFAULT_GAMMA_GRID


class Solver:
    """The base class for objects running a batch of computations.
    Not intended for end-users, but for development only.

    Parameters
    ----------
    verbose : `bool`, default=True
        If `True`, we verbose things, otherwise the solver does not
        print anything (but records information in history anyway)

    n_jobs : `int`, default=1
        Number of threads used by the window scans
    """

    def __init__(self, verbose=True, n_jobs=1):
        self.verbose = verbose
        self.n_jobs = n_jobs
        self.history = History()
        self.time_elapsed = None

    @property
    def n_jobs(self):
        return self._n_jobs

    @n_jobs.setter
    def n_jobs(self, val):
        if int(val) != val or val == 0 or val < -1:
            raise ValueError("``n_jobs`` must be a positive integer or -1")
        self._n_jobs = int(val)

    def _start_run(self):
        # Reset history
        self.history.clear()
        self.time_start = Solver._get_now()
        self._numeric_time_start = time()

        if self.verbose:
            print("Launching " + self.__class__.__name__ + "...")

    def _end_run(self):
        self.time_end = self._get_now()
        t = time()
        self.time_elapsed = t - self._numeric_time_start

        if self.verbose:
            print("Done running " + self.__class__.__name__ + " in "
                  + "%.2e seconds" % self.time_elapsed)

    @staticmethod
    def _get_now():
        return str(datetime.now()).replace(" ", "_").replace(":", "-")

    def get_history(self, key=None):
        """Return history of the solver

        Parameters
        ----------
        key : `str`, default=None
            if None all history is returned as a dict
            if str then history of the required key is given

        Returns
        -------
        output : `dict` or `list`
            if key is None or key is not in history then output is
                dict containing history of all keys
            if key is not None and key is in history, then output is a list
            containing history for the given key
        """
        val = self.history.values.get(key, None)
        if val is None:
            return self.history.values
        else:
            return val


def free_parameter_grid(n_points=64, low=1e-4):
    """Grid used to resolve the free parameters of constant transfers

    Parameters
    ----------
    n_points : `int`, default=64
        Number of points

    low : `float`, default=1e-4
        Smallest grid value

    Returns
    -------
    grid : `np.ndarray`, shape=(n_points,)
        Increasing log-spaced values in [low, 1)
    """
    return np.logspace(np.log10(low), 0., n_points, endpoint=False)


def check_open_unit_grid(grid, name):
    """Validates a sorted grid of values in (0, 1) and returns it as an array
    """
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size == 0:
        raise ValueError("``%s`` must not be empty" % name)
    if np.any(grid <= 0) or np.any(grid >= 1) or not np.all(np.isfinite(grid)):
        raise ValueError("``%s`` values must lie in (0, 1)" % name)
    return grid


def relative_slack(bound, measured):
    """Slack of ``measured <= bound`` scaled by max(1, bound)
    """
    return (bound - measured) / max(1., abs(bound))


def passes(bound, measured, tol=VERDICT_TOL):
    return measured <= bound + tol * max(1., abs(bound))
