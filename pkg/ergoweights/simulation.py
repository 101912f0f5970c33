from dataclasses import dataclass, field
from datetime import datetime
from time import time
from ergoweights.base.errors import SpecValidationError, \
    SingularEvaluationError
from ergoweights.base.sample import OrbitSample
import warnings
import numpy as np

# Rotation angles this close to p/q, q <= NEAR_RATIONAL_MAX_Q, are flagged
NEAR_RATIONAL_TOL = 1e-9
NEAR_RATIONAL_MAX_Q = 64


def near_rational_denominator(alpha, max_q=NEAR_RATIONAL_MAX_Q,
                              tol=NEAR_RATIONAL_TOL):
    """Smallest q <= max_q such that |alpha - p/q| < tol for some integer p

    Parameters
    ----------
    alpha : `float`
        Rotation angle, as a fraction of the circle

    max_q : `int`, default=64
        Largest denominator tested

    tol : `float`, default=1e-9
        Distance under which alpha is considered rational

    Returns
    -------
    q : `int` or None
        The denominator found, None if alpha is not near-rational
    """
    for q in range(1, max_q + 1):
        if abs(alpha - round(alpha * q) / q) < tol:
            return q
    return None


@dataclass(frozen=True, eq=False)
class TransformationSpec:
    """Transformation generating the orbit points in [0, 1)

    Parameters
    ----------
    kind : `str`
        'rotation' (x -> x + alpha mod 1) or 'explicit' (given points)

    alpha : `float`, default=None
        Rotation angle in (0, 1), required for 'rotation'

    points : `tuple` of `float`, default=()
        Orbit points in [0, 1), required for 'explicit'
    """
    kind: str
    alpha: float = None
    points: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind == "rotation":
            if self.alpha is None or not 0 < self.alpha < 1:
                raise SpecValidationError("alpha", "must lie in (0, 1)")
        elif self.kind == "explicit":
            points = tuple(float(x) for x in self.points)
            if not points:
                raise SpecValidationError("points", "must not be empty")
            if any(not 0 <= x < 1 for x in points):
                raise SpecValidationError("points", "must lie in [0, 1)")
            object.__setattr__(self, "points", points)
        else:
            raise SpecValidationError("kind", "must be either 'rotation' or "
                                              "'explicit'")

    @classmethod
    def rotation(cls, alpha):
        return cls("rotation", alpha=float(alpha))

    @classmethod
    def explicit(cls, points):
        return cls("explicit", points=tuple(points))

    @property
    def near_rational_q(self):
        if self.kind != "rotation":
            return None
        return near_rational_denominator(self.alpha)

    def orbit_points(self, x0, n):
        """The first ``n`` orbit points started at ``x0``"""
        if self.kind == "rotation":
            return (x0 + np.arange(n) * self.alpha) % 1.
        if n > len(self.points):
            raise SpecValidationError("points", "holds fewer than %d points"
                                      % n)
        return np.array(self.points[:n])

    def describe(self):
        if self.kind == "rotation":
            return {"kind": "rotation", "alpha": self.alpha}
        return {"kind": "explicit", "points": list(self.points)}


@dataclass(frozen=True, eq=False)
class WeightSpec:
    """Weight function on [0, 1)

    Parameters
    ----------
    kind : `str`
        One of 'constant', 'power', 'piecewise' or 'explicit'

    params : `tuple`
        ``(c,)`` for constant, ``(c0, a)`` for |x - c0|^a, a tuple of
        ``((a, b), value)`` levels for piecewise, the values for explicit
    """
    kind: str
    params: tuple = ()

    def __post_init__(self):
        kind, params = self.kind, tuple(self.params)
        if kind == "constant":
            if len(params) != 1 or not _positive(params[0]):
                raise SpecValidationError("c", "must be finite and > 0")
        elif kind == "power":
            if len(params) != 2:
                raise SpecValidationError("params", "must be (center, "
                                                    "exponent)")
            c0, a = params
            if not np.isfinite(c0):
                raise SpecValidationError("center", "must be finite")
            if not np.isfinite(a) or a <= -1:
                raise SpecValidationError("exponent", "must be > -1")
        elif kind == "piecewise":
            params = tuple(((float(lo), float(hi)), float(val))
                           for (lo, hi), val in params)
            if not params:
                raise SpecValidationError("levels", "must not be empty")
            for (lo, hi), val in params:
                if not 0 <= lo < hi <= 1:
                    raise SpecValidationError(
                        "levels", "sub-interval [%g, %g) is not inside "
                                  "[0, 1)" % (lo, hi))
                if not _positive(val):
                    raise SpecValidationError("levels", "values must be "
                                                        "finite and > 0")
            bounds = sorted(b for b, _ in params)
            for (_, hi), (lo, _) in zip(bounds[:-1], bounds[1:]):
                if lo < hi:
                    raise SpecValidationError("levels", "sub-intervals "
                                                        "overlap")
        elif kind == "explicit":
            params = tuple(float(v) for v in params)
            if not params or not all(_positive(v) for v in params):
                raise SpecValidationError("values", "must be finite and > 0")
        else:
            raise SpecValidationError("kind", "must be one of 'constant', "
                                      "'power', 'piecewise', 'explicit'")
        object.__setattr__(self, "params", params)

    @classmethod
    def constant(cls, c):
        return cls("constant", (float(c),))

    @classmethod
    def power(cls, center, exponent):
        return cls("power", (float(center), float(exponent)))

    @classmethod
    def piecewise(cls, levels):
        return cls("piecewise", tuple(levels))

    @classmethod
    def explicit(cls, values):
        return cls("explicit", tuple(values))

    def evaluate(self, x):
        """Weight values at the orbit points ``x`` (index i is x[i])
        """
        x = np.asarray(x, dtype=float)
        n = x.size
        if self.kind == "constant":
            values = np.full(n, self.params[0])
        elif self.kind == "power":
            c0, a = self.params
            with np.errstate(divide="ignore", invalid="ignore"):
                values = np.abs(x - c0) ** a
        elif self.kind == "piecewise":
            values = np.full(n, np.nan)
            for (lo, hi), val in self.params:
                values[(x >= lo) & (x < hi) & np.isnan(values)] = val
            uncovered = np.flatnonzero(np.isnan(values))
            if uncovered.size:
                i = int(uncovered[0])
                raise SingularEvaluationError(
                    i, "x=%r is not covered by any piecewise level" % x[i])
        else:
            if n > len(self.params):
                raise SpecValidationError("values", "holds fewer than %d "
                                                    "values" % n)
            values = np.array(self.params[:n])
        bad = np.flatnonzero(~np.isfinite(values) | (values <= 0))
        if bad.size:
            i = int(bad[0])
            raise SingularEvaluationError(
                i, "weight evaluates to %r at x=%r" % (values[i], x[i]))
        return values

    def describe(self):
        """Text form accepted by ``parse_weight_spec``"""
        if self.kind == "constant":
            return "constant:%r" % self.params[0]
        if self.kind == "power":
            return "power:%r:%r" % self.params
        if self.kind == "piecewise":
            return "piecewise:" + ",".join("%r-%r=%r" % (lo, hi, val)
                                           for (lo, hi), val in self.params)
        return "explicit:" + ",".join("%r" % v for v in self.params)


def _positive(v):
    return np.isfinite(v) and v > 0


def parse_weight_spec(text):
    """Parse the command-line form of a weight specification

    Accepted forms are ``constant:c``, ``power:c0:a``,
    ``piecewise:lo-hi=v,lo-hi=v,...`` and ``explicit:v1,v2,...``.

    Parameters
    ----------
    text : `str`
        The specification

    Returns
    -------
    spec : `WeightSpec`
        The parsed specification
    """
    kind, _, rest = text.strip().partition(":")
    try:
        if kind == "constant":
            return WeightSpec.constant(float(rest))
        if kind == "power":
            c0, a = rest.split(":")
            return WeightSpec.power(float(c0), float(a))
        if kind == "piecewise":
            levels = []
            for item in rest.split(","):
                bounds, val = item.split("=")
                lo, hi = bounds.split("-")
                levels.append(((float(lo), float(hi)), float(val)))
            return WeightSpec.piecewise(levels)
        if kind == "explicit":
            return WeightSpec.explicit([float(v) for v in rest.split(",")])
    except SpecValidationError:
        raise
    except ValueError:
        raise SpecValidationError(kind or "spec", "cannot parse %r" % text)
    raise SpecValidationError("kind", "unknown weight kind %r" % kind)


def sample_orbit(transform, omega_spec, g_spec, x0, N):
    """Sample omega and g along the orbit of ``x0``

    Parameters
    ----------
    transform : `TransformationSpec`
        Transformation generating the orbit points

    omega_spec : `WeightSpec`
        The weight

    g_spec : `WeightSpec`
        The reference weight

    x0 : `float`
        Starting point in [0, 1)

    N : `int`
        Number of orbit points

    Returns
    -------
    sample : `OrbitSample`
        ``omega[i] = omega(x_i)``, ``g[i] = g(x_i)``
    """
    if int(N) != N or N < 1:
        raise SpecValidationError("N", "must be a positive integer")
    if not 0 <= x0 < 1:
        raise SpecValidationError("x0", "must lie in [0, 1)")
    N = int(N)
    meta = {"transform": transform.describe(),
            "omega_spec": omega_spec.describe(),
            "g_spec": g_spec.describe(), "x0": float(x0), "N": N}
    q = transform.near_rational_q
    if q is not None:
        warnings.warn("rotation angle %r is within %g of a rational with "
                      "denominator %d, the orbit is near-periodic"
                      % (transform.alpha, NEAR_RATIONAL_TOL, q))
        meta["near_rational_q"] = q
    x = transform.orbit_points(x0, N)
    return OrbitSample(omega_spec.evaluate(x), g_spec.evaluate(x), meta)


def simulation_method(simulate_method):
    """A decorator for simulation methods.
    It simply calls _start_simulation and _end_simulation methods
    """

    def decorated_simulate_method(self):
        self._start_simulation()
        result = simulate_method(self)
        self._end_simulation()
        self.data = result
        return result

    return decorated_simulate_method


class Simulation:
    """This is an abstract simulation class
    It does nothing besides seeding and verbosing
    """

    def __init__(self, seed=None, verbose=True):
        self.seed = seed
        self.verbose = verbose
        self.rng = np.random.default_rng(seed)
        self.data = None

    @staticmethod
    def _get_now():
        return str(datetime.now()).replace(" ", "_").replace(":", "-")

    def _start_simulation(self):
        self.time_start = Simulation._get_now()
        self._numeric_time_start = time()
        if self.verbose:
            msg = "Launching simulation using {class_}..." \
                .format(class_=self.__class__.__name__)
            print("-" * len(msg))
            print(msg)

    def _end_simulation(self):
        self.time_end = self._get_now()
        t = time()
        self.time_elapsed = t - self._numeric_time_start
        if self.verbose:
            msg = "Done simulating using {class_} in {time:.2e} seconds." \
                .format(class_=self.__class__.__name__,
                        time=self.time_elapsed)
            print(msg)


class SimuLogNormalWeights(Simulation):
    """Random samples with log-normal omega and, optionally, log-normal g.
    Each call to ``simulate`` draws a new case from the same generator.

    Parameters
    ----------
    verbose : `bool`, default=False
        Verbose mode to detail or not ongoing tasks

    seed : `int`, default=None
        The seed of the random number generator, for reproducible
        simulation. If `None` it is not seeded

    n_range : `tuple` of `int`, default=(2, 64)
        Sample lengths are drawn uniformly in this closed range

    log_sd_range : `tuple` of `float`, default=(0.1, 2.)
        Standard deviations of log(omega) and log(g) are drawn uniformly in
        this range

    weighted_g : `bool`, default=False
        If `True` g is log-normal, otherwise g is identically 1

    log_bound : `float`, default=None
        If given, log(omega) is clipped to [-log_bound, log_bound]
    """

    def __init__(self, verbose: bool = False, seed: int = None,
                 n_range: tuple = (2, 64), log_sd_range: tuple = (.1, 2.),
                 weighted_g: bool = False, log_bound: float = None):
        Simulation.__init__(self, seed=seed, verbose=verbose)
        self.n_range = n_range
        self.log_sd_range = log_sd_range
        self.weighted_g = weighted_g
        self.log_bound = log_bound

    @property
    def n_range(self):
        return self._n_range

    @n_range.setter
    def n_range(self, val):
        lo, hi = val
        if lo < 1 or hi < lo:
            raise ValueError("``n_range`` must satisfy 1 <= low <= high")
        self._n_range = (int(lo), int(hi))

    @property
    def log_sd_range(self):
        return self._log_sd_range

    @log_sd_range.setter
    def log_sd_range(self, val):
        lo, hi = val
        if lo < 0 or hi < lo:
            raise ValueError("``log_sd_range`` must satisfy 0 <= low <= high")
        self._log_sd_range = (float(lo), float(hi))

    @simulation_method
    def simulate(self):
        """Draws one random sample

        Returns
        -------
        sample : `OrbitSample`
            The simulated sample, its meta records the seed and the case
            parameters
        """
        rng = self.rng
        n = int(rng.integers(self.n_range[0], self.n_range[1] + 1))
        sd = float(rng.uniform(*self.log_sd_range))
        log_omega = sd * rng.standard_normal(n)
        if self.log_bound is not None:
            log_omega = np.clip(log_omega, -self.log_bound, self.log_bound)
        omega = np.exp(log_omega)
        meta = {"generator": self.__class__.__name__, "seed": self.seed,
                "N": n, "log_sd": sd}
        if self.weighted_g:
            g_sd = float(rng.uniform(*self.log_sd_range))
            g = np.exp(g_sd * rng.standard_normal(n))
            meta["g_log_sd"] = g_sd
        else:
            g = np.ones(n)
        return OrbitSample(omega, g, meta)
