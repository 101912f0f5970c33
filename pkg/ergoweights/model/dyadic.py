from dataclasses import dataclass
from ergoweights.base.errors import CannotSplitError, ParameterError
import numpy as np


@dataclass(frozen=True, order=True)
class IntegerInterval:
    """The consecutive integers {start, ..., start + length - 1}

    Parameters
    ----------
    start : `int`
        First index, >= 0

    length : `int`
        Number of indices, >= 1
    """
    start: int
    length: int

    def __post_init__(self):
        if int(self.start) != self.start or self.start < 0:
            raise ValueError("``start`` must be a nonnegative integer")
        if int(self.length) != self.length or self.length < 1:
            raise ValueError("``length`` must be a positive integer")
        object.__setattr__(self, "start", int(self.start))
        object.__setattr__(self, "length", int(self.length))

    @property
    def stop(self):
        return self.start + self.length

    def indices(self):
        return np.arange(self.start, self.stop)

    def check_within(self, n):
        if self.stop > n:
            raise ValueError("interval [%d, %d) exceeds the sample length %d"
                             % (self.start, self.stop, n))
        return self

    def to_list(self):
        return [self.start, self.length]


def left_length(k):
    """Length of the left child of an interval of length ``k``"""
    return (k - 1) // 2 + 1


def split_interval(interval):
    """Left and right children of an interval

    The left child holds the first floor((k - 1) / 2) + 1 indices.

    Parameters
    ----------
    interval : `IntegerInterval`
        Interval of length >= 2

    Returns
    -------
    left, right : `IntegerInterval`
        The children, left precedes right
    """
    k = interval.length
    if k < 2:
        raise CannotSplitError("an interval of length 1 cannot be split")
    n_left = left_length(k)
    return (IntegerInterval(interval.start, n_left),
            IntegerInterval(interval.start + n_left, k - n_left))


def max_split_ratio(n_max):
    """Largest of len(I) / len(child) over both children and lengths
    2..n_max

    Returns
    -------
    ratio : `float`
        The maximal ratio

    k : `int`
        First length attaining it
    """
    k = np.arange(2, n_max + 1)
    n_left = left_length(k)
    ratios = np.maximum(k / n_left, k / (k - n_left))
    i = int(np.argmax(ratios))
    return float(ratios[i]), int(k[i])


@dataclass(frozen=True)
class Transform:
    """Map applied to omega before weighted averaging

    Parameters
    ----------
    kind : `str`
        'identity', 'power' (x^param), 'ap_dual' (x^(-1/(param - 1)))
        or 'log'

    param : `float`, default=None
        Exponent for 'power', p for 'ap_dual'
    """
    kind: str
    param: float = None

    def __post_init__(self):
        if self.kind not in ("identity", "power", "ap_dual", "log"):
            raise ParameterError("unknown transform %r" % self.kind)
        if self.kind in ("power", "ap_dual"):
            if self.param is None or not np.isfinite(self.param):
                raise ParameterError("transform %r needs a finite parameter"
                                     % self.kind)
            object.__setattr__(self, "param", float(self.param))
        if self.kind == "ap_dual" and self.param <= 1:
            raise ParameterError("``p`` must be > 1, got %r" % self.param)

    def __call__(self, x):
        if self.kind == "identity":
            return x
        if self.kind == "power":
            return x ** self.param
        if self.kind == "ap_dual":
            return x ** (-1. / (self.param - 1.))
        return np.log(x)


IDENTITY = Transform("identity")
LOG = Transform("log")


def power(q):
    return Transform("power", q)


def ap_dual(p):
    return Transform("ap_dual", p)


def pairwise_prefix_sum(terms):
    """Prefix sums by a doubling tree scan

    Every prefix is the sum of at most ceil(log2 n) + 1 partial sums, each
    of them a balanced tree sum, so rounding error grows like log n instead
    of n.

    Parameters
    ----------
    terms : `np.ndarray`, shape=(n,)
        The terms

    Returns
    -------
    sums : `np.ndarray`, shape=(n + 1,)
        ``sums[j]`` is the sum of the first j terms, ``sums[0] = 0``
    """
    out = np.array(terms, dtype=float)
    n = out.size
    shift = 1
    while shift < n:
        out[shift:] = out[shift:] + out[:-shift]
        shift *= 2
    return np.concatenate(([0.], out))


class PrefixSums:
    """Cumulative sums of transform(omega) * g for registered transforms and
    of g alone. Instances are never mutated after construction.

    Parameters
    ----------
    omega : `np.ndarray`, shape=(N,)
        The weight values

    g : `np.ndarray`, shape=(N,)
        The reference weight values

    transforms : `list` of `Transform`
        Transforms to register
    """

    def __init__(self, omega, g, transforms=()):
        self.omega = omega
        self.g = g
        self.g_sums = pairwise_prefix_sum(g)
        self._sums = {}
        for transform in transforms:
            self._sums[transform] = pairwise_prefix_sum(transform(omega) * g)
        self._unweighted = None

    @property
    def N(self):
        return self.omega.size

    @property
    def transforms(self):
        return tuple(self._sums)

    @property
    def is_unweighted(self):
        return bool(np.all(self.g == 1.))

    def sums(self, transform):
        try:
            return self._sums[transform]
        except KeyError:
            raise ParameterError("transform %r is not registered" % (transform,))

    def with_transforms(self, transforms):
        """Copy of these prefix sums with ``transforms`` registered as well
        """
        missing = [t for t in transforms if t not in self._sums]
        if not missing:
            return self
        out = PrefixSums.__new__(PrefixSums)
        out.omega, out.g, out.g_sums = self.omega, self.g, self.g_sums
        out._sums = dict(self._sums)
        for transform in missing:
            out._sums[transform] = pairwise_prefix_sum(
                transform(self.omega) * self.g)
        out._unweighted = None
        return out

    def unweighted(self):
        """The same prefix sums with g identically 1"""
        if self.is_unweighted:
            return self
        if self._unweighted is None:
            self._unweighted = PrefixSums(self.omega, np.ones(self.N),
                                          self.transforms)
        return self._unweighted

    def window_sums(self, transform, starts, length):
        """Sums of transform(omega) * g over the windows of ``length``
        starting at ``starts`` (``transform=None`` sums g)"""
        sums = self.g_sums if transform is None else self.sums(transform)
        return sums[starts + length] - sums[starts]

    def averages(self, transform, starts, length):
        """Weighted averages over the windows of ``length`` at ``starts``
        """
        return (self.window_sums(transform, starts, length)
                / self.window_sums(None, starts, length))


def build_prefix_sums(sample, transforms=()):
    """Prefix sums of a sample for the given transforms

    Parameters
    ----------
    sample : `OrbitSample`
        The sample

    transforms : `list` of `Transform`, default=()
        Transforms to register, the g prefixes are always built

    Returns
    -------
    ps : `PrefixSums`
        The prefix sums
    """
    return PrefixSums(sample.omega, sample.g, transforms)


def weighted_average(ps, interval, transform=IDENTITY):
    """Average of transform(omega) over ``interval`` relative to g

    Parameters
    ----------
    ps : `PrefixSums`
        Prefix sums with ``transform`` registered

    interval : `IntegerInterval`
        Window inside the sample

    transform : `Transform`, default=IDENTITY
        The registered transform

    Returns
    -------
    output : `float`
        sum(transform(omega_i) g_i) / sum(g_i) over the interval
    """
    interval.check_within(ps.N)
    sums = ps.sums(transform)
    g_sums = ps.g_sums
    return float((sums[interval.stop] - sums[interval.start])
                 / (g_sums[interval.stop] - g_sums[interval.start]))
