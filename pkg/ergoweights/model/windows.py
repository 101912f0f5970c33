from dataclasses import dataclass
from ergoweights.base.errors import ParameterError
from ergoweights.model.dyadic import IntegerInterval
from joblib import Parallel, delayed
from numpy.lib.stride_tricks import sliding_window_view
import numpy as np


@dataclass(frozen=True)
class WindowFamily:
    """Family of windows a supremum runs over

    Parameters
    ----------
    mode : `str`, default='all'
        'all' for every window {j, ..., j + k - 1} inside the sample,
        'anchored' for windows starting at 0 only

    k_min : `int`, default=1
        Smallest window length

    k_max : `int`, default=None
        Largest window length, the sample length if None
    """
    mode: str = "all"
    k_min: int = 1
    k_max: int = None

    def __post_init__(self):
        if self.mode not in ("all", "anchored"):
            raise ParameterError("``mode`` must be either 'all' or "
                                 "'anchored'")
        if int(self.k_min) != self.k_min or self.k_min < 1:
            raise ParameterError("``k_min`` must be a positive integer")
        if self.k_max is not None and (int(self.k_max) != self.k_max
                                       or self.k_max < self.k_min):
            raise ParameterError("``k_max`` must be an integer >= ``k_min``")

    @property
    def closed_under_subintervals(self):
        """Every sub-interval of a window is itself a window"""
        return self.mode == "all" and self.k_min == 1

    def with_k_min(self, k_min):
        k_max = self.k_max
        if k_max is not None:
            k_max = max(k_max, k_min)
        return WindowFamily(self.mode, max(self.k_min, k_min), k_max)

    def lengths(self, n):
        k_max = n if self.k_max is None else self.k_max
        if k_max > n:
            raise ParameterError("``k_max`` = %d exceeds the sample length %d"
                                 % (k_max, n))
        if self.k_min > n:
            raise ParameterError("``k_min`` = %d exceeds the sample length %d"
                                 % (self.k_min, n))
        return range(self.k_min, k_max + 1)

    def starts(self, n, k):
        if self.mode == "anchored":
            return np.zeros(1, dtype=int)
        return np.arange(n - k + 1)

    def windows(self, n):
        """All windows, sorted by length then start"""
        for k in self.lengths(n):
            for s in self.starts(n, k):
                yield IntegerInterval(int(s), k)

    def describe(self):
        return {"mode": self.mode, "k_min": int(self.k_min),
                "k_max": None if self.k_max is None else int(self.k_max)}


def window_matrix(values, starts, k):
    """Rows are the windows of length ``k`` starting at ``starts``"""
    return sliding_window_view(values, k)[starts]


@dataclass
class ScanResult:
    """Column-wise maxima of a window scan and the windows attaining them

    Parameters
    ----------
    values : `np.ndarray`, shape=(m,)
        Maximum over windows of every kernel output column

    starts : `np.ndarray`, shape=(m,)
        Start of the witness window of every column

    lengths : `np.ndarray`, shape=(m,)
        Length of the witness window of every column
    """
    values: np.ndarray
    starts: np.ndarray
    lengths: np.ndarray

    def witness(self, col=0):
        return IntegerInterval(int(self.starts[col]), int(self.lengths[col]))

    def witnesses(self):
        return [self.witness(i) for i in range(self.values.size)]

    def merge(self, other):
        """Keeps the larger value, ties go to the smallest (start, length)
        """
        take = (other.values > self.values) | (
            (other.values == self.values)
            & ((other.starts < self.starts)
               | ((other.starts == self.starts)
                  & (other.lengths < self.lengths))))
        return ScanResult(np.where(take, other.values, self.values),
                          np.where(take, other.starts, self.starts),
                          np.where(take, other.lengths, self.lengths))


def _empty_result(width):
    big = np.iinfo(np.int64).max
    return ScanResult(np.full(width, -np.inf), np.full(width, big),
                      np.full(width, big))


def _scan_lengths(ps, family, kernel, lengths, width):
    result = _empty_result(width)
    n = ps.N
    for k in lengths:
        starts = family.starts(n, k)
        out = np.asarray(kernel(ps, starts, k), dtype=float)
        out = out.reshape(starts.size, width)
        out = np.where(np.isnan(out), -np.inf, out)
        best = np.argmax(out, axis=0)
        cols = np.arange(width)
        result = result.merge(ScanResult(out[best, cols], starts[best],
                                         np.full(width, k)))
    return result


def scan_windows(ps, family, kernel, width=1, n_jobs=1):
    """Maximum of ``kernel`` over every window of ``family``

    ``kernel(ps, starts, k)`` returns the values of the windows of length
    ``k`` starting at ``starts``, with shape (len(starts),) or
    (len(starts), width). Lengths are split in contiguous chunks handled
    by a joblib thread pool. The merge is a total order so the result does
    not depend on ``n_jobs``.

    Parameters
    ----------
    ps : `PrefixSums`
        Prefix sums of the sample

    family : `WindowFamily`
        The windows

    kernel : `callable`
        Vectorized window kernel

    width : `int`, default=1
        Number of kernel output columns

    n_jobs : `int`, default=1
        Number of threads, -1 for all processors

    Returns
    -------
    result : `ScanResult`
        Column-wise maxima and witnesses
    """
    lengths = list(family.lengths(ps.N))
    if not lengths:
        raise ParameterError("the window family is empty for N=%d" % ps.N)
    if n_jobs == 1 or len(lengths) == 1:
        return _scan_lengths(ps, family, kernel, lengths, width)
    n_chunks = min(len(lengths), 4 * (n_jobs if n_jobs > 0 else 8))
    chunks = [c.tolist() for c in np.array_split(lengths, n_chunks)]
    parts = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_scan_lengths)(ps, family, kernel, chunk, width)
        for chunk in chunks)
    result = parts[0]
    for part in parts[1:]:
        result = result.merge(part)
    return result
