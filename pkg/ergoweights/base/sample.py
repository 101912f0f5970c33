"""Orbit samples and their file formats."""
from dataclasses import dataclass, field
from ergoweights.base.errors import SampleValidationError
from ergoweights.base.utils import canonical_dumps, atomic_write_text
import json
import numpy as np
import pandas as pd


def _as_positive_array(values, name):
    arr = np.array(values, dtype=float).ravel()
    if arr.size == 0:
        raise SampleValidationError("``%s`` must contain at least one value"
                                    % name)
    bad = np.flatnonzero(~np.isfinite(arr) | (arr <= 0))
    if bad.size:
        raise SampleValidationError(
            "``%s`` must be finite and strictly positive, got %r"
            % (name, arr[bad[0]]), row=int(bad[0]))
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class OrbitSample:
    """Paired strictly positive sequences sampled along one orbit

    Parameters
    ----------
    omega : `np.ndarray`, shape=(N,)
        Values of the weight along the orbit

    g : `np.ndarray`, shape=(N,)
        Values of the reference weight along the orbit

    meta : `dict`
        Generation record (specs, start point, seed) or source file
    """
    omega: np.ndarray
    g: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        omega = _as_positive_array(self.omega, "omega")
        g = _as_positive_array(self.g, "g")
        if omega.size != g.size:
            raise SampleValidationError(
                "``omega`` and ``g`` lengths differ (%d != %d)"
                % (omega.size, g.size))
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def N(self):
        return self.omega.size

    def is_unweighted(self):
        return bool(np.all(self.g == 1.))

    def with_unit_g(self):
        """Same omega with g replaced by ones"""
        return OrbitSample(self.omega, np.ones(self.N), self.meta)

    def digest(self):
        """Length and min/max/mean of omega and g"""
        out = {"N": int(self.N)}
        for name, arr in (("omega", self.omega), ("g", self.g)):
            out[name] = {"min": float(arr.min()), "max": float(arr.max()),
                         "mean": float(arr.mean())}
        return out


def normalize_g(sample):
    """Rescale g so that its arithmetic mean over the sample equals 1

    Parameters
    ----------
    sample : `OrbitSample`
        A valid sample

    Returns
    -------
    output : `OrbitSample`
        Sample with the same omega and normalized g
    """
    g = sample.g / np.mean(sample.g)
    return OrbitSample(sample.omega, g, sample.meta)


def _infer_format(path, format):
    if format is not None:
        if format not in ("csv", "json"):
            raise ValueError("``format`` must be either 'csv' or 'json'")
        return format
    return "json" if str(path).lower().endswith(".json") else "csv"


def load_sample(path, format=None):
    """Load a sample from a CSV (``index,omega,g``) or JSON file

    Parameters
    ----------
    path : `str`
        File path

    format : `str`, default=None
        'csv' or 'json', inferred from the extension if None

    Returns
    -------
    sample : `OrbitSample`
        Entries in file order
    """
    format = _infer_format(path, format)
    if format == "csv":
        try:
            df = pd.read_csv(path, dtype=float)
        except (ValueError, pd.errors.ParserError) as e:
            raise SampleValidationError("cannot parse %s: %s" % (path, e))
        missing = {"omega", "g"} - set(df.columns)
        if missing:
            raise SampleValidationError("missing column(s) %s in %s"
                                        % (sorted(missing), path))
        omega, g = df["omega"].to_numpy(), df["g"].to_numpy()
        meta = {"source": str(path)}
    else:
        try:
            with open(path) as f:
                data = json.load(f)
        except ValueError as e:
            raise SampleValidationError("cannot parse %s: %s" % (path, e))
        if not isinstance(data, dict) or "omega" not in data or "g" not in data:
            raise SampleValidationError("JSON sample must hold 'omega' and "
                                        "'g' arrays")
        omega = np.array([np.nan if v is None else v for v in data["omega"]],
                         dtype=float)
        g = np.array([np.nan if v is None else v for v in data["g"]],
                     dtype=float)
        if omega.size != g.size:
            raise SampleValidationError(
                "``omega`` and ``g`` lengths differ (%d != %d)"
                % (omega.size, g.size))
        meta = dict(data.get("meta") or {})
        meta["source"] = str(path)
    return OrbitSample(omega, g, meta)


def save_sample(sample, path, format=None):
    """Write a sample to a CSV or JSON file with 17 significant digits

    Parameters
    ----------
    sample : `OrbitSample`
        The sample to write

    path : `str`
        Destination, written atomically

    format : `str`, default=None
        'csv' or 'json', inferred from the extension if None
    """
    format = _infer_format(path, format)
    if format == "csv":
        df = pd.DataFrame({"index": np.arange(sample.N),
                           "omega": sample.omega, "g": sample.g})
        text = df.to_csv(index=False, float_format="%.17g")
    else:
        text = canonical_dumps({"omega": sample.omega.tolist(),
                                "g": sample.g.tolist(),
                                "meta": sample.meta})
    atomic_write_text(path, text)
