import json
import math
import os
import tempfile
import numpy as np
import pandas as pd


def format_float(x):
    """Decimal form of ``x`` with 17 significant digits, None when not finite
    """
    x = float(x)
    if not math.isfinite(x):
        return None
    return "%.17g" % x


def _is_scalar(obj):
    return obj is None or isinstance(obj, (bool, int, float, str, np.generic))


def _dump_scalar(obj):
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        text = format_float(obj)
        return "null" if text is None else text
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError("cannot serialize %r" % (obj,))


def canonical_dumps(obj, indent=2):
    """Serialize ``obj`` to JSON text with a canonical layout

    Keys keep their insertion order, floats are written with 17
    significant digits and non-finite floats become ``null``. Lists of
    scalars are written on one line.

    Parameters
    ----------
    obj : `dict`, `list` or scalar
        Object made of dicts, lists, tuples, numpy arrays and scalars

    indent : `int`, default=2
        Indentation width

    Returns
    -------
    text : `str`
        JSON text terminated by a newline
    """
    def dump(o, level):
        if isinstance(o, np.ndarray):
            o = o.tolist()
        if _is_scalar(o):
            return _dump_scalar(o)
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = ["%s%s: %s" % (pad, json.dumps(str(k)), dump(v, level + 1))
                     for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple)):
            o = [v.tolist() if isinstance(v, np.ndarray) else v for v in o]
            if all(_is_scalar(v) for v in o):
                return "[" + ", ".join(_dump_scalar(v) for v in o) + "]"
            items = [pad + dump(v, level + 1) for v in o]
            return "[\n" + ",\n".join(items) + "\n" + end + "]"
        raise TypeError("cannot serialize %r" % (o,))

    return dump(obj, 0) + "\n"


def atomic_write_text(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename, so
    that ``path`` never holds a partial file
    """
    path = str(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def write_curve_csv(path, columns, t, v):
    """Write a two-column curve file

    Parameters
    ----------
    path : `str`
        Destination, written atomically

    columns : `tuple` of `str`
        Names of the abscissa and ordinate columns, eg. ('gamma', 'delta')

    t : `np.ndarray`
        Abscissas

    v : `np.ndarray`
        Ordinates
    """
    df = pd.DataFrame({columns[0]: np.asarray(t, dtype=float),
                       columns[1]: np.asarray(v, dtype=float)})
    atomic_write_text(path, df.to_csv(index=False, float_format="%.17g"))
