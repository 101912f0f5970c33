"""Constant transfers along the implication graph of the weight classes.

Each edge maps the constants of a source class to constants of a target
class. Free parameters are resolved on ``free_parameter_grid()`` by
optimizing the transferred bound. An edge whose free choice has no feasible
grid value, or whose output leaves the admissible region, is returned with
``feasible=False``; values are never clamped.
"""
from dataclasses import dataclass, field
from ergoweights.base.base import EQUAL_TOL, DEFAULT_GAMMA_GRID, \
    free_parameter_grid
from ergoweights.base.errors import ParameterError
import numpy as np

EDGES = tuple("T%d" % i for i in range(1, 16))

EDGE_CLASSES = {
    "T1": ("avg", "lambda"), "T2": ("lambda", "rh"), "T3": ("rh", "cf"),
    "T4": ("cf", "amhat"), "T5": ("amhat", "am"), "T6": ("am", "avg"),
    "T7": ("rh", "log"), "T8": ("log", "am"), "T9": ("ap", "exp"),
    "T10": ("exp", "avg"), "T11": ("exp", "sw"), "T12": ("sw", "med"),
    "T13": ("med", "am"), "T14": ("rh_dual", "ap"),
    "T15": ("ap", "doubling_omega"),
}

FORMULAS = {
    "T1": "beta = gamma, C = D_g / (1 - delta)",
    "T2": "largest grid delta with C delta / ((1 + delta) beta^(1 + delta)) "
          "< 1/2, q = 1 + delta, C = 2^(1/q)",
    "T3": "eps = (q - 1) / q, C unchanged",
    "T4": "grid alpha'' with beta'' = C alpha''^eps < 1 maximizing "
          "min(1 - beta'', alpha''), alpha' = 1 - beta'', beta' = 1 - alpha''",
    "T5": "grid u = 1 - beta maximizing min(alpha, u), "
          "alpha = 1 - beta' - u / alpha'",
    "T6": "gamma = 1 - beta, delta = 1 - alpha",
    "T7": "C_log = C^q 2 / (1 - 2^(1 - q))^2",
    "T8": "b = 2 max(C, 1) - 1, largest grid alpha with "
          "alpha (1 + e^b / (b + 1)) <= 1/4, beta = 3/4",
    "T9": "C unchanged",
    "T10": "delta(gamma) = C / log(1 + 1 / (gamma C)), vacuous when >= 1",
    "T11": "C unchanged",
    "T12": "grid s with 2^(s - 1) C(s)^s < 3/4 minimizing 4^(1/s) C(s)",
    "T13": "largest grid alpha < 1/4, beta = 1 - 1 / (4 C)",
    "T14": "p = q / (q - 1), C_p = C^p",
    "T15": "D_omega <= 3^p C",
}


@dataclass
class TransferRule:
    """Result of a constant transfer

    Parameters
    ----------
    edge : `str`
        Edge identifier 'T1', ..., 'T15'

    source : `dict`
        Source constants

    target : `dict`
        Transferred target constants, empty when infeasible

    feasible : `bool`
        Whether a valid target was found

    formula : `str`
        Human readable transfer formula
    """
    edge: str
    source: dict
    target: dict = field(default_factory=dict)
    feasible: bool = True
    formula: str = ""

    @property
    def source_class(self):
        return EDGE_CLASSES[self.edge][0]

    @property
    def target_class(self):
        return EDGE_CLASSES[self.edge][1]

    def to_dict(self):
        return {"edge": self.edge, "source_class": self.source_class,
                "target_class": self.target_class, "source": self.source,
                "target": self.target, "feasible": self.feasible,
                "formula": self.formula}


def _proportion(x):
    return bool(np.all((np.asarray(x) > 0) & (np.asarray(x) < 1)))


def _constant(x):
    x = np.asarray(x)
    return bool(np.all(np.isfinite(x) & (x >= 1. - EQUAL_TOL)))


def _need(source, *keys):
    missing = [k for k in keys if k not in source]
    if missing:
        raise ParameterError("missing source constant(s) %s" % missing)
    return [source[k] for k in keys]


def _t1(source, aux, grid):
    gamma, delta = _need(source, "gamma", "delta")
    d_g = aux.get("D_g")
    if d_g is None:
        raise ParameterError("edge T1 needs the doubling constant ``D_g``")
    if not 0 <= delta < 1 or not np.isfinite(d_g):
        return None
    return {"beta": gamma, "C": d_g / (1. - delta)}


def _t2(source, aux, grid):
    C, beta = _need(source, "C", "beta")
    ok = C * grid / ((1. + grid) * beta ** (1. + grid)) < .5
    if not ok.any():
        return None
    delta = float(grid[ok][-1])
    q = 1. + delta
    return {"delta": delta, "q": q, "C": 2. ** (1. / q)}


def _t3(source, aux, grid):
    C, q = _need(source, "C", "q")
    if q <= 1:
        return None
    return {"C": C, "eps": (q - 1.) / q}


def _t4(source, aux, grid):
    C, eps = _need(source, "C", "eps")
    beta2 = C * grid ** eps
    ok = beta2 < 1.
    if not ok.any():
        return None
    score = np.where(ok, np.minimum(1. - beta2, grid), -np.inf)
    i = int(np.argmax(score))
    return {"alpha2": float(grid[i]), "beta2": float(beta2[i]),
            "alpha": float(1. - beta2[i]), "beta": float(1. - grid[i])}


def _t5(source, aux, grid):
    alpha1, beta1 = _need(source, "alpha", "beta")
    alpha = 1. - beta1 - grid / alpha1
    ok = (alpha > 0) & (alpha < 1)
    if not ok.any():
        return None
    score = np.where(ok, np.minimum(alpha, grid), -np.inf)
    i = int(np.argmax(score))
    return {"alpha": float(alpha[i]), "beta": float(1. - grid[i])}


def _t6(source, aux, grid):
    alpha, beta = _need(source, "alpha", "beta")
    return {"gamma": 1. - beta, "delta": 1. - alpha}


def _t7(source, aux, grid):
    C, q = _need(source, "C", "q")
    if q <= 1:
        return None
    return {"C": C ** q * 2. / (1. - 2. ** (1. - q)) ** 2}


def _t8(source, aux, grid):
    C, = _need(source, "C")
    b = 2. * max(C, 1.) - 1.
    with np.errstate(over="ignore"):
        factor = 1. + np.exp(b) / (b + 1.)
    ok = grid * factor <= .25
    if not ok.any():
        return None
    return {"b": b, "alpha": float(grid[ok][-1]), "beta": .75}


def _t9(source, aux, grid):
    C, = _need(source, "C")
    return {"C": C}


def _t10(source, aux, grid):
    C, = _need(source, "C")
    gamma = np.asarray(aux.get("gamma_grid", DEFAULT_GAMMA_GRID), dtype=float)
    delta = C / np.log1p(1. / (gamma * C))
    return {"gamma": gamma.tolist(), "delta": delta.tolist(),
            "vacuous": (delta >= 1.).tolist()}


def _t11(source, aux, grid):
    C, = _need(source, "C")
    return {"C": C}


def _t12(source, aux, grid):
    s, c_s = _need(source, "s", "C")
    s, c_s = np.asarray(s, dtype=float), np.asarray(c_s, dtype=float)
    ok = 2. ** (s - 1.) * c_s ** s < .75
    if not ok.any():
        return None
    bound = np.where(ok, 4. ** (1. / s) * c_s, np.inf)
    i = int(np.argmin(bound))
    return {"s": float(s[i]), "C": float(bound[i])}


def _t13(source, aux, grid):
    C, = _need(source, "C")
    below = grid[grid < .25]
    return {"alpha": float(below[-1]), "beta": 1. - 1. / (4. * C)}


def _t14(source, aux, grid):
    C, q = _need(source, "C", "q")
    if q <= 1:
        return None
    p = q / (q - 1.)
    return {"p": p, "C": C ** p}


def _t15(source, aux, grid):
    C, p = _need(source, "C", "p")
    return {"C": 3. ** p * C}


_RULES = {"T1": _t1, "T2": _t2, "T3": _t3, "T4": _t4, "T5": _t5, "T6": _t6,
          "T7": _t7, "T8": _t8, "T9": _t9, "T10": _t10, "T11": _t11,
          "T12": _t12, "T13": _t13, "T14": _t14, "T15": _t15}

# keys of the target that must lie in (0, 1) or be >= 1
_PROPORTIONS = ("beta", "eps", "alpha", "gamma", "alpha2", "beta2")
_CONSTANTS = ("C",)


def _admissible(edge, target):
    for key, val in target.items():
        if key in _PROPORTIONS and not _proportion(val):
            return False
        if key in _CONSTANTS and not _constant(val):
            return False
    if edge == "T6" and not _proportion(target["delta"]):
        return False
    return True


def transfer_constants(edge, source, aux=None, grid=None):
    """Transfers the source constants of an edge to target constants

    Parameters
    ----------
    edge : `str`
        Edge identifier 'T1', ..., 'T15'

    source : `dict`
        Source constants, eg. {'C': 1.2, 'q': 2.} for T3

    aux : `dict`, default=None
        Extra inputs: 'D_g' for T1, 'gamma_grid' for T10

    grid : `np.ndarray`, default=None
        Grid of the free parameters, ``free_parameter_grid()`` if None

    Returns
    -------
    rule : `TransferRule`
        The transferred constants, or an infeasible rule
    """
    if edge not in _RULES:
        raise ParameterError("``edge`` must be one of %s, got %r"
                             % (list(EDGES), edge))
    grid = free_parameter_grid() if grid is None else np.asarray(grid)
    aux = {} if aux is None else aux
    target = _RULES[edge](source, aux, grid)
    if target is None or not _admissible(edge, target):
        return TransferRule(edge, dict(source), {}, False, FORMULAS[edge])
    return TransferRule(edge, dict(source), target, True, FORMULAS[edge])
