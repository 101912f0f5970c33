from dataclasses import dataclass, field
from ergoweights import __version__
from ergoweights.base.utils import atomic_write_text, canonical_dumps, \
    write_curve_csv
import os
import warnings

TOOL_NAME = "ergoweights"


@dataclass
class AnalysisReport:
    """Machine readable output of a run

    Parameters
    ----------
    command : `str`
        Subcommand that produced the report

    config : `dict`
        Echo of the configuration, enough to reproduce the run

    sample : `dict`, default=None
        Sample digest (length, min/max/mean of omega and g)

    reports : `dict`, default={}
        Class name -> `ClassConstantReport`

    frontiers : `dict`, default={}
        Name -> `FrontierCurve` of single windows

    verdicts : `list`, default=[]
        `EdgeVerdict` and check records

    results : `dict`, default={}
        Subcommand specific payload (selection, oracle values)

    timing : `dict`, default=None
        Elapsed seconds, only serialized when not None
    """
    command: str
    config: dict
    sample: dict = None
    reports: dict = field(default_factory=dict)
    frontiers: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    timing: dict = None
    version: str = __version__

    def curves(self):
        """Curve name -> (columns, t, v) of every curve held"""
        out = {}
        for name, report in self.reports.items():
            if report.is_curve:
                curve = report.value
                out[name] = (curve.columns, curve.t, curve.v)
            elif report.curve is not None and "s" in report.curve:
                out[name] = (("s", "C"), report.curve["s"],
                             report.curve["value"])
        for name, curve in self.frontiers.items():
            out[name] = (curve.columns, curve.t, curve.v)
        return out

    def to_dict(self):
        out = {"tool": TOOL_NAME, "version": self.version,
               "command": self.command, "config": self.config}
        if self.sample is not None:
            out["sample"] = self.sample
        if self.reports:
            out["classes"] = {name: r.to_dict()
                              for name, r in self.reports.items()}
        if self.frontiers:
            out["frontiers"] = {name: c.to_dict()
                                for name, c in self.frontiers.items()}
        if self.verdicts:
            out["verdicts"] = [v if isinstance(v, dict) else v.to_dict()
                               for v in self.verdicts]
        if self.results:
            out["results"] = self.results
        if self.timing is not None:
            out["timing"] = self.timing
        return out

    def dumps(self):
        return canonical_dumps(self.to_dict())

    def write(self, path):
        atomic_write_text(path, self.dumps())


def emit_curves(report, out_dir):
    """Writes one two-column CSV per curve and an index ``curves.json``

    Parameters
    ----------
    report : `AnalysisReport`
        The report

    out_dir : `str`
        Destination directory

    Returns
    -------
    index : `dict`
        Curve name -> file name, empty when the report holds no curve
    """
    curves = report.curves()
    if not curves:
        warnings.warn("the report holds no curve, nothing written")
        return {}
    os.makedirs(out_dir, exist_ok=True)
    index = {}
    for name, (columns, t, v) in curves.items():
        filename = "%s.csv" % name
        write_curve_csv(os.path.join(out_dir, filename), columns, t, v)
        index[name] = filename
    atomic_write_text(os.path.join(out_dir, "curves.json"),
                      canonical_dumps(index))
    return index
