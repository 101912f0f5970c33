"""Command line interface: gen, analyze, czd, verify and oracle."""
import argparse
import sys
from joblib import cpu_count
from ergoweights.analysis import ClassAnalyzer, ALL_CLASSES
from ergoweights.base.base import DEFAULT_S_GRID, DEFAULT_GAMMA_GRID, \
    DEFAULT_ALPHA_GRID
from ergoweights.base.sample import load_sample, save_sample, normalize_g
from ergoweights.base.utils import atomic_write_text, canonical_dumps
from ergoweights.harness.oracles import ORACLE_MAX_K, brute_force_oracle, \
    duality_check, oracle_discrepancies
from ergoweights.harness.transfers import EDGES
from ergoweights.harness.verification import ImplicationHarness
from ergoweights.model.decomposition import decompose, verify_selection
from ergoweights.model.dyadic import IntegerInterval, build_prefix_sums
from ergoweights.model.estimators import window_value
from ergoweights.model.frontiers import frontier_curve, sorted_mass_fractions
from ergoweights.model.windows import WindowFamily
from ergoweights.report import AnalysisReport, emit_curves
from ergoweights.simulation import TransformationSpec, SimuLogNormalWeights, \
    parse_weight_spec, sample_orbit
import numpy as np

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2

COMMANDS = ("gen", "analyze", "czd", "verify", "oracle")

# Relative tolerances of the oracle comparisons
FRONTIER_ORACLE_TOL = 1e-9
LAMBDA_ORACLE_TOL = 1e-6

# Fields never echoed in reports: they do not change the result
_NOT_ECHOED = ("threads", "out", "curves_dir", "record_timing", "verbose")


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting with argparse's own status"""

    def error(self, message):
        raise UsageError(message)


def _float_list(text):
    return tuple(float(x) for x in text.split(",") if x.strip())


def _name_list(text):
    text = text.strip()
    if text == "all":
        return "all"
    return tuple(x.strip() for x in text.split(",") if x.strip())


class RunConfig:
    """Validated configuration of one CLI run

    Parameters
    ----------
    command : `str`
        One of 'gen', 'analyze', 'czd', 'verify', 'oracle'

    in_path : `str`, default=None
        Sample file, exclusive with the generator flags

    alpha : `float`, default=None
        Rotation angle of the generator

    omega_spec, g_spec : `str`, default='constant:1'
        Weight specifications of the generator

    x0 : `float`, default=0.
        Starting point of the generator

    n : `int`, default=None
        Sample length of the generator

    seed : `int`, default=None
        Seed of the random cases, required when ``cases`` > 0

    threads : `int`, default=None
        Number of threads, the number of processors if None

    format : `str`, default=None
        Format of the file written by gen, inferred from the extension of
        ``out`` if None
    """

    def __init__(self, command, in_path=None, in_format=None, alpha=None,
                 omega_spec="constant:1", g_spec="constant:1", x0=0., n=None,
                 normalize=False, seed=None, threads=None, out=None,
                 format=None, classes="all", p=2., q=2., beta=.5, cf_c=2.,
                 s_grid=DEFAULT_S_GRID, gamma_grid=DEFAULT_GAMMA_GRID,
                 alpha_grid=DEFAULT_ALPHA_GRID, windows="all", kmin=1,
                 kmax=None, lambda_=None, start=0, length=None, edges="all",
                 oracle_kmax=ORACLE_MAX_K, cases=0, weighted_cases=0,
                 case_n_max=64, target="cf", frontier_window=None,
                 curves_dir=None, record_timing=False, verbose=False):
        self.command = command
        self.in_path = in_path
        self.in_format = in_format
        self.alpha = alpha
        self.omega_spec = omega_spec
        self.g_spec = g_spec
        self.x0 = x0
        self.n = n
        self.normalize = normalize
        self.seed = seed
        self.threads = threads
        self.out = out
        self.format = format
        self.classes = classes
        self.p = p
        self.q = q
        self.beta = beta
        self.cf_c = cf_c
        self.s_grid = s_grid
        self.gamma_grid = gamma_grid
        self.alpha_grid = alpha_grid
        self.windows = windows
        self.kmin = kmin
        self.kmax = kmax
        self.lambda_ = lambda_
        self.start = start
        self.length = length
        self.edges = edges
        self.oracle_kmax = oracle_kmax
        self.cases = cases
        self.weighted_cases = weighted_cases
        self.case_n_max = case_n_max
        self.target = target
        self.frontier_window = frontier_window
        self.curves_dir = curves_dir
        self.record_timing = record_timing
        self.verbose = verbose
        self._check_sources()

    @property
    def command(self):
        return self._command

    @command.setter
    def command(self, val):
        if val not in COMMANDS:
            raise UsageError("``command`` must be one of %s" % list(COMMANDS))
        self._command = val

    @property
    def seed(self):
        return self._seed

    @seed.setter
    def seed(self, val):
        if val is not None and not 0 <= val < 2 ** 64:
            raise UsageError("``seed`` must be an unsigned 64-bit integer")
        self._seed = val

    @property
    def threads(self):
        return self._threads

    @threads.setter
    def threads(self, val):
        if val is None:
            val = cpu_count()
        if val < 1:
            raise UsageError("``threads`` must be a positive integer")
        self._threads = int(val)

    @property
    def format(self):
        return self._format

    @format.setter
    def format(self, val):
        if val not in (None, "json", "csv"):
            raise UsageError("``format`` must be 'json', 'csv' or None")
        self._format = val

    @property
    def classes(self):
        return self._classes

    @classes.setter
    def classes(self, val):
        if val != "all" and not set(val) <= set(ALL_CLASSES):
            raise UsageError("``classes`` must be 'all' or a list in %s"
                             % list(ALL_CLASSES))
        self._classes = val

    @property
    def edges(self):
        return self._edges

    @edges.setter
    def edges(self, val):
        if val != "all" and not set(val) <= set(EDGES):
            raise UsageError("``edges`` must be 'all' or a list in %s"
                             % list(EDGES))
        self._edges = val

    @property
    def windows(self):
        return self._windows

    @windows.setter
    def windows(self, val):
        if val not in ("all", "anchored"):
            raise UsageError("``windows`` must be either 'all' or 'anchored'")
        self._windows = val

    @property
    def oracle_kmax(self):
        return self._oracle_kmax

    @oracle_kmax.setter
    def oracle_kmax(self, val):
        if not 1 <= val <= ORACLE_MAX_K:
            raise UsageError("``oracle_kmax`` must lie in [1, %d]"
                             % ORACLE_MAX_K)
        self._oracle_kmax = int(val)

    @property
    def cases(self):
        return self._cases

    @cases.setter
    def cases(self, val):
        if val < 0:
            raise UsageError("``cases`` must be nonnegative")
        self._cases = int(val)

    @property
    def target(self):
        return self._target

    @target.setter
    def target(self, val):
        if val not in ("cf", "am", "amhat", "lambda"):
            raise UsageError("``target`` must be one of 'cf', 'am', 'amhat', "
                             "'lambda'")
        self._target = val

    @property
    def has_generator(self):
        return self.alpha is not None or self.n is not None

    def _check_sources(self):
        n_sources = int(self.in_path is not None) + int(self.has_generator)
        random_cases = self.command == "verify" and \
            self.cases + self.weighted_cases > 0
        if n_sources > 1:
            raise UsageError("give either ``--in`` or the generator flags, "
                             "not both")
        if n_sources == 0 and not random_cases:
            raise UsageError("an input source is required: ``--in`` or "
                             "``--alpha`` with ``--n``")
        if self.has_generator and (self.alpha is None or self.n is None):
            raise UsageError("the generator needs both ``--alpha`` and "
                             "``--n``")
        if self.command == "gen" and not self.has_generator:
            raise UsageError("``gen`` needs the generator flags")
        if random_cases and self.seed is None:
            raise UsageError("``--seed`` is required for random cases")
        if self.command == "czd" and self.lambda_ is None:
            raise UsageError("``czd`` needs ``--lambda``")

    def family(self):
        return WindowFamily(self.windows, self.kmin, self.kmax)

    def echo(self):
        """Configuration fields that determine the result"""
        out = {}
        for key in sorted(vars(self)):
            name = key.lstrip("_")
            if name in _NOT_ECHOED:
                continue
            val = getattr(self, name)
            out[name] = list(val) if isinstance(val, tuple) else val
        return out


def load_input(config):
    """The sample of a run, None for verify runs on random cases only"""
    if config.in_path is not None:
        sample = load_sample(config.in_path, config.in_format)
    elif config.has_generator:
        sample = sample_orbit(TransformationSpec.rotation(config.alpha),
                              parse_weight_spec(config.omega_spec),
                              parse_weight_spec(config.g_spec), config.x0,
                              config.n)
    else:
        return None
    return normalize_g(sample) if config.normalize else sample


def _window(config, sample):
    length = sample.N - config.start if config.length is None \
        else config.length
    return IntegerInterval(config.start, length).check_within(sample.N)


def _run_gen(config, sample):
    if config.out is not None:
        save_sample(sample, config.out, config.format)
        return None, EXIT_OK
    text = canonical_dumps({"omega": sample.omega.tolist(),
                            "g": sample.g.tolist(), "meta": sample.meta})
    return text, EXIT_OK


def _run_analyze(config, sample):
    analyzer = ClassAnalyzer(classes=config.classes, family=config.family(),
                             p=config.p, q=config.q, beta=config.beta,
                             cf_C=config.cf_c, s_grid=config.s_grid,
                             gamma_grid=config.gamma_grid,
                             alpha_grid=config.alpha_grid,
                             verbose=config.verbose, n_jobs=config.threads)
    reports = analyzer.run(sample)
    report = AnalysisReport("analyze", config.echo(), sample.digest(),
                            reports)
    if config.frontier_window is not None:
        start, length = config.frontier_window
        window = IntegerInterval(start, length).check_within(sample.N)
        ps = build_prefix_sums(sample)
        for kind in ("cf", "amhat"):
            report.frontiers["%s_frontier" % kind] = frontier_curve(
                ps, kind, window)
    if config.record_timing:
        report.timing = {"analyze": analyzer.time_elapsed}
    if config.curves_dir is not None:
        emit_curves(report, config.curves_dir)
    return report, EXIT_OK


def _run_czd(config, sample):
    ps = build_prefix_sums(sample)
    selection = decompose(ps, _window(config, sample), config.lambda_)
    check = verify_selection(ps, selection)
    code = EXIT_OK if check.passed else EXIT_VERIFICATION
    return canonical_dumps(selection.to_dict()), code


def _random_cases(config):
    seeds = np.random.default_rng(config.seed).integers(2 ** 63, size=3)
    samples = []
    for n_cases, seed, weighted in ((config.cases, seeds[0], False),
                                    (config.weighted_cases, seeds[1], True)):
        simu = SimuLogNormalWeights(seed=int(seed), weighted_g=weighted,
                                    n_range=(2, config.case_n_max))
        samples.extend(simu.simulate() for _ in range(n_cases))
    return samples, np.random.default_rng(int(seeds[2]))


def _oracle_records(case, sample, rng, config):
    """Oracle and duality checks of one sample"""
    k = int(rng.integers(1, min(config.oracle_kmax, sample.N) + 1))
    start = int(rng.integers(0, sample.N - k + 1))
    window = IntegerInterval(start, k)
    gaps = oracle_discrepancies(sample, window, config.beta)
    ok = all(gaps[kind] <= FRONTIER_ORACLE_TOL
             for kind in ("cf", "am", "amhat")) \
        and gaps["lambda"] <= LAMBDA_ORACLE_TOL
    alpha, beta = rng.uniform(.01, .99, size=2)
    p1, p2 = duality_check(sample, alpha, beta)
    return [{"case": case, "check": "oracle", "window": window.to_list(),
             "gaps": gaps, "status": "pass" if ok else "fail"},
            {"case": case, "check": "duality", "alpha": float(alpha),
             "beta": float(beta), "p1": p1, "p2": p2,
             "status": "pass" if p1 == p2 else "fail"}]


def _run_verify(config, sample):
    samples, rng = _random_cases(config) if config.cases + \
        config.weighted_cases > 0 else ([], np.random.default_rng(0))
    if sample is not None:
        samples.insert(0, sample)
    harness = ImplicationHarness(
        edges=config.edges, family=config.family(),
        analyzer_params=dict(p=config.p, q=config.q, beta=config.beta,
                             cf_C=config.cf_c, s_grid=config.s_grid,
                             gamma_grid=config.gamma_grid,
                             alpha_grid=config.alpha_grid),
        verbose=config.verbose, n_jobs=config.threads)
    verdicts = []
    for case, case_verdicts in enumerate(harness.run(samples)):
        for verdict in case_verdicts:
            verdicts.append(dict(verdict.to_dict(), case=case))
    for case, s in enumerate(samples):
        verdicts.extend(_oracle_records(case, s, rng, config))
    report = AnalysisReport("verify", config.echo(),
                            sample.digest() if sample is not None else None,
                            verdicts=verdicts)
    if config.record_timing:
        report.timing = {"verify": harness.time_elapsed}
    failed = any(v["status"] == "fail" for v in verdicts)
    return report, EXIT_VERIFICATION if failed else EXIT_OK


def _run_oracle(config, sample):
    window = _window(config, sample)
    oracle = brute_force_oracle(sample, window, config.target,
                                beta=config.beta)
    ps = build_prefix_sums(sample)
    if config.target == "lambda":
        estimate = float(window_value(ps, "lambda", {"beta": config.beta},
                                      window)[0])
        gap = abs(estimate - oracle.value) / max(abs(estimate), 1e-300)
        results = {"target": "lambda", "window": window.to_list(),
                   "oracle": oracle.value, "estimator": estimate, "gap": gap}
        ok = gap <= LAMBDA_ORACLE_TOL
    else:
        t, v = sorted_mass_fractions(ps, np.array([window.start]),
                                     window.length, config.target)
        exact = oracle.extremal_at(t[0])
        gap = float(np.max(np.abs(exact - v[0]) / v[0]))
        results = {"target": config.target, "window": window.to_list(),
                   "t": t[0], "oracle": exact, "estimator": v[0], "gap": gap}
        ok = gap <= FRONTIER_ORACLE_TOL
    report = AnalysisReport("oracle", config.echo(), sample.digest(),
                            results=results)
    return report, EXIT_OK if ok else EXIT_VERIFICATION


_DISPATCH = {"gen": _run_gen, "analyze": _run_analyze, "czd": _run_czd,
             "verify": _run_verify, "oracle": _run_oracle}


def run(config):
    """Runs a validated configuration

    Parameters
    ----------
    config : `RunConfig`
        The configuration

    Returns
    -------
    output : `AnalysisReport`, `str` or None
        The report, or the JSON text of ``gen``/``czd``, None when ``gen``
        already wrote its file

    code : `int`
        0 on success, 2 when a verification failed
    """
    sample = load_input(config)
    return _DISPATCH[config.command](config, sample)


def build_parser():
    parser = _Parser(prog="ergoweights",
                     description="Weight class constants on orbit samples")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        source = cmd.add_argument_group("input")
        source.add_argument("--in", dest="in_path", default=None)
        source.add_argument("--in-format", choices=["csv", "json"],
                            default=None)
        source.add_argument("--alpha", type=float, default=None)
        source.add_argument("--omega-spec", default="constant:1")
        source.add_argument("--g-spec", default="constant:1")
        source.add_argument("--x0", type=float, default=0.)
        source.add_argument("--n", type=int, default=None)
        source.add_argument("--normalize-g", dest="normalize",
                            action="store_true")
        cmd.add_argument("--seed", type=int, default=None)
        cmd.add_argument("--threads", type=int, default=None)
        cmd.add_argument("--out", default=None)
        cmd.add_argument("--format", choices=["json", "csv"], default=None)
        cmd.add_argument("--verbose", action="store_true")
        cmd.add_argument("--record-timing", action="store_true")
        cmd.add_argument("--windows", choices=["all", "anchored"],
                         default="all")
        cmd.add_argument("--kmin", type=int, default=1)
        cmd.add_argument("--kmax", type=int, default=None)
        cmd.add_argument("--p", type=float, default=2.)
        cmd.add_argument("--q", type=float, default=2.)
        cmd.add_argument("--beta", type=float, default=.5)
        cmd.add_argument("--cf-c", type=float, default=2.)
        cmd.add_argument("--s-grid", type=_float_list, default=DEFAULT_S_GRID)
        cmd.add_argument("--gamma-grid", type=_float_list,
                         default=DEFAULT_GAMMA_GRID)
        cmd.add_argument("--alpha-grid", type=_float_list,
                         default=DEFAULT_ALPHA_GRID)
        if name == "analyze":
            cmd.add_argument("--classes", type=_name_list, default="all")
            cmd.add_argument("--frontier-window", type=lambda s: tuple(
                int(x) for x in s.split(",")), default=None)
            cmd.add_argument("--curves-dir", default=None)
        if name in ("czd", "oracle"):
            cmd.add_argument("--start", type=int, default=0)
            cmd.add_argument("--len", dest="length", type=int, default=None)
        if name == "czd":
            cmd.add_argument("--lambda", dest="lambda_", type=float,
                             default=None)
        if name == "oracle":
            cmd.add_argument("--target", default="cf",
                             choices=["cf", "am", "amhat", "lambda"])
        if name == "verify":
            cmd.add_argument("--edges", type=_name_list, default="all")
            cmd.add_argument("--oracle-kmax", type=int, default=ORACLE_MAX_K)
            cmd.add_argument("--cases", type=int, default=0)
            cmd.add_argument("--weighted-cases", type=int, default=0)
            cmd.add_argument("--case-n-max", type=int, default=64)
    return parser


def main(argv=None):
    """Entry point, returns the exit code"""
    try:
        args = build_parser().parse_args(argv)
        config = RunConfig(**vars(args))
        output, code = run(config)
        if output is not None:
            text = output if isinstance(output, str) else output.dumps()
            if config.out is not None:
                atomic_write_text(config.out, text)
            else:
                sys.stdout.write(text)
    except (ValueError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    return code
