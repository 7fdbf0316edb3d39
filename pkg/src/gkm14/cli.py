"""Command-line front end.

    gkm14 [global options] <command> [command options]

Every command prints a JSON report (or csv/text where that makes sense)
and exits with 0 when all its checks pass, 1 when a check fails, 2 on a
usage error and 3 on an internal error.  Reports are deterministic for a
fixed configuration once the ``timings`` field is dropped
(``--no-timings``).
"""

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__, cache, discform, gkm, lattice, modforms, published

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
FORMATS = ("json", "csv", "text")

# acceptance limits
TABLE_N_SECONDS = 60
TABLE_K_SECONDS = 30
DENOMINATOR_SECONDS = 600
CHI_ORDER = 11          # exact below q^11, so up to and including q^10
GOLDEN_ORDER = 6
WEIL_MIN_ORDER = 20
WEIL_TOL = 1e-6
LIFT_ORDER = 5
LIFT_TOL = 1e-8
MIN_SIMPLE_ROOTS = 20


class UsageError(ValueError):
    pass


# -- configuration ---------------------------------------------------------------

@dataclass
class RunConfig:
    series_order: Fraction = Fraction(30)
    height_bound: Fraction = None
    tol: float = 1e-9
    cache_dir: str = None
    output_format: str = "json"
    workers: int = 1

    def __post_init__(self):
        try:
            self.series_order = Fraction(self.series_order)
            if self.height_bound is not None:
                self.height_bound = Fraction(self.height_bound)
            self.tol = float(self.tol)
            self.workers = int(self.workers)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad configuration value: {exc}") from None
        if self.series_order < 6:
            raise UsageError("series_order must be at least 6")
        if not self.tol > 0:
            raise UsageError("tol must be positive")
        if self.height_bound is not None and self.height_bound <= 0:
            raise UsageError("height_bound must be positive")
        if self.output_format not in FORMATS:
            raise UsageError(f"output_format must be one of {', '.join(FORMATS)}")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")

    def to_json(self):
        return {
            "series_order": str(self.series_order),
            "height_bound": None if self.height_bound is None else str(self.height_bound),
            "tol": self.tol,
            "output_format": self.output_format,
        }


CONFIG_KEYS = ("series_order", "height_bound", "tol", "cache_dir", "output_format", "workers")


def read_config_file(path):
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{n}: expected one of {', '.join(CONFIG_KEYS)} = value")
        out[key] = value
    return out


def build_config(args):
    path = getattr(args, "config", None)
    values = read_config_file(path) if path else {}
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if values.get("cache_dir") is None and os.environ.get(cache.ENV_VAR):
        values["cache_dir"] = os.environ[cache.ENV_VAR]
    return RunConfig(**values)


# -- reports -----------------------------------------------------------------------

@dataclass
class Report:
    command: str
    inputs: dict
    checks: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    text: str = field(default=None, repr=False)

    @property
    def passed(self):
        return all(self.checks.values())

    def to_json(self, timings=True):
        out = {
            "command": self.command,
            "inputs": self.inputs,
            "checks": self.checks,
            "pass": self.passed,
            "artifact_version": __version__,
            "data": self.data,
        }
        if timings:
            out["timings"] = self.timings
        return out


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


class Stopwatch:
    def __init__(self, timings):
        self.timings = timings

    def __call__(self, name, fn, *args, **kwargs):
        t = time.perf_counter()
        out = fn(*args, **kwargs)
        self.timings[name] = round(time.perf_counter() - t, 3)
        return out


# -- series formatting -----------------------------------------------------------

def _exponent(e):
    if e == 1:
        return "q"
    if e.denominator == 1 and e > 0:
        return f"q^{e}"
    return "q^{" + str(e) + "}"


def format_series(series):
    """``q^{-1} + 12 + 300q + ...`` with exact rational coefficients."""
    parts = []
    for e, c in series.items():
        if not c:
            continue
        mag = abs(c)
        if e == 0:
            body = str(mag)
        elif mag == 1:
            body = _exponent(e)
        else:
            body = f"{mag}{_exponent(e)}"
        sign = "-" if c < 0 else "+"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts) if parts else "0"


def parse_which(which):
    if which == "chi":
        return "chi", None
    if len(which) == 2 and which[0] in "gf" and which[1] in "1234567":
        return which[0], int(which[1])
    raise UsageError("--which must be g1..g7, f1..f7 or chi")


def compute_series(which, order):
    kind, n = parse_which(which)
    if kind == "chi":
        return modforms.chi_v(order)
    chars = modforms.vkplus_characters(order)
    return (chars.g if kind == "g" else chars.f)[n - 1]


# -- individual checks -------------------------------------------------------------
# each returns (passed, data)

def check_table(name, limit):
    t = time.perf_counter()
    table = discform.reference_table(name)
    seconds = time.perf_counter() - t
    mism = published.table_mismatches(name, table)
    data = {
        "rows": len(table.rows),
        "orbit_sizes": table.sizes(),
        "mismatches": [[str(x) for x in m] for m in mism],
        "runtime_limit_s": limit,
        "runtime_ok": seconds < limit,
    }
    return not mism and seconds < limit, data, seconds


def check_characters(order=GOLDEN_ORDER):
    chars = modforms.vkplus_characters(order)
    mism = {}
    for kind, series in (("g", chars.g), ("f", chars.f)):
        for n in range(1, 8):
            bad = published.compare(kind, n, series[n - 1])
            if bad:
                mism[f"{kind}{n}"] = [{"exponent": str(e), "printed": str(p), "computed": str(c)}
                                      for e, p, c in bad]
    return not mism, {"order": str(Fraction(order)), "mismatches": mism}


def check_chi(order=CHI_ORDER):
    rep = modforms.chi_v_check(order)
    return rep["pass"], rep


def check_gauss_sum():
    fqm = discform.reference_table("N").fqm
    g = discform.signature_gauss_sum(fqm)
    ok = g.exact == (-128, 0) and g.signature_mod_8 == 4
    return ok, {"gauss_sum": [str(g.exact[0]), str(g.exact[1])], "signature_mod_8": g.signature_mod_8}


def check_multiplicities(rho):
    datum = gkm.default_datum()
    lat = datum.lattice
    samples = gkm.sample_real_roots(lat)
    real = {}
    ok = True
    for t, keys in samples.items():
        mults = [gkm.root_multiplicity(k, datum) for k in keys]
        kinds = [gkm.classify_real_root(k, datum) for k in keys]
        ok &= all(m == 1 for m in mults) and all(k == gkm.REAL_TYPES[t] for k in kinds)
        real[gkm.REAL_TYPES[t]] = [{"vector": list(k), "multiplicity": m} for k, m in zip(keys, mults)]
    z = rho.two_rho
    m2 = gkm.root_multiplicity(z, datum)
    m4 = gkm.root_multiplicity(gkm.scale(z, 2), datum)
    deep = gkm.ZERO[:12] + (1, -1)
    m300 = gkm.root_multiplicity(deep, datum)
    ok &= m2 == 12 and m4 == 12 and m300 == 300 and gkm.norm(deep) == -2 and lat.in_L(deep)
    data = {
        "real_roots": real,
        "mult_2rho": m2,
        "mult_4rho": m4,
        "norm_minus_2_class_0": {"vector": list(deep), "multiplicity": m300},
    }
    return bool(ok), data


def check_weyl_vector(rho, again):
    ok = (not any(not c for c in rho.certificates)
          and len(rho.simple_roots) >= MIN_SIMPLE_ROOTS
          and again.two_rho == rho.two_rho
          and [r.key for r in again.simple_roots] == [r.key for r in rho.simple_roots])
    data = rho.to_json()
    data.pop("simple_roots")
    data["deterministic"] = again.two_rho == rho.two_rho
    return ok, data


def check_denominator(rho, height_bound, workers):
    t = time.perf_counter()
    if height_bound is None:
        rep = gkm.denominator_check(None, rho)
    else:
        rep = gkm.denominator_check(height_bound, rho, workers=workers)
    seconds = time.perf_counter() - t
    data = rep.to_json()
    data["runtime_limit_s"] = DENOMINATOR_SECONDS
    data["runtime_ok"] = seconds < DENOMINATOR_SECONDS
    ok = (rep.passed and rep.n_exponents_compared >= gkm.MIN_EXPONENTS
          and rep.n_weyl_elements >= gkm.MIN_WEYL and seconds < DENOMINATOR_SECONDS)
    return ok, data, seconds


def check_weil(order=WEIL_MIN_ORDER, tol=WEIL_TOL):
    chars = modforms.vkplus_characters(order)
    rep = modforms.weil_transform_check(modforms.canonical_form(chars), tol=tol)
    rep["order"] = str(Fraction(order))
    rep["s_max_deviation"] = float(f"{rep['s_max_deviation']:.1e}")
    ok = rep["pass"] and Fraction(order) >= WEIL_MIN_ORDER
    return ok, rep


def check_lift(order=LIFT_ORDER, tol=LIFT_TOL, exact=False):
    rep = modforms.lift_decomposition_check(order, tol, exact=exact)
    dev = rep.get("numeric_max_relative_deviation")
    if isinstance(dev, float):
        rep["numeric_max_relative_deviation"] = float(f"{dev:.1e}")
    return rep["pass"], rep


def check_lift_both(order=LIFT_ORDER, tol=LIFT_TOL):
    """Numeric mode within ``tol`` and exact mode in Q(i)."""
    num_ok, num = check_lift(order, tol, exact=False)
    ex_ok, ex = check_lift(order, tol, exact=True)
    return num_ok and ex_ok, {"numeric": num, "exact": ex}


def _fingerprint(name, ops):
    lat = lattice.build_named(name, ops)
    return discform.from_lattice(lat).fingerprint()


def check_fingerprints():
    a = _fingerprint("N", [("direct_sum", "II11")])
    b = _fingerprint("E8", [("direct_sum", "D4"), ("rescale", 2), ("direct_sum", "II11")])
    return a == b, {"N+II11": a, "sqrt2(E8+D4)+II11": b}


# -- commands ------------------------------------------------------------------

def cmd_tables(args, cfg):
    name = args.lattice
    report = Report("tables discriminant", {"lattice": name})
    clock = Stopwatch(report.timings)
    ok, data, seconds = check_table(name, TABLE_N_SECONDS if name == "N" else TABLE_K_SECONDS)
    report.timings["orbit_decomposition"] = round(seconds, 3)
    table = clock("table", discform.reference_table, name)
    report.checks["matches_printed_table"] = ok
    report.data = {"table": table.to_json(), "comparison": data}
    report.text = table.to_csv()
    return report


def cmd_series(args, cfg):
    order = Fraction(args.order) if args.order is not None else cfg.series_order
    if order <= 0:
        raise UsageError("--order must be positive")
    report = Report("series", {"which": args.which, "order": str(order)})
    s = Stopwatch(report.timings)("series", compute_series, args.which, order)
    kind, n = parse_which(args.which)
    text = format_series(s)
    report.data = {"series": s.to_json(), "text": text}
    if kind != "chi":
        lo, hi = published.printed_range(kind, n)
        if order > hi:
            bad = published.compare(kind, n, s)
            report.checks["matches_printed_coefficients"] = not bad
            report.data["mismatches"] = [[str(x) for x in m] for m in bad]
    report.text = text + "\n"
    return report


def cmd_assignment(args, cfg):
    report = Report("assignment", {"validate": bool(args.validate)})
    table = discform.reference_table("N")
    amap = discform.CANONICAL_ASSIGNMENT
    report.data = {"assignment": {str(k): v for k, v in sorted(amap.items())}}
    if args.validate:
        chars = modforms.vkplus_characters(GOLDEN_ORDER)
        f = {n + 1: s for n, s in enumerate(chars.f)}
        try:
            a = discform.canonical_assignment(table, f)
            report.checks["fiber_sizes"] = a.report["fiber_sizes_ok"]
            report.checks["exponent_congruence"] = a.report["exponent_congruence_ok"]
            report.checks["six_coarse_classes"] = discform.remark_six_classes(a, table)
            report.data["fiber_sizes"] = {str(k): v for k, v in a.report["fiber_sizes"].items()}
        except discform.ValidationFailed as exc:
            report.checks["valid"] = False
            report.data["error"] = str(exc)
    report.text = "\n".join(f"orbit {k} -> f{v}" for k, v in sorted(amap.items())) + "\n"
    return report


def cmd_weil(args, cfg):
    order = Fraction(args.order) if args.order is not None else max(cfg.series_order, Fraction(WEIL_MIN_ORDER))
    tol = args.tol if args.tol is not None else WEIL_TOL
    report = Report("weil-check", {"order": str(order), "tol": tol})
    ok, data = Stopwatch(report.timings)("weil", check_weil, order, tol)
    report.checks["weil_modularity"] = ok
    report.data = data
    return report


def cmd_lift(args, cfg):
    order = Fraction(args.order) if args.order is not None else Fraction(LIFT_ORDER)
    tol = args.tol if args.tol is not None else LIFT_TOL
    report = Report("lift-check", {"order": str(order), "tol": tol, "exact": bool(args.exact)})
    ok, data = Stopwatch(report.timings)("lift", check_lift, order, tol, args.exact)
    report.checks["lift_decomposition"] = ok
    report.data = data
    return report


def _rho(timings, cap=gkm.DEFAULT_CAP):
    return Stopwatch(timings)("weyl_vector", gkm.weyl_vector_search, cap)


def cmd_roots(args, cfg):
    height = Fraction(args.height) if args.height is not None else (cfg.height_bound or gkm.DEFAULT_CAP)
    report = Report("roots", {"kind": args.kind, "height": str(height)})
    rho = _rho(report.timings)
    datum = gkm.default_datum()
    clock = Stopwatch(report.timings)
    if args.kind == "simple":
        roots = clock("roots", gkm.simple_real_roots, rho, height, datum)
        frame = gkm.Frame(rho.two_rho, datum.lattice, rho.epsilon)
        report.checks["weyl_vector_condition"] = all(
            gkm.pair(r.key, frame.rho) == -r.norm / 2 for r in roots)
    else:
        frame = gkm.Frame(rho.two_rho, datum.lattice, rho.epsilon)
        allr = clock("roots", gkm.positive_roots, frame, datum, height, cfg.workers)
        roots = [r for r in allr if r.kind.startswith("real")]
    report.checks["multiplicity_one"] = all(r.mult == 1 for r in roots)
    report.data = {"two_rho": list(rho.two_rho), "n_roots": len(roots),
                   "roots": [gkm.root_json(r) for r in roots]}
    return report


def cmd_weyl(args, cfg):
    cap = Fraction(args.cap) if args.cap is not None else gkm.DEFAULT_CAP
    report = Report("weyl-vector", {"cap": str(cap)})
    rho = _rho(report.timings, cap)
    report.checks["certified"] = True
    report.checks["enough_simple_roots"] = len(rho.simple_roots) >= MIN_SIMPLE_ROOTS
    report.data = rho.to_json()
    return report


def cmd_denominator(args, cfg):
    height = Fraction(args.height) if args.height is not None else cfg.height_bound
    report = Report("denominator-check", {"height": None if height is None else str(height)})
    rho = _rho(report.timings)
    ok, data, seconds = check_denominator(rho, height, cfg.workers)
    report.timings["denominator"] = round(seconds, 3)
    report.checks["denominator_identity"] = ok
    report.data = data
    return report


# -- the full suite ------------------------------------------------------------

CRITERIA = (
    "01_table1", "02_table2", "03_character_golden", "04_chi_v_self_duality",
    "05_gauss_sum_signature", "06_root_multiplicities", "07_weyl_vector_certificate",
    "08_denominator_identity", "09_weil_modularity", "10_lift_decomposition",
    "11_genus_fingerprint", "12_determinism",
)


def reset_memo():
    """Drop in-process memo tables so a second pass recomputes from scratch."""
    discform.reference_table.cache_clear()
    modforms._characters.cache_clear()
    gkm._DEFAULT.clear()


def run_criteria(cfg, timings):
    """Criteria 1 to 11; returns (checks, data)."""
    clock = Stopwatch(timings)
    checks, data = {}, {}

    def put(name, result):
        checks[name], data[name] = result[0], result[1]
        if len(result) > 2:
            timings[name] = round(result[2], 3)

    put("01_table1", check_table("N", TABLE_N_SECONDS))
    put("02_table2", check_table("K", TABLE_K_SECONDS))
    put("03_character_golden", clock("03_character_golden", check_characters))
    put("04_chi_v_self_duality", clock("04_chi_v_self_duality", check_chi))
    put("05_gauss_sum_signature", clock("05_gauss_sum_signature", check_gauss_sum))
    rho = clock("weyl_vector", gkm.weyl_vector_search)
    again = clock("weyl_vector_repeat", gkm.weyl_vector_search)
    put("06_root_multiplicities", clock("06_root_multiplicities", check_multiplicities, rho))
    put("07_weyl_vector_certificate", check_weyl_vector(rho, again))
    put("08_denominator_identity", check_denominator(rho, cfg.height_bound, cfg.workers))
    order = max(cfg.series_order, Fraction(WEIL_MIN_ORDER))
    put("09_weil_modularity", clock("09_weil_modularity", check_weil, order))
    put("10_lift_decomposition", clock("10_lift_decomposition", check_lift_both))
    put("11_genus_fingerprint", clock("11_genus_fingerprint", check_fingerprints))
    return checks, data


def cmd_all(args, cfg):
    report = Report("all", cfg.to_json())
    first_t, second_t = {}, {}
    checks, data = run_criteria(cfg, first_t)
    reset_memo()
    checks2, data2 = run_criteria(cfg, second_t)
    same = dumps([checks, data]) == dumps([checks2, data2])
    checks["12_determinism"] = same
    data["12_determinism"] = {"second_pass_identical": same}
    report.checks = {k: checks[k] for k in CRITERIA}
    report.data = data
    report.timings = {"first_pass": first_t, "second_pass": second_t}
    report.text = "".join(f"{k}: {'PASS' if v else 'FAIL'}\n" for k, v in report.checks.items())
    return report


def cmd_cache(args, cfg):
    if cfg.cache_dir is None:
        raise UsageError(f"no cache directory: use --cache-dir or {cache.ENV_VAR}")
    store = cache.get_cache()
    report = Report("cache", {"action": args.action})
    if args.action == "list":
        report.data = {"directory": store.directory, "entries": store.entries()}
    elif args.action == "clear":
        report.data = {"directory": store.directory, "removed": store.clear()}
    else:
        t = {}
        run_criteria(cfg, t)
        report.timings = t
        report.data = {"directory": store.directory, "entries": len(store.entries())}
    return report


# -- argument parsing ------------------------------------------------------------

class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _common():
    """Global options, accepted before or after the command name."""
    c = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    c.add_argument("--config", default=S, help="flat key=value configuration file")
    c.add_argument("--cache-dir", dest="cache_dir", default=S)
    c.add_argument("--format", dest="output_format", choices=FORMATS, default=S)
    c.add_argument("--series-order", dest="series_order", type=_fraction, default=S)
    c.add_argument("--height-bound", dest="height_bound", type=_fraction, default=S)
    c.add_argument("--workers", type=int, default=S)
    c.add_argument("--no-timings", action="store_true", default=S, help="omit the timings field")
    return c


def build_parser():
    common = _common()
    p = Parser(prog="gkm14", description=__doc__.split("\n\n")[0], parents=[common])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=Parser)
    _add = sub.add_parser
    sub.add_parser = lambda name: _add(name, parents=[common])
    sub.required = True

    t = sub.add_parser("tables")
    t.add_argument("which", choices=["discriminant"])
    t.add_argument("--lattice", choices=["N", "K"], required=True)
    t.set_defaults(run=cmd_tables)

    s = sub.add_parser("series")
    s.add_argument("--which", required=True)
    s.add_argument("--order", type=_fraction)
    s.set_defaults(run=cmd_series)

    a = sub.add_parser("assignment")
    a.add_argument("--validate", action="store_true")
    a.set_defaults(run=cmd_assignment)

    w = sub.add_parser("weil-check")
    w.add_argument("--tol", type=_positive_float)
    w.add_argument("--order", type=_fraction)
    w.set_defaults(run=cmd_weil)

    lc = sub.add_parser("lift-check")
    lc.add_argument("--order", type=_fraction)
    lc.add_argument("--tol", type=_positive_float)
    lc.add_argument("--exact", action="store_true", help="compare in Q(i) instead of numerically")
    lc.set_defaults(run=cmd_lift)

    r = sub.add_parser("roots")
    r.add_argument("--kind", choices=["real", "simple"], required=True)
    r.add_argument("--height", type=_fraction)
    r.set_defaults(run=cmd_roots)

    wv = sub.add_parser("weyl-vector")
    wv.add_argument("--cap", type=_fraction)
    wv.set_defaults(run=cmd_weyl)

    d = sub.add_parser("denominator-check")
    d.add_argument("--height", type=_fraction)
    d.set_defaults(run=cmd_denominator)

    al = sub.add_parser("all")
    al.set_defaults(run=cmd_all)

    c = sub.add_parser("cache")
    c.add_argument("action", choices=["list", "clear", "warm"])
    c.set_defaults(run=cmd_cache)
    return p


def render(report, fmt, timings=True):
    if fmt == "json":
        return dumps(report.to_json(timings))
    if fmt == "text" and report.text is not None:
        return report.text
    if fmt == "csv" and report.command == "tables discriminant":
        return report.text
    lines = ["check,pass"] if fmt == "csv" else []
    sep = "," if fmt == "csv" else ": "
    for k, v in report.checks.items():
        lines.append(f"{k}{sep}{'PASS' if v else 'FAIL' if fmt == 'text' else v}")
    return "\n".join(lines) + "\n"


def _error(kind, message, code):
    sys.stderr.write(dumps({"error": kind, "message": message, "exit_code": code}))
    return code


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        cfg = build_config(args)
    except UsageError as exc:
        return _error("usage", str(exc), EXIT_USAGE)
    if cfg.cache_dir is not None:
        try:
            cache.set_cache_dir(cfg.cache_dir)
        except OSError as exc:
            return _error("io", f"cache directory {cfg.cache_dir}: {exc.strerror}", EXIT_INTERNAL)
    try:
        report = args.run(args, cfg)
    except UsageError as exc:
        return _error("usage", str(exc), EXIT_USAGE)
    except (ValueError, ArithmeticError, LookupError) as exc:
        return _error(type(exc).__name__, str(exc), EXIT_INTERNAL)
    except OSError as exc:
        return _error("io", str(exc), EXIT_INTERNAL)
    sys.stdout.write(render(report, cfg.output_format, not getattr(args, "no_timings", False)))
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
