"""The twelve acceptance criteria, one test each.

Every test records a pass/fail line (printed in the terminal summary) and
asserts the criterion as stated; tolerances and limits are pinned below.
"""

import json
import subprocess
import sys
import time

from gkm14 import discform, gkm, lattice, modforms, published
from gkm14.series import PuiseuxSeries, eisenstein_e4, eta_quotient

TABLE1_SECONDS = 60
TABLE2_SECONDS = 30
DENOMINATOR_SECONDS = 600
CHI_UP_TO = 10                 # chi_V - (j - 744) = 300 through q^10
WEIL_ORDER = 20
WEIL_TOL = 1e-6
LIFT_ORDER = 5
LIFT_TOL = 1e-8
MIN_SIMPLE = 20
MIN_EXPONENTS = 100
MIN_WEYL = 25

TABLE1_SIZES = [1, 1, 2, 990, 990, 132, 1848, 132, 24, 1584, 440, 4096, 440, 1584, 24, 4096]
TABLE2_SIZES = [1, 1, 990, 132, 924, 1024, 1024]

RESULTS = {}


def record(n, name, ok, detail=""):
    RESULTS[n] = (name, bool(ok), detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")


def fresh_table(name):
    """Orbit table computed from scratch (memo bypassed), with its runtime."""
    t = time.perf_counter()
    table = discform.reference_table.__wrapped__(name)
    return table, time.perf_counter() - t


def test_01_table1():
    table, seconds = fresh_table("N")
    mism = published.table_mismatches("N", table)
    ok = table.sizes() == TABLE1_SIZES and not mism and seconds < TABLE1_SECONDS
    record(1, "Table 1", ok, f"{len(table.rows)} orbits, {seconds:.1f} s")
    assert table.sizes() == TABLE1_SIZES
    assert mism == []
    assert seconds < TABLE1_SECONDS


def test_02_table2():
    table, seconds = fresh_table("K")
    mism = published.table_mismatches("K", table)
    ok = table.sizes() == TABLE2_SIZES and not mism and seconds < TABLE2_SECONDS
    record(2, "Table 2", ok, f"{len(table.rows)} orbits, {seconds:.1f} s")
    assert table.sizes() == TABLE2_SIZES
    assert mism == []
    assert seconds < TABLE2_SECONDS


def test_03_character_golden():
    chars = modforms.vkplus_characters(6)
    bad = []
    for kind, series in (("g", chars.g), ("f", chars.f)):
        for n in range(1, 8):
            for e, printed, computed in published.compare(kind, n, series[n - 1]):
                bad.append(f"{kind}{n} at q^{e}: printed {printed}, computed {computed}")
    record(3, "character golden tests", not bad, "; ".join(bad[:3]))
    assert bad == []


def test_04_chi_v_self_duality():
    order = CHI_UP_TO + 1
    chi = modforms.chi_v(order)
    delta = eta_quotient({1: 24}, order + 2)
    j = (eisenstein_e4(order + 1) ** 3 * delta.invert(order=order)).truncate(order)
    diff = (chi - j + 744).truncate(order)
    ok = diff == PuiseuxSeries.monomial(300, 0, trunc=order)
    record(4, "chi_V - (j - 744) = 300", ok, f"through q^{CHI_UP_TO}")
    assert ok


def test_05_gauss_sum_signature():
    fqm = discform.reference_table("N").fqm
    total = [0, 0]
    for i in range(fqm.order):
        k = int(4 * fqm.q(i))
        total[0] += (1, 0, -1, 0)[k]
        total[1] += (0, 1, 0, -1)[k]
    sig = discform.signature_gauss_sum(fqm).signature_mod_8
    ok = total == [-128, 0] and sig == 4
    record(5, "Gauss sum signature", ok, f"sum {total[0]}{total[1]:+d}i, signature {sig} mod 8")
    assert total == [-128, 0]
    assert sig == 4


def test_06_root_multiplicities():
    datum = gkm.default_datum()
    lat = datum.lattice
    bad = []
    for t, keys in gkm.sample_real_roots(lat).items():
        for k in keys:
            if gkm.classify_real_root(k, datum) != gkm.REAL_TYPES[t] or gkm.root_multiplicity(k, datum) != 1:
                bad.append(f"type {t} root {k}")
    rho = gkm.weyl_vector_search(datum=datum)
    m2 = gkm.root_multiplicity(rho.two_rho, datum)
    m4 = gkm.root_multiplicity(gkm.scale(rho.two_rho, 2), datum)
    deep = gkm.ZERO[:12] + (1, -1)
    m300 = gkm.root_multiplicity(deep, datum)
    ok = not bad and m2 == 12 and m4 == 12 and m300 == 300
    record(6, "root multiplicities", ok, f"2rho {m2}, 4rho {m4}, norm -2 class 0 {m300}")
    assert bad == []
    assert (m2, m4) == (12, 12)
    assert gkm.norm(deep) == -2 and lat.in_L(deep) and m300 == 300


def test_07_weyl_vector_certificate():
    rho = gkm.weyl_vector_search()
    gkm._DEFAULT.clear()
    again = gkm.weyl_vector_search()
    lat = gkm.default_datum().lattice
    z = rho.two_rho
    ok = (gkm.norm(z) == 0 and lat.primitive(z) and lat.in_double(z)
          and len(rho.simple_roots) >= MIN_SIMPLE and again.two_rho == z
          and [s.key for s in again.simple_roots] == [s.key for s in rho.simple_roots])
    record(7, "Weyl vector certificate", ok,
           f"{len(rho.simple_roots)} simple roots at height {rho.height_cap}")
    assert gkm.norm(z) == 0
    assert lat.primitive(z)
    assert lat.in_double(z)
    assert len(rho.simple_roots) >= MIN_SIMPLE
    assert again.two_rho == z


def test_08_denominator_identity():
    t = time.perf_counter()
    rep = gkm.denominator_check()
    seconds = time.perf_counter() - t
    ok = (rep.passed and rep.n_exponents_compared >= MIN_EXPONENTS
          and rep.n_weyl_elements >= MIN_WEYL and seconds < DENOMINATOR_SECONDS)
    record(8, "denominator identity", ok,
           f"height {rep.height_bound}, {rep.n_exponents_compared} exponents, "
           f"{rep.n_weyl_elements} Weyl elements, {seconds:.0f} s")
    assert rep.passed, rep.first_mismatch
    assert rep.n_exponents_compared >= MIN_EXPONENTS
    assert rep.n_weyl_elements >= MIN_WEYL
    assert seconds < DENOMINATOR_SECONDS


def test_09_weil_modularity():
    chars = modforms.vkplus_characters(WEIL_ORDER)
    rep = modforms.weil_transform_check(modforms.canonical_form(chars), tol=WEIL_TOL)
    ok = rep["t_covariance"] and rep["s_max_deviation"] <= WEIL_TOL
    record(9, "Weil modularity", ok, f"S deviation {rep['s_max_deviation']:.1e}")
    assert rep["t_covariance"]
    assert rep["s_max_deviation"] <= WEIL_TOL


def test_10_lift_decomposition():
    num = modforms.lift_decomposition_check(LIFT_ORDER, LIFT_TOL, exact=False)
    ex = modforms.lift_decomposition_check(LIFT_ORDER, LIFT_TOL, exact=True)
    ok = num["pass"] and ex["pass"]
    record(10, "lift decomposition", ok,
           f"numeric {num['numeric_max_relative_deviation']:.1e}, exact {ex['pass']}")
    assert num["pass"]
    assert num["numeric_max_relative_deviation"] <= LIFT_TOL
    assert ex["pass"]


def test_11_genus_fingerprint():
    a = discform.from_lattice(lattice.build_named("N", [("direct_sum", "II11")])).fingerprint()
    b = discform.from_lattice(lattice.build_named(
        "E8", [("direct_sum", "D4"), ("rescale", 2), ("direct_sum", "II11")])).fingerprint()
    record(11, "genus fingerprint", a == b, f"order {a['order']}, Gauss sum {a['gauss_sum'][0]}")
    assert a == b


def _all(cache_dir, *extra):
    return subprocess.run([sys.executable, "-m", "gkm14.cli", "--cache-dir", str(cache_dir),
                           *extra], capture_output=True, text=True, timeout=1800)


def test_12_determinism(tmp_path):
    cold = _all(tmp_path, "all", "--no-timings")
    _all(tmp_path, "cache", "clear")
    _all(tmp_path, "cache", "warm")
    warm = _all(tmp_path, "all", "--no-timings")
    rep = json.loads(cold.stdout)
    ok = cold.stdout == warm.stdout and rep["checks"]["12_determinism"]
    record(12, "determinism", ok, "cold run vs cleared and warmed cache")
    assert cold.stdout == warm.stdout
    assert rep["checks"]["12_determinism"]
    assert len(rep["checks"]) == 12
    assert rep["pass"] == all(rep["checks"].values())
    assert cold.returncode == (0 if rep["pass"] else 1)
