"""Theta series, the V_K^+ characters, chi_V and Weil-representation checks."""

from dataclasses import dataclass
from fractions import Fraction
import cmath
import functools
import math

import numpy as np

from . import discform
from .lattice import NotPositiveDefinite, short_vectors
from .series import PuiseuxSeries, eta_quotient, j_invariant

H = Fraction(1, 2)


class FractionalExponentSurvived(ArithmeticError):
    pass


class CheckFailed(AssertionError):
    pass


# -- theta series --------------------------------------------------------------

def _one_dim(a, scale, order, alternating):
    """sum_k (+-1)^k q^{(scale/2)(a+k)^2} below q^order."""
    half = Fraction(scale) / 2
    bound = math.isqrt(int(order / half) + 1) + 2
    terms = {}
    k0 = -math.floor(a)
    for k in range(k0 - bound, k0 + bound + 1):
        e = half * (a + k) ** 2
        if e < order:
            c = -1 if alternating and k % 2 else 1
            terms[e] = terms.get(e, 0) + c
    return PuiseuxSeries.from_exponents(terms, trunc=order)


def _theta_dn_coset(x0, scale, order):
    """Theta series of x0 + D_n (ambient form scale*dot) below q^order."""
    groups = {}
    for x in x0:
        f = x - math.floor(x)
        f = min(f, 1 - f) if f else f
        groups.setdefault(f, []).append(x)
    plain = PuiseuxSeries.monomial(1, 0)
    alt = PuiseuxSeries.monomial(1, 0)
    for f, xs in sorted(groups.items()):
        a = _one_dim(f, scale, order, False)
        plain = plain * a ** len(xs)
        b = _one_dim(f, scale, order, True)
        sign = 1
        for x in xs:
            # B(x + 1) = -B(x) and B(-x) = B(x), so B(x) = +-B(f)
            base = x - f
            if base.denominator != 1:
                base = -x - f
            sign *= -1 if int(base) % 2 else 1
        alt = alt * b ** len(xs) * sign
    return ((plain + alt) * H).truncate(order)


def _product_route_ok(lat):
    st = lat.structure or {}
    return st.get("family") in ("D", "D+") and lat.basis is not None and st.get("n") == len(lat.basis[0])


def theta_series(coset, order, route="auto"):
    """sum over s in coset + L of q^{(s,s)/2}, truncated below q^order."""
    lat = coset.lattice
    order = Fraction(order)
    if order < 0:
        raise ValueError("order must be nonnegative")
    if route == "auto":
        route = "product" if _product_route_ok(lat) else "enumerate"
    if route == "product":
        if not _product_route_ok(lat):
            raise ValueError("product route needs a D_n or D_n^+ lattice")
        st = lat.structure
        x0 = lat.to_ambient(coset.coords)
        out = _theta_dn_coset(x0, st["scale"], order)
        if st["family"] == "D+":
            out = out + _theta_dn_coset([x + H for x in x0], st["scale"], order)
        return out
    if route != "enumerate":
        raise ValueError(f"unknown route {route!r}")
    if not lat.is_positive_definite():
        raise NotPositiveDefinite(f"{lat.name} is not positive definite")
    rpt = short_vectors(coset, 2 * order)
    terms = {n / 2: c for n, c in rpt.counts.items() if n / 2 < order}
    return PuiseuxSeries.from_exponents(terms, trunc=order)


# -- characters ----------------------------------------------------------------

@dataclass
class CharacterTable:
    g: list
    f: list
    assignment: object
    order: Fraction

    def to_json(self):
        return {
            "order": str(self.order),
            "g": [s.to_json() for s in self.g],
            "f": [s.to_json() for s in self.f],
            "assignment": {str(k): v for k, v in sorted(self.assignment.map.items())},
        }


def k_orbit_coset(n):
    k = discform.reference_table("K")
    lat = k.fqm.lattice
    return lat.coset_from_ambient(discform.TABLE2_REPRESENTATIVES[n - 1])


@functools.lru_cache(maxsize=None)
def _characters(order):
    inner = order + H
    eta_m12 = eta_quotient({1: -12}, inner)
    theta_k = theta_series(k_orbit_coset(1), inner + H)
    twist = eta_quotient({1: 12, 2: -12}, inner + 1)
    g = [None] * 7
    g[0] = ((theta_k * eta_m12 + twist) * H).truncate(inner)
    g[1] = ((theta_k * eta_m12 - twist) * H).truncate(inner)
    for n in (3, 4, 5):
        th = theta_series(k_orbit_coset(n), inner + H)
        g[n - 1] = (th * eta_m12 * H).truncate(inner)
    a = eta_quotient({1: 12, H: -12}, inner + 1)
    b = eta_quotient({2: 12, H: 12, 1: -24}, inner + 1)
    g[5] = ((a - b) * H).truncate(inner)
    g[6] = ((a + b) * H).truncate(inner)
    f = [(gn * eta_m12).truncate(order) for gn in g]
    return [gn.truncate(order) for gn in g], f


def vkplus_characters(order=10):
    """g_1..g_7 and f_n = g_n / eta^12, exact below q^order."""
    order = Fraction(order)
    g, f = _characters(order)
    table = discform.reference_table("N")
    assignment = discform.canonical_assignment(table, {n + 1: fn for n, fn in enumerate(f)})
    return CharacterTable(list(g), list(f), assignment, order)


def f_series(chars, n):
    return chars.f[n - 1]


# -- chi_V ---------------------------------------------------------------------

def orbit_theta(number, order):
    """theta series of the Table 1 representative coset of orbit ``number``."""
    table = discform.reference_table("N")
    row = table.rows[number - 1]
    return theta_series(row.representative, order)


def chi_v(order=10, chars=None, assignment=None):
    """sum over gamma in N'/N of f_gamma theta_gamma, below q^order."""
    order = Fraction(order)
    if chars is None:
        chars = vkplus_characters(order)
    if assignment is None:
        assignment = chars.assignment.map
    table = discform.reference_table("N")
    total = PuiseuxSeries.zero()
    for row in table.rows:
        f = chars.f[assignment[row.number] - 1]
        th = orbit_theta(row.number, order + 1)
        total = total + f * th * row.size
    total = total.truncate(order)
    bad = [e for e in total.exponents() if e.denominator != 1]
    if bad:
        raise FractionalExponentSurvived(f"non-integral exponents survive, first {bad[0]}")
    return total


def chi_v_check(order=10):
    chi = chi_v(order)
    diff = chi - j_invariant(order) + 744
    ok = diff.truncate(order) == PuiseuxSeries.monomial(300, 0, trunc=order)
    return {
        "order": str(Fraction(order)),
        "constant": str(chi.coeff(0)),
        "coefficients": [[str(e), str(c)] for e, c in chi.items()],
        "pass": bool(ok),
    }


# -- vector valued forms and the Weil representation ---------------------------

@dataclass
class VectorValuedForm:
    """Components indexed by Table 1 orbit number."""
    components: dict
    weight: Fraction = Fraction(-6)

    def element_values(self, table, fn):
        """Array over all elements of fn(component of the element's orbit)."""
        vals = {o: fn(s) for o, s in self.components.items()}
        return np.array([vals[table.orbit_of(i)] for i in range(table.fqm.order)])


def canonical_form(chars, assignment=None):
    assignment = assignment or chars.assignment.map
    return VectorValuedForm({o: chars.f[n - 1] for o, n in assignment.items()})


class WeilRep:
    """(Dual) Weil representation on C[A] for a finite quadratic module.

    rho(T) e_g = e(eps q(g)) e_g and
    rho(S) e_g = e(-eps sig/8)/sqrt|A| sum_d e(-eps (g,d)) e_d,
    eps = +1 for the Weil representation and -1 for its dual.
    """

    def __init__(self, fqm, dual=False):
        self.fqm = fqm
        self.dual = dual
        self.eps = -1 if dual else 1
        self.signature = discform.signature_gauss_sum(fqm).signature_mod_8
        self.scalar = cmath.exp(-2j * math.pi * self.eps * self.signature / 8) / math.sqrt(fqm.order)
        fac = fqm._fac
        pair = (fqm.elements @ fqm._bmat) % fqm.level_den
        w = (pair * fac) // fqm.level_den if len(fac) else pair
        if len(fac) and np.any((pair * fac) % fqm.level_den):
            raise ValueError("generator pairing inconsistent with invariant factors")
        self._freq = fqm.index(w) if len(fac) else np.zeros(1, dtype=np.int64)
        self._freq_neg = fqm.index(-w) if len(fac) else np.zeros(1, dtype=np.int64)

    def T_phase(self, i):
        q = self.fqm.q(i)
        return (self.eps * q) % 1

    def apply_T(self, v, power=1):
        ph = np.exp(2j * math.pi * self.eps * power * self.fqm.qnum / self.fqm.level_den)
        return ph.reshape((-1,) + (1,) * (v.ndim - 1)) * v

    def _fourier(self, v, sign):
        shape = tuple(self.fqm.factors) or (1,)
        arr = v.reshape(shape + v.shape[1:])
        axes = tuple(range(len(shape)))
        hat = np.fft.fftn(arr, axes=axes).reshape(v.shape)
        # hat[w] = sum_d v_d e(-(w . d)); (g, d) = w(g) . d
        return hat[self._freq if sign < 0 else self._freq_neg]

    def apply_S(self, v):
        v = np.asarray(v, dtype=complex)
        return self.scalar * self._fourier(v, -self.eps)

    def apply_S_inv(self, v):
        v = np.asarray(v, dtype=complex)
        return np.conj(self.scalar) * self._fourier(v, self.eps)

    def S_matrix(self, max_order=1024):
        if self.fqm.order > max_order:
            raise discform.TooLarge("dense S matrix only for small modules")
        return self.apply_S(np.eye(self.fqm.order, dtype=complex))

    def T_matrix(self):
        return np.diag(self.apply_T(np.ones(self.fqm.order, dtype=complex)))


def exponent_congruence(form, table, eps=1):
    """Exponents of each component lie in -eps*q(orbit) + Z."""
    bad = []
    for row in table.rows:
        for e in form.components[row.number].exponents():
            if (e + eps * row.q).denominator != 1:
                bad.append({"orbit": row.number, "exponent": str(e)})
                break
    return bad


def weil_transform_check(form, tol=1e-6, dual=None):
    """T-covariance (exact) and S-covariance at tau = i (numeric).

    With ``dual`` None both conventions are tried and the passing one is
    reported; they agree for forms invariant under negation.
    """
    table = discform.reference_table("N")
    fqm = table.fqm
    bad = exponent_congruence(form, table)
    tau = 1j
    vals = form.element_values(table, lambda s: s.evaluate(tau))
    results = {}
    for flag in ((False, True) if dual is None else (dual,)):
        rho = WeilRep(fqm, dual=flag)
        dev = np.max(np.abs(rho.apply_S(vals) + vals)) if vals.size else 0.0
        results[flag] = float(dev)
    flag = min(results, key=results.get)
    dev = results[flag]
    report = {
        "t_covariance": not bad,
        "t_violations": bad,
        "s_max_deviation": dev,
        "tol": tol,
        "dual": flag,
        "pass": (not bad) and dev <= tol,
    }
    return report


# -- lift decomposition --------------------------------------------------------

class NumSeries:
    """Finite q-series with complex coefficients keyed by rational exponents."""

    def __init__(self, terms=None):
        self.terms = {Fraction(e): complex(c) for e, c in (terms or {}).items()}

    @classmethod
    def from_puiseux(cls, s):
        return cls({e: float(c) for e, c in s.items()})

    def twist(self, j):
        """f(tau + j)."""
        return NumSeries({e: c * cmath.exp(2j * math.pi * float(e * j)) for e, c in self.terms.items()})

    def scale(self, c):
        return NumSeries({e: c * v for e, v in self.terms.items()})

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return NumSeries(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def coeff(self, e):
        return self.terms.get(Fraction(e), 0j)

    def max_abs(self, below):
        return max((abs(c) for e, c in self.terms.items() if e < below), default=0.0)


# coset representatives of Gamma_0(4) in SL_2(Z): 1, S, ST, ST^2, ST^3, ST^2S
GAMMA0_4_REPS = ("1", "S", "ST", "ST2", "ST3", "ST2S")


def _h_slashes(order):
    """h = 1/eta(2 tau)^12 slashed (weight -6) by the coset representatives.

    h|S = -64 u with u = 1/eta(tau/2)^12, h|ST^j = -64 u(tau + j) and
    h|ST^2S = -h.
    """
    h = NumSeries.from_puiseux(eta_quotient({2: -12}, order))
    u = NumSeries.from_puiseux(eta_quotient({H: -12}, order)).scale(-64)
    return {"1": h, "S": u, "ST": u.twist(1), "ST2": u.twist(2), "ST3": u.twist(3),
            "ST2S": h.scale(-1)}


def _weil_images(rho, v):
    """rho(M^{-1}) v for the coset representatives M."""
    s_inv = rho.apply_S_inv(v)
    return {
        "1": v,
        "S": s_inv,
        "ST": rho.apply_T(s_inv, -1),
        "ST2": rho.apply_T(s_inv, -2),
        "ST3": rho.apply_T(s_inv, -3),
        "ST2S": rho.apply_S_inv(rho.apply_T(s_inv, -2)),
    }


def lift(rho, vector, order):
    """Components (over all elements) of sum_M (h|M) rho(M^{-1}) vector."""
    slashes = _h_slashes(order)
    images = _weil_images(rho, np.asarray(vector, dtype=complex))
    return [(slashes[m], images[m]) for m in GAMMA0_4_REPS]


def lift_component(parts, i, magnitude=False):
    """Component i of a lift; with ``magnitude`` the sum of absolute values
    of the contributing terms (the scale that bounds rounding error)."""
    total = NumSeries()
    for series, vec in parts:
        c = vec[i]
        if abs(c) > 1e-14:
            if magnitude:
                total = total + NumSeries({e: abs(v * c) for e, v in series.terms.items()})
            else:
                total = total + series.scale(c)
    return total


def h_class_index(table):
    """Element index of the Table 1 orbit-2 class (the nontrivial element of H)."""
    return int(table.members(2)[0])


def phi_matrix():
    """Images u_i of e_i under H^perp/H -> K'/K, in the coordinates y = 2x.

    u_i = (1/2)^12 with entries i and 12 negated (i < 12), u_12 = (1/2)^12.
    """
    rows = []
    for i in range(12):
        u = [H] * 12
        if i < 11:
            u[i] = -H
            u[11] = -H
        rows.append(u)
    return rows


def phi_k_orbits():
    """For each element of N'/N in H^perp, the Table 2 orbit of its image
    under phi; -1 outside H^perp."""
    ntab = discform.reference_table("N")
    ktab = discform.reference_table("K")
    nf, kf = ntab.fqm, ktab.fqm
    nlat, klat = nf.lattice, kf.lattice
    # y = 2x coordinates of the N generators, times 2 to make them integral
    y2 = np.array([[int(4 * x) for x in nlat.to_ambient(g.coords)] for g in nf.generators],
                  dtype=np.int64)
    y2_all = nf.elements @ y2
    h = h_class_index(ntab)
    hperp = np.array([nf.bilinear(i, h) == 0 for i in range(nf.order)]) if nf.order <= 4096 else None
    if hperp is None:
        row = nf.pairing_matrix([h])[0]
        hperp = row == 0
    # class in K'/K of phi(e_i): x = u_i / 2
    data = klat.discriminant()
    img = []
    for u in phi_matrix():
        coords = klat.from_ambient([c / 2 for c in u])
        img.append(data.classify(coords))
    img = np.array(img, dtype=np.int64)
    out = np.full(nf.order, -1, dtype=np.int64)
    sel = np.nonzero(hperp)[0]
    ys = y2_all[sel]
    if np.any(ys % 2):
        raise CheckFailed("H-perp element without an integral lift")
    ys = ys // 2
    kidx = kf.index(ys @ img)
    korb = np.array([ktab.orbit_of(int(k)) for k in range(kf.order)])
    out[sel] = korb[kidx]
    return out


def phi_check():
    """phi is an anti-isometry onto K'/K that sends the character-n orbits
    of N'/N inside H^perp to Table 2 orbit n (the class h goes to orbit 1)."""
    ntab = discform.reference_table("N")
    ktab = discform.reference_table("K")
    korbs = phi_k_orbits()
    nf = ntab.fqm
    report = {"orbit_images": {}, "pass": True}
    for row in ntab.rows:
        members = ntab.members(row.number)
        imgs = set(korbs[members].tolist())
        report["orbit_images"][row.number] = sorted(imgs)
        if imgs == {-1}:
            continue
        if len(imgs) != 1:
            report["pass"] = False
            continue
        # h itself lies in H, so it maps to the zero class like 0 does
        n = 1 if row.number == 2 else discform.CANONICAL_ASSIGNMENT[row.number]
        k = imgs.pop()
        if k != n or (ktab.rows[k - 1].q + row.q) % 1 != 0:
            report["pass"] = False
    report["hperp_size"] = int(np.sum(korbs >= 0))
    report["pass"] = report["pass"] and report["hperp_size"] == nf.order // 2
    report["pass"] = report["pass"] and len(set(korbs[korbs >= 0].tolist())) == len(ktab.rows)
    return report


def f_k_components(order):
    """F_K at each Table 1 orbit: theta_{phi(g)+K}/(2 Delta) on H^perp, 0 elsewhere."""
    ntab = discform.reference_table("N")
    korbs = phi_k_orbits()
    inv_delta = eta_quotient({1: -24}, order)
    out = {}
    for row in ntab.rows:
        k = int(korbs[row.element])
        if k < 0:
            out[row.number] = PuiseuxSeries.zero(trunc=order)
        else:
            th = theta_series(k_orbit_coset(k), order + 1)
            out[row.number] = (th * inv_delta * H).truncate(order)
    return out


class GaussSeries:
    """q-series with coefficients in Q(i), stored as real and imaginary parts."""

    def __init__(self, re, im=None):
        self.re = re
        self.im = im if im is not None else PuiseuxSeries.zero(trunc=re.trunc)

    def scale(self, x, y=0):
        """Multiply by x + iy (rationals)."""
        return GaussSeries(self.re * x - self.im * y, self.im * x + self.re * y)

    def twist(self, j):
        """f(tau + j); needs 4*j*exponent integral for an exact phase."""
        parts = [{}, {}]
        for src, sign_im in ((self.re, 0), (self.im, 1)):
            for e, c in src.items():
                k = 4 * e * j
                if k.denominator != 1:
                    raise ValueError("twist phase is not a fourth root of unity")
                k = (int(k) + sign_im) % 4
                # i^k * c: k = 0 -> re, 1 -> im, 2 -> -re, 3 -> -im
                target = parts[k % 2]
                target[e] = target.get(e, 0) + (c if k < 2 else -c)
        trunc = self.re.trunc
        return GaussSeries(PuiseuxSeries.from_exponents(parts[0], trunc),
                           PuiseuxSeries.from_exponents(parts[1], trunc))

    def __add__(self, other):
        return GaussSeries(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return GaussSeries(self.re - other.re, self.im - other.im)

    def truncate(self, order):
        return GaussSeries(self.re.truncate(order), self.im.truncate(order))

    def is_zero(self):
        return self.re.is_zero() and self.im.is_zero()

    def coeff(self, e):
        return complex(self.re.coeff(e), self.im.coeff(e))


def snap_gaussian(z, den, tol=1e-7):
    """Nearest point of (1/den) Z[i]; raise if z is not close to one."""
    re = round(z.real * den)
    im = round(z.imag * den)
    if abs(z - complex(re, im) / den) * den > tol:
        raise CheckFailed(f"value {z} is not in (1/{den})Z[i]")
    return Fraction(re, den), Fraction(im, den)


def _exact_slashes(order):
    h = GaussSeries(eta_quotient({2: -12}, order))
    u = GaussSeries(eta_quotient({H: -12}, order)).scale(-64)
    return {"1": h, "S": u, "ST": u.twist(1), "ST2": u.twist(2), "ST3": u.twist(3),
            "ST2S": h.scale(-1)}


def exact_lift_components(rho, vector, order, elements):
    """Exact lift components at the given element indices."""
    images = _weil_images(rho, np.asarray(vector, dtype=complex))
    slashes = _exact_slashes(order)
    den = rho.fqm.order
    out = {}
    for i in elements:
        total = GaussSeries(PuiseuxSeries.zero(trunc=order))
        for m in GAMMA0_4_REPS:
            x, y = snap_gaussian(images[m][i], den)
            if x or y:
                total = total + slashes[m].scale(x, y)
        out[i] = total.truncate(order)
    return out


def lift_decomposition_check(order=5, tol=1e-8, chars=None, exact=True):
    """F = F_K + a L_0 + b L_H with L_X the Gamma_0(4) lift of h on e_X.

    The lift of g on an isotropic subgroup X is
    sum over M in Gamma_0(4) backslash SL_2(Z) of (g|M) rho(M^{-1}) e_X, with
    e_X the sum of e_x over X.  a and b are pinned from the q^{-1}
    coefficients at the classes 0 and h; every component below q^order is
    then compared, numerically within ``tol`` or exactly in Q(i).
    """
    order = Fraction(order)
    ntab = discform.reference_table("N")
    nf = ntab.fqm
    if chars is None:
        chars = vkplus_characters(max(order, Fraction(6)))
    f = {o: chars.f[n - 1].truncate(order) for o, n in chars.assignment.map.items()}
    pre = (chars.f[0] - chars.f[1]).truncate(order)
    h_exact = eta_quotient({2: -12}, order)
    precheck = pre == h_exact.truncate(order)
    fk = f_k_components(order)
    rho = WeilRep(nf, dual=True)
    e0 = np.zeros(nf.order)
    e0[0] = 1
    hidx = h_class_index(ntab)
    eh = e0.copy()
    eh[hidx] = 1
    reps = {row.number: row.element for row in ntab.rows}
    l0 = lift(rho, e0, order)
    lh = lift(rho, eh, order)
    l0c = {o: lift_component(l0, i) for o, i in reps.items()}
    lhc = {o: lift_component(lh, i) for o, i in reps.items()}
    # principal parts at q^{-1}: classes 0 (orbit 1) and h (orbit 2)
    target = np.array([complex((f[1] - fk[1]).coeff(-1)), complex((f[2] - fk[2]).coeff(-1))])
    mat = np.array([[l0c[1].coeff(-1), lhc[1].coeff(-1)], [l0c[2].coeff(-1), lhc[2].coeff(-1)]])
    a, b = np.linalg.solve(mat, target)
    a_q = Fraction(a.real).limit_denominator(1024)
    b_q = Fraction(b.real).limit_denominator(1024)
    mag0 = {o: lift_component(l0, i, True) for o, i in reps.items()}
    magh = {o: lift_component(lh, i, True) for o, i in reps.items()}
    worst = 0.0
    first = None
    for o in sorted(reps):
        lhs = NumSeries.from_puiseux(f[o] - fk[o])
        diff = lhs - l0c[o].scale(a) - lhc[o].scale(b)
        for e in sorted(diff.terms):
            if e >= order:
                continue
            # doubles resolve ~1e-16 of the largest contributing term, so the
            # deviation is measured relative to the coefficient size
            scale = max(1.0, abs(lhs.coeff(e)), abs(a) * mag0[o].coeff(e).real,
                        abs(b) * magh[o].coeff(e).real)
            d = abs(diff.terms[e]) / scale
            worst = max(worst, d)
            if not exact and d > tol and first is None:
                first = {"orbit": o, "exponent": str(e), "deviation": d}
    report = {
        "order": str(order),
        "mode": "exact" if exact else "numeric",
        "cosets": list(GAMMA0_4_REPS),
        "precheck_f1_minus_f2_equals_h": bool(precheck),
        "a": str(a_q),
        "b": str(b_q),
        "numeric_max_relative_deviation": worst,
        "tol": tol,
    }
    if exact:
        if abs(a - float(a_q)) > 1e-9 or abs(b - float(b_q)) > 1e-9:
            first = {"orbit": 1, "exponent": "-1", "deviation": "normalization not rational"}
        else:
            ex0 = exact_lift_components(rho, e0, order, reps.values())
            exh = exact_lift_components(rho, eh, order, reps.values())
            for o, i in sorted(reps.items()):
                lhs = GaussSeries(f[o] - fk[o])
                rhs = ex0[i].scale(a_q) + exh[i].scale(b_q)
                diff = (lhs - rhs).truncate(order)
                if not diff.is_zero():
                    exps = sorted(set(diff.re.exponents()) | set(diff.im.exponents()))
                    first = {"orbit": o, "exponent": str(exps[0]),
                             "deviation": str(diff.coeff(exps[0]))}
                    break
    report["pass"] = bool(precheck and first is None)
    if first is not None:
        report["first_mismatch"] = first
    return report
