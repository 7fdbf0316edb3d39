"""The Lorentzian root lattice L' = N' + II_{1,1} of the Lie algebra.

Vectors of L' are stored as integer 14-tuples ``(X_1..X_12, m, n)`` where
``X = 4x`` for the N'-part ``x`` (ambient coordinates of N = sqrt(2)*D12,
form ``2*dot``) and ``(m, n)`` are the II_{1,1} coordinates with
``(e, f) = 1``.  In these keys ``8*(a, b) = X.Y + 8*(m n' + n m')``.

Root multiplicities come from the f-series attached to the discriminant
class of a vector.  The Weyl vector is found among norm 0 lifts of Weyl
vectors of the finite real-root system of N', certified by enumerating
real roots, and the denominator identity is checked on a height-truncated
window of the positive cone.
"""

import itertools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import discform, intmat, kernels, modforms

RANK = 14
ZERO = (0,) * RANK
CARTAN_DIM = 14
DEFAULT_EPSILON = Fraction(3, 16)
DEFAULT_CAP = Fraction(1, 2)
HEIGHT_GRID = Fraction(1, 16)
MIN_EXPONENTS = 100
MIN_WEYL = 25

REAL_TYPES = {1: "real_type_1", 2: "real_type_2", 3: "real_type_3"}


class TruncationExceeded(ArithmeticError):
    """A multiplicity needs a deeper character table than the one supplied."""


class NotRealRoot(ValueError):
    pass


class NotInLattice(ValueError):
    pass


class NotFound(LookupError):
    """No Weyl vector among the candidates within the certification cap."""


class ClosureNotCertified(RuntimeError):
    pass


# -- exact arithmetic on keys ---------------------------------------------------

def pair8(a, b):
    """8 times the inner product (exact for int or Fraction entries)."""
    s = 0
    for i in range(12):
        if a[i] and b[i]:
            s += a[i] * b[i]
    return s + 8 * (a[12] * b[13] + a[13] * b[12])


def pair(a, b):
    return Fraction(pair8(a, b)) / 8


def norm(a):
    return pair(a, a)


def add(a, b, k=1):
    return tuple(x + k * y for x, y in zip(a, b))


def scale(a, k):
    return tuple(k * x for x in a)


def neg(a):
    return tuple(-x for x in a)


def key_from_ambient(x, m=0, n=0):
    """Key of the vector with N'-part ``x`` (ambient coordinates) and II part (m, n)."""
    out = [Fraction(4) * Fraction(t) for t in x] + [Fraction(m), Fraction(n)]
    if any(t.denominator != 1 for t in out):
        raise NotInLattice(f"{x}, {m}, {n} is not in L'")
    return tuple(int(t) for t in out)


def key_to_ambient(key):
    return [Fraction(t, 4) for t in key[:12]], key[12], key[13]


def _as_key(v):
    v = tuple(Fraction(t) for t in v)
    if len(v) != RANK:
        raise ValueError(f"expected {RANK} coordinates, got {len(v)}")
    if any(t.denominator != 1 for t in v):
        raise NotInLattice(f"{v} has non-integral key coordinates")
    return tuple(int(t) for t in v)


# -- the lattice L' ------------------------------------------------------------

# basis of L': (1/2)e_1..(1/2)e_11, (1/4,...,1/4), e, f
BASIS = tuple(
    [tuple(2 * (j == i) for j in range(12)) + (0, 0) for i in range(11)]
    + [(1,) * 12 + (0, 0), ZERO[:12] + (1, 0), ZERO[:12] + (0, 1)]
)


class RootLattice:
    """L' = N' + II_{1,1} with the discriminant class map of L = N + II_{1,1}.

    ``height_vector`` (optional) is a vector ``t0`` of negative norm; the
    height of ``x`` is ``-(x, t0)``.  Ties at height 0 are broken by the
    lexicographic order of keys.
    """

    def __init__(self, height_vector=None):
        self.table = discform.reference_table("N")
        self.fqm = self.table.fqm
        lat = self.fqm.lattice
        data = lat.discriminant()
        binv = intmat.inverse([list(r) for r in BASIS])
        den = math.lcm(*(t.denominator for r in binv for t in r))
        self._den = den
        self._binv = np.array([[int(t * den) for t in r] for r in binv], dtype=np.int64)
        nbasis = [key_to_ambient(b)[0] for b in BASIS[:12]]
        self._ccls = np.array([data.classify(lat.from_ambient(x)) for x in nbasis], dtype=np.int64)
        orbit = [0] * self.fqm.order
        for row in self.table.rows:
            for i in self.table.members(row.number):
                orbit[i] = row.number
        self._orbit = orbit
        self._char_of_class = np.array([discform.CANONICAL_ASSIGNMENT[o] for o in orbit], dtype=np.int64)
        self._doubles = frozenset(self.fqm.add(i, i) for i in range(self.fqm.order))
        self.height_vector = None if height_vector is None else tuple(Fraction(t) for t in height_vector)
        if self.height_vector is not None and norm(self.height_vector) >= 0:
            raise ValueError("height vector must have negative norm")

    signature = (13, 1)

    def coords(self, key):
        """Integer coordinates over ``BASIS`` (raises NotInLattice)."""
        c = np.asarray(key, dtype=np.int64) @ self._binv
        if np.any(c % self._den):
            raise NotInLattice(f"{key} is not in L'")
        return tuple(int(t) for t in c // self._den)

    def contains(self, key):
        try:
            self.coords(key)
        except NotInLattice:
            return False
        return True

    def class_index(self, key):
        c = np.asarray(self.coords(key)[:12], dtype=np.int64)
        return int(self.fqm.index(c @ self._ccls))

    def class_indices(self, keys):
        """Vectorized ``class_index`` for an (n, 14) integer array."""
        keys = np.asarray(keys, dtype=np.int64).reshape(-1, RANK)
        c = keys @ self._binv
        if np.any(c % self._den):
            raise NotInLattice("some vectors are not in L'")
        c //= self._den
        return np.asarray(self.fqm.index(c[:, :12] @ self._ccls), dtype=np.int64).reshape(-1)

    def characters(self, keys):
        idx = self.class_indices(keys)
        return self._char_of_class[idx]

    def in_L(self, key):
        return self.class_index(key) == 0

    def orbit(self, key):
        """Table 1 orbit number of the class of ``key``."""
        return self._orbit[self.class_index(key)]

    def character(self, key):
        return discform.CANONICAL_ASSIGNMENT[self.orbit(key)]

    def in_double(self, key):
        """Whether the class of ``key`` lies in 2(L'/L)."""
        return self.class_index(key) in self._doubles

    def primitive(self, key):
        return math.gcd(*self.coords(key)) == 1

    def height(self, key):
        if self.height_vector is None:
            raise ValueError("no height vector set")
        return -pair(key, self.height_vector)

    def positive(self, key):
        h = self.height(key)
        if h:
            return h > 0
        return next((t > 0 for t in key if t), False)


# -- multiplicities ------------------------------------------------------------

class RootDatum:
    """mult(alpha) = [f_{class(alpha)}](-alpha^2/2) for nonzero alpha in L'."""

    cartan_dim = CARTAN_DIM

    def __init__(self, lattice=None, order=4, chars=None):
        self.lattice = lattice or RootLattice()
        self.chars = chars or modforms.vkplus_characters(order)
        self.order = Fraction(self.chars.order)

    def mult_from(self, character, nrm):
        e = -Fraction(nrm) / 2
        if e >= self.order:
            raise TruncationExceeded(f"q^{e} needs a character table beyond order {self.order}")
        return int(self.chars.f[character - 1].coeff(e))

    def mult(self, key):
        key = _as_key(key)
        if key == ZERO:
            raise ValueError("multiplicity of the zero vector is the Cartan dimension")
        return self.mult_from(self.lattice.character(key), norm(key))


_DEFAULT = {}


def default_datum(order=4):
    d = _DEFAULT.get("datum")
    if d is None or d.order < order:
        d = RootDatum(order=max(order, 4))
        _DEFAULT["datum"] = d
    return d


def root_multiplicity(alpha, datum=None):
    alpha = _as_key(alpha)
    if datum is None:
        datum = default_datum(max(4, math.ceil(-norm(alpha) / 2) + 1))
    return datum.mult(alpha)


def real_root_type(key, lattice):
    """1, 2 or 3 for the three kinds of real roots, else None."""
    r = norm(key)
    if r == Fraction(1, 2):
        return 3
    if r == 1 and lattice.character(key) == 4:
        return 2
    if r == 2 and lattice.in_L(key):
        return 1
    return None


def classify_real_root(alpha, datum=None):
    alpha = _as_key(alpha)
    if datum is None:
        datum = default_datum()
    lat = datum.lattice
    lat.coords(alpha)
    if alpha == ZERO:
        return "not_root"
    t = real_root_type(alpha, lat)
    if t is not None:
        return REAL_TYPES[t]
    if norm(alpha) <= 0 and root_multiplicity(alpha, None if -norm(alpha) / 2 >= datum.order else datum) > 0:
        return "imaginary"
    return "not_root"


def reflect(alpha, x, lattice=None):
    """x - 2(x, alpha)/alpha^2 * alpha for a real root alpha."""
    lattice = lattice or default_datum().lattice
    alpha = _as_key(alpha)
    if real_root_type(alpha, lattice) is None:
        raise NotRealRoot(f"{alpha} is not a real root")
    x = tuple(Fraction(t) for t in x)
    k = 2 * pair(x, alpha) / norm(alpha)
    return tuple(a - k * b for a, b in zip(x, alpha))


# -- frames adapted to a norm 0 vector -------------------------------------------

class Frame:
    """Coordinates adapted to a primitive norm 0 vector ``z = 2 rho``.

    Every vector of L' is ``alpha = c*alpha0 + sum k_i w_i + m z`` where
    ``alpha0`` is a norm 1/2 vector with ``(alpha0, rho) = -1/4`` (when one
    exists) and the ``w_i`` span ``z^perp / z``.  With
    ``rho* = 4(alpha0 + rho)`` (norm 0, ``(rho, rho*) = -1``) we write
    ``alpha = a rho* + b rho + v`` with ``a = -(alpha, rho) = c/4``,
    ``b = -(alpha, rho*)`` and ``v`` in the span of the ``w_i``; then
    ``v^2 = k.P.k`` and ``alpha^2 = v^2 - 2ab``.  Heights are
    ``h = a + epsilon*b``, i.e. ``t0 = rho + epsilon*rho*``.
    """

    def __init__(self, z, lattice, epsilon=DEFAULT_EPSILON):
        self.z = _as_key(z)
        self.lattice = lattice
        self.epsilon = Fraction(epsilon)
        if norm(self.z) != 0:
            raise ValueError("z must have norm 0")
        self.rho = tuple(Fraction(t, 2) for t in self.z)
        fn = [pair8(b, self.z) for b in BASIS]
        g = math.gcd(*fn)
        self.step = Fraction(g, 16)  # (L', rho) = step * Z
        fn = [t // g for t in fn]
        x0c, kern = intmat.solve_integer_functional(fn)
        x0 = tuple(intmat.vecmat(x0c, [list(b) for b in BASIS]))
        kern = [tuple(intmat.vecmat(r, [list(b) for b in BASIS])) for r in kern]
        # split z off the kernel
        w = intmat.solve_rational([list(r) for r in kern], list(self.z))
        w = [int(t) for t in w]
        _, _, v = intmat.smith_normal_form([w] + [[0] * 13 for _ in range(12)])
        vinv = [[int(t) for t in r] for r in intmat.inverse(v)]
        rows = [tuple(sum(vinv[r][j] * kern[j][i] for j in range(13)) for i in range(RANK))
                for r in range(13)]
        if rows[0] not in (self.z, neg(self.z)):
            raise RuntimeError("failed to split z from its orthogonal complement")
        ws = rows[1:]
        p8 = [[pair8(a, b) for b in ws] for a in ws]
        t = intmat.lll_gram(p8)
        ws = [tuple(sum(t[r][j] * ws[j][i] for j in range(12)) for i in range(RANK)) for r in range(12)]
        self.w = ws
        self.p8 = [[pair8(a, b) for b in ws] for a in ws]
        # base vector of level step: (x0, rho) = +step
        if pair(x0, self.rho) < 0:
            x0 = neg(x0)
        self.alpha0 = self._find_alpha0(neg(x0))
        self.rho_star = self._generic_rho_star(self.alpha0)
        self.t0 = tuple(r + self.epsilon * s for r, s in zip(self.rho, self.rho_star))
        td = math.lcm(*(t.denominator for t in self.t0))
        self._t0num = tuple(int(t * td) for t in self.t0)
        self.hden = 8 * td  # height = hnum / hden
        self.beta = [-pair(wi, self.rho_star) for wi in ws]  # b(w_i)
        self.b_alpha0 = -pair(self.alpha0, self.rho_star)
        self._D = math.lcm(self.b_alpha0.denominator, *(t.denominator for t in self.beta))
        self._W = np.array(ws, dtype=np.int64)
        self._P8 = np.array(self.p8, dtype=np.int64)
        self._a0 = np.array(self.alpha0, dtype=np.int64)
        self._zarr = np.array(self.z, dtype=np.int64)
        self._beta_num = np.array([int(t * self._D) for t in self.beta], dtype=np.int64)
        self._b0_num = int(self.b_alpha0 * self._D)

    def _generic_rho_star(self, u0):
        u = tuple(Fraction(t) / (-pair(u0, self.rho)) for t in u0)
        un = norm(u)
        return tuple(a + un / 2 * r for a, r in zip(u, self.rho))

    def _find_alpha0(self, base):
        """A norm 1/2 vector at level ``step``.

        A finite real root of N' is preferred (smallest key first); otherwise
        the level is searched for the shortest orthogonal part.
        """
        if self.step != Fraction(1, 4):
            return base
        for r in finite_real_roots(self.lattice):
            if norm(r) == Fraction(1, 2) and pair(r, self.rho) == -self.step:
                return r
        star = self._generic_rho_star(base)
        b0 = -pair(base, star)
        beta = [-pair(wi, star) for wi in self.w]
        best = None
        for bound in (2, 4, 8):
            _, vecs = kernels.enum_coset(self.p8, [0] * 12, 1, 8 * bound, True)
            for k in vecs:
                v2 = Fraction(self._qnorm8(k), 8)
                bb = b0 + sum(ki * bi for ki, bi in zip(k, beta))
                b = (v2 - Fraction(1, 2)) * 2  # v^2 - 2ab = 1/2 with a = 1/4
                m = (b - bb) / 2
                if m.denominator != 1:
                    continue
                key = add(self._combine(base, k), self.z, int(m))
                cand = (v2, key)
                if best is None or cand < best:
                    best = cand
            if best is not None:
                return best[1]
        return base

    def _qnorm8(self, k):
        return sum(k[i] * self.p8[i][j] * k[j] for i in range(12) if k[i] for j in range(12) if k[j])

    def _combine(self, base, k):
        out = list(base)
        for ki, wi in zip(k, self.w):
            if ki:
                for i in range(RANK):
                    out[i] += ki * wi[i]
        return tuple(out)

    # decomposition
    def level(self, key):
        return -pair(key, self.rho)

    def offset(self, key):
        return -pair(key, self.rho_star)

    def hnum(self, key):
        return -pair8(key, self._t0num)

    def height(self, key):
        return Fraction(self.hnum(key), self.hden)

    def height_bound_num(self, bound):
        return math.floor(Fraction(bound) * self.hden)

    def slice_arrays(self, c, vmax):
        """Arrays for the vectors ``c*alpha0 + sum k_i w_i`` with ``v^2 <= vmax``.

        Returns ``(keys, v8, bD)`` with ``v8 = 8 v^2`` and ``bD = D*b``; adding
        ``m z`` to a vector moves ``b`` by ``2m``.
        """
        if vmax < 0:
            return (np.zeros((0, RANK), dtype=np.int64), np.zeros(0, dtype=np.int64),
                    np.zeros(0, dtype=np.int64))
        _, vecs = kernels.enum_coset(self.p8, [0] * 12, 1, int(math.floor(8 * vmax)), True)
        k = np.array(vecs, dtype=np.int64).reshape(-1, 12)
        v8 = np.einsum("ij,jk,ik->i", k, self._P8, k)
        keys = c * self._a0 + k @ self._W
        bd = c * self._b0_num + k @ self._beta_num
        order = np.lexsort(tuple(keys.T[::-1]) + (v8,))
        return keys[order], v8[order], bd[order]

    def level_slice(self, c, vmax):
        """``(base_key, v2, b)`` triples of ``slice_arrays``."""
        keys, v8, bd = self.slice_arrays(c, vmax)
        return [(tuple(int(t) for t in kk), Fraction(int(v), 8), Fraction(int(b), self._D))
                for kk, v, b in zip(keys, v8, bd)]

    def _m_range(self, v8, bd, a, r_max, bmax):
        """Range of m with ``alpha^2 <= r_max`` and ``b <= bmax`` (b = b0 + 2m)."""
        big_a = 16 * a
        if big_a.denominator != 1:
            raise ValueError("level not on the 1/16 grid")
        big_a = int(big_a)
        d = self._D
        # alpha^2 = v^2 - 2ab <= r_max  <=>  b >= (v8 - 8 r_max) / (16 a)
        r8 = 8 * Fraction(r_max)
        num = (v8 * r8.denominator - r8.numerator) * d - big_a * r8.denominator * bd
        den = 2 * big_a * d * r8.denominator
        m_lo = -((-num) // den)
        p, q = bmax.numerator, bmax.denominator
        m_hi = (p * d - q * bd) // (2 * d * q)
        return m_lo, m_hi

    def vectors_array(self, c, r_lo, r_hi, hmax):
        """Vectors at level ``c*step`` with ``r_lo <= alpha^2 <= r_hi`` and height <= hmax.

        Returns ``(keys, r8)`` arrays with ``r8 = 8 alpha^2``.
        """
        a = c * self.step
        if a <= 0:
            raise ValueError("level must be positive")
        bmax = (Fraction(hmax) - a) / self.epsilon
        keys, v8, bd = self.slice_arrays(c, Fraction(r_hi) + 2 * a * bmax)
        m_lo, m_hi = self._m_range(v8, bd, a, r_hi, bmax)
        big_a = int(16 * a)
        outk, outr = [], []
        span = int((m_hi - m_lo).max(initial=-1)) + 1
        for j in range(span):
            sel = np.nonzero(m_lo + j <= m_hi)[0]
            if not len(sel):
                continue
            m = m_lo[sel] + j
            b_d = bd[sel] + 2 * self._D * m
            r8 = v8[sel] - (big_a * b_d) // self._D
            if r_lo is not None:
                ok = r8 >= 8 * Fraction(r_lo)
                sel, m, r8 = sel[ok], m[ok], r8[ok]
            outk.append(keys[sel] + m[:, None] * self._zarr)
            outr.append(r8)
        if not outk:
            return np.zeros((0, RANK), dtype=np.int64), np.zeros(0, dtype=np.int64)
        return np.concatenate(outk), np.concatenate(outr)

    def vectors_with_norm(self, c, r, hmax):
        """All vectors at level ``c*step`` of norm ``r`` with height <= hmax."""
        keys, _ = self.vectors_array(c, r, r, hmax)
        return sorted(tuple(int(t) for t in k) for k in keys)

    def to_json(self):
        return {
            "two_rho": list(self.z),
            "rho_star": [str(t) for t in self.rho_star],
            "alpha0": list(self.alpha0),
            "epsilon": str(self.epsilon),
        }


# -- Weyl vector ---------------------------------------------------------------

@dataclass
class WeylVector:
    two_rho: tuple
    certificates: list
    simple_roots: list = field(default_factory=list)
    height_cap: Fraction = DEFAULT_CAP
    epsilon: Fraction = DEFAULT_EPSILON
    candidates_tried: int = 0

    @property
    def rho(self):
        return tuple(Fraction(t, 2) for t in self.two_rho)

    def to_json(self):
        return {
            "two_rho": list(self.two_rho),
            "two_rho_ambient": {
                "x": [str(t) for t in key_to_ambient(self.two_rho)[0]],
                "m": self.two_rho[12],
                "n": self.two_rho[13],
            },
            "certificates": list(self.certificates),
            "n_simple_roots": len(self.simple_roots),
            "simple_roots": [root_json(r) for r in self.simple_roots],
            "height_cap": str(self.height_cap),
            "epsilon": str(self.epsilon),
            "candidates_tried": self.candidates_tried,
        }


@dataclass(frozen=True)
class Root:
    key: tuple
    norm: Fraction
    orbit: int
    mult: int
    kind: str
    height: Fraction


def root_json(r):
    return {
        "vector": list(r.key),
        "norm": str(r.norm),
        "class_orbit": r.orbit,
        "multiplicity": r.mult,
        "type": r.kind,
        "height": str(r.height),
    }


def finite_real_roots(lattice):
    """Real roots of L' lying in N' (II part zero).

    A vector of norm at most 2 in N' has key ``X`` with ``X.X <= 16``; the
    all-odd keys have norm at least 3/2 and are never real roots, so
    ``X = 2y`` with ``y`` integral and ``y.y <= 4``.
    """
    out = []
    for support in range(1, 5):
        for idx in itertools.combinations(range(12), support):
            for vals in itertools.product((-2, -1, 1, 2), repeat=support):
                if sum(v * v for v in vals) > 4:
                    continue
                x = [0] * 12
                for i, v in zip(idx, vals):
                    x[i] = 2 * v
                key = tuple(x) + (0, 0)
                if lattice.contains(key) and real_root_type(key, lattice) is not None:
                    out.append(key)
    return sorted(out)


def sample_real_roots(lattice, per_type=8, seed=0):
    """A fixed pseudo-random sample of real roots of each type, keyed by type.

    Types 2 and 3 come from the finite real roots moved off N' by isotropic
    II_{1,1} parts; type 1 roots are norm 2 vectors (4y; m, n) of L with
    y in D12 of norm at most 2.
    """
    rng = random.Random(seed)
    iso = [(0, 0), (1, 0), (0, 1), (-2, 0), (0, 3)]
    pool = {1: [], 2: [], 3: []}
    for key in finite_real_roots(lattice):
        for m, n in iso:
            k = key[:12] + (m, n)
            pool[real_root_type(k, lattice)].append(k)
    ys = [(0,) * 12]
    for i, j in itertools.combinations(range(12), 2):
        for a, b in itertools.product((-1, 1), repeat=2):
            y = [0] * 12
            y[i], y[j] = a, b
            ys.append(tuple(y))
    for y in ys:
        for m, n in itertools.product(range(-3, 4), repeat=2):
            k = tuple(4 * t for t in y) + (m, n)
            if real_root_type(k, lattice) == 1:
                pool[1].append(k)
    return {t: rng.sample(sorted(v), min(per_type, len(v))) for t, v in pool.items()}


def finite_weyl_vector(lattice):
    """Weyl vector of the finite real-root system of N' (in key coordinates).

    Positive roots are those with a positive value of a generic functional;
    the returned ``s`` satisfies ``(s, alpha) = alpha^2/2`` for every simple
    root alpha.
    """
    roots = finite_real_roots(lattice)
    weights = [3 ** (12 - i) for i in range(12)]

    def val(k):
        return sum(w * t for w, t in zip(weights, k[:12]))

    pos = [r for r in roots if val(r) > 0]
    posset = set(pos)
    simple = [r for r in pos if not any(add(r, s, -1) in posset for s in pos if s != r)]
    if len(simple) != 12:
        raise RuntimeError(f"finite real-root system has {len(simple)} simple roots")
    m = [[Fraction(s[i], 8) for s in simple] for i in range(12)]
    sol = intmat.solve_rational(m, [norm(s) / 2 for s in simple])
    return tuple(sol) + (Fraction(0), Fraction(0)), simple


def weyl_vector_candidates(lattice, max_multiple=4):
    """Norm 0 lifts ``(k s; m, n)`` of the finite Weyl vector ``s``, in search order."""
    s, _ = finite_weyl_vector(lattice)
    out = []
    for k in range(1, max_multiple + 1):
        ks = tuple(k * t for t in s[:12])
        if any(Fraction(t).denominator != 1 for t in ks):
            continue
        n2 = norm(tuple(ks) + (0, 0))
        if (n2 / 2).denominator != 1:
            continue
        mn = -int(n2 / 2)
        for m in range(1, abs(mn) + 1):
            if mn % m:
                continue
            for sign in (1, -1):
                key = tuple(int(t) for t in ks) + (sign * m, sign * (mn // m))
                out.append((k, max(m, abs(mn // m)), -sign, m, key))
    out.sort()
    return [c[-1] for c in out]


def real_root_types(keys, r8, lattice):
    """Vectorized ``real_root_type``: 0 where a vector is not a real root."""
    keys = np.asarray(keys, dtype=np.int64).reshape(-1, RANK)
    r8 = np.asarray(r8, dtype=np.int64)
    out = np.zeros(len(keys), dtype=np.int64)
    if not len(keys):
        return out
    cls = lattice.class_indices(keys)
    chars = lattice._char_of_class[cls]
    out[r8 == 4] = 3
    out[(r8 == 8) & (chars == 4)] = 2
    out[(r8 == 16) & (cls == 0)] = 1
    return out


def cusp_real_roots(frame, datum):
    """Real roots orthogonal to ``z`` (level 0), one per class modulo z."""
    keys, v8, _ = frame.slice_arrays(0, 2)
    nz = np.any(keys != 0, axis=1)
    keys, v8 = keys[nz], v8[nz]
    found = []
    for m in (0, 1):
        km = keys + m * frame._zarr
        t = real_root_types(km, v8, datum.lattice)
        found.extend(tuple(int(x) for x in k) for k in km[t > 0])
    return sorted(found)


def _real_roots_below(frame, datum, cap):
    """Real roots with 0 < (rho-level) < alpha^2/2 and height <= cap."""
    bad = []
    step = frame.step
    for r in (Fraction(1, 2), Fraction(1), Fraction(2)):
        c = 1
        while c * step < r / 2:
            if c * step < cap:
                for key in frame.vectors_with_norm(c, r, cap):
                    if real_root_type(key, datum.lattice) is not None:
                        bad.append(key)
            c += 1
    return bad


def simple_roots_in_frame(frame, datum, height_bound):
    lat = datum.lattice
    out = []
    for r, t in ((Fraction(1, 2), 3), (Fraction(1), 2), (Fraction(2), 1)):
        c = r / 2 / frame.step
        if c.denominator != 1 or c * frame.step > height_bound:
            continue
        for key in frame.vectors_with_norm(int(c), r, height_bound):
            if real_root_type(key, lat) == t:
                out.append(Root(key, r, lat.orbit(key), 1, REAL_TYPES[t], frame.height(key)))
    out.sort(key=lambda q: (q.height, q.key))
    return out


def certify_weyl_vector(z, datum, height_cap=DEFAULT_CAP, epsilon=DEFAULT_EPSILON):
    """Check the Weyl-vector properties of ``rho = z/2``.

    Returns ``(certificates, simple_roots, failures)``.
    """
    lat = datum.lattice
    z = _as_key(z)
    certs, fails = [], []
    if norm(z) != 0:
        return certs, [], ["norm of 2 rho is not 0"]
    certs.append("(2rho, 2rho) = 0")
    if not lat.contains(z) or not lat.primitive(z):
        return certs, [], ["2 rho is not primitive in L'"]
    certs.append("2rho primitive in L'")
    if not lat.in_double(z):
        return certs, [], ["class of 2 rho not in 2(L'/L)"]
    certs.append("class of 2rho in 2(L'/L)")
    certs.append(f"class of 2rho: Table 1 orbit {lat.orbit(z)}, character {lat.character(z)}")
    frame = Frame(z, lat, epsilon)
    if frame.step != Fraction(1, 4):
        return certs, [], [f"(L', rho) = {frame.step}Z, expected (1/4)Z"]
    cusp = cusp_real_roots(frame, datum)
    if cusp:
        return certs, [], [f"{len(cusp)} real roots orthogonal to 2 rho"]
    certs.append("no real root orthogonal to 2rho")
    bad = _real_roots_below(frame, datum, height_cap)
    if bad:
        return certs, [], [f"real root {bad[0]} has 0 < -(rho, alpha) < alpha^2/2"]
    certs.append(f"(rho, alpha) <= -alpha^2/2 for all positive real roots of height <= {height_cap}")
    simple = simple_roots_in_frame(frame, datum, height_cap)
    for s in simple:
        if pair(s.key, frame.rho) / s.norm != Fraction(-1, 2):
            fails.append(f"simple root {s.key} fails (rho, alpha) = -alpha^2/2")
    certs.append(f"{len(simple)} simple real roots of height <= {height_cap}")
    return certs, simple, fails


def weyl_vector_search(height_cap=DEFAULT_CAP, epsilon=DEFAULT_EPSILON, datum=None, max_candidates=64):
    """First candidate ``2 rho`` passing every certificate up to ``height_cap``."""
    datum = datum or default_datum()
    tried = 0
    for z in weyl_vector_candidates(datum.lattice):
        if tried >= max_candidates:
            break
        tried += 1
        certs, simple, fails = certify_weyl_vector(z, datum, height_cap, epsilon)
        if not fails and any(c.startswith("no real root") for c in certs):
            return WeylVector(z, certs, simple, Fraction(height_cap), Fraction(epsilon), tried)
    raise NotFound(f"no Weyl vector among {tried} candidates at height cap {height_cap}")


def simple_real_roots(rho, height_bound, datum=None):
    datum = datum or default_datum()
    frame = Frame(rho.two_rho, datum.lattice, rho.epsilon)
    return simple_roots_in_frame(frame, datum, Fraction(height_bound))


# -- positive roots ------------------------------------------------------------

def _slice_roots(args):
    z, epsilon, c, height_bound, order = args
    datum = default_datum(order)
    frame = Frame(z, datum.lattice, epsilon)
    return _level_roots(frame, datum, c, height_bound)


def _level_roots(frame, datum, c, height_bound):
    lat = datum.lattice
    keys, r8 = frame.vectors_array(c, None, 2, height_bound)
    if not len(keys):
        return []
    cls = lat.class_indices(keys)
    chars = lat._char_of_class[cls]
    types = real_root_types(keys, r8, lat)
    cache = {}
    out = []
    for key, r, ch, ci, t in zip(keys, r8.tolist(), chars.tolist(), cls.tolist(), types.tolist()):
        mult = cache.get((ch, r))
        if mult is None:
            mult = cache[(ch, r)] = datum.mult_from(ch, Fraction(r, 8))
        if not mult:
            continue
        key = tuple(int(x) for x in key)
        kind = REAL_TYPES[t] if t else ("imaginary" if r <= 0 else "unexpected")
        out.append(Root(key, Fraction(r, 8), lat._orbit[ci], mult, kind, frame.height(key)))
    return out


def positive_roots(frame, datum, height_bound, workers=1):
    """All positive roots with height <= height_bound (multiples of 2 rho included)."""
    height_bound = Fraction(height_bound)
    need = height_bound * height_bound / (4 * frame.epsilon) + 1
    if need > datum.order:
        datum = RootDatum(datum.lattice, order=math.ceil(need) + 1)
    levels = []
    c = 1
    while c * frame.step <= height_bound:
        levels.append(c)
        c += 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_slice_roots, [(frame.z, frame.epsilon, c, height_bound,
                                                int(datum.order)) for c in levels]))
    else:
        parts = [_level_roots(frame, datum, c, height_bound) for c in levels]
    out = [r for p in parts for r in p]
    k = 1
    while 2 * k * frame.epsilon <= height_bound:
        key = scale(frame.z, k)
        r = Root(key, Fraction(0), datum.lattice.orbit(key), datum.mult(key), "imaginary",
                 frame.height(key))
        out.append(r)
        k += 1
    out.sort(key=lambda q: (q.height, q.key))
    return out


# -- Weyl group orbit of rho -----------------------------------------------------

def weyl_orbit_of_rho(rho, height_bound, datum=None, simple=None, simple_bound=None):
    """Images ``w rho`` with ``h(w rho - rho) <= height_bound`` and their signs.

    Returns a list of ``(two_w_rho_key, det)`` sorted by height then key.
    """
    datum = datum or default_datum()
    height_bound = Fraction(height_bound)
    frame = Frame(rho.two_rho, datum.lattice, rho.epsilon)
    if simple is None:
        simple = simple_roots_in_frame(frame, datum, height_bound)
        simple_bound = height_bound
    if simple_bound is None or simple_bound < height_bound:
        raise ClosureNotCertified(
            f"simple roots known to height {simple_bound}, need {height_bound}")
    z = frame.z
    hz = frame.hnum(z)
    limit = frame.height_bound_num(height_bound)
    refl = [(s.key, int(8 * s.norm)) for s in simple]
    seen = {z: 1}
    frontier = [z]
    while frontier:
        nxt = []
        for x in frontier:
            p = -seen[x]
            for key, r8 in refl:
                k, rem = divmod(2 * pair8(x, key), r8)  # 2(x, s)/s^2 on x = 2 w rho
                if rem:
                    raise RuntimeError("reflection left L'")
                if not k:
                    continue
                y = tuple(a - k * b for a, b in zip(x, key))
                if frame.hnum(y) - hz > 2 * limit:
                    continue
                q = seen.get(y)
                if q is not None:
                    if q != p:
                        raise RuntimeError(f"inconsistent parity at {y}")
                    continue
                seen[y] = p
                nxt.append(y)
        frontier = sorted(nxt)
    return sorted(seen.items(), key=lambda t: (frame.hnum(t[0]), t[0]))


# -- denominator identity ---------------------------------------------------------

class DenominatorLedger:
    """Exponents ``x - rho`` (keys in L') with integer coefficients, truncated by height.

    Heights are handled as integer numerators over the frame's ``hden``.
    """

    def __init__(self, frame, height_bound):
        self.frame = frame
        self.height_bound = Fraction(height_bound)
        self._limit = frame.height_bound_num(height_bound)
        self.terms = {}
        self._h = {}

    def h(self, key):
        v = self._h.get(key)
        if v is None:
            v = self._h[key] = self.frame.hnum(key)
        return v

    def add(self, key, coeff):
        if self.h(key) <= self._limit:
            self.terms[key] = self.terms.get(key, 0) + coeff

    def multiply_binomial(self, alpha, mult):
        """Multiply by (1 - e^alpha)^mult, truncated."""
        ha = self.h(alpha)
        limit = self._limit
        new = {}
        for key, c in self.terms.items():
            if not c:
                new.setdefault(key, 0)
                continue
            hk = self.h(key)
            new[key] = new.get(key, 0) + c
            j = 1
            cur = key
            binom = -mult
            while binom and hk + j * ha <= limit:
                cur = add(cur, alpha)
                self._h.setdefault(cur, hk + j * ha)
                new[cur] = new.get(cur, 0) + c * binom
                binom = -binom * (mult - j) // (j + 1)
                j += 1
        self.terms = new

    def support(self):
        return {k for k, c in self.terms.items() if c}

    def sorted_keys(self):
        return sorted(self.terms, key=lambda k: (self.h(k), k))


@dataclass
class DenominatorReport:
    height_bound: Fraction
    n_exponents_compared: int
    n_weyl_elements: int
    passed: bool
    first_mismatch: dict = None
    n_positive_roots: int = 0
    n_simple_roots: int = 0
    two_rho: tuple = ()
    epsilon: Fraction = DEFAULT_EPSILON

    def to_json(self):
        out = {
            "height_bound": str(self.height_bound),
            "n_exponents_compared": self.n_exponents_compared,
            "n_weyl_elements": self.n_weyl_elements,
            "pass": self.passed,
            "n_positive_roots": self.n_positive_roots,
            "n_simple_roots": self.n_simple_roots,
            "two_rho": list(self.two_rho),
            "epsilon": str(self.epsilon),
        }
        if self.first_mismatch is not None:
            out["first_mismatch"] = self.first_mismatch
        return out


def product_side(frame, roots, height_bound):
    led = DenominatorLedger(frame, height_bound)
    led.add(ZERO, 1)
    for r in roots:
        led.multiply_binomial(r.key, r.mult)
    return led


def sum_side(frame, orbit, height_bound, imaginary_mult=12):
    led = DenominatorLedger(frame, height_bound)
    hz = frame.hnum(frame.z)
    limit = frame.height_bound_num(height_bound)
    for two_w_rho, sign in orbit:
        shift = tuple((a - b) // 2 for a, b in zip(two_w_rho, frame.z))
        step = frame.hnum(two_w_rho)
        h0 = (step - hz) // 2
        n = (limit - h0) // step
        coeffs = kernels.eta_power(imaginary_mult, n + 1)
        for j in range(n + 1):
            if coeffs[j]:
                led.add(add(shift, two_w_rho, j), sign * coeffs[j])
    return led


def denominator_check(height_bound=None, rho=None, datum=None, workers=1,
                      reverse_order=False):
    """Compare both sides of the denominator identity below ``height_bound``."""
    datum = datum or default_datum()
    if rho is None:
        rho = weyl_vector_search(datum=datum)
    if height_bound is None:
        return default_height_bound(rho, datum)[1]
    height_bound = Fraction(height_bound)
    frame = Frame(rho.two_rho, datum.lattice, rho.epsilon)
    roots = positive_roots(frame, datum, height_bound, workers)
    if reverse_order:
        roots = roots[::-1]
    lhs = product_side(frame, roots, height_bound)
    simple = [r for r in roots if r.kind.startswith("real") and r.norm == 2 * frame.level(r.key)]
    orbit = weyl_orbit_of_rho(rho, height_bound, datum, simple, height_bound)
    rhs = sum_side(frame, orbit, height_bound)
    keys = set(lhs.terms) | set(rhs.terms)
    mismatch = None
    for k in sorted(keys, key=lambda k: (frame.hnum(k), k)):
        a, b = lhs.terms.get(k, 0), rhs.terms.get(k, 0)
        if a != b:
            mismatch = {"exponent": list(k), "height": str(frame.height(k)),
                        "product_side": a, "sum_side": b}
            break
    return DenominatorReport(height_bound, len(keys), len(orbit), mismatch is None, mismatch,
                             len(roots), len(simple), rho.two_rho, rho.epsilon)


def default_height_bound(rho=None, datum=None, min_exponents=MIN_EXPONENTS, min_weyl=MIN_WEYL,
                         grid=HEIGHT_GRID, limit=Fraction(1)):
    """Smallest multiple of ``grid`` whose check compares enough exponents and Weyl elements.

    Returns ``(height_bound, report)``.
    """
    datum = datum or default_datum()
    rho = rho or weyl_vector_search(datum=datum)
    h = grid
    while h <= limit:
        rep = denominator_check(h, rho, datum)
        if rep.n_exponents_compared >= min_exponents and rep.n_weyl_elements >= min_weyl:
            return h, rep
        h += grid
    raise NotFound(f"no height bound up to {limit} reaches {min_exponents} exponents")
