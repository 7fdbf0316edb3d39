"""Discriminant forms: element tables, orbits, Gauss sums, character assignment."""

from dataclasses import dataclass, field
from fractions import Fraction
import functools
import itertools
import math

import numpy as np

from . import intmat
from .lattice import CosetVector, short_vectors

MAX_ELEMENTS = 1 << 20


class TooLarge(ValueError):
    pass


class NotAnIsometry(ValueError):
    pass


class ValidationFailed(AssertionError):
    pass


class FiniteQuadraticModule:
    """The finite quadratic module (L'/L, q) of an even lattice.

    Elements are indexed 0..order-1 by mixed radix over the invariant
    factors; ``elements[i]`` is the coefficient tuple over the generators.
    q-values and pairings are stored as integers modulo ``level_den``.
    """

    def __init__(self, lattice):
        data = lattice.discriminant()
        self.lattice = lattice
        self.factors = data.factors
        self.generators = data.generators
        self.order = data.order
        if self.order > MAX_ELEMENTS:
            raise TooLarge(f"discriminant group of order {self.order} exceeds {MAX_ELEMENTS}")
        r = len(self.factors)
        gens = [g.coords for g in self.generators]
        b = [[lattice.pair(gens[i], gens[j]) for j in range(r)] for i in range(r)]
        den = 1
        for i in range(r):
            for j in range(r):
                den = math.lcm(den, (Fraction(b[i][j]) / 2).denominator)
        self.level_den = den
        # q(sum a_i g_i) = sum a_i^2 b_ii/2 + sum_{i<j} a_i a_j b_ij
        self._qdiag = np.array([int(b[i][i] / 2 * den) % den for i in range(r)], dtype=np.int64)
        self._bmat = np.array([[int(b[i][j] * den) % den for j in range(r)] for i in range(r)],
                              dtype=np.int64)
        if r:
            self.elements = np.array(list(itertools.product(*[range(d) for d in self.factors])),
                                     dtype=np.int64).reshape(-1, r)
        else:
            self.elements = np.zeros((1, 0), dtype=np.int64)
        self._radix = np.array([math.prod(self.factors[i + 1:]) for i in range(r)], dtype=np.int64)
        self._fac = np.array(self.factors, dtype=np.int64)
        self.qnum = self._q_of(self.elements)

    def __len__(self):
        return self.order

    def _q_of(self, a):
        den = self.level_den
        out = (a * a) @ self._qdiag
        r = a.shape[1]
        for i in range(r):
            for j in range(i + 1, r):
                if self._bmat[i, j]:
                    out = out + a[:, i] * a[:, j] * self._bmat[i, j]
        return out % den

    def index(self, a):
        a = np.asarray(a, dtype=np.int64) % self._fac
        return int(a @ self._radix) if a.ndim == 1 else a @ self._radix

    def q(self, i):
        return Fraction(int(self.qnum[i]), self.level_den)

    def bilinear(self, i, j):
        x, y = self.elements[i], self.elements[j]
        return Fraction(int(x @ self._bmat @ y) % self.level_den, self.level_den)

    def pairing_matrix(self, rows):
        """Integers (x, y)*level_den mod level_den for x in rows, y in all elements."""
        x = self.elements[np.asarray(rows)]
        return (x @ self._bmat @ self.elements.T) % self.level_den

    def add(self, i, j):
        return self.index(self.elements[i] + self.elements[j])

    def neg(self, i):
        return self.index(-self.elements[i])

    def element_order(self, i):
        a = self.elements[i]
        o = 1
        for ai, d in zip(a, self.factors):
            o = math.lcm(o, d // math.gcd(int(ai), d))
        return o

    def orders(self):
        out = np.ones(self.order, dtype=np.int64)
        for k, d in enumerate(self.factors):
            col = d // np.gcd(self.elements[:, k], d)
            out = np.lcm(out, col)
        return out

    def index_of_coords(self, coords):
        return self.index(self.lattice.discriminant().classify(coords))

    def coset(self, i):
        data = self.lattice.discriminant()
        return CosetVector(self.lattice, data.element_coords(self.elements[i]))

    def q_histogram(self):
        vals, counts = np.unique(self.qnum, return_counts=True)
        return {Fraction(int(v), self.level_den): int(c) for v, c in zip(vals, counts)}

    def fingerprint(self):
        g = signature_gauss_sum(self)
        return {
            "order": self.order,
            "invariant_factors": list(self.factors),
            "q_histogram": {str(k): v for k, v in sorted(self.q_histogram().items())},
            "gauss_sum": [str(g.exact[0]), str(g.exact[1])] if g.exact else [repr(g.value.real), repr(g.value.imag)],
            "signature_mod_8": g.signature_mod_8,
        }


def from_lattice(lattice):
    return FiniteQuadraticModule(lattice)


# -- automorphisms -------------------------------------------------------------

@dataclass(frozen=True)
class SignedPermutation:
    """Ambient map x -> y with y[perm[i]] = signs[i] * x[i]."""
    perm: tuple
    signs: tuple

    def apply(self, x):
        y = [0] * len(x)
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            y[p] = s * x[i]
        return y


def transposition(i, j, n):
    perm = list(range(n))
    perm[i], perm[j] = j, i
    return SignedPermutation(tuple(perm), (1,) * n)


def cycle(n):
    return SignedPermutation(tuple((i + 1) % n for i in range(n)), (1,) * n)


def sign_flip(positions, n):
    signs = [1] * n
    for p in positions:
        signs[p] = -1
    return SignedPermutation(tuple(range(n)), tuple(signs))


def standard_generators(lattice):
    """Generators used for the tables: transposition, n-cycle and a sign change
    (single for D_n-type, double for D_n^+-type lattices)."""
    n = len(lattice.ambient_form)
    flips = [0] if (lattice.structure or {}).get("family") == "D" else [0, 1]
    return [transposition(0, 1, n), cycle(n), sign_flip(flips, n)]


def basis_action(lattice, g):
    """Integer matrix M (row convention c -> c*M) of an ambient isometry."""
    if isinstance(g, SignedPermutation):
        if lattice.basis is None:
            raise NotAnIsometry("lattice has no ambient coordinates to permute")
        form = lattice.ambient_form
        if any(form[g.perm[i]] != form[i] for i in range(len(form))):
            raise NotAnIsometry("permutation does not preserve the ambient form")
        rows = []
        for b in lattice.basis:
            c = lattice.from_ambient(g.apply(list(b)))
            if any(x.denominator != 1 for x in c):
                raise NotAnIsometry("generator does not preserve the lattice")
            rows.append([int(x) for x in c])
        m = rows
    else:
        m = [list(map(int, r)) for r in g]
    gram = [list(r) for r in lattice.gram]
    if intmat.matmul(intmat.matmul(m, gram), intmat.transpose(m)) != gram:
        raise NotAnIsometry("generator does not preserve the Gram matrix")
    return m


def induced_permutation(fqm, m):
    """Permutation of element indices induced by a basis isometry m."""
    lat = fqm.lattice
    imgs = []
    for g in fqm.generators:
        c = intmat.vecmat(list(g.coords), m)
        imgs.append(lat.discriminant().classify(c))
    if not imgs:
        return np.zeros(1, dtype=np.int64)
    img = np.array(imgs, dtype=np.int64)
    return fqm.index(fqm.elements @ img)


def _orbits(n, perms):
    parent = np.arange(n)

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for p in perms:
        for i in range(n):
            a, b = find(i), find(int(p[i]))
            if a != b:
                parent[max(a, b)] = min(a, b)
    labels = np.array([find(i) for i in range(n)])
    return labels


@dataclass
class OrbitRow:
    number: int
    representative: CosetVector
    size: int
    lift_norm: Fraction
    q: Fraction
    order: int
    min_vectors: int
    element: int = field(default=0, repr=False)
    reference: tuple = None

    @property
    def lift_orbit_size(self):
        """Number of minimal-norm dual vectors over the whole orbit."""
        return self.size * self.min_vectors

    def to_json(self):
        lat = self.representative.lattice
        rep = self.representative.coords
        amb = lat.to_ambient(rep) if lat.basis is not None else None
        out = {
            "number": self.number,
            "representative": [str(x) for x in (amb if amb is not None else rep)],
            "lift_orbit_size": self.lift_orbit_size,
            "norm": str(self.lift_norm),
            "orbit_size": self.size,
            "q": str(self.q),
            "order": self.order,
        }
        if self.reference is not None:
            out["reference"] = [str(x) for x in self.reference]
        return out


@dataclass
class OrbitTable:
    rows: list
    group_label: str
    labels: np.ndarray = field(repr=False, default=None)
    fqm: FiniteQuadraticModule = field(repr=False, default=None)

    def sizes(self):
        return [r.size for r in self.rows]

    def orbit_of(self, element):
        """Row number of the orbit containing an element index."""
        return self._number_of_label[int(self.labels[element])]

    def members(self, number):
        row = self.rows[number - 1]
        return np.nonzero(self.labels == self.labels[row.element])[0]

    def to_json(self):
        return {"group": self.group_label, "rows": [r.to_json() for r in self.rows]}

    def to_csv(self):
        lines = ["No.,representative,lift orbit size,norm,orbit size,q,order"]
        for r in self.rows:
            d = r.to_json()
            rep = "(" + " ".join(d.get("reference", d["representative"])) + ")"
            lines.append(f"{r.number},{rep},{d['lift_orbit_size']},{d['norm']},{r.size},{d['q']},{r.order}")
        return "\n".join(lines) + "\n"


def minimal_lift(coset):
    """(minimal norm, number of minimal vectors, one minimal vector) of a coset."""
    rep = coset.reduced()
    if all(x == 0 for x in rep.coords):
        return Fraction(0), 1, rep
    cap = rep.norm()
    bound = Fraction(1, 2)
    while True:
        b = min(bound, cap)
        rpt = short_vectors(rep, b, want_vectors=True, use_cache=False)
        if rpt.counts:
            m = min(rpt.counts)
            vec = min(v for v in rpt.vectors if coset.lattice.norm(v) == m)
            return m, rpt.counts[m], CosetVector(coset.lattice, vec)
        bound *= 2


def orbit_decomposition(fqm, generators, reference=None, group_label=""):
    """Orbits of the group generated by ``generators`` on the module.

    ``reference`` optionally lists ambient representative vectors in a fixed
    numbering (e.g. the printed tables); rows are then numbered accordingly,
    otherwise sorted by (order, q, lift norm, size).
    """
    lat = fqm.lattice
    perms = [induced_permutation(fqm, basis_action(lat, g)) for g in generators]
    labels = _orbits(fqm.order, perms)
    roots, sizes = np.unique(labels, return_counts=True)
    size_of = dict(zip(roots.tolist(), sizes.tolist()))
    orders = fqm.orders()
    rows = []
    for root in roots.tolist():
        members = np.nonzero(labels == root)[0]
        qs = set(fqm.qnum[members].tolist())
        os_ = set(orders[members].tolist())
        if len(qs) != 1 or len(os_) != 1:
            raise ValidationFailed("q or order not constant on an orbit")
        norm, count, vec = minimal_lift(fqm.coset(root))
        rows.append(OrbitRow(0, vec, size_of[root], norm, fqm.q(root), int(orders[root]), count, root))
    if reference is not None:
        by_root = {r.element: r for r in rows}
        numbered = []
        for k, amb in enumerate(reference, start=1):
            idx = fqm.index_of_coords(lat.from_ambient(amb))
            row = by_root[int(labels[idx])]
            if row.number:
                raise ValidationFailed("two reference representatives in one orbit")
            row.number = k
            row.reference = tuple(Fraction(x) for x in amb)
            numbered.append(row)
        if len(numbered) != len(rows):
            raise ValidationFailed("reference representatives do not cover all orbits")
        rows = numbered
    else:
        rows.sort(key=lambda r: (r.order, r.q, r.lift_norm, r.size))
        for k, r in enumerate(rows, start=1):
            r.number = k
    table = OrbitTable(rows, group_label, labels, fqm)
    table._number_of_label = {int(labels[r.element]): r.number for r in rows}
    return table


# -- Gauss sums ------------------------------------------------------------------

@dataclass
class GaussSum:
    value: complex
    exact: tuple  # (re, im) as integers when q takes values in (1/4)Z, else None
    signature_mod_8: int


def signature_gauss_sum(fqm):
    """sum_x e(q(x)) and the signature mod 8 from Milgram's formula."""
    hist = fqm.q_histogram()
    exact = None
    if all((4 * q).denominator == 1 for q in hist):
        re = im = 0
        for q, c in hist.items():
            k = int(4 * q) % 4
            re += c * (1, 0, -1, 0)[k]
            im += c * (0, 1, 0, -1)[k]
        exact = (re, im)
        value = complex(re, im)
    else:
        value = sum(c * np.exp(2j * np.pi * float(q)) for q, c in hist.items())
    phase = np.angle(value) / (2 * np.pi) * 8
    sig = int(round(phase)) % 8
    if abs(abs(value) - math.sqrt(fqm.order)) > 1e-6 * math.sqrt(fqm.order):
        raise ValidationFailed("Gauss sum has wrong absolute value")
    return GaussSum(value, exact, sig)


# -- reference tables and the character assignment -------------------------------

H = Fraction(1, 2)
# ambient coordinates x with the printed representative (1/sqrt2) * (2x)
TABLE1_REPRESENTATIVES = [
    [0] * 12,
    [1] + [0] * 11,
    [H] * 12,
    [H] * 4 + [0] * 8,
    [H] * 8 + [0] * 4,
    [H] * 2 + [0] * 10,
    [H] * 6 + [0] * 6,
    [H] * 10 + [0] * 2,
    [H] + [0] * 11,
    [H] * 5 + [0] * 7,
    [H] * 9 + [0] * 3,
    [Fraction(3, 4)] + [Fraction(1, 4)] * 11,
    [H] * 3 + [0] * 9,
    [H] * 7 + [0] * 5,
    [H] * 11 + [0],
    [Fraction(1, 4)] * 12,
]
TABLE2_REPRESENTATIVES = [
    [0] * 12,
    [1] + [0] * 11,
    [H] * 4 + [0] * 8,
    [H] * 2 + [0] * 10,
    [H] * 6 + [0] * 6,
    [Fraction(-3, 4)] + [Fraction(1, 4)] * 11,
    [Fraction(1, 4)] * 12,
]

CANONICAL_ASSIGNMENT = {1: 1, 2: 2, 3: 2, 4: 3, 5: 3, 6: 4, 8: 4, 7: 5,
                        9: 7, 10: 7, 11: 7, 12: 7, 13: 6, 14: 6, 15: 6, 16: 6}
FIBER_SIZES = {1: 1, 2: 3, 3: 1980, 4: 264, 5: 1848, 6: 6144, 7: 6144}
COARSE_CLASSES = [{1}, {2, 3}, {4, 5}, {6, 7, 8}, {9, 10, 11, 12}, {13, 14, 15, 16}]


@dataclass
class CharacterAssignment:
    map: dict
    report: dict

    def __getitem__(self, orbit):
        return self.map[orbit]

    def fiber(self, n):
        return sorted(o for o, c in self.map.items() if c == n)


def canonical_assignment(table, characters=None, mapping=None):
    """The fixed Table-1-orbit -> character map, validated against the table.

    With ``characters`` (the f-series, indexed 1..7) the exponent congruence
    exponents(f_n) in -q(orbit) + Z is checked as well.
    """
    mapping = dict(CANONICAL_ASSIGNMENT if mapping is None else mapping)
    report = {}
    sizes = {r.number: r.size for r in table.rows}
    if set(mapping) != set(sizes):
        raise ValidationFailed("assignment does not cover the orbit table")
    fibers = {n: sum(sizes[o] for o, c in mapping.items() if c == n) for n in range(1, 8)}
    report["fiber_sizes"] = fibers
    report["fiber_sizes_ok"] = fibers == FIBER_SIZES
    if not report["fiber_sizes_ok"]:
        raise ValidationFailed(f"fiber sizes {fibers} differ from {FIBER_SIZES}")
    if characters is not None:
        bad = []
        qs = {r.number: r.q for r in table.rows}
        for o, n in mapping.items():
            for e in characters[n].exponents():
                if (e + qs[o]).denominator != 1:
                    bad.append((o, n, str(e)))
                    break
        report["exponent_congruence_ok"] = not bad
        if bad:
            raise ValidationFailed(f"exponent congruence fails for {bad}")
    return CharacterAssignment(mapping, report)


def coarse_partition(table):
    """Group orbits by the invariants (order, q, divisible by 2)."""
    fqm = table.fqm
    doubles = set(fqm.index(2 * fqm.elements).tolist())
    groups = {}
    for r in table.rows:
        key = (r.order, r.q, r.element in doubles)
        groups.setdefault(key, set()).add(r.number)
    return sorted(groups.values(), key=min)


def remark_six_classes(assignment, table):
    """Merging characters 4 and 5 leaves six fibers, equal to the coarse classes."""
    merged = {}
    for o, n in assignment.map.items():
        merged.setdefault(5 if n == 4 else n, set()).add(o)
    fibers = sorted(merged.values(), key=min)
    return len(fibers) == 6 and fibers == coarse_partition(table)


# -- root systems as automorphism generators --------------------------------------

def roots(lattice, norm=2):
    """All vectors of the given norm (coordinates over the lattice basis)."""
    rpt = short_vectors(lattice.zero(), norm, want_vectors=True, use_cache=False)
    return [v for v in rpt.vectors if lattice.norm(v) == norm]


def simple_roots(lattice, norm=2):
    """Simple roots for a generic positive direction of a (simply-laced) root system."""
    rs = roots(lattice, norm)
    weight = [Fraction(1, 1 + 7 * i) + i for i in range(lattice.rank)]
    pos = [r for r in rs if sum(a * b for a, b in zip(r, weight)) > 0]
    pos_set = set(pos)
    simple = []
    for r in pos:
        if not any(tuple(a - b for a, b in zip(r, s)) in pos_set for s in pos if s != r):
            simple.append(r)
    return simple


def reflection_matrix(lattice, root):
    """Basis matrix (row convention) of the reflection in ``root``."""
    rn = lattice.norm(root)
    rows = []
    for i in range(lattice.rank):
        e = [0] * lattice.rank
        e[i] = 1
        f = Fraction(2 * lattice.pair(e, root), rn)
        if f.denominator != 1:
            raise NotAnIsometry("reflection is not integral on the lattice")
        rows.append([e[j] - int(f) * root[j] for j in range(lattice.rank)])
    return rows


def diagram_automorphism(lattice, simple, perm):
    """Basis matrix of the isometry permuting simple roots by ``perm``."""
    s = [list(r) for r in simple]
    image = [s[perm[i]] for i in range(len(s))]
    m = intmat.matmul(intmat.inverse(s), image)
    if any(Fraction(x).denominator != 1 for row in m for x in row):
        raise NotAnIsometry("diagram automorphism is not integral")
    return [[int(x) for x in row] for row in m]


def e8_d4_generators(lattice, rank_e8=8):
    """Generators of W(E8) x W(D4).Sym3 acting on (a rescaling of) E8 + D4:
    simple reflections plus a triality of the D4 diagram."""
    base = min(lattice.norm(r) for r in roots_min(lattice))
    simple = simple_roots(lattice, base)
    gens = [reflection_matrix(lattice, r) for r in simple]
    d4 = [r for r in simple if any(r[rank_e8:])]
    e8 = [r for r in simple if not any(r[rank_e8:])]
    outer = [i for i, r in enumerate(d4)
             if sum(1 for t in d4 if t != r and lattice.pair(r, t) != 0) == 1]
    if len(outer) == 3:
        perm = list(range(len(simple)))
        a, b, c = outer
        perm[a], perm[b], perm[c] = b, c, a
        gens.append(diagram_automorphism(lattice, d4 + e8, perm))
    return gens


def roots_min(lattice):
    """Vectors of minimal nonzero norm."""
    bound = 2
    while True:
        rpt = short_vectors(lattice.zero(), bound, want_vectors=True, use_cache=False)
        nz = [k for k in rpt.counts if k > 0]
        if nz:
            m = min(nz)
            return [v for v in rpt.vectors if lattice.norm(v) == m]
        bound *= 2


@functools.lru_cache(maxsize=None)
def reference_table(name):
    """Orbit table of N ("N") or K ("K") under the standard generators,
    numbered as in the printed tables."""
    from .lattice import build_named
    refs = {"N": TABLE1_REPRESENTATIVES, "K": TABLE2_REPRESENTATIVES}[name]
    lat = build_named(name)
    fqm = from_lattice(lat)
    label = {"N": "Aut(N) = 2^12.Sym12", "K": "Aut(K) = 2^11.Sym12"}[name]
    return orbit_decomposition(fqm, standard_generators(lat), refs, label)
