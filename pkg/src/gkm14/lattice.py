"""Even integral lattices given by Gram matrices, their duals and cosets.

Dual vectors are carried as exact rational coordinates over the lattice
basis, so a scaled lattice such as sqrt(2)*D12 never needs irrational
coordinates: the scaling lives in the Gram matrix.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import hashlib
import json
import math

from . import intmat, kernels
from .cache import get_cache


class LatticeError(ValueError):
    pass


class UnknownName(LatticeError):
    pass


class NotInDual(LatticeError):
    pass


class NotPositiveDefinite(LatticeError):
    pass


class IntegralLattice:
    """An even lattice with integer Gram matrix.

    ``basis`` (optional) gives the basis rows in an ambient Q^m whose
    quadratic form is diagonal with entries ``ambient_form``; it is what
    lets coordinate permutations and sign changes act on the lattice.
    """

    def __init__(self, gram, name=None, basis=None, ambient_form=None, structure=None):
        gram = tuple(tuple(int(x) for x in row) for row in gram)
        n = len(gram)
        if any(len(r) != n for r in gram):
            raise LatticeError("Gram matrix must be square")
        for i in range(n):
            if gram[i][i] % 2:
                raise LatticeError("lattice is not even")
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise LatticeError("Gram matrix is not symmetric")
        self.gram = gram
        self.rank = n
        self.name = name
        self.det = intmat.det(gram)
        if self.det == 0:
            raise LatticeError("Gram matrix is degenerate")
        self.basis = None if basis is None else tuple(tuple(Fraction(x) for x in r) for r in basis)
        self.ambient_form = None if ambient_form is None else tuple(Fraction(x) for x in ambient_form)
        self.structure = structure
        self._inv = None
        self._disc = None

    def __repr__(self):
        return f"IntegralLattice(name={self.name!r}, rank={self.rank}, det={self.det})"

    def __eq__(self, other):
        return isinstance(other, IntegralLattice) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    @property
    def gram_inverse(self):
        if self._inv is None:
            self._inv = tuple(tuple(r) for r in intmat.inverse(self.gram))
        return self._inv

    def gram_hash(self):
        return hashlib.sha256(json.dumps(self.gram).encode()).hexdigest()[:16]

    def pair(self, u, v):
        """Bilinear form on coordinate vectors over the lattice basis."""
        g = self.gram
        return sum(u[i] * g[i][j] * v[j] for i in range(self.rank) if u[i]
                   for j in range(self.rank) if v[j])

    def norm(self, u):
        return self.pair(u, u)

    def is_positive_definite(self):
        n = self.rank
        return all(intmat.det([r[:k] for r in self.gram[:k]]) > 0 for k in range(1, n + 1))

    def to_ambient(self, coords):
        if self.basis is None:
            raise LatticeError("lattice has no ambient embedding")
        return intmat.vecmat(list(coords), [list(r) for r in self.basis])

    def from_ambient(self, x):
        """Coordinates over the lattice basis of an ambient vector."""
        if self.basis is None:
            raise LatticeError("lattice has no ambient embedding")
        binv = intmat.inverse([list(r) for r in self.basis])
        return tuple(intmat.vecmat([Fraction(t) for t in x], binv))

    def coset(self, coords):
        return CosetVector(self, coords)

    def coset_from_ambient(self, x):
        return CosetVector(self, self.from_ambient(x))

    def zero(self):
        return CosetVector(self, (0,) * self.rank)

    # -- constructions -------------------------------------------------------
    def direct_sum(self, other, name=None):
        n, m = self.rank, other.rank
        gram = [list(r) + [0] * m for r in self.gram] + [[0] * n + list(r) for r in other.gram]
        basis = form = None
        if self.basis is not None and other.basis is not None:
            a, b = len(self.ambient_form), len(other.ambient_form)
            basis = [list(r) + [0] * b for r in self.basis] + [[0] * a + list(r) for r in other.basis]
            form = list(self.ambient_form) + list(other.ambient_form)
        return IntegralLattice(gram, name or f"{self.name}+{other.name}", basis, form)

    def rescale(self, k, name=None):
        gram = [[k * x for x in r] for r in self.gram]
        form = None if self.ambient_form is None else [k * x for x in self.ambient_form]
        structure = None
        if self.structure is not None:
            structure = dict(self.structure, scale=self.structure["scale"] * k)
        return IntegralLattice(gram, name or f"{k}*{self.name}", self.basis, form, structure)

    def renamed(self, name):
        self.name = name
        return self

    def to_json(self):
        return {"name": self.name, "rank": self.rank, "gram": [list(r) for r in self.gram]}

    @classmethod
    def from_json(cls, data):
        return cls(data["gram"], data.get("name"))

    # -- discriminant group ----------------------------------------------------
    def discriminant(self):
        if self._disc is None:
            self._disc = DiscriminantData(self)
        return self._disc


class DiscriminantData:
    """Smith-normal-form bookkeeping for L'/L.

    A dual vector with coordinates c has integer vector z = c*G; its class is
    (z*V) reduced modulo the invariant factors, where U*G*V = D.
    """

    def __init__(self, lattice):
        g = [list(r) for r in lattice.gram]
        diag, U, V = intmat.smith_normal_form(g)
        self.lattice = lattice
        self.V = V
        keep = [i for i, d in enumerate(diag) if abs(d) != 1]
        self.keep = keep
        self.factors = tuple(abs(diag[i]) for i in keep)
        vinv = intmat.inverse(V)
        ginv = lattice.gram_inverse
        self.generators = []
        for i in keep:
            c = intmat.vecmat(vinv[i], [list(r) for r in ginv])
            self.generators.append(CosetVector(lattice, c))
        self.order = math.prod(self.factors)

    def classify(self, coords):
        """Class of a dual vector as a tuple in prod Z/d_i."""
        lat = self.lattice
        z = [sum(coords[i] * lat.gram[i][j] for i in range(lat.rank)) for j in range(lat.rank)]
        if any(Fraction(x).denominator != 1 for x in z):
            raise NotInDual(f"{coords} is not in the dual lattice")
        z = [int(x) for x in z]
        w = intmat.vecmat(z, self.V)
        return tuple(w[i] % d for i, d in zip(self.keep, self.factors))

    def class_matrix(self):
        """Integer matrix M with class(c) = (c*G) . M mod factors (columns kept)."""
        return [[self.V[r][i] for i in self.keep] for r in range(self.lattice.rank)]

    def element_coords(self, a):
        """A dual-lattice coordinate vector in the class a."""
        out = [Fraction(0)] * self.lattice.rank
        for ai, g in zip(a, self.generators):
            if ai:
                out = [x + ai * y for x, y in zip(out, g.coords)]
        return tuple(out)


@dataclass(frozen=True)
class CosetVector:
    lattice: IntegralLattice = field(compare=False, repr=False)
    coords: tuple

    def __post_init__(self):
        coords = tuple(Fraction(x) for x in self.coords)
        if len(coords) != self.lattice.rank:
            raise LatticeError("coordinate length does not match lattice rank")
        object.__setattr__(self, "coords", coords)
        g = self.lattice.gram
        n = self.lattice.rank
        for j in range(n):
            if sum(coords[i] * g[i][j] for i in range(n)).denominator != 1:
                raise NotInDual(f"{coords} is not in the dual lattice")

    def norm(self):
        return self.lattice.norm(self.coords)

    def q_value(self):
        return coset_q_value(self)

    def reduced(self):
        """Canonical representative with coordinates in [0, 1)."""
        return CosetVector(self.lattice, tuple(x - math.floor(x) for x in self.coords))

    def __add__(self, other):
        return CosetVector(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return CosetVector(self.lattice, tuple(-a for a in self.coords))

    def __mul__(self, k):
        return CosetVector(self.lattice, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def class_key(self):
        return self.lattice.discriminant().classify(self.coords)

    def to_json(self):
        return [str(x) for x in self.coords]


def coset_q_value(v):
    """(v, v)/2 mod 1 for a dual vector."""
    if not isinstance(v, CosetVector):
        raise TypeError("expected a CosetVector")
    q = v.norm() / 2
    return q - math.floor(q)


def discriminant_group(lattice):
    """Invariant factors d_1 | d_2 | ... (all > 1) and generating dual vectors."""
    data = lattice.discriminant()
    return data.factors, list(data.generators)


# -- named lattices -------------------------------------------------------

def _dn_basis(n):
    rows = []
    for i in range(n - 1):
        r = [0] * n
        r[i], r[i + 1] = 1, -1
        rows.append(r)
    r = [0] * n
    r[n - 2], r[n - 1] = 1, 1
    rows.append(r)
    return rows


def _dn_plus_basis(n):
    half = [Fraction(1, 2)] * n
    return intmat.rational_span_basis(_dn_basis(n) + [half])


def _from_basis(rows, scale, name, structure=None):
    n = len(rows[0])
    gram = [[scale * sum(Fraction(a) * b for a, b in zip(r, s)) for s in rows] for r in rows]
    for r in gram:
        for x in r:
            if Fraction(x).denominator != 1:
                raise LatticeError("basis does not give an integral lattice")
    gram = [[int(x) for x in r] for r in gram]
    return IntegralLattice(gram, name, rows, [scale] * n, structure)


def lattice_D(n, scale=1):
    return _from_basis(_dn_basis(n), scale, f"D{n}" if scale == 1 else f"{scale}*D{n}",
                       {"family": "D", "n": n, "scale": scale})


def lattice_D_plus(n, scale=1):
    if n % 2:
        raise LatticeError("D_n^+ needs even n")
    return _from_basis(_dn_plus_basis(n), scale, f"D{n}+" if scale == 1 else f"{scale}*D{n}+",
                       {"family": "D+", "n": n, "scale": scale})


def hyperbolic_plane():
    return IntegralLattice([[0, 1], [1, 0]], "II_1_1")


NAMED = {
    "sqrt2_D12": lambda: lattice_D(12, 2).renamed("sqrt2_D12"),
    "sqrt2_D12_plus": lambda: lattice_D_plus(12, 2).renamed("sqrt2_D12_plus"),
    "II_1_1": hyperbolic_plane,
    "E8": lambda: lattice_D_plus(8, 1).renamed("E8"),
    "D4": lambda: lattice_D(4, 1).renamed("D4"),
}
ALIASES = {"N": "sqrt2_D12", "K": "sqrt2_D12_plus", "II11": "II_1_1"}


def build_named(name, ops=()):
    """Named lattice, optionally followed by operations.

    ``ops`` is a sequence of ("rescale", k) or ("direct_sum", name_or_lattice).
    """
    key = ALIASES.get(name, name)
    if key not in NAMED:
        raise UnknownName(f"unknown lattice name {name!r}")
    lat = NAMED[key]()
    for op in ops:
        kind, arg = op
        if kind == "rescale":
            lat = lat.rescale(arg)
        elif kind == "direct_sum":
            other = arg if isinstance(arg, IntegralLattice) else build_named(arg)
            lat = lat.direct_sum(other)
        else:
            raise LatticeError(f"unknown operation {kind!r}")
    return lat


# -- short vectors ------------------------------------------------------------

@dataclass
class ShortVectorReport:
    coset: CosetVector
    max_norm: Fraction
    counts: dict
    vectors: list = None

    def to_json(self):
        return {
            "coset": self.coset.to_json(),
            "max_norm": str(self.max_norm),
            "counts": [[str(k), v] for k, v in sorted(self.counts.items())],
        }


def short_vectors(coset, max_norm, want_vectors=False, use_cache=True):
    """All s in coset + L with (s, s) <= max_norm, counted by norm.

    Fincke-Pohst enumeration around the (rational) coset representative.
    With ``want_vectors`` the coordinate vectors are returned as well.
    """
    lat = coset.lattice
    max_norm = Fraction(max_norm)
    if max_norm < 0:
        raise ValueError("max_norm must be nonnegative")
    if not lat.is_positive_definite():
        raise NotPositiveDefinite(f"{lat.name} is not positive definite")
    rep = coset.reduced()
    cache = get_cache() if use_cache and not want_vectors else None
    key = None
    if cache is not None:
        key = ("sv", lat.gram_hash(), [str(x) for x in rep.coords], str(max_norm))
        hit = cache.get(key)
        if hit is not None:
            counts = {Fraction(k): v for k, v in hit}
            return ShortVectorReport(coset, max_norm, counts)
    den = 1
    for x in rep.coords:
        den = math.lcm(den, x.denominator)
    cnum = [int(x * den) for x in rep.coords]
    limit = math.floor(max_norm * den * den)
    hist, zs = kernels.enum_coset([list(r) for r in lat.gram], cnum, den, limit, want_vectors)
    counts = {Fraction(k, den * den): v for k, v in hist.items()}
    counts = dict(sorted(counts.items()))
    vectors = None
    if want_vectors:
        vectors = [tuple(c + z for c, z in zip(rep.coords, zz)) for zz in zs]
    if cache is not None:
        cache.put(key, [[str(k), v] for k, v in counts.items()])
    return ShortVectorReport(coset, max_norm, counts, vectors)
