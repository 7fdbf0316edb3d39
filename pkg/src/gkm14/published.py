"""Printed data: leading coefficients of the V_K^+ characters, of f_n = g_n / eta^12, and the orbit tables.

Each entry maps an exponent of q to its coefficient, exactly as printed,
including the overall q^{-1/2} of the g-lines.  These are comparison data:
nothing in the package computes from them.
"""

from fractions import Fraction

from .series import PuiseuxSeries

_H = Fraction(1, 2)
_Q = Fraction(1, 4)


def _shifted(shift, pairs):
    return {Fraction(e) + shift: c for e, c in pairs}


G_PRINTED = {
    1: _shifted(-_H, [(0, 1), (2, 210), (3, 2752), (4, 29727), (5, 225408)]),
    2: _shifted(-_H, [(1, 12), (2, 144), (3, 2984), (4, 29088), (5, 227004)]),
    3: _shifted(-_H, [(1, 4), (2, 176), (3, 2872), (4, 29408), (5, 226196)]),
    4: _shifted(-_H, [(_H, 1), (3 * _H, 32), (5 * _H, 768), (7 * _H, 9600), (9 * _H, 83968)]),
    5: _shifted(-_H, [(3 * _H, 32), (5 * _H, 384), (7 * _H, 4992), (9 * _H, 49408)]),
    6: _shifted(-_H, [(5 * _Q, 12), (9 * _Q, 376), (13 * _Q, 5316), (17 * _Q, 50088)]),
    7: _shifted(-_H, [(3 * _Q, 1), (7 * _Q, 78), (11 * _Q, 1509), (15 * _Q, 16966)]),
}

F_PRINTED = {
    1: {-1: 1, 0: 12, 1: 300, 2: 5792, 3: 84186},
    2: {0: 12, 1: 288, 2: 5792, 3: 84096},
    3: {0: 4, 1: 224, 2: 5344, 3: 81792},
    4: {-_H: 1, _H: 44, 3 * _H: 1242, 5 * _H: 22216},
    5: {_H: 32, 3 * _H: 1152, 5 * _H: 21696},
    6: {_Q: 12, 5 * _Q: 520, 9 * _Q: 10908},
    7: {-_Q: 1, 3 * _Q: 90, 7 * _Q: 2535, 11 * _Q: 42614},
}


def printed_series(kind, n):
    """The printed terms of g_n or f_n as a PuiseuxSeries (no truncation)."""
    data = {"g": G_PRINTED, "f": F_PRINTED}[kind][n]
    return PuiseuxSeries.from_exponents({Fraction(e): c for e, c in data.items()})


def printed_range(kind, n):
    """(lowest, highest) printed exponent."""
    data = {"g": G_PRINTED, "f": F_PRINTED}[kind][n]
    es = sorted(Fraction(e) for e in data)
    return es[0], es[-1]


def compare(kind, n, computed):
    """Mismatches ``(exponent, printed, computed)`` over the printed exponent range.

    Every exponent on the computed series' grid up to the last printed one
    is checked, so a computed term the printout omits also counts.
    """
    data = {Fraction(e): c for e, c in {"g": G_PRINTED, "f": F_PRINTED}[kind][n].items()}
    lo, hi = printed_range(kind, n)
    out = []
    exps = set(data) | {e for e, _ in computed.items() if lo <= e <= hi}
    for e in sorted(exps):
        got = computed.coeff(e)
        want = data.get(e, 0)
        if got != want:
            out.append((e, want, got))
    return out


# printed orbit tables: (lift orbit size, norm, orbit size, q, order) per row
TABLE1_PRINTED = [
    (1, 0, 1, 0, 1),
    (24, 2, 1, 0, 2),
    (4096, 6, 2, 0, 2),
    (7920, 2, 990, 0, 2),
    (126720, 4, 990, 0, 2),
    (264, 1, 132, _H, 2),
    (59136, 3, 1848, _H, 2),
    (67584, 5, 132, _H, 2),
    (24, _H, 24, _Q, 4),
    (25344, 5 * _H, 1584, _Q, 4),
    (112640, 9 * _H, 440, _Q, 4),
    (49152, 5 * _H, 4096, _Q, 4),
    (1760, 3 * _H, 440, 3 * _Q, 4),
    (101376, 7 * _H, 1584, 3 * _Q, 4),
    (24576, 11 * _H, 24, 3 * _Q, 4),
    (4096, 3 * _H, 4096, 3 * _Q, 4),
]

TABLE2_PRINTED = [
    (1, 0, 1, 0, 1),
    (24, 2, 1, 0, 2),
    (7920, 2, 990, 0, 2),
    (264, 1, 132, _H, 2),
    (59136, 3, 924, _H, 2),
    (24576, 5 * _H, 1024, _Q, 2),
    (2048, 3 * _H, 1024, 3 * _Q, 2),
]

PRINTED_TABLES = {"N": TABLE1_PRINTED, "K": TABLE2_PRINTED}


def table_mismatches(name, table):
    """Rows of a computed orbit table that differ from the printed one."""
    printed = PRINTED_TABLES[name]
    if len(table.rows) != len(printed):
        return [("rows", len(printed), len(table.rows))]
    out = []
    for row, want in zip(table.rows, printed):
        got = (row.lift_orbit_size, row.lift_norm, row.size, row.q, row.order)
        want = tuple(Fraction(x) for x in want)
        if tuple(Fraction(x) for x in got) != want:
            out.append((row.number, [str(x) for x in want], [str(x) for x in got]))
    return out
