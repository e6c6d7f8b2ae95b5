"""Exact rational linear programming: dense two-phase simplex, Bland's rule.

All verdict-bearing optimizations in the toolkit run through this solver with
`fractions.Fraction` data, so results are exact and anti-cycling is guaranteed
(Bland's rule).  Problems here are tiny (a few dozen variables), so a full
dense tableau is the right tool.

Interface:

    solve_lp(c, a_eq, b_eq, bounds, maximize=False) -> LpResult

minimizes (or maximizes) c.x subject to A x = b and per-variable bounds
(lo, hi), either of which may be None.  An infeasible problem carries a Farkas
certificate y for the standardized system (y.A <= 0 on every standard-form
column while y.b > 0), replayable via `verify_farkas`.
"""

from dataclasses import dataclass
from fractions import Fraction

OPTIMAL = "OPTIMAL"
INFEASIBLE = "INFEASIBLE"
UNBOUNDED = "UNBOUNDED"


@dataclass
class Farkas:
    """Infeasibility certificate: y.b > 0, y.A <= 0 for the standardized Ax=b, x>=0."""

    a_rows: list
    b: list
    y: list


@dataclass
class LpResult:
    status: str
    x: list | None
    objective: Fraction | None
    farkas: Farkas | None = None


def verify_farkas(cert):
    """Replay a Farkas certificate exactly."""
    yb = sum(yi * bi for yi, bi in zip(cert.y, cert.b))
    if yb <= 0:
        return False
    ncols = len(cert.a_rows[0]) if cert.a_rows else 0
    for j in range(ncols):
        col = sum(yi * row[j] for yi, row in zip(cert.y, cert.a_rows))
        if col > 0:
            return False
    return True


def _to_fraction(v):
    return v if isinstance(v, Fraction) else Fraction(v)


class _Standardizer:
    """Rewrites bounded free variables into standard form x >= 0, Ax = b."""

    def __init__(self, n, bounds):
        self.n = n
        self.bounds = [(None, None)] * n if bounds is None else list(bounds)
        # per original variable: list of (std_index, sign, shift) contributions
        self.mapping = []
        self.extra_rows = []  # (coeffs dict over std vars, rhs) for upper bounds
        std = 0
        for lo, hi in self.bounds:
            lo = None if lo is None else _to_fraction(lo)
            hi = None if hi is None else _to_fraction(hi)
            if lo is None and hi is None:
                self.mapping.append([(std, 1, Fraction(0)), (std + 1, -1, Fraction(0))])
                std += 2
            elif lo is not None:
                self.mapping.append([(std, 1, lo)])
                if hi is not None:
                    # (x - lo) + slack = hi - lo
                    self.extra_rows.append(({std: Fraction(1), std + 1: Fraction(1)}, hi - lo))
                    std += 2
                else:
                    std += 1
            else:
                # only an upper bound: x = hi - x', x' >= 0
                self.mapping.append([(std, -1, hi)])
                std += 1
        self.n_std = std

    def row(self, coeffs, rhs):
        """Map an equality row over original variables into standard form."""
        out = [Fraction(0)] * self.n_std
        r = _to_fraction(rhs)
        for j, cj in enumerate(coeffs):
            cj = _to_fraction(cj)
            if cj == 0:
                continue
            for std_j, sign, shift in self.mapping[j]:
                out[std_j] += cj * sign
            r -= cj * self.mapping[j][0][2]
        return out, r

    def recover(self, x_std):
        out = []
        for contribs in self.mapping:
            v = Fraction(0)
            for std_j, sign, shift in contribs:
                v += sign * x_std[std_j]
            out.append(v + contribs[0][2])
        return out


def _pivot(tab, basis, r, c):
    piv = tab[r][c]
    tab[r] = [v / piv for v in tab[r]]
    for i, row in enumerate(tab):
        if i != r and row[c] != 0:
            f = row[c]
            tab[i] = [a - f * b for a, b in zip(row, tab[r])]
    basis[r] = c


def _simplex(tab, basis, ncols):
    """Bland-rule simplex on a tableau whose last row is the objective (min)."""
    while True:
        obj = tab[-1]
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            return OPTIMAL
        leave = None
        best = None
        for i in range(len(tab) - 1):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return UNBOUNDED
        _pivot(tab, basis, leave, enter)


def solve_lp(c, a_eq, b_eq, bounds=None, maximize=False):
    """Exact LP over Fractions. See module docstring."""
    n = len(c)
    std = _Standardizer(n, bounds)
    rows = []
    for coeffs, rhs in zip(a_eq, b_eq):
        rows.append(std.row(coeffs, rhs))
    for coeffs_map, rhs in std.extra_rows:
        row = [Fraction(0)] * std.n_std
        for j, v in coeffs_map.items():
            row[j] = v
        rows.append((row, rhs))

    # objective over standard variables
    c_std = [Fraction(0)] * std.n_std
    const = Fraction(0)
    sign = Fraction(-1) if maximize else Fraction(1)
    for j, cj in enumerate(c):
        cj = sign * _to_fraction(cj)
        if cj == 0:
            continue
        for std_j, s, shift in std.mapping[j]:
            c_std[std_j] += cj * s
        const += cj * std.mapping[j][0][2]

    m = len(rows)
    a = [list(r[0]) for r in rows]
    b = [r[1] for r in rows]
    for i in range(m):
        if b[i] < 0:
            a[i] = [-v for v in a[i]]
            b[i] = -b[i]

    # phase 1: artificial basis
    ncols = std.n_std
    tab = []
    for i in range(m):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        tab.append(a[i] + art + [b[i]])
    # phase-1 objective: sum of artificials, expressed over nonbasic columns
    obj = [Fraction(0)] * (ncols + m) + [Fraction(0)]
    for i in range(m):
        obj = [o - v for o, v in zip(obj, tab[i])]
    for j in range(ncols, ncols + m):
        obj[j] = Fraction(0)
    tab.append(obj)
    basis = list(range(ncols, ncols + m))
    _simplex(tab, basis, ncols + m)
    w = -tab[-1][-1]
    if w > 0:
        # the objective row keeps the form cost_row - y.rows, so the entry under
        # artificial column i (original cost 1) is 1 - y_i
        y = [Fraction(1) - tab[-1][ncols + i] for i in range(m)]
        cert = Farkas(a_rows=a, b=b, y=y)
        if not verify_farkas(cert):
            cert = None
        return LpResult(INFEASIBLE, None, None, cert)

    # drive artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= ncols:
            pivot_col = next((j for j in range(ncols) if tab[i][j] != 0), None)
            if pivot_col is not None:
                _pivot(tab, basis, i, pivot_col)
    # rows still basic in an artificial are identically zero: drop them
    keep = [i for i in range(m) if basis[i] < ncols]
    tab = [[tab[i][j] for j in range(ncols)] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    # phase 2
    obj = list(c_std) + [Fraction(0)]
    tab.append(obj)
    for i, bi in enumerate(basis):
        f = tab[-1][bi]
        if f != 0:
            tab[-1] = [a2 - f * b2 for a2, b2 in zip(tab[-1], tab[i])]
    status = _simplex(tab, basis, ncols)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED, None, None)
    x_std = [Fraction(0)] * ncols
    for i, bi in enumerate(basis):
        x_std[bi] = tab[i][-1]
    x = std.recover(x_std)
    objective = -tab[-1][-1] + const
    if maximize:
        objective = -objective
    return LpResult(OPTIMAL, x, objective)
