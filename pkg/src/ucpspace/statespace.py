"""States on an orthospace, exactly.

A state assigns a rational probability to every event: 1 on the unit, additive
on orthogonal pairs, values in [0, 1].  Everything in this module runs over
`fractions.Fraction`, so verdicts are exact: the full state polytope is cut
out by equality rows plus box bounds, vertices are enumerated exactly, and
uniqueness questions are settled by the in-repo rational simplex.

Two polytope modes:

    FULL       all states of the orthospace (equality rows + [0,1] box), with
               optional exact vertex enumeration (event count <= 64)
    GENERATED  the convex hull of an explicit list of states (restricted
               state-space models)

Countable-additivity and continuity variants of the state axioms are vacuous
at finite event counts: every state here is trivially countably additive and
every monotone net of events is eventually constant.  That fact is documented
here once; no runtime check exists for it.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import linsolve, orthospace
from .errors import (
    CapacityError,
    ConditioningUndefinedError,
    PreconditionError,
    UcpError,
)
from .exactlp import INFEASIBLE, OPTIMAL, solve_lp

FULL = "FULL"
GENERATED = "GENERATED"

UNIQUE = "UNIQUE"
MULTIPLE = "MULTIPLE"
EMPTY = "EMPTY"

_COMBO_CAP = 500_000
_VERTEX_CAP = 1_000_000
_VERTEX_EVENT_CAP = 64


def _frac(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"exact rational required, got {type(v).__name__}")


@dataclass(frozen=True)
class State:
    """Event-indexed probability vector. Exact when every value is a Fraction."""

    values: tuple

    def __getitem__(self, e):
        return self.values[e]

    def __len__(self):
        return len(self.values)

    @property
    def exact(self):
        return all(isinstance(v, (Fraction, int)) for v in self.values)

    @staticmethod
    def exact_from(values):
        return State(tuple(_frac(v) for v in values))


def is_state(space, state):
    """Exact state check. Returns (ok, violations); each violation is replayable.

    Violation shapes: ("length", got, want), ("unit", value),
    ("range", event, value), ("additivity", e, f, value, expected).
    """
    n = space.n_events
    viol = []
    if len(state) != n:
        return False, [("length", len(state), n)]
    vals = [_frac(v) for v in state.values]
    if vals[space.unit] != 1:
        viol.append(("unit", vals[space.unit]))
    for e in range(n):
        if not (0 <= vals[e] <= 1):
            viol.append(("range", e, vals[e]))
    st = space.sum_table
    for e in range(n):
        for f in range(e, n):
            if space.ortho[e, f] and st[e, f] >= 0:
                s = int(st[e, f])
                if vals[e] + vals[f] != vals[s]:
                    viol.append(("additivity", e, f, vals[e] + vals[f], vals[s]))
    return not viol, viol


def equality_rows(space):
    """Defining equalities of the state set: unit mass plus additivity rows."""
    n = space.n_events
    rows = []
    unit_row = [Fraction(0)] * n
    unit_row[space.unit] = Fraction(1)
    rows.append((tuple(unit_row), Fraction(1)))
    seen = set()
    st = space.sum_table
    for e in range(n):
        for f in range(e, n):
            if space.ortho[e, f] and st[e, f] >= 0:
                s = int(st[e, f])
                row = [Fraction(0)] * n
                row[e] += 1
                row[f] += 1
                row[s] -= 1
                key = tuple(row)
                if any(v != 0 for v in key) and key not in seen:
                    seen.add(key)
                    rows.append((key, Fraction(0)))
    return rows


@dataclass
class StatePolytope:
    space: orthospace.OrthoSpace
    mode: str
    eq_rows: list | None = None
    generators: list | None = field(default=None)

    @property
    def exact(self):
        return self.generators is None or all(g.exact for g in self.generators)

    def affine_dim(self):
        """Dimension of the affine hull candidate (FULL mode: nullity of the rows)."""
        if self.mode == FULL:
            sol = linsolve.solve_affine([list(r) for r, _ in self.eq_rows], [b for _, b in self.eq_rows])
            return -1 if sol is None else len(sol[1])
        pts = [g.values for g in self.generators]
        if not pts:
            return -1
        diffs = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
        return linsolve.rank(diffs) if diffs else 0


def build_state_polytope(space, with_vertices=True):
    """FULL polytope; vertices enumerated exactly when the space is small enough."""
    poly = StatePolytope(space=space, mode=FULL, eq_rows=equality_rows(space))
    if with_vertices and space.n_events <= _VERTEX_EVENT_CAP:
        poly.generators = [State(tuple(v)) for v in _enumerate_vertices(poly.eq_rows, space.n_events)]
    return poly


def generated_polytope(space, states):
    """Convex hull of an explicit generator list (restricted state spaces)."""
    return StatePolytope(space=space, mode=GENERATED, generators=list(states))


def _enumerate_vertices(eq_rows, n):
    """Exact vertex enumeration of {x in [0,1]^n : rows}. Order is deterministic."""
    if not eq_rows:
        # no constraints beyond the box itself: the vertices are the corners
        if 2**n > _VERTEX_CAP:
            raise CapacityError("vertex count exceeds the cap")
        return [
            tuple(Fraction((mask >> i) & 1) for i in range(n))
            for mask in range(2**n)
        ]
    a = [list(r) for r, _ in eq_rows]
    b = [rhs for _, rhs in eq_rows]
    sol = linsolve.solve_affine(a, b)
    if sol is None:
        return []
    x0, basis = sol
    d = len(basis)
    if d == 0:
        return [x0] if all(0 <= v <= 1 for v in x0) else []
    # inequality rows alpha.t <= beta from the box bounds of each coordinate
    ineq = []
    for i in range(n):
        coeffs = tuple(bvec[i] for bvec in basis)
        if all(c == 0 for c in coeffs):
            if not (0 <= x0[i] <= 1):
                return []
            continue
        ineq.append((coeffs, 1 - x0[i]))
        ineq.append((tuple(-c for c in coeffs), x0[i]))
    m = len(ineq)
    if math.comb(m, d) > _COMBO_CAP:
        raise CapacityError(f"vertex enumeration over C({m},{d}) combinations exceeds the cap")
    seen = set()
    out = []
    for combo in itertools.combinations(range(m), d):
        rows = [list(ineq[i][0]) for i in combo]
        rhs = [ineq[i][1] for i in combo]
        t = linsolve.solve_unique(rows, rhs)
        if t is None:
            continue
        if any(sum(c * tv for c, tv in zip(coeffs, t)) > beta for coeffs, beta in ineq):
            continue
        x = tuple(x0[i] + sum(bvec[i] * tv for bvec, tv in zip(basis, t)) for i in range(n))
        if x not in seen:
            seen.add(x)
            out.append(x)
            if len(out) > _VERTEX_CAP:
                raise CapacityError("vertex count exceeds the cap")
    return out


@dataclass
class SeparationReport:
    """Do the generators tell every pair of events apart?"""

    passed: bool
    witness: tuple | None = None  # (e, f, per-generator values)


def check_separation(polytope):
    """States separate events: no two events agree on every generator."""
    gens = polytope.generators
    if gens is None:
        raise PreconditionError("separation check needs generators (vertices or an explicit list)")
    n = polytope.space.n_events
    seen = {}
    for e in range(n):
        key = tuple(g[e] for g in gens)
        if key in seen:
            return SeparationReport(False, (seen[key], e, key))
        seen[key] = e
    return SeparationReport(True)


@dataclass
class ConditionalSlice:
    """States compatible with conditioning mu on e: nu(f) = mu(f)/mu(e) on f < e."""

    polytope: StatePolytope
    mu: State
    event: int
    constraint_events: list
    targets: list

    def satisfied_by(self, nu):
        ok, _ = is_state(self.polytope.space, nu)
        if not ok:
            return False
        return all(nu[f] == t for f, t in zip(self.constraint_events, self.targets))


def conditional_slice(polytope, mu, e, family=None):
    """Build the conditioning constraints.

    `family` optionally overrides the constrained events (default: every f that
    precedes e in the orthogonality sense).  Zero mass on e is an error.
    """
    space = polytope.space
    me = _frac(mu[e])
    if me == 0:
        raise ConditioningUndefinedError(f"event {e} has zero probability under the given state")
    if family is None:
        family = [f for f in range(space.n_events) if orthospace.precedes(space, f, e)]
    targets = [_frac(mu[f]) / me for f in family]
    return ConditionalSlice(polytope, mu, e, list(family), targets)


@dataclass
class ConditionalVerdict:
    verdict: str
    conditional: State | None = None
    witnesses: tuple | None = None  # (nu1, nu2, event) for MULTIPLE
    certificate: object | None = None  # Farkas object for EMPTY
    slice_dim: int | None = None


def _slice_rows(slc):
    rows = list(slc.polytope.eq_rows)
    n = slc.polytope.space.n_events
    for f, t in zip(slc.constraint_events, slc.targets):
        row = [Fraction(0)] * n
        row[f] = Fraction(1)
        rows.append((tuple(row), t))
    return rows


def _feasibility_certificate(rows, n):
    res = solve_lp([Fraction(0)] * n, [list(r) for r, _ in rows], [b for _, b in rows], bounds=[(0, 1)] * n)
    return res.farkas if res.status == INFEASIBLE else None


def check_conditional_uniqueness(polytope, mu, e, family=None):
    """Is the conditional of mu under e unique within the polytope?

    FULL mode reduces the slice's equality system by exact elimination and
    bounds each remaining free coordinate by exact LPs; the event evaluations
    are affine and injective in those coordinates, so "every free coordinate
    pinned" is equivalent to the per-event min = max criterion.  GENERATED mode
    runs the per-event LPs in convex-coefficient space directly.
    """
    slc = conditional_slice(polytope, mu, e, family)
    if polytope.mode == GENERATED:
        return _uc_generated(slc)
    return _uc_full(slc)


def _uc_full(slc):
    n = slc.polytope.space.n_events
    rows = _slice_rows(slc)
    a = [list(r) for r, _ in rows]
    b = [rhs for _, rhs in rows]
    sol = linsolve.solve_affine(a, b)
    if sol is None:
        return ConditionalVerdict(EMPTY, certificate=_feasibility_certificate(rows, n), slice_dim=-1)
    x0, basis = sol
    d = len(basis)
    if d == 0:
        if all(0 <= v <= 1 for v in x0):
            return ConditionalVerdict(UNIQUE, conditional=State(tuple(x0)), slice_dim=0)
        return ConditionalVerdict(EMPTY, certificate=_feasibility_certificate(rows, n), slice_dim=0)

    # t-space LP data: box rows over the free coordinates
    ineq = []
    for i in range(n):
        coeffs = tuple(bvec[i] for bvec in basis)
        if all(c == 0 for c in coeffs):
            if not (0 <= x0[i] <= 1):
                return ConditionalVerdict(EMPTY, certificate=_feasibility_certificate(rows, n), slice_dim=d)
            continue
        ineq.append((coeffs, 1 - x0[i]))
        ineq.append((tuple(-c for c in coeffs), x0[i]))

    m = len(ineq)
    # variables: t (free) then one slack per inequality row
    def lp(cvec, maximize):
        c = list(cvec) + [Fraction(0)] * m
        a_eq = []
        b_eq = []
        for r, (coeffs, beta) in enumerate(ineq):
            row = list(coeffs) + [Fraction(0)] * m
            row[d + r] = Fraction(1)
            a_eq.append(row)
            b_eq.append(beta)
        bounds = [(None, None)] * d + [(0, None)] * m
        return solve_lp(c, a_eq, b_eq, bounds, maximize=maximize)

    feas = lp([Fraction(0)] * d, False)
    if feas.status == INFEASIBLE:
        return ConditionalVerdict(EMPTY, certificate=_feasibility_certificate(rows, n), slice_dim=d)

    def to_state(t):
        return State(tuple(x0[i] + sum(bvec[i] * tv for bvec, tv in zip(basis, t)) for i in range(n)))

    pinned = []
    for j in range(d):
        cvec = [Fraction(0)] * d
        cvec[j] = Fraction(1)
        lo = lp(cvec, False)
        hi = lp(cvec, True)
        if lo.status != OPTIMAL or hi.status != OPTIMAL:
            raise UcpError("bounded slice reported unbounded; inconsistent tables")
        if lo.objective != hi.objective:
            nu1 = to_state(lo.x[:d])
            nu2 = to_state(hi.x[:d])
            g = next(i for i in range(n) if nu1[i] != nu2[i])
            return ConditionalVerdict(MULTIPLE, witnesses=(nu1, nu2, g), slice_dim=d)
        pinned.append(lo.objective)
    return ConditionalVerdict(UNIQUE, conditional=to_state(pinned), slice_dim=d)


def _uc_generated(slc):
    if not slc.polytope.exact:
        raise PreconditionError("generator-list uniqueness check needs exact rational generators")
    gens = slc.polytope.generators
    n = slc.polytope.space.n_events
    g = len(gens)
    a_eq = [[Fraction(1)] * g]
    b_eq = [Fraction(1)]
    for f, t in zip(slc.constraint_events, slc.targets):
        a_eq.append([_frac(gen[f]) for gen in gens])
        b_eq.append(t)
    bounds = [(0, None)] * g

    feas = solve_lp([Fraction(0)] * g, a_eq, b_eq, bounds)
    if feas.status == INFEASIBLE:
        return ConditionalVerdict(EMPTY, certificate=feas.farkas, slice_dim=None)

    def to_state(lam):
        return State(tuple(sum(_frac(gen[i]) * l for gen, l in zip(gens, lam)) for i in range(n)))

    for ev in range(n):
        c = [_frac(gen[ev]) for gen in gens]
        lo = solve_lp(c, a_eq, b_eq, bounds)
        hi = solve_lp(c, a_eq, b_eq, bounds, maximize=True)
        if lo.objective != hi.objective:
            nu1, nu2 = to_state(lo.x), to_state(hi.x)
            return ConditionalVerdict(MULTIPLE, witnesses=(nu1, nu2, ev), slice_dim=None)
    return ConditionalVerdict(UNIQUE, conditional=to_state(feas.x), slice_dim=None)


def unique_conditional(polytope, mu, e):
    """The unique conditional state, or an error naming the obstruction."""
    v = check_conditional_uniqueness(polytope, mu, e)
    if v.verdict == UNIQUE:
        return v.conditional
    raise PreconditionError(f"conditional of the given state under event {e} is {v.verdict}")


def state_with_mass_one(polytope, e):
    """Some state giving event e probability 1, or None (exact feasibility LP)."""
    n = polytope.space.n_events
    if polytope.mode == FULL:
        rows = list(polytope.eq_rows)
        row = [Fraction(0)] * n
        row[e] = Fraction(1)
        rows.append((tuple(row), Fraction(1)))
        res = solve_lp([Fraction(0)] * n, [list(r) for r, _ in rows], [b for _, b in rows], bounds=[(0, 1)] * n)
        return State(tuple(res.x)) if res.status == OPTIMAL else None
    gens = polytope.generators
    g = len(gens)
    a_eq = [[Fraction(1)] * g, [_frac(gen[e]) for gen in gens]]
    b_eq = [Fraction(1), Fraction(1)]
    res = solve_lp([Fraction(0)] * g, a_eq, b_eq, [(0, None)] * g)
    if res.status != OPTIMAL:
        return None
    return State(tuple(sum(_frac(gen[i]) * l for gen, l in zip(gens, res.x)) for i in range(n)))


@dataclass
class MixtureReport:
    """Conditioning a mixture: weights rescale by the conditioned masses."""

    passed: bool
    mixture: State
    lhs: State
    rhs: State


def mix_states(mu, nu, s):
    s = _frac(s)
    return State(tuple(s * _frac(a) + (1 - s) * _frac(b) for a, b in zip(mu.values, nu.values)))


def check_mixture_identity(polytope, mu, nu, s, e):
    """Exact check that conditioning commutes with mixing.

    The conditional of s mu + (1-s) nu under e equals the mixture of the two
    conditionals reweighted by s mu(e) and (1-s) nu(e); a component with zero
    mass on e contributes nothing.  Conditionals must be unique wherever the
    relevant mass is positive, else PreconditionError.
    """
    s = _frac(s)
    if not (0 < s < 1):
        raise PreconditionError("mixing weight must be strictly between 0 and 1")
    mix = mix_states(mu, nu, s)
    total = s * _frac(mu[e]) + (1 - s) * _frac(nu[e])
    if total == 0:
        raise ConditioningUndefinedError("mixture puts zero mass on the conditioning event")
    lhs = unique_conditional(polytope, mix, e)
    n = polytope.space.n_events
    acc = [Fraction(0)] * n
    for state, w in ((mu, s * _frac(mu[e])), (nu, (1 - s) * _frac(nu[e]))):
        if w != 0:
            cond = unique_conditional(polytope, state, e)
            for i in range(n):
                acc[i] += w * _frac(cond[i])
    rhs = State(tuple(v / total for v in acc))
    return MixtureReport(lhs.values == rhs.values, mix, lhs, rhs)


def conditional_oracle(polytope):
    """Closure suitable for the synthesis layer: state, event -> conditional."""

    def oracle(mu, e):
        return unique_conditional(polytope, mu, e)

    return oracle
