"""Ready-made event systems and state families used across checks and tests.

Abstract side: Boolean algebras with their classical states, and the
horizontal-sum spaces MO_k (k incomparable complement pairs sharing 0 and the
unit) whose full polytope famously fails conditional uniqueness.

Matrix side: projection lists in 2x2 / 3x3 hermitian algebras bundled with
density states.  Each instance carries per-event densities e / tr(e) plus a
spanning family (identity perturbed by traceless basis directions), so the
pairing between events and states has full rank and the generator sup-norm
attains operator norms on primitive elements.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import cayley, jordan, lueders, orthospace, statespace


def mo_orthospace(k):
    """MO_k: events [0, a_1, a_1', ..., a_k, a_k', unit]; only complements are orthogonal."""
    n = 2 * k + 2
    zero, unit = 0, n - 1
    ortho = np.zeros((n, n), dtype=bool)
    sums = -np.ones((n, n), dtype=np.int64)
    comp = np.zeros(n, dtype=np.int64)
    comp[zero], comp[unit] = unit, zero
    for e in range(n):
        ortho[zero, e] = ortho[e, zero] = True
        sums[zero, e] = sums[e, zero] = e
    for i in range(k):
        a, b = 1 + 2 * i, 2 + 2 * i
        comp[a], comp[b] = b, a
        ortho[a, b] = ortho[b, a] = True
        sums[a, b] = sums[b, a] = unit
    return orthospace.OrthoSpace(
        n_events=n, zero=zero, unit=unit, ortho=ortho, sum_table=sums, complement=comp
    )


def mo_atom(k, i, primed=False):
    """Event index of a_i (or a_i') in mo_orthospace(k)."""
    return 1 + 2 * i + (1 if primed else 0)


def boolean_state(weights):
    """Classical state on boolean_orthospace(len(weights)) from atom weights."""
    w = [Fraction(x) for x in weights]
    if sum(w) != 1:
        raise ValueError("atom weights must sum to 1")
    n = len(w)
    values = []
    for mask in range(1 << n):
        values.append(sum(w[a] for a in range(n) if mask >> a & 1))
    return statespace.State(tuple(values))


def boolean_vertex_states(n_atoms):
    """The n Dirac states: unit mass on one atom."""
    out = []
    for a in range(n_atoms):
        out.append(boolean_state([Fraction(1 if i == a else 0) for i in range(n_atoms)]))
    return out


@dataclass
class MatrixInstance:
    """Projection list in a matrix algebra, with density states and the pairing."""

    tag: str
    n: int
    system: orthospace.ProjectionEventSystem
    densities: list

    @property
    def space(self):
        return self.system.space

    @property
    def elements(self):
        return self.system.elements

    def value_rows(self):
        """(n_states, n_events) array of tr(rho e)."""
        flat_e = np.stack([el.coords.reshape(-1) for el in self.elements])
        flat_s = np.stack([d.element.coords.reshape(-1) for d in self.densities])
        return flat_s @ flat_e.T


def _spanning_densities(tag, n):
    """Identity perturbed along traceless basis directions; spans with the mixed state."""
    out = [lueders.maximally_mixed(tag, n)]
    ident = jordan.identity(tag, n)
    for b in jordan.hermitian_basis(tag, n):
        traceless = b - (jordan.trace(b) / n) * ident
        if jordan.max_abs(traceless) < 1e-12:
            continue
        out.append(lueders.DensityState((ident + 0.4 * traceless) * (1.0 / n)))
    return out


def _instance_from_projections(tag, n, projections, extra_densities=(), tol=1e-8):
    system = orthospace.projection_orthospace(projections, tol=tol)
    densities = []
    for el in system.elements:
        tr = jordan.trace(el)
        if tr > 0.5:
            densities.append(lueders.DensityState(el * (1.0 / tr)))
    densities.extend(_spanning_densities(tag, n))
    densities.extend(extra_densities)
    return MatrixInstance(tag=tag, n=n, system=system, densities=densities)


def _frame_events(frame):
    """All partial sums of an orthogonal frame: singles and pairs (complements)."""
    out = list(frame)
    for i in range(len(frame)):
        for j in range(i + 1, len(frame)):
            out.append(frame[i] + frame[j])
    return out


def qubit_instance(bases=3):
    """2x2 complex projections from the three Pauli bases, plus 0 and the identity."""
    tag, n = "C", 2
    pz = jordan.diag(tag, [1.0, 0.0])
    px = jordan.element(tag, np.array([[[0.5, 0.0], [0.5, 0.0]], [[0.5, 0.0], [0.5, 0.0]]]))
    py = jordan.element(tag, np.array([[[0.5, 0.0], [0.0, -0.5]], [[0.0, 0.5], [0.5, 0.0]]]))
    ident = jordan.identity(tag, n)
    projections = [jordan.zero(tag, n), ident]
    for p in (pz, px, py)[:bases]:
        projections.extend([p, ident - p])
    return _instance_from_projections(tag, n, projections)


def qutrit_instance(generic_frames=3, seed=5):
    """3x3 complex projections: the diagonal frame plus generic frames, all closed up."""
    tag, n = "C", 3
    rng = np.random.default_rng(seed)
    projections = [jordan.zero(tag, n), jordan.identity(tag, n)]
    diag_frame = [jordan.diag(tag, [1.0 if i == j else 0.0 for i in range(n)]) for j in range(n)]
    projections.extend(_frame_events(diag_frame))
    for _ in range(generic_frames):
        projections.extend(_frame_events(jordan.random_frame(tag, n, rng)))
    return _instance_from_projections(tag, n, projections)


def real_symmetric_instance(generic_frames=3, seed=9):
    """3x3 real symmetric analogue of the qutrit instance."""
    tag, n = "R", 3
    rng = np.random.default_rng(seed)
    projections = [jordan.zero(tag, n), jordan.identity(tag, n)]
    diag_frame = [jordan.diag(tag, [1.0 if i == j else 0.0 for i in range(n)]) for j in range(n)]
    projections.extend(_frame_events(diag_frame))
    for _ in range(generic_frames):
        projections.extend(_frame_events(jordan.random_frame(tag, n, rng)))
    return _instance_from_projections(tag, n, projections)


def _rank1_from_vector(tag, v):
    """Projection onto the line spanned by a unit coordinate column v (n, k)."""
    n = v.shape[0]
    c = np.empty((n, n, v.shape[1]))
    for i in range(n):
        for j in range(n):
            c[i, j] = cayley.multiply(v[i], cayley.conj(v[j]))
    return jordan.JordanElement(tag, n, c)


def sparse_conditioning_instance(seed=13):
    """3x3 instance too poor to represent a compressed event.

    Events: 0, identity, the rank-2 diagonal e, its complement, one generic
    rank-1 f with complement.  Compressing f by e lands outside the span of
    every orthogonal family available here.
    """
    tag, n = "C", 3
    rng = np.random.default_rng(seed)
    e = jordan.diag(tag, [1.0, 1.0, 0.0])
    v = rng.normal(size=(n, 2))
    v /= np.sqrt(np.sum(v * v))
    f = _rank1_from_vector(tag, v)
    ident = jordan.identity(tag, n)
    projections = [jordan.zero(tag, n), ident, e, ident - e, f, ident - f]
    return _instance_from_projections(tag, n, projections)


def enriched_conditioning_instance(seed=13):
    """The sparse instance extended by the spectral projections of {e,f,e}."""
    base = sparse_conditioning_instance(seed)
    e, f = base.elements[2], base.elements[4]
    compressed = jordan.triple_product(e, f, e)
    spec = jordan.spectral_decomposition(compressed)
    ident = jordan.identity(base.tag, base.n)
    g = None
    for value, p in zip(spec.values, spec.frame):
        if abs(value) > 1e-8 and abs(jordan.trace(p) - 1.0) < 1e-6:
            g = p
    if g is None:
        raise RuntimeError("compressed element lost its rank-1 part")
    ec = ident - e
    projections = [el for el in base.elements]
    # f is orthogonal to e - g (its overlap with e lies along g), so the sum
    # f + (e - g) and its complement are forced into the closure as well
    projections.extend([g, ident - g, g + ec, e - g, f + e - g, ident - (f + e - g)])
    return _instance_from_projections(base.tag, base.n, projections)


def sparse_sum_instance():
    """Qubit instance with only the z and x bases: e + f has no spectral events."""
    return qubit_instance(bases=2)


def enriched_sum_instance():
    """z and x bases extended by the spectral projections of pz + px."""
    base = qubit_instance(bases=2)
    pz, px = base.elements[2], base.elements[4]
    spec = jordan.spectral_decomposition(pz + px)
    ident = jordan.identity(base.tag, base.n)
    projections = [el for el in base.elements]
    w = spec.frame[-1]
    projections.extend([w, ident - w])
    return _instance_from_projections(base.tag, base.n, projections)
