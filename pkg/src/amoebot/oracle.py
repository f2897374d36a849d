"""Exact enumeration of small particle systems and their transition chains.

All probabilities are exact: ``fractions.Fraction`` for a numeric bias, or
``sympy`` expressions when ``lam`` is a sympy symbol.  A symbolic bias is
assumed to satisfy ``lam >= 1`` so that the Metropolis factor
``min(1, lam**d)`` is ``lam**d`` for ``d < 0`` and 1 otherwise.

States are configurations modulo translation (optionally also the mirror
image across the vertical axis).  Both symmetries preserve heights and the
column structure seen by the light, so the chain, its height increments and
the light pattern are all well defined on classes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .dynamics import Kernel, Mode, specialized_outcomes, DynamicsParams
from .lattice import DIRECTIONS, AxialCoord, reflect, twice_height
from .light import lit_particles
from .system import ParticleSystem, edge_count, local_move_valid

try:  # optional symbolic bias
    import sympy
except ImportError:  # pragma: no cover
    sympy = None

MAX_N = 6


class Symmetry(enum.Enum):
    TRANSLATION = "translation"
    TRANSLATION_REFLECTION = "translation_reflection"


class ReducibleChainError(ValueError):
    pass


def _translate_min(cells) -> tuple[AxialCoord, ...]:
    base = min(cells)
    return tuple(sorted(AxialCoord(u - base[0], v - base[1]) for u, v in cells))


def canonical_form(cells, symmetry: Symmetry = Symmetry.TRANSLATION_REFLECTION) -> tuple[AxialCoord, ...]:
    """Sorted coordinates with the lexicographically smallest vertex at the origin.

    The smallest vertex has minimal column and, within it, minimal height.
    With reflection, the smaller of the form and its mirror image is used.
    """
    cells = list(cells)
    form = _translate_min(cells)
    if Symmetry(symmetry) is Symmetry.TRANSLATION_REFLECTION:
        form = min(form, _translate_min([reflect(c) for c in cells]))
    return form


@dataclass(frozen=True)
class StateClass:
    canonical: tuple
    symmetry: Symmetry
    edges: int
    lit: int

    @classmethod
    def of(cls, cells, symmetry: Symmetry) -> "StateClass":
        form = canonical_form(cells, symmetry)
        system = ParticleSystem(form)
        return cls(form, Symmetry(symmetry), system.edges, len(lit_particles(system)))

    @property
    def n(self) -> int:
        return len(self.canonical)

    def system(self) -> ParticleSystem:
        return ParticleSystem(self.canonical)

    def __str__(self) -> str:
        return " ".join(f"({u},{v})" for u, v in self.canonical)


def enumerate_states(n: int, symmetry: Symmetry = Symmetry.TRANSLATION_REFLECTION) -> list[StateClass]:
    """All connected ``n``-particle configurations modulo ``symmetry``.

    Built by attaching one vertex at a time; every connected set has a
    vertex whose removal keeps it connected, so nothing is missed.
    """
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must lie in 1..{MAX_N}, got {n}")
    symmetry = Symmetry(symmetry)
    forms = {canonical_form([(0, 0)], symmetry)}
    for _ in range(n - 1):
        grown = set()
        for form in forms:
            occupied = set(form)
            for u, v in form:
                for du, dv in DIRECTIONS:
                    c = (u + du, v + dv)
                    if c not in occupied:
                        grown.add(canonical_form(list(form) + [c], symmetry))
        forms = grown
    return [StateClass.of(f, symmetry) for f in sorted(forms)]


# --- exact one-activation kernel -------------------------------------------


def _is_symbolic(x) -> bool:
    return sympy is not None and isinstance(x, sympy.Basic)


def _exact(x):
    if _is_symbolic(x) or isinstance(x, Fraction):
        return x
    return Fraction(x)


def metropolis_factor(lam, d: int):
    """``min(1, lam**d)`` exactly."""
    if _is_symbolic(lam):
        return lam ** d if d < 0 else sympy.Integer(1)
    p = lam ** d
    return p if p < 1 else Fraction(1)


def activation_outcomes(cells, lam, *, kernel: Kernel, mode: Mode, dim_prob=Fraction(1, 4),
                        light_enabled: bool = True, rates: tuple | None = None) -> list[tuple]:
    """Exact distribution of one activation from the configuration ``cells``.

    Returns ``(probability, mover, target, doubled height change)`` for every
    move with positive probability; the remaining mass is "no move".  The
    activated particle is uniform, or proportional to ``rates = (lit_rate,
    dim_rate)`` when given.
    """
    lam = _exact(lam)
    dim_prob = _exact(dim_prob)
    kernel, mode = Kernel(kernel), Mode(mode)
    system = ParticleSystem(cells)
    lit = lit_particles(system) if light_enabled else set(system)
    if rates is None:
        weight = {p: Fraction(1, system.n) for p in system}
    else:
        lit_rate, dim_rate = (_exact(r) for r in rates)
        total = sum(lit_rate if p in lit else dim_rate for p in system)
        weight = {p: (lit_rate if p in lit else dim_rate) / total for p in system}
    out = []
    for p in system:
        gate = 1 if (mode is Mode.COMPRESSION_ONLY or p in lit) else dim_prob
        targets = [AxialCoord(p[0] + du, p[1] + dv) for du, dv in DIRECTIONS]
        valid = [t for t in targets if t not in system and local_move_valid(system, p, t)]
        if kernel is Kernel.UNIFORM6:
            pick = Fraction(1, 6)
        elif kernel is Kernel.UNIFORM_VALID:
            pick = Fraction(1, len(valid)) if valid else 0
        else:
            pick = Fraction(1, max(2, len(valid)))
        e = system.count_neighbors(p)
        for t in valid:
            e2 = system.count_neighbors(t, exclude=p)
            prob = weight[p] * gate * pick * metropolis_factor(lam, e2 - e)
            out.append((prob, p, t, twice_height(t) - twice_height(p)))
    return out


# --- chains ----------------------------------------------------------------


@dataclass
class TransitionMatrix:
    """One-activation chain on state classes.

    ``drift[i][j]`` is the expected height change contributed by the
    transitions from state ``i`` into state ``j`` (probability times
    increment, summed over the moves realising ``i -> j``).
    """

    states: list[StateClass]
    probs: list[list]
    drift: list[list]
    settings: dict = field(default_factory=dict)

    def __post_init__(self):
        self._index = {s.canonical: i for i, s in enumerate(self.states)}

    def __len__(self) -> int:
        return len(self.states)

    def index(self, state) -> int:
        if isinstance(state, (int, np.integer)):
            return int(state)
        if isinstance(state, StateClass):
            return self._index[state.canonical]
        return self._index[canonical_form(state, self.states[0].symmetry)]

    def one_step_drift(self, state):
        i = self.index(state)
        return _simplify(sum(self.drift[i], Fraction(0)))

    def row_sums(self) -> list:
        return [_simplify(sum(row, Fraction(0))) for row in self.probs]

    def support(self) -> np.ndarray:
        return np.array([[p != 0 for p in row] for row in self.probs], dtype=bool)

    def as_float(self, lam_value=None) -> np.ndarray:
        def f(x):
            if _is_symbolic(x):
                x = x.subs(self.settings["lam"], lam_value)
            return float(x)
        return np.array([[f(p) for p in row] for row in self.probs])


def _simplify(x):
    if _is_symbolic(x):
        return sympy.cancel(x) if x.free_symbols else sympy.Rational(x)
    return x


def build_chain(n: int, lam, *, kernel: Kernel = Kernel.HALF_VALID, mode: Mode = Mode.PHOTOTAX,
                dim_prob=Fraction(1, 4), symmetry: Symmetry = Symmetry.TRANSLATION_REFLECTION,
                light_enabled: bool = True, rates: tuple | None = None) -> TransitionMatrix:
    """Exact one-activation transition matrix for ``n`` particles.

    Self-loops carry rejected proposals and activations that do nothing.
    """
    symmetry = Symmetry(symmetry)
    states = enumerate_states(n, symmetry)
    index = {s.canonical: i for i, s in enumerate(states)}
    m = len(states)
    zero = Fraction(0)
    probs = [[zero] * m for _ in range(m)]
    drift = [[zero] * m for _ in range(m)]
    for i, s in enumerate(states):
        moved = zero
        for prob, p, t, dh2 in activation_outcomes(
            s.canonical, lam, kernel=kernel, mode=mode, dim_prob=dim_prob,
            light_enabled=light_enabled, rates=rates,
        ):
            after = [c for c in s.canonical if c != p] + [t]
            j = index[canonical_form(after, symmetry)]
            probs[i][j] += prob
            drift[i][j] += prob * Fraction(dh2, 2 * n)
            moved += prob
        probs[i][i] += 1 - moved
    if _is_symbolic(_exact(lam)):
        probs = [[_simplify(x) for x in row] for row in probs]
        drift = [[_simplify(x) for x in row] for row in drift]
    settings = dict(n=n, lam=_exact(lam), kernel=Kernel(kernel), mode=Mode(mode),
                    dim_prob=_exact(dim_prob), symmetry=symmetry,
                    light_enabled=light_enabled, rates=rates)
    return TransitionMatrix(states, probs, drift, settings)


def k_step_distribution(chain: TransitionMatrix, state, k: int) -> list:
    """Exact distribution over states after ``k`` activations."""
    m = len(chain)
    dist = [Fraction(0)] * m
    dist[chain.index(state)] = Fraction(1)
    for _ in range(k):
        nxt = [Fraction(0)] * m
        for i, w in enumerate(dist):
            if w == 0:
                continue
            row = chain.probs[i]
            for j in range(m):
                if row[j] != 0:
                    nxt[j] += w * row[j]
        dist = nxt
    return [_simplify(x) for x in dist]


def expected_drift(chain: TransitionMatrix, state, k: int = 1):
    """Exact expected change of the centroid height over ``k`` activations."""
    if k < 1:
        raise ValueError("k must be at least 1")
    one = [sum(row, Fraction(0)) for row in chain.drift]
    total = Fraction(0)
    m = len(chain)
    dist = [Fraction(0)] * m
    dist[chain.index(state)] = Fraction(1)
    for step in range(k):
        total += sum(w * d for w, d in zip(dist, one) if w != 0)
        if step + 1 < k:
            nxt = [Fraction(0)] * m
            for i, w in enumerate(dist):
                if w == 0:
                    continue
                for j, p in enumerate(chain.probs[i]):
                    if p != 0:
                        nxt[j] += w * p
            dist = nxt
    return _simplify(total)


def communication_classes(chain: TransitionMatrix) -> list[list[int]]:
    """Strongly connected components of the transition graph."""
    count, labels = connected_components(chain.support(), directed=True, connection="strong")
    return [sorted(np.flatnonzero(labels == c).tolist()) for c in range(count)]


def is_irreducible(chain: TransitionMatrix) -> bool:
    return len(communication_classes(chain)) == 1


def stationary(chain: TransitionMatrix) -> list:
    """Exact stationary distribution by Grassmann-Taksar-Heyman elimination.

    GTH uses no subtractions, so it is exact in rationals and stable in
    floating point alike.  Raises :class:`ReducibleChainError` if the chain
    has more than one communicating class.
    """
    classes = communication_classes(chain)
    if len(classes) != 1:
        raise ReducibleChainError(f"chain has {len(classes)} communicating classes: {classes}")
    m = len(chain)
    a = [[x for x in row] for row in chain.probs]
    for k in range(m - 1, 0, -1):
        s = sum(a[k][:k], Fraction(0))
        for i in range(k):
            if a[i][k] == 0:
                continue
            f = a[i][k] / s
            for j in range(k):
                a[i][j] += f * a[k][j]
    pi = [Fraction(0)] * m
    pi[0] = Fraction(1)
    for k in range(1, m):
        s = sum(a[k][:k], Fraction(0))
        pi[k] = sum((pi[i] * a[i][k] for i in range(k)), Fraction(0)) / s
    total = sum(pi, Fraction(0))
    return [_simplify(x / total) for x in pi]


def stationary_float(chain: TransitionMatrix, lam_value=None) -> np.ndarray:
    """Stationary vector from the leading left eigenvector (float cross-check)."""
    p = chain.as_float(lam_value)
    w, vl = np.linalg.eig(p.T)
    k = int(np.argmin(np.abs(w - 1.0)))
    v = np.real(vl[:, k])
    return v / v.sum()


def gibbs_weights(chain: TransitionMatrix) -> list:
    """``lam ** edges`` normalised over the chain's states."""
    lam = chain.settings["lam"]
    raw = [lam ** s.edges for s in chain.states]
    total = sum(raw)
    return [_simplify(r / total) for r in raw]


def detailed_balance_violations(chain: TransitionMatrix, pi: Sequence) -> list[tuple[int, int]]:
    """Pairs ``(i, j)`` with ``pi_i P_ij != pi_j P_ji`` (exact comparison)."""
    bad = []
    m = len(chain)
    for i in range(m):
        for j in range(i + 1, m):
            if _simplify(pi[i] * chain.probs[i][j] - pi[j] * chain.probs[j][i]) != 0:
                bad.append((i, j))
    return bad


# --- three-particle labels and specialisation checks ------------------------


def label_three_particle_states(chain: TransitionMatrix) -> dict[str, int]:
    """Name the seven three-particle states (a)-(g).

    States are told apart by their drift signature: (e) has one-step drift
    1/48; (f) and (g) have 1/24 and are told apart by the lit count (one
    column for the vertical line (f)); among the zero-drift states, (a) is
    the triangle, (b) has a positive two-step drift independent of ``lam``, and (c), (d)
    have zero two-step drift and are taken in canonical order.
    """
    if len(chain) != 7 or chain.states[0].n != 3:
        raise ValueError("needs the seven-state three-particle chain")
    one = {i: chain.one_step_drift(i) for i in range(7)}
    two = {i: expected_drift(chain, i, 2) for i in range(7)}
    labels: dict[str, int] = {}
    labels["e"] = _only([i for i in one if one[i] == Fraction(1, 48)])
    quarter = sorted((i for i in one if one[i] == Fraction(1, 24)), key=lambda i: chain.states[i].lit)
    labels["f"], labels["g"] = quarter
    zero = [i for i in one if one[i] == 0]
    labels["a"] = _only([i for i in zero if chain.states[i].edges == 3])
    labels["b"] = _only([i for i in zero if i != labels["a"] and two[i] != 0])
    labels["c"], labels["d"] = sorted(i for i in zero if two[i] == 0)
    return dict(sorted(labels.items()))


def _only(items):
    if len(items) != 1:
        raise ValueError(f"expected exactly one match, got {items}")
    return items[0]


@dataclass
class SpecializationRecord:
    state: StateClass
    particle: AxialCoord
    n_valid: int
    equal: bool


def compare_specialized(n: int, lam, kernel: Kernel, dim_prob=Fraction(1, 4)) -> list[SpecializationRecord]:
    """Per state and particle, compare the literal small-system algorithm with
    the general phototaxing activation under ``kernel``."""
    params = DynamicsParams(lam=float(lam), dim_prob=dim_prob, kernel=kernel)
    lam = _exact(lam)
    out = []
    for s in enumerate_states(n, Symmetry.TRANSLATION_REFLECTION):
        system = s.system()
        general = activation_outcomes(s.canonical, lam, kernel=kernel, mode=Mode.PHOTOTAX,
                                      dim_prob=dim_prob)
        for p in system:
            mine = {t: prob for prob, t in specialized_outcomes(system, p, params)}
            theirs = {t: prob * n for prob, q, t, _ in general if q == p}
            n_valid = sum(1 for du, dv in DIRECTIONS
                          if local_move_valid(system, p, AxialCoord(p[0] + du, p[1] + dv)))
            out.append(SpecializationRecord(s, p, n_valid, mine == theirs))
    return out


# --- report ----------------------------------------------------------------


def drift_table(chain: TransitionMatrix, ks: Sequence[int] = (1, 2, 3)) -> list[dict]:
    rows = []
    for i, s in enumerate(chain.states):
        rows.append(dict(index=i, state=s, edges=s.edges, lit=s.lit,
                         drifts={k: expected_drift(chain, i, k) for k in ks}))
    return rows


def bound_threshold(chain_symbolic: TransitionMatrix, k: int = 3) -> dict[int, float]:
    """Smallest ``lam`` above which each state's ``k``-step drift exceeds ``1/(64 lam)``.

    Needs a chain built with a symbolic bias.  States whose margin is
    positive for every ``lam >= 1`` map to 1.0.
    """
    lam = chain_symbolic.settings["lam"]
    out = {}
    for i in range(len(chain_symbolic)):
        margin = sympy.together(expected_drift(chain_symbolic, i, k) - 1 / (64 * lam))
        num, _ = sympy.fraction(margin)
        roots = [r for r in sympy.Poly(num, lam).real_roots() if r >= 1] if num.has(lam) else []
        out[i] = float(max(roots)) if roots else 1.0
    return out


def oracle_report(n: int, lam, dim_prob=Fraction(1, 4), ks: Sequence[int] = (1, 2, 3)) -> str:
    """Plain-text verification report for small systems."""
    lam = _exact(lam)
    lines = [f"# exact phototaxing chain, n={n}, lambda={lam}, dim_prob={_exact(dim_prob)}"]
    main = build_chain(n, lam, kernel=Kernel.HALF_VALID, dim_prob=dim_prob)
    labels = {}
    if n == 3:
        labels = {i: name for name, i in label_three_particle_states(main).items()}
    for kernel in (Kernel.HALF_VALID, Kernel.UNIFORM_VALID, Kernel.UNIFORM6):
        chain = main if kernel is Kernel.HALF_VALID else build_chain(n, lam, kernel=kernel, dim_prob=dim_prob)
        lines.append(f"[kernel {kernel.value}]")
        lines.append("state\tlabel\tedges\tlit\t" + "\t".join(f"drift_k{k}" for k in ks) + "\tcoords")
        for row in drift_table(chain, ks):
            label = labels.get(row["index"], "-")
            drifts = "\t".join(str(row["drifts"][k]) for k in ks)
            lines.append(f"{row['index']}\t{label}\t{row['edges']}\t{row['lit']}\t{drifts}\t{row['state']}")
        classes = communication_classes(chain)
        lines.append(f"communicating classes: {classes}")
    if n >= 2:
        comp = build_chain(n, lam, kernel=Kernel.UNIFORM6, mode=Mode.COMPRESSION_ONLY,
                           symmetry=Symmetry.TRANSLATION)
        pi = stationary(comp)
        gibbs = gibbs_weights(comp)
        dev = max(abs(float(a) - float(b)) for a, b in zip(pi, gibbs))
        balance = detailed_balance_violations(comp, pi)
        lines.append("[stationary compression chain, uniform6, translation classes]")
        lines.append(f"states={len(comp)} max_deviation_from_lambda^edges={dev:.3e} "
                     f"detailed_balance_violations={len(balance)}")
    return "\n".join(lines) + "\n"
