"""
Grid and randomized searches over measurement settings.

Grid sweeps evaluate an inequality for every tuple of spin angles on a
uniform grid over ``[0, pi)``. Correlation tables for all angle pairs are
computed once; the objective is then evaluated in chunks (one chunk per first
angle), optionally on a thread pool. Chunks are merged by index with ties
resolved towards the lexicographically smallest angle tuple, so the result
does not depend on scheduling.

The randomized soundness sweep draws separable representations, POVMs and
coefficients, and evaluates every separable-state bound on them.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import qlinalg
from .classical import random_valid_gamma
from .errors import InvalidConfig, WrongDimension
from .expectations import correlation
from .inequalities import (
    CHSH_GAMMA,
    DEFAULT_TOL,
    GammaVector,
    InequalityReport,
    as_symmetric,
    bell_original,
    chsh_report,
    extended_chsh,
    quantum_bell_analogue,
    separable_bound,
    two_term_linear_bound,
)
from .measurements import DiscretePovm, OutcomeSet, spin_matrix, spin_observable
from .states import (
    DensityOperator,
    SeparableRepresentation,
    Term,
    assemble,
    pure_state,
    sigma_sym_of,
)

TIE_TOL = 1e-12


class SweepTarget(enum.Enum):
    BELL_ORIGINAL = "bell-original"
    CHSH = "chsh"
    QUANTUM_ANALOGUE = "quantum-analogue"
    EXTENDED_CHSH = "extended-chsh"
    SOUNDNESS = "soundness"


class ExtremumKind(enum.Enum):
    MAX_LHS_MINUS_RHS = "MaxLhsMinusRhs"
    MAX_LHS = "MaxLhs"


@dataclass(frozen=True, eq=False)
class SweepConfig:
    target: SweepTarget
    state: DensityOperator | SeparableRepresentation | None = None
    resolution: int = 64
    seed: int = 0
    sample_count: int = 1000
    gamma: GammaVector | None = None
    symmetrized: bool = False
    retain: int = 10
    threads: int = 1
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not isinstance(self.target, SweepTarget):
            object.__setattr__(self, "target", SweepTarget(self.target))
        if self.resolution < 2:
            raise InvalidConfig(f"resolution must be at least 2, got {self.resolution}")
        if self.sample_count < 1:
            raise InvalidConfig(f"sample_count must be positive, got {self.sample_count}")
        if self.retain < 0 or self.threads < 1:
            raise InvalidConfig("retain must be >= 0 and threads >= 1")


@dataclass(frozen=True)
class SweepRow:
    settings: tuple
    lhs: float
    rhs: float
    name: str = ""

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def violated(self, tol: float = DEFAULT_TOL) -> bool:
        return self.slack < -tol


@dataclass(frozen=True)
class SweepResult:
    best_settings: tuple
    best_report: InequalityReport
    evaluations: int
    extremum_kind: ExtremumKind
    rows: tuple[SweepRow, ...] = field(default=())

    @property
    def min_slack(self) -> float:
        return self.best_report.slack


def angle_grid(resolution: int) -> np.ndarray:
    """``resolution`` equally spaced angles ``k * pi / resolution``."""
    return np.arange(resolution) * np.pi / resolution


def _two_qubit_state(state) -> DensityOperator:
    if isinstance(state, SeparableRepresentation):
        state = assemble(state)
    if not isinstance(state, DensityOperator):
        raise InvalidConfig("sweep needs a state")
    if state.dim != 4 or state.factor_dims not in (None, (2, 2)):
        raise WrongDimension(f"WrongDimension: expected a two-qubit state, got dimension {state.dim}")
    return state


def correlation_table(rho: DensityOperator, thetas: np.ndarray, symmetrized: bool = False) -> np.ndarray:
    """``T[i, j] = tr[rho (J(theta_i) (x) J(theta_j))]`` (or the symmetrized form)."""
    r = np.asarray(rho.matrix).reshape(2, 2, 2, 2)
    js = np.stack([spin_matrix(t) for t in thetas])
    t = np.einsum("abcd,ica,jdb->ij", r, js, js)
    if symmetrized:
        t = 0.5 * (t + np.einsum("abcd,jca,idb->ij", r, js, js))
    return t.real


# Each grid objective maps a first-angle index to arrays (lhs, rhs) over the
# remaining angle indices; the sweep maximizes lhs - rhs or lhs.
Objective = Callable[[int], tuple[np.ndarray, np.ndarray]]


def _grid_search(objective: Objective, n: int, kind: ExtremumKind, retain: int, threads: int):
    def run(a):
        lhs, rhs = objective(a)
        score = lhs - rhs if kind is ExtremumKind.MAX_LHS_MINUS_RHS else lhs
        return lhs, rhs, score

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(run, range(n)))
    else:
        chunks = [run(a) for a in range(n)]

    best = max(float(c[2].max()) for c in chunks)
    best_idx = None
    rows = []
    for a, (lhs, rhs, score) in enumerate(chunks):
        flat = score.ravel()
        if best_idx is None and flat.max() >= best - TIE_TOL:
            k = int(np.flatnonzero(flat >= best - TIE_TOL)[0])
            best_idx = (a,) + np.unravel_index(k, score.shape)
        if retain:
            k = min(retain, flat.size)
            cutoff = np.partition(flat, flat.size - k)[flat.size - k]
            cand = np.flatnonzero(flat >= cutoff)
            top = cand[np.lexsort((cand, -flat[cand]))][:retain]
            lb = np.broadcast_to(lhs, score.shape).ravel()
            rb = np.broadcast_to(rhs, score.shape).ravel()
            for k in top:
                idx = (a,) + tuple(int(i) for i in np.unravel_index(int(k), score.shape))
                rows.append((-float(flat[k]), idx, float(lb[k]), float(rb[k])))
    rows.sort()
    evaluations = sum(c[2].size for c in chunks)
    return tuple(int(i) for i in best_idx), rows[:retain], evaluations


def _spins(thetas: Sequence[float]) -> list[DiscretePovm]:
    return [spin_observable(float(t)) for t in thetas]


def evaluate_settings(cfg: SweepConfig, settings: Sequence[float]) -> InequalityReport:
    """
    Evaluate the configured inequality at one angle tuple through the full
    (non-vectorized) correlation path.
    """
    target = cfg.target
    if target is SweepTarget.BELL_ORIGINAL:
        rho = _two_qubit_state(cfg.state)
        a, b, c = _spins(settings)
        s = cfg.symmetrized
        return bell_original(
            correlation(rho, a, b, s), correlation(rho, a, c, s), correlation(rho, b, c, s), tol=cfg.tol
        )
    if target in (SweepTarget.CHSH, SweepTarget.EXTENDED_CHSH):
        rho = _two_qubit_state(cfg.state)
        a, b, c, d = _spins(settings)
        s = cfg.symmetrized
        e = [correlation(rho, x, y, s) for x, y in ((a, b), (c, b), (c, d), (a, d))]
        if target is SweepTarget.CHSH:
            return chsh_report(*e, tol=cfg.tol)
        return extended_chsh(cfg.gamma or CHSH_GAMMA, *e, tol=cfg.tol)
    if target is SweepTarget.QUANTUM_ANALOGUE:
        rep = _symmetric_rep(cfg)
        a, b, c = _spins(settings)
        return quantum_bell_analogue(rep, a, b, c, tol=cfg.tol)
    raise InvalidConfig(f"no angle evaluation for target {target.value}")


def _symmetric_rep(cfg: SweepConfig) -> SeparableRepresentation:
    if not isinstance(cfg.state, SeparableRepresentation):
        raise InvalidConfig("quantum-analogue sweep needs a separable representation")
    rep = as_symmetric(cfg.state)
    if rep.dims != (2, 2):
        raise WrongDimension(f"WrongDimension: expected qubit factors, got {rep.dims}")
    return rep


def _finish(cfg, thetas, best_idx, rows, evaluations, kind) -> SweepResult:
    settings = tuple(float(thetas[i]) for i in best_idx)
    report = evaluate_settings(cfg, settings)
    kept = tuple(
        SweepRow(tuple(float(thetas[i]) for i in idx), lhs, rhs, report.name)
        for _, idx, lhs, rhs in rows
    )
    return SweepResult(settings, report, evaluations, kind, kept)


def bell_violation_sweep(cfg: SweepConfig) -> SweepResult:
    """
    Maximize ``lhs - rhs`` of Bell's perfect-correlation inequality over
    spin-angle triples ``(a, b, c)`` for a two-qubit state.
    """
    rho = _two_qubit_state(cfg.state)
    thetas = angle_grid(cfg.resolution)
    t = correlation_table(rho, thetas, cfg.symmetrized)

    def objective(a):
        lhs = np.abs(t[a][:, None] - t[a][None, :])
        rhs = 1.0 - t
        return lhs, rhs

    best, rows, n = _grid_search(objective, len(thetas), ExtremumKind.MAX_LHS_MINUS_RHS, cfg.retain, cfg.threads)
    return _finish(cfg, thetas, best, rows, n, ExtremumKind.MAX_LHS_MINUS_RHS)


def quantum_analogue_sweep(cfg: SweepConfig) -> SweepResult:
    """Maximize ``lhs - rhs`` of the quantum Bell analogue over spin-angle triples."""
    rep = _symmetric_rep(cfg)
    thetas = angle_grid(cfg.resolution)
    t = correlation_table(assemble(rep), thetas, symmetrized=True)
    s = correlation_table(sigma_sym_of(rep), thetas, symmetrized=True)

    def objective(a):
        return np.abs(t[a][:, None] - t[a][None, :]), 1.0 - s

    best, rows, n = _grid_search(objective, len(thetas), ExtremumKind.MAX_LHS_MINUS_RHS, cfg.retain, cfg.threads)
    return _finish(cfg, thetas, best, rows, n, ExtremumKind.MAX_LHS_MINUS_RHS)


def chsh_sweep(cfg: SweepConfig) -> SweepResult:
    """
    Maximize the CHSH value (or, for the extended target, ``lhs - rhs`` of the
    extended CHSH inequality) over spin-angle 4-tuples ``(a, b, c, d)``.
    """
    rho = _two_qubit_state(cfg.state)
    thetas = angle_grid(cfg.resolution)
    t = correlation_table(rho, thetas, cfg.symmetrized)
    if cfg.target is SweepTarget.EXTENDED_CHSH:
        gamma = cfg.gamma or CHSH_GAMMA
        g1, g2, g3, g4 = gamma.values
        rhs_value = 2 * gamma.gamma0
        kind = ExtremumKind.MAX_LHS_MINUS_RHS
    else:
        g1, g2, g3, g4 = CHSH_GAMMA.values
        rhs_value = 2.0
        kind = ExtremumKind.MAX_LHS

    def objective(a):
        # axes: b, c, d
        e_ab = t[a][:, None, None]
        e_cb = t.T[:, :, None]
        e_cd = t[None, :, :]
        e_ad = t[a][None, None, :]
        lhs = np.abs(g1 * e_ab + g2 * e_cb + g3 * e_cd + g4 * e_ad)
        return lhs, np.full((1, 1, 1), rhs_value)

    best, rows, n = _grid_search(objective, len(thetas), kind, cfg.retain, cfg.threads)
    return _finish(cfg, thetas, best, rows, n, kind)


# ---------------------------------------------------------------- random draws


def random_pure_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_outcomes(rng: np.random.Generator, k: int, bound: float) -> OutcomeSet:
    vals = rng.uniform(-bound, bound, k)
    vals[0] = bound * rng.choice([-1.0, 1.0])
    return OutcomeSet(tuple(vals.tolist()), bound)


def random_projective_povm(rng: np.random.Generator, d: int, bound: float, label: str) -> DiscretePovm:
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, _ = np.linalg.qr(z)
    effects = tuple(np.outer(q[:, k], q[:, k].conj()) for k in range(d))
    return DiscretePovm(label, random_outcomes(rng, d, bound), effects)


def random_noisy_povm(rng: np.random.Generator, d: int, bound: float, label: str) -> DiscretePovm:
    """Random full-rank POVM: ``E_i = S^-1/2 G_i S^-1/2`` with ``G_i`` random Gram matrices."""
    k = int(rng.integers(2, 5))
    grams = []
    for _ in range(k):
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        grams.append(a @ a.conj().T)
    w, v = qlinalg.hermitian_eigen(sum(grams))
    s_inv_half = (v / np.sqrt(w)) @ v.conj().T
    effects = []
    for g in grams:
        e = s_inv_half @ g @ s_inv_half
        effects.append(0.5 * (e + e.conj().T))
    return DiscretePovm(label, random_outcomes(rng, k, bound), tuple(effects))


def random_povm(rng: np.random.Generator, d: int, bound: float, label: str) -> DiscretePovm:
    if rng.random() < 0.5:
        return random_projective_povm(rng, d, bound, label)
    return random_noisy_povm(rng, d, bound, label)


def random_product_terms(rng: np.random.Generator, d1: int, d2: int, max_terms: int = 6) -> tuple[Term, ...]:
    n = int(rng.integers(1, max_terms + 1))
    w = rng.random(n) + 0.05
    w = w / w.sum()
    return tuple(
        Term(float(w[m]), pure_state(random_pure_vector(rng, d1), f"l{m}"), pure_state(random_pure_vector(rng, d2), f"r{m}"))
        for m in range(n)
    )


@dataclass(frozen=True, eq=False)
class SoundnessDraw:
    """Everything one randomized soundness check needs."""

    plain: SeparableRepresentation
    symmetric: SeparableRepresentation | None
    alice: tuple[DiscretePovm, DiscretePovm]
    bob: tuple[DiscretePovm, DiscretePovm]
    bounds: tuple[float, float]
    gamma: GammaVector
    two_term: tuple[float, float]
    analogue: tuple[DiscretePovm, DiscretePovm, DiscretePovm]


def soundness_draw(seed: int, index: int, rep: SeparableRepresentation | None = None) -> SoundnessDraw:
    """
    Draw ``index`` of the soundness sweep with base ``seed``; reproducible on
    its own. When ``rep`` is given only the settings are random.
    """
    rng = np.random.default_rng([seed, index])
    if rep is None:
        d = int(rng.choice([2, 3]))
        terms = random_product_terms(rng, d, d)
        plain = SeparableRepresentation(terms, False, f"draw{index}")
        symmetric = SeparableRepresentation(terms, True, f"draw{index}_sym")
        d1 = d2 = d
    else:
        d1, d2 = rep.dims
        plain = rep if not rep.symmetrized else None
        symmetric = rep if rep.symmetrized else None
        if plain is None:
            # {x (x) y}_sym = (x (x) y + y (x) x) / 2 as two plain terms
            split = []
            for t in rep.terms:
                split += [Term(t.weight / 2, t.left, t.right), Term(t.weight / 2, t.right, t.left)]
            plain = SeparableRepresentation(tuple(split), False, rep.label)
    c1, c2 = (float(x) for x in rng.uniform(0.5, 2.0, 2))
    alice = (random_povm(rng, d1, c1, "a"), random_povm(rng, d1, c1, "c"))
    bob = (random_povm(rng, d2, c2, "b"), random_povm(rng, d2, c2, "d"))
    gamma = CHSH_GAMMA if rng.random() < 0.2 else random_valid_gamma(rng)
    two_term = tuple(float(x) for x in rng.uniform(-2.0, 2.0, 2))
    c = float(rng.uniform(0.5, 2.0))
    dq = d2 if symmetric is not None else d1
    analogue = tuple(random_povm(rng, dq, c, name) for name in ("qa", "qb1", "qb2"))
    return SoundnessDraw(plain, symmetric, alice, bob, (c1, c2), gamma, two_term, analogue)


def soundness_reports(draw: SoundnessDraw, tol: float = DEFAULT_TOL) -> list[InequalityReport]:
    """All separable-state bounds evaluated on one draw."""
    pa, pc = draw.alice
    pb, pd = draw.bob
    c1, c2 = draw.bounds
    g1, g2 = draw.two_term
    reports = []
    reps = [draw.plain] + ([draw.symmetric] if draw.symmetric is not None else [])
    for rep in reps:
        rho = assemble(rep)
        s = rep.symmetrized
        reports.append(separable_bound(rep, pa, pb, pd, tol))
        reports.append(two_term_linear_bound(g1, g2, rep, pa, pb, pd, tol))
        e = [correlation(rho, x, y, s) for x, y in ((pa, pb), (pc, pb), (pc, pd), (pa, pd))]
        reports.append(extended_chsh(draw.gamma, *e, c1=c1, c2=c2, tol=tol))
    if draw.symmetric is not None:
        reports.append(quantum_bell_analogue(draw.symmetric, *draw.analogue, tol=tol))
    return reports


def separable_soundness_sweep(cfg: SweepConfig) -> SweepResult:
    """
    Evaluate every separable-state bound over ``cfg.sample_count`` random
    draws. The best (worst-case) report is the one with the smallest slack.
    """
    rep = cfg.state
    if rep is not None and not isinstance(rep, SeparableRepresentation):
        raise InvalidConfig("soundness sweep needs a separable representation or no state")

    def run(i):
        return [(r.slack, i, j, r) for j, r in enumerate(soundness_reports(soundness_draw(cfg.seed, i, rep), cfg.tol))]

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            chunks = list(pool.map(run, range(cfg.sample_count)))
    else:
        chunks = [run(i) for i in range(cfg.sample_count)]
    flat = [x for c in chunks for x in c]
    flat.sort(key=lambda x: (x[0], x[1], x[2]))
    _, i, _, worst = flat[0]
    rows = tuple(SweepRow((idx,), r.lhs, r.rhs, r.name) for _, idx, _, r in flat[: cfg.retain])
    return SweepResult((i,), worst, len(flat), ExtremumKind.MAX_LHS_MINUS_RHS, rows)


def run_sweep(cfg: SweepConfig) -> SweepResult:
    dispatch = {
        SweepTarget.BELL_ORIGINAL: bell_violation_sweep,
        SweepTarget.CHSH: chsh_sweep,
        SweepTarget.EXTENDED_CHSH: chsh_sweep,
        SweepTarget.QUANTUM_ANALOGUE: quantum_analogue_sweep,
        SweepTarget.SOUNDNESS: separable_soundness_sweep,
    }
    return dispatch[cfg.target](cfg)
