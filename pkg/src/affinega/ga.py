"""Elitist real-coded genetic algorithm over the six affine parameters.

Operators: tournament selection without replacement, simulated binary
crossover (SBX) applied gene by gene, additive Gaussian mutation and
replace-worst survivor selection. The search space is unbounded.

Random stream discipline
------------------------
One ``numpy.random.Generator`` seeded from ``GaConfig.seed`` drives a run.
Draws happen in this order: the initial population (one ``(p, 6)`` uniform
block); then the fixed match order if ``fixed_order`` is set; then, per
generation, the match order (W->S permutation, S->W permutation) unless it is
fixed, one permutation per selection pass, the SBX gene mask and SBX ``u``
values (each ``(p/2, 6)``), and the mutation mask and Gaussian noise (each
``(p, 6)``).
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, replace

import numpy as np

from .geometry import AffineParams
from .matching import MatchOrder, evaluate_population, fresh_match_order
from .validation import bbox_diagonal, check_pointset, check_random_state

__all__ = [
    "ConfigError",
    "GaConfig",
    "Individual",
    "RunRecord",
    "initialize_population",
    "tournament_select",
    "sbx_spread",
    "sbx_crossover",
    "gaussian_mutate",
    "replace_worst",
    "run",
]

logger = logging.getLogger(__name__)

LINEAR_GENES = np.array([0, 1, 3, 4])
TRANSLATION_GENES = np.array([2, 5])


class ConfigError(ValueError):
    """Invalid GA configuration."""


@dataclass(frozen=True)
class GaConfig:
    """Tunables of one GA run.

    Parameters
    ----------
    population_size : int
        Must be even and at least ``tournament_size``.
    generations : int
    tournament_size : int
    sbx_eta : float
        SBX distribution index; larger values keep children closer to parents.
    sbx_gene_prob : float
        Probability that a gene pair is recombined.
    mutation_prob : float
        Per-gene probability of Gaussian mutation.
    mutation_sigma_linear : float
        Mutation std for the four linear genes.
    mutation_sigma_translation : float or None
        Mutation std for the two translation genes. ``None`` means
        ``0.05 * bbox_diagonal(static)``.
    seed : int
    fixed_order : bool
        Reuse a single match order for the whole run instead of drawing a
        fresh one every generation. Makes the objective stationary.
    """

    population_size: int = 120
    generations: int = 500
    tournament_size: int = 5
    sbx_eta: float = 2.0
    sbx_gene_prob: float = 0.5
    mutation_prob: float = 1.0 / 6.0
    mutation_sigma_linear: float = 0.05
    mutation_sigma_translation: float | None = None
    seed: int = 1
    fixed_order: bool = False

    def validate(self) -> GaConfig:
        if self.population_size < 2 or self.population_size % 2:
            raise ConfigError(f"population_size must be even and >= 2, got {self.population_size}")
        if self.tournament_size < 1:
            raise ConfigError(f"tournament_size must be >= 1, got {self.tournament_size}")
        if self.tournament_size > self.population_size:
            raise ConfigError(
                f"tournament_size ({self.tournament_size}) exceeds population_size ({self.population_size})"
            )
        if self.generations < 1:
            raise ConfigError(f"generations must be >= 1, got {self.generations}")
        if not self.sbx_eta > 0:
            raise ConfigError(f"sbx_eta must be > 0, got {self.sbx_eta}")
        for name in ("sbx_gene_prob", "mutation_prob"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {value}")
        if self.mutation_sigma_linear < 0:
            raise ConfigError("mutation_sigma_linear must be >= 0")
        if self.mutation_sigma_translation is not None and self.mutation_sigma_translation < 0:
            raise ConfigError("mutation_sigma_translation must be >= 0")
        return self

    def with_overrides(self, **changes) -> GaConfig:
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Individual:
    genes: AffineParams
    fitness: float


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one run.

    ``best_fitness[g]`` is the lowest fitness in the population after
    generation ``g``. ``final_order`` is the match order of the last
    generation, under which ``final_best.fitness`` was measured.
    """

    best_fitness: np.ndarray
    final_best: Individual
    seed: int
    final_order: MatchOrder


def initialize_population(config: GaConfig, s, d, random_state=None) -> np.ndarray:
    """Random ``(population_size, 6)`` gene matrix.

    Diagonal linear genes are drawn from U(0, 2) and off-diagonal ones from
    U(-1, 1). Each translation gene is drawn within half the static bounding
    box around the centroid offset ``mean(s) - mean(d)`` on its axis.
    """
    s = check_pointset(s, "s")
    d = check_pointset(d, "d")
    rng = check_random_state(random_state)
    offset = s.mean(axis=0) - d.mean(axis=0)
    half = 0.5 * (s.max(axis=0) - s.min(axis=0))
    low = np.array([0.0, -1.0, offset[0] - half[0], -1.0, 0.0, offset[1] - half[1]])
    high = np.array([2.0, 1.0, offset[0] + half[0], 1.0, 2.0, offset[1] + half[1]])
    u = rng.random((config.population_size, 6))
    return low + (high - low) * u


def tournament_select(fitness, tournament_size: int, random_state=None, n_parents: int | None = None) -> np.ndarray:
    """Indices of the tournament winners, ``n_parents`` of them.

    Each pass shuffles the population and splits it into consecutive groups
    of ``tournament_size``; the lowest-fitness member of each group wins (a
    short trailing group still competes). Passes repeat until enough winners
    are collected and the surplus of the last pass is dropped.
    """
    fitness = np.asarray(fitness, dtype=np.float64)
    rng = check_random_state(random_state)
    size = fitness.shape[0]
    if n_parents is None:
        n_parents = size
    winners = []
    collected = 0
    while collected < n_parents:
        perm = rng.permutation(size)
        for start in range(0, size, tournament_size):
            group = perm[start:start + tournament_size]
            winners.append(group[np.argmin(fitness[group])])
            collected += 1
            if collected == n_parents:
                break
    return np.array(winners, dtype=np.int64)


def sbx_spread(u, eta: float):
    """SBX spread factor for uniform draws ``u`` in [0, 1)."""
    u = np.asarray(u, dtype=np.float64)
    expo = 1.0 / (eta + 1.0)
    with np.errstate(divide="ignore"):
        return np.where(u <= 0.5, (2.0 * u) ** expo, (1.0 / (2.0 * (1.0 - u))) ** expo)


def sbx_crossover(p1, p2, eta: float, gene_prob: float, random_state=None):
    """Simulated binary crossover of two parents (or two stacks of parents).

    Accepts ``AffineParams`` or arrays whose last axis has 6 genes. Each gene
    pair is recombined with probability ``gene_prob``, otherwise copied.
    """
    rng = check_random_state(random_state)
    wrap = isinstance(p1, AffineParams)
    a = p1.to_array() if isinstance(p1, AffineParams) else np.asarray(p1, dtype=np.float64)
    b = p2.to_array() if isinstance(p2, AffineParams) else np.asarray(p2, dtype=np.float64)
    mask = rng.random(a.shape) < gene_prob
    beta = sbx_spread(rng.random(a.shape), eta)
    c1 = np.where(mask, 0.5 * ((1.0 + beta) * a + (1.0 - beta) * b), a)
    c2 = np.where(mask, 0.5 * ((1.0 - beta) * a + (1.0 + beta) * b), b)
    if wrap:
        return AffineParams.from_array(c1), AffineParams.from_array(c2)
    return c1, c2


def gaussian_mutate(genes, config: GaConfig, random_state=None, sigma_translation: float | None = None):
    """Add Gaussian noise to each gene with probability ``config.mutation_prob``.

    ``sigma_translation`` overrides ``config.mutation_sigma_translation``;
    if both are ``None`` the translation genes are left untouched.
    """
    rng = check_random_state(random_state)
    wrap = isinstance(genes, AffineParams)
    x = genes.to_array() if wrap else np.asarray(genes, dtype=np.float64)
    if sigma_translation is None:
        sigma_translation = config.mutation_sigma_translation or 0.0
    sigma = np.empty(6)
    sigma[LINEAR_GENES] = config.mutation_sigma_linear
    sigma[TRANSLATION_GENES] = sigma_translation
    mask = rng.random(x.shape) < config.mutation_prob
    noise = rng.standard_normal(x.shape)
    out = np.where(mask, x + sigma * noise, x)
    return AffineParams.from_array(out) if wrap else out


def replace_worst(current_genes, current_fitness, offspring_genes, offspring_fitness):
    """Keep the better half of the current population and the better half of the offspring.

    Returns ``(genes, fitness)``; survivors come first, then offspring, each
    sorted by ascending fitness (ties keep their original order).
    """
    current_fitness = np.asarray(current_fitness, dtype=np.float64)
    offspring_fitness = np.asarray(offspring_fitness, dtype=np.float64)
    size = current_fitness.shape[0]
    if offspring_fitness.shape[0] != size:
        raise ValueError("current and offspring populations must have the same size")
    keep = size // 2
    cur = np.argsort(current_fitness, kind="stable")[:keep]
    off = np.argsort(offspring_fitness, kind="stable")[: size - keep]
    genes = np.concatenate([np.asarray(current_genes)[cur], np.asarray(offspring_genes)[off]])
    fitness = np.concatenate([current_fitness[cur], offspring_fitness[off]])
    return genes, fitness


def resolve_translation_sigma(config: GaConfig, s) -> float:
    if config.mutation_sigma_translation is not None:
        return float(config.mutation_sigma_translation)
    return 0.05 * bbox_diagonal(s)


def run(s, d, config: GaConfig = GaConfig()) -> RunRecord:
    """Register ``d`` onto ``s``; returns the convergence trace and the best transform."""
    config.validate()
    s = check_pointset(s, "s")
    d = check_pointset(d, "d")
    n, k = d.shape[0], s.shape[0]
    size = config.population_size
    sigma_t = resolve_translation_sigma(config, s)
    rng = np.random.default_rng(config.seed)

    genes = initialize_population(config, s, d, rng)
    fitness = None
    order = fresh_match_order(n, k, rng) if config.fixed_order else None
    best = np.empty(config.generations)

    for g in range(config.generations):
        if not config.fixed_order:
            order = fresh_match_order(n, k, rng)
            fitness = None
        # under a fixed order the survivors' scores are still current
        if fitness is None:
            fitness = evaluate_population(s, d, genes, order)

        parents = genes[tournament_select(fitness, config.tournament_size, rng, size)]
        c1, c2 = sbx_crossover(parents[0::2], parents[1::2], config.sbx_eta, config.sbx_gene_prob, rng)
        children = np.empty_like(parents)
        children[0::2] = c1
        children[1::2] = c2
        children = gaussian_mutate(children, config, rng, sigma_translation=sigma_t)
        child_fitness = evaluate_population(s, d, children, order)

        genes, fitness = replace_worst(genes, fitness, children, child_fitness)
        best[g] = fitness.min()
        if logger.isEnabledFor(logging.DEBUG) and g % 50 == 0:
            logger.debug("seed %d gen %d best %.6g", config.seed, g, best[g])

    i = int(np.argmin(fitness))
    return RunRecord(
        best_fitness=best,
        final_best=Individual(AffineParams.from_array(genes[i]), float(fitness[i])),
        seed=config.seed,
        final_order=order,
    )
