"""scikit-learn style front end for the GA registration."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .ga import GaConfig, run
from .geometry import warp
from .matching import MatchOrder, evaluate_population
from .validation import check_pointset


class AffineGARegistration(TransformerMixin, BaseEstimator):
    """Estimate the affine map that aligns a deformed point-set onto a static one.

    ``fit(X, y)`` takes the deformed points ``X`` (n, 2) and the static points
    ``y`` (k, 2); ``n`` and ``k`` may differ and no correspondence is needed.
    ``transform`` then applies the recovered map to any point array.

    Parameters
    ----------
    population_size : int, default=120
    generations : int, default=500
    tournament_size : int, default=5
    sbx_eta : float, default=2.0
    sbx_gene_prob : float, default=0.5
    mutation_prob : float, default=1/6
    mutation_sigma_linear : float, default=0.05
    mutation_sigma_translation : float or None, default=None
        ``None`` uses 5% of the static bounding-box diagonal.
    fixed_order : bool, default=False
        Use one match order for the whole run (noise-free objective).
    random_state : int or None, default=None

    Attributes
    ----------
    params_ : AffineParams
    coef_ : ndarray of shape (2, 2)
        Linear part of the map.
    intercept_ : ndarray of shape (2,)
    fitness_ : float
        Objective value of ``params_`` under the last generation's match order.
    convergence_ : ndarray of shape (generations,)
        Best fitness after each generation.
    run_record_ : RunRecord
    """

    def __init__(
        self,
        population_size=120,
        generations=500,
        tournament_size=5,
        sbx_eta=2.0,
        sbx_gene_prob=0.5,
        mutation_prob=1.0 / 6.0,
        mutation_sigma_linear=0.05,
        mutation_sigma_translation=None,
        fixed_order=False,
        random_state=None,
    ):
        self.population_size = population_size
        self.generations = generations
        self.tournament_size = tournament_size
        self.sbx_eta = sbx_eta
        self.sbx_gene_prob = sbx_gene_prob
        self.mutation_prob = mutation_prob
        self.mutation_sigma_linear = mutation_sigma_linear
        self.mutation_sigma_translation = mutation_sigma_translation
        self.fixed_order = fixed_order
        self.random_state = random_state

    def _config(self) -> GaConfig:
        seed = self.random_state
        if seed is None:
            seed = int(np.random.SeedSequence().generate_state(1)[0])
        return GaConfig(
            population_size=self.population_size,
            generations=self.generations,
            tournament_size=self.tournament_size,
            sbx_eta=self.sbx_eta,
            sbx_gene_prob=self.sbx_gene_prob,
            mutation_prob=self.mutation_prob,
            mutation_sigma_linear=self.mutation_sigma_linear,
            mutation_sigma_translation=self.mutation_sigma_translation,
            seed=int(seed),
            fixed_order=self.fixed_order,
        ).validate()

    def fit(self, X, y):
        X = check_pointset(X, "X")
        y = check_pointset(y, "y")
        record = run(y, X, self._config())
        self.run_record_ = record
        self.params_ = record.final_best.genes
        self.coef_ = self.params_.linear
        self.intercept_ = self.params_.translation
        self.fitness_ = record.final_best.fitness
        self.convergence_ = record.best_fitness
        self.n_features_in_ = 2
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        return warp(self.params_, X)

    def score(self, X, y):
        """Negative objective of the fitted map, visiting points in index order."""
        check_is_fitted(self, "params_")
        X = check_pointset(X, "X")
        y = check_pointset(y, "y")
        order = MatchOrder(np.arange(X.shape[0]), np.arange(y.shape[0]))
        return -float(evaluate_population(y, X, self.params_.to_array()[None, :], order)[0])
