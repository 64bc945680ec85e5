"""scikit-learn style front end to the codon mutation model.

``CrystalMutationModel`` holds the four model parameters as estimator
hyper-parameters; ``fit`` builds the codon generator and the amino-acid
rates, ``transform`` embeds codons on the real line and ``predict`` returns
symmetrized amino-acid pair rates.  ``InequalitySearch`` wraps the
multi-start parameter search.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .aggregation import CodonUsage, mutabilities, pair_rates
from .distance import ModelParams, r_value, r_vector
from .fit import FitConfig, search
from .predictions import DEFAULT_SLACK, evaluate_claims
from .rates import build_generator, evolve, parse_strength
from .tables import AMINO_ACIDS, SENSE_CODONS, amino_acid, normalize_codon

__all__ = ["CrystalMutationModel", "InequalitySearch", "check_codons", "check_pairs", "check_usage"]


def check_codons(X):
    """Validate a 1-D sequence of codon strings; returns a list of RNA codons."""
    arr = np.asarray(X, dtype=object)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D array of codons, got shape {arr.shape}")
    return [normalize_codon(str(c)) for c in arr]


def check_pairs(X):
    """Validate an ``(n, 2)`` array of amino-acid names."""
    arr = np.asarray(X, dtype=object)
    if arr.ndim == 1 and arr.shape[0] == 2:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) array of amino-acid pairs, got shape {arr.shape}")
    pairs = [(amino_acid(str(a)), amino_acid(str(b))) for a, b in arr]
    for a, b in pairs:
        if a == b:
            raise ValueError(f"pair ({a}, {b}) has identical amino acids")
    return pairs


def check_usage(usage):
    if usage is None:
        return CodonUsage.uniform()
    if isinstance(usage, CodonUsage):
        return usage
    return CodonUsage(dict(usage))


def _strength(strength):
    return parse_strength(strength) if isinstance(strength, str) else strength


class CrystalMutationModel(TransformerMixin, BaseEstimator):
    """Distance-weighted codon mutation model.

    Parameters
    ----------
    alpha, beta, gamma : float
        Positive weights of the charge, root V-weight and Casimir terms.
    eta : float
        Weight of the V axis relative to the H axis; must exceed 1.
    strength : str or strength function
        ``"exp:lambda=0.01"``, ``"power:p=2,scale=10"``, ``"const:c=1"`` or
        an instance of the corresponding class.
    charge_source : {"table", "formula"}
        Dinucleotide charges from the bundled table or from the closed form.
    usage : mapping or CodonUsage, optional
        Codon usage; uniform within synonym families when omitted.
    """

    def __init__(self, alpha=1.0, beta=1.0, gamma=1.0, eta=2.0, strength="exp:lambda=0.01",
                 charge_source="table", usage=None):
        self.alpha = alpha
        self.beta = beta
        self.gamma = gamma
        self.eta = eta
        self.strength = strength
        self.charge_source = charge_source
        self.usage = usage

    def _params(self):
        return ModelParams(self.alpha, self.beta, self.gamma, self.eta, self.charge_source)

    def fit(self, X=None, y=None):
        """Build the generator and amino-acid rates.  ``X`` and ``y`` are ignored."""
        self.params_ = self._params()
        self.strength_ = _strength(self.strength)
        self.usage_ = check_usage(self.usage)
        self.generator_ = build_generator(self.params_, self.strength_)
        self.pair_rates_ = pair_rates(self.params_, self.strength_, self.usage_)
        self.mutability_ = mutabilities(self.params_, self.strength_, self.usage_)
        self.embedding_ = dict(zip(SENSE_CODONS, r_vector(self.params_)))
        return self

    def transform(self, X):
        """Codon eigenvalues of ``X`` as an ``(n, 1)`` array."""
        check_is_fitted(self, "params_")
        codons = check_codons(X)
        return np.array([[float(r_value(c, self.params_))] for c in codons])

    def predict(self, X):
        """Symmetrized rates for an ``(n, 2)`` array of amino-acid pairs."""
        check_is_fitted(self, "pair_rates_")
        idx = AMINO_ACIDS.index
        return np.array([self.pair_rates_[idx(a), idx(b)] for a, b in check_pairs(X)])

    def evolve(self, t):
        check_is_fitted(self, "generator_")
        return evolve(self.generator_, t)

    def report(self, dataset=None, slack=DEFAULT_SLACK):
        check_is_fitted(self, "params_")
        return evaluate_claims(self.params_, self.strength_, self.usage_, dataset, slack)

    def score(self, X=None, y=None):
        """Fraction of strict inequality claims the model satisfies."""
        rep = self.report()
        return rep.strict_satisfied / rep.strict_total


class InequalitySearch(BaseEstimator):
    """Multi-start parameter search maximizing agreement with the claims.

    After ``fit``, ``best_params_`` holds the parameter dict,
    ``best_estimator_`` a fitted ``CrystalMutationModel`` and ``result_``
    the full search record.
    """

    def __init__(self, seeds=8, iterations=200, objective="margin", eta_min=1.0,
                 require_eq15=False, random_state=0, strength="exp:lambda=0.01",
                 charge_source="table", usage=None):
        self.seeds = seeds
        self.iterations = iterations
        self.objective = objective
        self.eta_min = eta_min
        self.require_eq15 = require_eq15
        self.random_state = random_state
        self.strength = strength
        self.charge_source = charge_source
        self.usage = usage

    def fit(self, X=None, y=None):
        cfg = FitConfig(
            seeds=self.seeds,
            iterations=self.iterations,
            objective=self.objective,
            eta_min=self.eta_min,
            require_eq15=self.require_eq15,
            rng_seed=int(self.random_state),
            strength=_strength(self.strength),
            usage=None if self.usage is None else check_usage(self.usage),
            charge_source=self.charge_source,
        )
        self.result_ = search(cfg)
        p = self.result_.params
        self.best_params_ = {"alpha": p.alpha, "beta": p.beta, "gamma": p.gamma, "eta": p.eta}
        self.best_estimator_ = CrystalMutationModel(
            **self.best_params_, strength=self.strength, charge_source=self.charge_source, usage=self.usage
        ).fit()
        return self

    def predict(self, X):
        check_is_fitted(self, "best_estimator_")
        return self.best_estimator_.predict(X)

    def score(self, X=None, y=None):
        check_is_fitted(self, "best_estimator_")
        return self.best_estimator_.score()
