"""Multi-start Nelder-Mead search over the model parameters.

Parameters are searched in log coordinates.  Starts are drawn log-uniformly
from the search box with a counter-based generator (Philox); start ``k``
uses the stream jumped ``k`` times, so each start's draws do not depend on
how many other starts run or in what order.
"""

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .aggregation import CodonUsage, pair_rates
from .distance import ModelParams
from .predictions import STRICT, check_eq15, load_dataset, normalized_margin
from .rates import Exponential
from .tables import AMINO_ACIDS, ChargeSource

__all__ = ["FitConfig", "FitResult", "NoFeasiblePointError", "objective", "search", "eq15_penalty"]

PARAM_NAMES = ("alpha", "beta", "gamma", "eta")
OBJECTIVES = ("margin", "count")
# added (negated) to the objective when the eq15 chain is required but broken
EQ15_BASE_PENALTY = 1.0


class NoFeasiblePointError(RuntimeError):
    """The budget ran out before any point met the hard constraints."""

    def __init__(self, message, evaluations, best_infeasible=None):
        super().__init__(message)
        self.evaluations = evaluations
        self.best_infeasible = best_infeasible


@dataclass(frozen=True)
class FitConfig:
    seeds: int = 8
    iterations: int = 200
    objective: str = "margin"
    eta_min: float = 1.0
    require_eq15: bool = False
    rng_seed: int = 0
    box: tuple = ((1e-2, 1e2), (1e-2, 1e2), (1e-2, 1e2), (None, 10.0))
    strength: object = field(default_factory=Exponential)
    usage: object = None
    charge_source: ChargeSource = ChargeSource.TABLE

    def __post_init__(self):
        if self.seeds < 1:
            raise ValueError("seeds must be a positive integer")
        if self.iterations < 0:
            raise ValueError("iterations must be nonnegative")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}, got {self.objective!r}")
        if self.eta_min < 1:
            raise ValueError("eta_min must be at least 1")
        for lo, hi in self.bounds():
            if not 0 < lo < hi:
                raise ValueError(f"bad search range [{lo}, {hi}]")

    def bounds(self):
        """Search ranges with the eta lower end filled in from ``eta_min``."""
        out = []
        for name, (lo, hi) in zip(PARAM_NAMES, self.box):
            if name == "eta":
                lo = self.eta_min if lo is None else max(lo, self.eta_min)
            out.append((float(lo), float(hi)))
        return out

    def make_params(self, values):
        return ModelParams(*values, charge_source=self.charge_source)

    def feasible(self, values):
        """Hard constraints: inside the box, eta above eta_min, eq15 if required."""
        for (lo, hi), v, name in zip(self.bounds(), values, PARAM_NAMES):
            if not (lo <= v <= hi):
                return False
            if name == "eta" and v <= self.eta_min:
                return False
        if self.require_eq15 and not check_eq15(*values[:3])[0]:
            return False
        return True


@dataclass
class FitResult:
    params: ModelParams
    objective: float
    satisfied: int
    total: int
    violated: list
    soft_margin: float
    eq15: tuple
    trace: list
    evaluations: int
    start_index: int
    config: dict

    def to_dict(self):
        ok, triple = self.eq15
        return {
            "params": self.params.to_dict(),
            "objective": self.objective,
            "satisfied": self.satisfied,
            "total": self.total,
            "violated": list(self.violated),
            "soft_margin": self.soft_margin,
            "eq15": {"ok": ok, "values": [float(v) for v in triple]},
            "evaluations": self.evaluations,
            "start_index": self.start_index,
            "trace": [[i, v] for i, v in self.trace],
            "config": self.config,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def eq15_penalty(alpha, beta, gamma):
    """Zero when the eq15 chain holds, otherwise a negative penalty."""
    ok, (x, y, z) = check_eq15(alpha, beta, gamma)
    if ok:
        return 0.0
    shortfall = min(0.0, normalized_margin(y, x)) + min(0.0, normalized_margin(z, y))
    return -(EQ15_BASE_PENALTY - shortfall)


class _Scorer:
    """Claim scoring with index arrays, to keep the inner loop cheap."""

    def __init__(self, cfg, dataset=None):
        self.cfg = cfg
        self.dataset = load_dataset() if dataset is None else dataset
        self.usage = CodonUsage.uniform() if cfg.usage is None else cfg.usage
        strict = [c for c in self.dataset.claims if c.relation == STRICT]
        self.claims = strict
        idx = AMINO_ACIDS.index
        self.lhs = (np.array([idx(c.lhs[0]) for c in strict]), np.array([idx(c.lhs[1]) for c in strict]))
        self.rhs = (np.array([idx(c.rhs[0]) for c in strict]), np.array([idx(c.rhs[1]) for c in strict]))

    def score(self, values):
        params = self.cfg.make_params(values)
        sym = pair_rates(params, self.cfg.strength, self.usage)
        lhs, rhs = sym[self.lhs], sym[self.rhs]
        ok = lhs < rhs
        margin = float(np.minimum(0.0, (rhs - lhs) / (rhs + lhs + 1e-12)).sum())
        penalty = eq15_penalty(*values[:3]) if self.cfg.require_eq15 else 0.0
        count = int(ok.sum())
        violated = [c.id for c, good in zip(self.claims, ok) if not good]
        return {
            "margin": margin + penalty,
            "count": count + (penalty if penalty < 0 else 0.0),
            "satisfied": count,
            "soft_margin": margin,
            "violated": violated,
        }


def objective(params, cfg, dataset=None):
    """Score of ``params`` under ``cfg.objective`` (higher is better).

    ``count`` is the number of satisfied strict claims; ``margin`` sums the
    negative parts of the normalized margins ``(rhs - lhs) / (rhs + lhs)``.
    Either is lowered by the eq15 penalty when ``cfg.require_eq15``.
    """
    values = tuple(float(v) for v in params.as_tuple())
    return _Scorer(cfg, dataset).score(values)[cfg.objective]


def _rank_key(scored, objective_name):
    if objective_name == "count":
        return (scored["count"], scored["margin"])
    return (scored["margin"],)


def search(cfg, dataset=None):
    """Multi-start search; returns the best feasible point across starts."""
    scorer = _Scorer(cfg, dataset)
    bounds = np.array(cfg.bounds())
    log_lo, log_hi = np.log(bounds[:, 0]), np.log(bounds[:, 1])
    evaluations = 0
    best = None
    best_infeasible = None
    trace = []

    def in_box(values):
        return all(lo <= v <= hi for (lo, hi), v in zip(bounds, values)) and values[3] > cfg.eta_min

    def loss(x, start_index):
        nonlocal evaluations, best, best_infeasible
        evaluations += 1
        values = tuple(float(v) for v in np.exp(x))
        if not in_box(values):
            # push the simplex back toward the box
            outside = float(np.sum(np.maximum(0, log_lo - x) + np.maximum(0, x - log_hi)))
            return 1e6 + outside
        scored = scorer.score(values)
        if cfg.feasible(values):
            key = _rank_key(scored, cfg.objective)
            if best is None or key > best[0]:
                best = (key, values, scored, start_index)
            trace.append((evaluations, float(best[2][cfg.objective])))
        elif best_infeasible is None or scored["margin"] > best_infeasible[1]["margin"]:
            best_infeasible = (values, scored)
        return -scored["margin"]

    for k in range(cfg.seeds):
        rng = np.random.Generator(np.random.Philox(key=cfg.rng_seed).jumped(k))
        x0 = rng.uniform(log_lo, log_hi)
        if cfg.iterations == 0:
            loss(x0, k)
            continue
        simplex = [x0]
        for d in range(len(x0)):
            step = np.zeros_like(x0)
            # step toward the interior so the initial simplex stays in the box
            step[d] = 0.5 if x0[d] + 0.5 <= log_hi[d] else -0.5
            simplex.append(x0 + step)
        minimize(
            loss,
            x0,
            args=(k,),
            method="Nelder-Mead",
            options={
                "maxfev": cfg.iterations,
                "maxiter": cfg.iterations,
                "initial_simplex": np.array(simplex),
                "xatol": 1e-8,
                "fatol": 1e-12,
            },
        )

    if best is None:
        raise NoFeasiblePointError(
            f"no feasible point found in {evaluations} evaluations", evaluations, best_infeasible
        )
    _, values, scored, start_index = best
    params = cfg.make_params(values)
    return FitResult(
        params=params,
        objective=float(scored[cfg.objective]),
        satisfied=scored["satisfied"],
        total=len(scorer.claims),
        violated=scored["violated"],
        soft_margin=scored["soft_margin"],
        eq15=check_eq15(*values[:3]),
        trace=trace,
        evaluations=evaluations,
        start_index=start_index,
        config=_config_dict(cfg),
    )


def _config_dict(cfg):
    return {
        "seeds": cfg.seeds,
        "iterations": cfg.iterations,
        "objective": cfg.objective,
        "eta_min": cfg.eta_min,
        "require_eq15": cfg.require_eq15,
        "rng_seed": cfg.rng_seed,
        "bounds": cfg.bounds(),
        "strength": cfg.strength.spec(),
        "charge_source": ChargeSource(cfg.charge_source).value,
        "usage": "uniform" if cfg.usage is None else "custom",
    }

