"""Qualitative predictions checked against the bundled PET91 data."""

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import datasets
from .aggregation import CodonUsage, mutabilities, pair_rates
from .tables import AMINO_ACIDS, amino_acid, multiplet

__all__ = [
    "InequalityClaim",
    "ExperimentalDataset",
    "load_dataset",
    "check_eq15",
    "eta_bound",
    "evaluate_claims",
    "hierarchy_report",
    "HIERARCHY_LINKS",
    "PredictionReport",
    "DEFAULT_SLACK",
]

DEFAULT_SLACK = 0.10
MARGIN_EPS = 1e-12

STRICT = "strict"
APPROX = "approx"

# (more stable, less stable, relation); relation is ">", ">>" or "~"
HIERARCHY_LINKS = (
    ("Gly", "Pro", ">"),
    ("Pro", "Ala", ">"),
    ("Ala", "Thr", ">"),
    ("Thr", "Ser", ">"),
    ("Phe", "Lys", ">"),
    ("Lys", "Ile", ">"),
    ("Ile", "Asn", ">"),
    ("Leu", "Val", ">"),
    ("Glu", "Asp", ">"),
    ("His", "Gln", "~"),
    ("Trp", "Met", ">>"),
)
# sextets and the triplet: the stability argument is weaker for them
LOW_CONFIDENCE = frozenset({"Ser", "Leu", "Ile"})


@dataclass(frozen=True)
class InequalityClaim:
    id: str
    lhs: tuple
    rhs: tuple
    relation: str
    exp_lhs: float
    exp_rhs: float
    source: str

    def __str__(self):
        op = "<" if self.relation == STRICT else "<~"
        return f"R({self.lhs[0]}<>{self.lhs[1]}) {op} R({self.rhs[0]}<>{self.rhs[1]})"


@dataclass(frozen=True)
class ExperimentalDataset:
    claims: tuple
    mutability: dict
    doublets: tuple
    directory: str = ""

    def pair_rates(self):
        """Experimental rates keyed by unordered amino-acid pair.

        Values are tuples: the source quotes a few pairs with more than one
        number (see ``conflicts``).
        """
        out = {}
        rows = [(c.lhs, c.exp_lhs) for c in self.claims] + [(c.rhs, c.exp_rhs) for c in self.claims]
        rows += [((a, b), value) for a, b, value in self.doublets]
        for pair, value in rows:
            seen = out.setdefault(frozenset(pair), ())
            if value not in seen:
                out[frozenset(pair)] = seen + (value,)
        return out

    def conflicts(self):
        return {pair: v for pair, v in self.pair_rates().items() if len(v) > 1}


def _number(text):
    value = float(text)
    return int(value) if value.is_integer() else value


def load_dataset(directory=None):
    """Read claims, mutabilities and doublet rates, verifying the manifest."""
    directory = datasets.data_dir(directory)
    claims = []
    for row in datasets.read_table(datasets.PAIR_RATES, directory):
        relation = row["relation"].strip()
        if relation not in (STRICT, APPROX):
            raise datasets.DatasetError(f"unknown relation {relation!r} in claim {row['id']}")
        claims.append(
            InequalityClaim(
                row["id"],
                (amino_acid(row["lhs_a"]), amino_acid(row["lhs_b"])),
                (amino_acid(row["rhs_a"]), amino_acid(row["rhs_b"])),
                relation,
                _number(row["exp_lhs"]),
                _number(row["exp_rhs"]),
                row["source"],
            )
        )
    ids = [c.id for c in claims]
    if len(set(ids)) != len(ids):
        raise datasets.DatasetError("duplicate claim ids")
    mut = {}
    for row in datasets.read_table(datasets.MUTABILITY, directory):
        mut[amino_acid(row["amino_acid"])] = (_number(row["pet91"]), _number(row["dayhoff"]))
    if set(mut) != set(AMINO_ACIDS):
        raise datasets.DatasetError("mutability table must list all 20 amino acids")
    doublets = tuple(
        (amino_acid(row["a"]), amino_acid(row["b"]), _number(row["exp"]))
        for row in datasets.read_table(datasets.DOUBLET_RATES, directory)
    )
    return ExperimentalDataset(tuple(claims), mut, doublets, str(directory))


def check_eq15(alpha, beta, gamma):
    """Strict chain ``|60g - 4b - 10a| > |12g - 2a| > |36g - 4b - 2a|``."""
    for name, v in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        if v <= 0:
            raise ValueError(f"{name} must be positive, got {v!r}")
    x = abs(60 * gamma - 4 * beta - 10 * alpha)
    y = abs(12 * gamma - 2 * alpha)
    z = abs(36 * gamma - 4 * beta - 2 * alpha)
    return x > y > z, (x, y, z)


def normalized_margin(lhs, rhs):
    return (rhs - lhs) / (rhs + lhs + MARGIN_EPS)


def _idx(a):
    return AMINO_ACIDS.index(a)


def _rate(sym, pair):
    return float(sym[_idx(pair[0]), _idx(pair[1])])


def eta_bound(params, strength, usage=None, rates=None):
    """Model Phe<>Leu and Phe<>Tyr rates next to the experimental 230 | 179."""
    sym = pair_rates(params, strength, usage) if rates is None else rates
    return {
        "model_phe_leu": _rate(sym, ("Phe", "Leu")),
        "model_phe_tyr": _rate(sym, ("Phe", "Tyr")),
        "exp_phe_leu": 230,
        "exp_phe_tyr": 179,
    }


@dataclass
class ClaimResult:
    claim: InequalityClaim
    model_lhs: float
    model_rhs: float
    satisfied: bool
    margin: float

    def to_dict(self):
        c = self.claim
        return {
            "id": c.id,
            "claim": str(c),
            "relation": c.relation,
            "source": c.source,
            "exp_lhs": c.exp_lhs,
            "exp_rhs": c.exp_rhs,
            "model_lhs": self.model_lhs,
            "model_rhs": self.model_rhs,
            "satisfied": self.satisfied,
            "margin": self.margin,
        }


@dataclass
class PredictionReport:
    results: list
    slack: float
    doublets: list
    doublets_distinct: bool
    eq15: tuple
    eta: dict
    hierarchy: dict
    metadata: dict = field(default_factory=dict)

    def _count(self, relation):
        rs = [r for r in self.results if r.claim.relation == relation]
        return sum(r.satisfied for r in rs), len(rs)

    @property
    def strict_satisfied(self):
        return self._count(STRICT)[0]

    @property
    def strict_total(self):
        return self._count(STRICT)[1]

    @property
    def approx_satisfied(self):
        return self._count(APPROX)[0]

    @property
    def approx_total(self):
        return self._count(APPROX)[1]

    @property
    def violated(self):
        return [r.claim.id for r in self.results if not r.satisfied]

    def soft_margin(self, relation=STRICT):
        return sum(min(0.0, r.margin) for r in self.results if r.claim.relation == relation)

    def to_dict(self):
        ok, triple = self.eq15
        return {
            "metadata": self.metadata,
            "summary": {
                "strict_satisfied": self.strict_satisfied,
                "strict_total": self.strict_total,
                "approx_satisfied": self.approx_satisfied,
                "approx_total": self.approx_total,
                "approx_slack": self.slack,
            },
            "claims": [r.to_dict() for r in self.results],
            "doublets": {"rates": self.doublets, "pairwise_distinct": self.doublets_distinct},
            "eq15": {"ok": ok, "values": list(triple)},
            "eta_bound": self.eta,
            "hierarchy": self.hierarchy,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self):
        lines = ["claim                                  exp_lhs  exp_rhs      model_lhs      model_rhs  ok"]
        for r in self.results:
            c = r.claim
            lines.append(
                f"{c.id} {str(c):34s} {c.exp_lhs:8g} {c.exp_rhs:8g} {r.model_lhs:14.6g} {r.model_rhs:14.6g}  "
                + ("yes" if r.satisfied else "NO")
            )
        lines.append(
            f"strict: {self.strict_satisfied}/{self.strict_total}  "
            f"approx (slack {self.slack:g}): {self.approx_satisfied}/{self.approx_total}"
        )
        ok, (x, y, z) = self.eq15
        lines.append(f"eq15 chain {x:.6g} > {y:.6g} > {z:.6g}: {'ok' if ok else 'violated'}")
        lines.append(
            "Phe<>Leu {model_phe_leu:.6g} vs Phe<>Tyr {model_phe_tyr:.6g} "
            "(exp {exp_phe_leu} | {exp_phe_tyr})".format(**self.eta)
        )
        lines.append(
            "doublet rates "
            + ", ".join(f"{d['pair']}={d['model']:.6g}" for d in self.doublets)
            + (" (distinct)" if self.doublets_distinct else " (coincident)")
        )
        for link in self.hierarchy["links"]:
            lines.append(
                f"{link['more_stable']} {link['relation']} {link['less_stable']}: "
                f"model {'agrees' if link['model_agrees'] else 'disagrees'}, "
                f"PET91 {'agrees' if link['pet91_agrees'] else 'disagrees'}"
                + (" *" if link["low_confidence"] else "")
            )
        return "\n".join(lines) + "\n"


def _satisfied(relation, lhs, rhs, slack):
    if relation == STRICT:
        return lhs < rhs
    return lhs <= (1 + slack) * rhs


def _link_agrees(relation, more_stable, less_stable, slack):
    # values are mutabilities: the more stable amino acid mutates less
    if relation == "~":
        return abs(more_stable - less_stable) <= slack * max(abs(more_stable), abs(less_stable))
    return more_stable < less_stable


def hierarchy_report(params, strength, usage=None, dataset=None, slack=DEFAULT_SLACK, mut=None):
    """Model mutability per amino acid, grouped by multiplet size, with link flags."""
    dataset = load_dataset() if dataset is None else dataset
    mut = mutabilities(params, strength, usage) if mut is None else mut
    groups = {}
    for aa in sorted(AMINO_ACIDS, key=lambda a: (mut[a], a)):
        groups.setdefault(str(len(multiplet(aa))), []).append({"amino_acid": aa, "mutability": mut[aa]})
    links = []
    for a, b, rel in HIERARCHY_LINKS:
        links.append(
            {
                "more_stable": a,
                "less_stable": b,
                "relation": rel,
                "model": [mut[a], mut[b]],
                "pet91": [dataset.mutability[a][0], dataset.mutability[b][0]],
                "dayhoff": [dataset.mutability[a][1], dataset.mutability[b][1]],
                "model_agrees": _link_agrees(rel, mut[a], mut[b], slack),
                "pet91_agrees": _link_agrees(rel, dataset.mutability[a][0], dataset.mutability[b][0], slack),
                "dayhoff_agrees": _link_agrees(rel, dataset.mutability[a][1], dataset.mutability[b][1], slack),
                "low_confidence": a in LOW_CONFIDENCE or b in LOW_CONFIDENCE,
            }
        )
    return {
        "by_multiplet_size": dict(sorted(groups.items(), key=lambda kv: int(kv[0]))),
        "links": links,
        "model_agreements": sum(link["model_agrees"] for link in links),
    }


def evaluate_claims(params, strength, usage=None, dataset=None, slack=DEFAULT_SLACK):
    """Evaluate every bundled claim with symmetrized model rates."""
    usage = CodonUsage.uniform() if usage is None else usage
    dataset = load_dataset() if dataset is None else dataset
    sym = pair_rates(params, strength, usage)
    results = []
    for c in dataset.claims:
        lhs, rhs = _rate(sym, c.lhs), _rate(sym, c.rhs)
        results.append(
            ClaimResult(c, lhs, rhs, _satisfied(c.relation, lhs, rhs, slack), normalized_margin(lhs, rhs))
        )
    doublets = [
        {"pair": f"{a}<>{b}", "model": _rate(sym, (a, b)), "exp": value}
        for a, b, value in dataset.doublets
    ]
    values = [d["model"] for d in doublets]
    distinct = len(set(values)) == len(values)
    return PredictionReport(
        results=results,
        slack=slack,
        doublets=doublets,
        doublets_distinct=distinct,
        eq15=check_eq15(float(params.alpha), float(params.beta), float(params.gamma)),
        eta=eta_bound(params, strength, rates=sym),
        hierarchy=hierarchy_report(params, strength, usage, dataset, slack),
        metadata={
            "params": params.to_dict(),
            "strength": strength.spec(),
            "dataset": Path(dataset.directory).name if dataset.directory else "",
        },
    )
