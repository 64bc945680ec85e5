"""Codon eigenvalues, codon distances and single-nucleotide adjacency."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Real

import numpy as np

from .crystal import NUCLEOTIDE_SIGNS
from .tables import (
    SENSE_CODONS,
    STOP,
    ChargeSource,
    InvalidCodonError,
    casimir,
    charge,
    codon_record,
    dimer,
    normalize_codon,
    translate,
)

__all__ = [
    "ModelParams",
    "ChangeClass",
    "eigenvalue",
    "r_value",
    "r_vector",
    "distance",
    "is_nearest",
    "sense_neighbors",
    "classify_change",
    "sense_adjacency",
]


@dataclass(frozen=True)
class ModelParams:
    """Positive parameters of the codon eigenvalue.

    ``eta`` weighs the V (purine/pyrimidine) weight against the H weight and
    must exceed 1; ``strict=True`` raises the bound to 2.
    """

    alpha: Real = 1
    beta: Real = 1
    gamma: Real = 1
    eta: Real = 2
    charge_source: ChargeSource = ChargeSource.TABLE
    strict: bool = False

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "eta"):
            value = getattr(self, name)
            if not isinstance(value, Real) or not np.isfinite(float(value)) or value <= 0:
                raise ValueError(f"{name} must be a positive real, got {value!r}")
        eta_min = 2 if self.strict else 1
        if self.eta <= eta_min:
            raise ValueError(f"eta must exceed {eta_min}, got {self.eta!r}")
        object.__setattr__(self, "charge_source", ChargeSource(self.charge_source))

    def as_tuple(self):
        return (self.alpha, self.beta, self.gamma, self.eta)

    def to_dict(self):
        return {
            "alpha": float(self.alpha),
            "beta": float(self.beta),
            "gamma": float(self.gamma),
            "eta": float(self.eta),
            "charge_source": self.charge_source.value,
        }


def _coefficients(codon, charge_source):
    rec = codon_record(codon)
    root = dimer(rec.codon[:2])
    q = charge(root, charge_source)
    j3v1 = root.j3_v
    return (
        Fraction(q),
        -j3v1 * (j3v1 - 1),
        4 * (casimir(rec.irrep.j_h) + casimir(rec.irrep.j_v)),
        2 * rec.weight.j3_h,
        2 * rec.weight.j3_v,
    )


def eigenvalue(codon, alpha, beta, gamma, eta, charge_source=ChargeSource.TABLE):
    """Codon eigenvalue for arbitrary parameter values, without validation.

    Exact (``Fraction``) when all parameters are integers or fractions.
    """
    a, b, g, wh, wv = _coefficients(normalize_codon(codon), ChargeSource(charge_source))
    return (alpha * a + beta * b + gamma * g) * (wh + eta * wv)


def r_value(codon, params):
    return eigenvalue(codon, *params.as_tuple(), params.charge_source)


@lru_cache(maxsize=None)
def _coefficient_matrix(charge_source):
    rows = [_coefficients(c, charge_source) for c in SENSE_CODONS]
    return np.array(rows, dtype=float)


def r_vector(params):
    """Eigenvalues of the 61 sense codons in canonical order, as floats."""
    a, b, g, wh, wv = _coefficient_matrix(params.charge_source).T
    alpha, beta, gamma, eta = (float(x) for x in params.as_tuple())
    return (alpha * a + beta * b + gamma * g) * (wh + eta * wv)


def distance(c1, c2, params):
    return abs(r_value(c2, params) - r_value(c1, params))


def is_nearest(c1, c2):
    c1, c2 = normalize_codon(c1), normalize_codon(c2)
    return sum(x != y for x, y in zip(c1, c2)) == 1


def sense_neighbors(codon):
    """Sense codons one substitution away from a sense ``codon``."""
    c = normalize_codon(codon)
    if translate(c) == STOP:
        raise InvalidCodonError(f"{c} is a stop codon")
    out = []
    for pos in range(3):
        for n in "CUGA":
            if n != c[pos]:
                other = c[:pos] + n + c[pos + 1:]
                if translate(other) != STOP:
                    out.append(other)
    return tuple(out)


@dataclass(frozen=True)
class ChangeClass:
    """Which position changed and which sign axes flipped.

    A flip of the V sign crosses the pyrimidine/purine divide
    (transversion); an H flip alone is a transition.
    """

    position: int
    delta_h: bool
    delta_v: bool

    @property
    def is_transition(self):
        return self.delta_h and not self.delta_v

    @property
    def is_transversion(self):
        return self.delta_v


def classify_change(c1, c2):
    c1, c2 = normalize_codon(c1), normalize_codon(c2)
    if not is_nearest(c1, c2):
        raise ValueError(f"{c1} and {c2} do not differ at exactly one position")
    pos = next(i for i in range(3) if c1[i] != c2[i])
    h1, v1 = NUCLEOTIDE_SIGNS[c1[pos]]
    h2, v2 = NUCLEOTIDE_SIGNS[c2[pos]]
    return ChangeClass(pos + 1, h1 != h2, v1 != v2)


@lru_cache(maxsize=None)
def sense_adjacency():
    """Directed nearest pairs ``(source, target)`` as index arrays into SENSE_CODONS."""
    index = {c: i for i, c in enumerate(SENSE_CODONS)}
    src, dst = [], []
    for c in SENSE_CODONS:
        for nb in sense_neighbors(c):
            src.append(index[c])
            dst.append(index[nb])
    src, dst = np.array(src), np.array(dst)
    src.setflags(write=False)
    dst.setflags(write=False)
    return src, dst
