"""Amino-acid substitution matrices aggregated from codon matrices."""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .distance import sense_adjacency
from .rates import CodonMatrix, build_generator
from .tables import AMINO_ACIDS, SENSE_CODONS, STOP, amino_acid, multiplet, normalize_codon, translate

__all__ = [
    "CodonUsage",
    "UsageError",
    "AminoAcidMatrix",
    "aggregate",
    "pair_rate",
    "pair_rates",
    "mutability",
    "mutabilities",
]


class UsageError(ValueError):
    """Codon usage is incomplete or not normalized."""


class CodonUsage:
    """Codon frequencies normalized within each synonym family.

    Parameters
    ----------
    freq : mapping of codon to nonnegative float
        Raw frequencies.  Every sense codon must be present.  Each family is
        rescaled to sum to one unless ``normalize=False``, in which case the
        sums must already be one to within 1e-12.
    """

    def __init__(self, freq, normalize=True):
        raw = {}
        for codon, value in freq.items():
            c = normalize_codon(codon)
            if translate(c) == STOP:
                continue
            value = float(value)
            if not np.isfinite(value) or value < 0:
                raise UsageError(f"frequency of {c} must be nonnegative, got {value!r}")
            raw[c] = value
        missing = [c for c in SENSE_CODONS if c not in raw]
        if missing:
            raise UsageError(f"missing sense codons: {' '.join(missing)}")
        out = {}
        for aa in AMINO_ACIDS:
            fam = multiplet(aa)
            total = sum(raw[c] for c in fam)
            if normalize:
                if total <= 0:
                    raise UsageError(f"all codons of {aa} have zero frequency")
                out.update({c: raw[c] / total for c in fam})
            else:
                if abs(total - 1) > 1e-12:
                    raise UsageError(f"frequencies of {aa} sum to {total!r}, not 1")
                out.update({c: raw[c] for c in fam})
        self.freq = out

    @classmethod
    def uniform(cls):
        return cls({c: 1.0 for c in SENSE_CODONS})

    def vector(self):
        return np.array([self.freq[c] for c in SENSE_CODONS])

    def __getitem__(self, codon):
        return self.freq[normalize_codon(codon)]

    def __eq__(self, other):
        return isinstance(other, CodonUsage) and self.freq == other.freq

    def __repr__(self):
        return f"CodonUsage({len(self.freq)} codons)"


@dataclass(frozen=True, eq=False)
class AminoAcidMatrix:
    """20x20 matrix; entry ``(b, a)`` is the flow from ``a`` to ``b``."""

    entries: np.ndarray
    metadata: dict = field(default_factory=dict)
    labels: tuple = AMINO_ACIDS

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    def __getitem__(self, key):
        target, source = key
        return self.entries[self.labels.index(amino_acid(target)), self.labels.index(amino_acid(source))]

    def rate(self, source, target):
        return self[target, source]


@lru_cache(maxsize=None)
def _codon_aa_index():
    idx = np.array([AMINO_ACIDS.index(translate(c)) for c in SENSE_CODONS])
    idx.setflags(write=False)
    return idx


def aggregate(cm, usage):
    """Sum nearest-pair codon flows into amino-acid flows.

    ``M(b, a) = sum_{i in a} sum_{j in b, j nearest i} f_i^a cm(j, i)``.
    The diagonal collects synonymous nearest-pair flow.
    """
    if tuple(cm.labels) != SENSE_CODONS:
        raise ValueError("codon matrix is not in canonical sense-codon order")
    if not isinstance(usage, CodonUsage):
        raise UsageError("usage must be a CodonUsage")
    src, dst = sense_adjacency()
    aa = _codon_aa_index()
    f = usage.vector()
    flows = f[src] * cm.entries[dst, src]
    m = np.zeros((len(AMINO_ACIDS), len(AMINO_ACIDS)))
    np.add.at(m, (aa[dst], aa[src]), flows)
    return AminoAcidMatrix(m, dict(cm.metadata))


def _model_matrix(params, strength, usage):
    return aggregate(build_generator(params, strength), usage)


def pair_rates(params, strength, usage=None):
    """Symmetrized model rates ``(M(b, a) + M(a, b)) / 2`` as a 20x20 array."""
    usage = CodonUsage.uniform() if usage is None else usage
    m = _model_matrix(params, strength, usage).entries
    return (m + m.T) / 2


def pair_rate(a, b, params, strength, usage=None):
    a, b = amino_acid(a), amino_acid(b)
    if a == b:
        raise ValueError("pair_rate needs two different amino acids")
    sym = pair_rates(params, strength, usage)
    return float(sym[AMINO_ACIDS.index(a), AMINO_ACIDS.index(b)])


def mutabilities(params, strength, usage=None):
    """Expected non-synonymous outflow of every amino acid, as a dict."""
    usage = CodonUsage.uniform() if usage is None else usage
    m = _model_matrix(params, strength, usage).entries
    out = m.sum(axis=0) - np.diag(m)
    return {aa: float(v) for aa, v in zip(AMINO_ACIDS, out)}


def mutability(a, params, strength, usage=None):
    return mutabilities(params, strength, usage)[amino_acid(a)]
