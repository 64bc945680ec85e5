"""Codon mutation generators, their exponentials and one-step matrices.

All codon matrices are column-indexed by source: entry ``(j, i)`` is the
rate (or probability) of codon ``i`` mutating into codon ``j``.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .distance import ModelParams, r_vector, sense_adjacency
from .tables import SENSE_CODONS

__all__ = [
    "Exponential",
    "PowerLaw",
    "Constant",
    "parse_strength",
    "MatrixKind",
    "CodonMatrix",
    "build_generator",
    "expm",
    "evolve",
    "discrete_step",
    "pam_matrix",
    "PAM_STEP",
]

# One PAM is a tenth of the model time unit.
PAM_STEP = 0.1


@dataclass(frozen=True)
class Exponential:
    """``F(d) = exp(-lam * d)``."""

    lam: float = 0.01

    def __post_init__(self):
        _check_positive("lambda", self.lam)

    def __call__(self, d):
        return np.exp(-self.lam * np.asarray(d, dtype=float))

    def spec(self):
        return f"exp:lambda={self.lam!r}"


@dataclass(frozen=True)
class PowerLaw:
    """``F(d) = (1 + d / scale) ** -p``."""

    p: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        _check_positive("p", self.p)
        _check_positive("scale", self.scale)

    def __call__(self, d):
        return (1.0 + np.asarray(d, dtype=float) / self.scale) ** -self.p

    def spec(self):
        return f"power:p={self.p!r},scale={self.scale!r}"


@dataclass(frozen=True)
class Constant:
    """Distance-independent strength; reduces the model to a plain Markov chain."""

    c: float = 1.0

    def __post_init__(self):
        _check_positive("c", self.c)

    def __call__(self, d):
        return np.full(np.shape(d), float(self.c))

    def spec(self):
        return f"const:c={self.c!r}"


def _check_positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")


_STRENGTHS = {
    "exp": (Exponential, {"lambda": "lam", "lam": "lam"}),
    "power": (PowerLaw, {"p": "p", "scale": "scale"}),
    "const": (Constant, {"c": "c"}),
}


def parse_strength(text):
    """Parse ``exp:lambda=0.01``, ``power:p=2,scale=10`` or ``const:c=1``."""
    kind, _, rest = text.strip().partition(":")
    kind = {"exponential": "exp", "constant": "const", "powerlaw": "power"}.get(kind, kind)
    if kind not in _STRENGTHS:
        raise ValueError(f"unknown strength function {kind!r}")
    cls, names = _STRENGTHS[kind]
    kwargs = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep or key.strip() not in names:
            raise ValueError(f"bad parameter {item!r} for strength {kind!r}")
        try:
            kwargs[names[key.strip()]] = float(value)
        except ValueError:
            raise ValueError(f"bad number {value!r} in strength {text!r}") from None
    return cls(**kwargs)


class MatrixKind(str, Enum):
    GENERATOR = "generator"
    EVOLUTION = "evolution"
    STOCHASTIC = "stochastic"


@dataclass(frozen=True, eq=False)
class CodonMatrix:
    """A 61x61 matrix over sense codons with provenance metadata."""

    entries: np.ndarray
    kind: MatrixKind
    metadata: dict = field(default_factory=dict)
    labels: tuple = SENSE_CODONS

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        n = len(self.labels)
        if a.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix, got shape {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "kind", MatrixKind(self.kind))
        object.__setattr__(self, "labels", tuple(self.labels))

    def __getitem__(self, key):
        target, source = key
        index = {c: i for i, c in enumerate(self.labels)}
        return self.entries[index[target], index[source]]

    def __eq__(self, other):
        if not isinstance(other, CodonMatrix):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.labels == other.labels
            and self.metadata == other.metadata
            and np.array_equal(self.entries, other.entries)
        )

    __hash__ = None

    def with_entries(self, entries, kind, **extra):
        return CodonMatrix(entries, kind, {**self.metadata, **extra}, self.labels)


def build_generator(params, strength):
    """Rate generator with ``F(distance)`` on nearest sense pairs.

    Diagonal entries make every column sum to zero.
    """
    if not isinstance(params, ModelParams):
        raise TypeError("params must be a ModelParams")
    r = r_vector(params)
    src, dst = sense_adjacency()
    n = len(SENSE_CODONS)
    q = np.zeros((n, n))
    q[dst, src] = strength(np.abs(r[dst] - r[src]))
    q[np.diag_indices(n)] = -q.sum(axis=0)
    meta = {
        "params": params.to_dict(),
        "strength": strength.spec(),
        "charge_source": params.charge_source.value,
    }
    return CodonMatrix(q, MatrixKind.GENERATOR, meta)


def expm(a, tol=1e-16):
    """Matrix exponential by scaling and squaring of a truncated Taylor series.

    The matrix is scaled by ``2**-s`` so its 1-norm is at most 0.5; the
    series stops once the next term's norm is below ``tol`` times the
    accumulated norm.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expm needs a square matrix")
    norm = np.linalg.norm(a, 1)
    s = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0 else 0
    b = a / 2.0**s
    result = np.eye(len(a))
    term = np.eye(len(a))
    for k in range(1, 200):
        term = term @ b / k
        result = result + term
        if np.linalg.norm(term, 1) <= tol * np.linalg.norm(result, 1):
            break
    for _ in range(s):
        result = result @ result
    return result


def _require_generator(q):
    if q.kind is not MatrixKind.GENERATOR:
        raise ValueError(f"expected a generator matrix, got {q.kind.value}")


def evolve(q, t):
    """Transition probabilities ``exp(Q t)`` after time ``t``."""
    _require_generator(q)
    if not t >= 0:
        raise ValueError(f"time must be nonnegative, got {t!r}")
    p = np.eye(len(q.labels)) if t == 0 else expm(q.entries * t)
    return q.with_entries(p, MatrixKind.EVOLUTION, time=float(t))


def discrete_step(q, tau):
    """One uniformized step ``I + tau Q``.

    Requires ``tau * max|Q_ii| <= 1`` so that no probability is negative.
    """
    _require_generator(q)
    if not tau >= 0:
        raise ValueError(f"step must be nonnegative, got {tau!r}")
    max_out = float(np.max(-np.diag(q.entries), initial=0.0))
    if tau * max_out > 1 + 1e-12:
        raise ValueError(
            f"step {tau!r} too large: tau * max|Q_ii| = {tau * max_out!r} exceeds 1"
        )
    m = np.eye(len(q.labels)) + tau * q.entries
    # at the bound the diagonal may round to a tiny negative number
    np.clip(m, 0.0, None, out=m)
    return q.with_entries(m, MatrixKind.STOCHASTIC, step=float(tau))


def pam_matrix(q):
    """One-PAM matrix ``I + 0.1 Q``."""
    return discrete_step(q, PAM_STEP)
