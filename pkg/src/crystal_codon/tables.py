"""Nucleotides, codons, the standard genetic code and dinucleotide charges.

Codons are plain upper-case RNA strings (``"CCU"``).  Everything here is
read once from the bundled tables and is immutable afterwards.
"""

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import datasets
from .crystal import IrrepLabel, TensorWord, Weight, decompose

__all__ = [
    "NUCLEOTIDES",
    "STOP",
    "ALL_CODONS",
    "SENSE_CODONS",
    "STOP_CODONS",
    "AMINO_ACIDS",
    "ONE_LETTER",
    "ChargeSource",
    "Dimer",
    "CodonRecord",
    "InvalidCodonError",
    "normalize_codon",
    "translate",
    "multiplet",
    "codon_record",
    "dimer",
    "dimers",
    "charge_formula",
    "charge_table",
    "charge",
    "casimir",
    "check_codon_table",
]

# Canonical order for codons and exported matrices.
NUCLEOTIDES = "CUGA"
STOP = "Stop"

ALL_CODONS = tuple("".join(t) for t in product(NUCLEOTIDES, repeat=3))


class InvalidCodonError(ValueError):
    pass


class ChargeSource(str, Enum):
    """Where the dinucleotide charge comes from."""

    TABLE = "table"
    FORMULA = "formula"


def casimir(j):
    """sl(2) Casimir eigenvalue ``J(J+1)``."""
    return j * (j + 1)


@dataclass(frozen=True)
class Dimer:
    letters: str
    j_h: Fraction
    j_v: Fraction
    j3_h: Fraction
    j3_v: Fraction
    charge_table: int

    @property
    def charge_formula(self):
        return charge_formula(self)


@dataclass(frozen=True)
class CodonRecord:
    codon: str
    amino_acid: str
    irrep: IrrepLabel
    weight: Weight

    @property
    def is_stop(self):
        return self.amino_acid == STOP

    @property
    def dimer(self):
        return dimer(self.codon[:2])


def normalize_codon(codon):
    """Upper-case, map T to U and check the result is a codon."""
    if not isinstance(codon, str):
        raise InvalidCodonError(f"codon must be a string, got {type(codon).__name__}")
    c = codon.strip().upper().replace("T", "U")
    if len(c) != 3 or any(ch not in NUCLEOTIDES for ch in c):
        raise InvalidCodonError(f"not a codon: {codon!r}")
    return c


@lru_cache(maxsize=None)
def _records():
    rows = datasets.bundled_table(datasets.CODON_TABLE)
    out = {}
    for row in rows:
        irrep = IrrepLabel(Fraction(row["j_h"]), Fraction(row["j_v"]), int(row["copy"]))
        weight = Weight(Fraction(row["j3_h"]), Fraction(row["j3_v"]))
        out[row["codon"]] = CodonRecord(row["codon"], row["amino_acid"], irrep, weight)
    if set(out) != set(ALL_CODONS):
        raise datasets.DatasetError("codon table does not list all 64 codons")
    return out


@lru_cache(maxsize=None)
def _letters():
    return {row["amino_acid"]: row["letter"] for row in datasets.bundled_table(datasets.CODON_TABLE)}


def codon_record(codon):
    return _records()[normalize_codon(codon)]


def translate(codon):
    """Amino acid (three-letter name) encoded by ``codon``, or ``"Stop"``."""
    return codon_record(codon).amino_acid


STOP_CODONS = tuple(c for c in ALL_CODONS if translate(c) == STOP)
SENSE_CODONS = tuple(c for c in ALL_CODONS if translate(c) != STOP)
AMINO_ACIDS = tuple(sorted({translate(c) for c in SENSE_CODONS}))
ONE_LETTER = {aa: _letters()[aa] for aa in AMINO_ACIDS}
_BY_LETTER = {v: k for k, v in ONE_LETTER.items()}


def amino_acid(name):
    """Canonical three-letter name from a three- or one-letter code."""
    key = name.strip()
    if len(key) == 1 and key.upper() in _BY_LETTER:
        return _BY_LETTER[key.upper()]
    key = key.capitalize()
    if key in AMINO_ACIDS:
        return key
    raise ValueError(f"unknown amino acid: {name!r}")


@lru_cache(maxsize=None)
def _multiplets():
    out = {aa: [] for aa in AMINO_ACIDS}
    for c in SENSE_CODONS:
        out[translate(c)].append(c)
    return {aa: tuple(cs) for aa, cs in out.items()}


def multiplet(aa):
    """Codons of ``aa`` in canonical order."""
    return _multiplets()[amino_acid(aa)]


def multiplet_census():
    """Map multiplet size to the number of amino acids with that size."""
    return dict(Counter(len(m) for m in _multiplets().values()))


@lru_cache(maxsize=None)
def _dimers():
    out = {}
    for row in datasets.bundled_table(datasets.DIMER_TABLE):
        out[row["dimer"]] = Dimer(
            row["dimer"],
            Fraction(row["j_h"]),
            Fraction(row["j_v"]),
            Fraction(row["j3_h"]),
            Fraction(row["j3_v"]),
            int(row["charge"]),
        )
    return out


def dimers():
    """All 16 dimers in canonical order."""
    d = _dimers()
    return tuple(d[a + b] for a in NUCLEOTIDES for b in NUCLEOTIDES)


def dimer(letters):
    key = letters.strip().upper().replace("T", "U")
    try:
        return _dimers()[key]
    except KeyError:
        raise InvalidCodonError(f"not a dinucleotide: {letters!r}") from None


def charge_formula(d):
    """``4 J3H + C_V (J3V + 1) - 1`` evaluated on the dimer's labels."""
    value = 4 * d.j3_h + casimir(d.j_v) * (d.j3_v + 1) - 1
    return int(value)


def charge_table(d):
    return d.charge_table


def charge(d, source=ChargeSource.TABLE):
    if isinstance(d, str):
        d = dimer(d)
    if ChargeSource(source) is ChargeSource.FORMULA:
        return charge_formula(d)
    return d.charge_table


def check_codon_table():
    """Compare the bundled codon table with the crystal decomposition.

    Returns a list of ``(codon, bundled, derived)`` mismatches; empty when
    the two agree on every irrep, copy and weight.
    """
    derived = decompose(3)
    bad = []
    for c in ALL_CODONS:
        rec = codon_record(c)
        irrep, weight = derived[TensorWord.from_letters(c)]
        if (rec.irrep, rec.weight) != (irrep, weight):
            bad.append((c, (rec.irrep, rec.weight), (irrep, weight)))
    return bad


def check_dimer_table():
    """Return dimers whose bundled labels or charges disagree with derivation.

    Each entry is ``(letters, field, bundled, derived)``.
    """
    derived = decompose(2)
    bad = []
    for d in dimers():
        irrep, weight = derived[TensorWord.from_letters(d.letters)]
        for field, ours, theirs in (
            ("j_h", d.j_h, irrep.j_h),
            ("j_v", d.j_v, irrep.j_v),
            ("j3_h", d.j3_h, weight.j3_h),
            ("j3_v", d.j3_v, weight.j3_v),
            ("charge", d.charge_table, charge_formula(d)),
        ):
            if ours != theirs:
                bad.append((d.letters, field, ours, theirs))
    return bad
