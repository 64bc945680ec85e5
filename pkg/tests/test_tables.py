from fractions import Fraction

import pytest

from crystal_codon import tables
from crystal_codon.crystal import IrrepLabel, TensorWord, Weight, decompose, word_weight
from crystal_codon.tables import (
    ALL_CODONS,
    AMINO_ACIDS,
    SENSE_CODONS,
    STOP,
    ChargeSource,
    InvalidCodonError,
    charge,
    charge_formula,
    charge_table,
    codon_record,
    dimer,
    dimers,
    multiplet,
    translate,
)

h = Fraction(1, 2)

# NCBI standard code, one-letter, in UCAG x UCAG x UCAG order
NCBI_AAS = "FFLLSSSSYY**CC*WLLLLPPPPHHQQRRRRIIIMTTTTNNKKSSRRVVVVAAAADDEEGGGG"
THREE = {
    "A": "Ala", "R": "Arg", "N": "Asn", "D": "Asp", "C": "Cys", "Q": "Gln", "E": "Glu",
    "G": "Gly", "H": "His", "I": "Ile", "L": "Leu", "K": "Lys", "M": "Met", "F": "Phe",
    "P": "Pro", "S": "Ser", "T": "Thr", "W": "Trp", "Y": "Tyr", "V": "Val", "*": STOP,
}


def test_genetic_code_matches_ncbi_standard():
    order = "UCAG"
    for k, letter in enumerate(NCBI_AAS):
        codon = order[k // 16] + order[(k // 4) % 4] + order[k % 4]
        assert translate(codon) == THREE[letter], codon


@pytest.mark.parametrize("codon, aa", [("UGG", "Trp"), ("UGA", STOP), ("CUA", "Leu"), ("tgg", "Trp")])
def test_translate(codon, aa):
    assert translate(codon) == aa


def test_codon_sets():
    assert len(ALL_CODONS) == 64 and len(set(ALL_CODONS)) == 64
    assert set(tables.STOP_CODONS) == {"UAA", "UAG", "UGA"}
    assert len(SENSE_CODONS) == 61
    assert ALL_CODONS[:4] == ("CCC", "CCU", "CCG", "CCA")
    assert len(AMINO_ACIDS) == 20


def test_multiplet_census():
    assert tables.multiplet_census() == {6: 3, 4: 5, 3: 1, 2: 9, 1: 2}
    assert sum(len(multiplet(a)) for a in AMINO_ACIDS) == 61


@pytest.mark.parametrize(
    "aa, codons",
    [
        ("Trp", {"UGG"}),
        ("Ile", {"AUC", "AUU", "AUA"}),
        ("Ser", {"UCC", "UCU", "UCG", "UCA", "AGC", "AGU"}),
        ("W", {"UGG"}),
    ],
)
def test_multiplet(aa, codons):
    assert set(multiplet(aa)) == codons


@pytest.mark.parametrize("bad", ["CC", "CCCC", "CXG", 5])
def test_bad_codon(bad):
    with pytest.raises(InvalidCodonError):
        translate(bad)


@pytest.mark.parametrize(
    "codon, irrep, weight",
    [
        ("GGG", IrrepLabel(3 * h, 3 * h, 1), Weight(3 * h, -3 * h)),
        ("CAC", IrrepLabel(h, h, 4), Weight(h, h)),
        ("AGA", IrrepLabel(h, 3 * h, 1), Weight(-h, -3 * h)),
    ],
)
def test_codon_record(codon, irrep, weight):
    rec = codon_record(codon)
    assert (rec.irrep, rec.weight) == (irrep, weight)


def test_stop_codons_keep_records():
    rec = codon_record("UAG")
    assert rec.is_stop
    assert rec.irrep == IrrepLabel(3 * h, h, 2)


def test_bundled_table_equals_decomposition():
    assert tables.check_codon_table() == []


def test_record_weights_are_word_weights():
    for c in ALL_CODONS:
        assert codon_record(c).weight == word_weight(TensorWord.from_letters(c))
        assert codon_record(c).dimer.letters == c[:2]


@pytest.mark.parametrize("d, q", [("CC", 7), ("UA", -5), ("GC", 5)])
def test_charge_formula(d, q):
    assert charge_formula(dimer(d)) == q


def test_charge_table_matches_formula_except_cu():
    mismatches = [d.letters for d in dimers() if charge_formula(d) != charge_table(d)]
    assert mismatches == ["CU"]
    assert charge_formula(dimer("CU")) == 3
    assert charge_table(dimer("CU")) == 1


def test_charge_sources():
    assert charge("CU") == 1
    assert charge("CU", ChargeSource.FORMULA) == 3
    assert charge("CU", "formula") == 3


def test_charge_table_sum():
    # 7+1+3-1+3-1-1-5+5+1+3-1+1-3-1-5
    assert sum(charge_table(d) for d in dimers()) == 6


def test_dimer_labels_match_decomposition():
    assert [b[:2] for b in tables.check_dimer_table()] == [("CU", "charge")]
    labels = {decompose(2)[TensorWord.from_letters(d.letters)][0] for d in dimers()}
    assert len(labels) == 4
    assert len({(d.j_h, d.j_v, d.j3_h, d.j3_v) for d in dimers()}) == 16


def test_casimir():
    assert tables.casimir(Fraction(3, 2)) == Fraction(15, 4)
    assert tables.casimir(1) == 2 and tables.casimir(0) == 0
