import json
import shutil
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from crystal_codon import datasets
from crystal_codon.distance import ModelParams
from crystal_codon.predictions import (
    APPROX,
    HIERARCHY_LINKS,
    STRICT,
    check_eq15,
    evaluate_claims,
    hierarchy_report,
    load_dataset,
    normalized_margin,
)
from crystal_codon.rates import Constant, Exponential
from crystal_codon.tables import AMINO_ACIDS

P = ModelParams(1, 1, 1, 2)


def test_eq15_witness():
    ok, triple = check_eq15(Fraction(1, 10), 5, Fraction(1, 2))
    assert ok and triple == (9, Fraction(29, 5), Fraction(11, 5))


def test_eq15_unit_point_fails():
    ok, triple = check_eq15(1, 10, 1)
    assert not ok and triple == (10, 10, 6)


def test_eq15_rejects_nonpositive():
    with pytest.raises(ValueError):
        check_eq15(0, 1, 1)


pos = st.fractions(min_value=Fraction(1, 100), max_value=100, max_denominator=100)


@given(pos, pos, pos, pos)
def test_eq15_homogeneous(a, b, g, k):
    ok, (x, y, z) = check_eq15(a, b, g)
    ok2, (x2, y2, z2) = check_eq15(k * a, k * b, k * g)
    assert ok == ok2 and (x2, y2, z2) == (k * x, k * y, k * z)


def test_dataset_shape(dataset):
    assert len(dataset.claims) == 25
    assert len({c.id for c in dataset.claims}) == 25
    assert sum(c.relation == STRICT for c in dataset.claims) == 22
    assert {c.id for c in dataset.claims if c.relation == APPROX} == {"T04", "T05", "T06"}
    assert sum(c.source == "text" for c in dataset.claims) == 2


@pytest.mark.parametrize(
    "cid, lhs, rhs, values",
    [
        ("T01", ("Asp", "Ala"), ("Glu", "Ala"), (63, 82)),
        ("T06", ("Gly", "Arg"), ("Gly", "Glu"), (70, 70)),
        ("T16", ("Val", "Ala"), ("Val", "Ile"), (226, 504)),
        ("X01", ("Phe", "Tyr"), ("Phe", "Leu"), (179, 230)),
        ("X02", ("Ala", "Pro"), ("Ala", "Val"), (23, 193)),
    ],
)
def test_dataset_rows(dataset, cid, lhs, rhs, values):
    c = next(c for c in dataset.claims if c.id == cid)
    assert (c.lhs, c.rhs, (c.exp_lhs, c.exp_rhs)) == (lhs, rhs, values)


def test_mutability_table(dataset):
    assert dataset.mutability["Ala"] == (100, 100)
    assert dataset.mutability["Trp"] == (25, 18)
    assert dataset.mutability["Ser"] == (117, 120)
    assert dataset.mutability["Met"][0] == 93
    assert set(dataset.mutability) == set(AMINO_ACIDS)


def test_conflicting_pair_values_are_kept(dataset):
    conflicts = dataset.conflicts()
    assert conflicts[frozenset({"Ile", "Thr"})] == (149, 134)
    assert conflicts[frozenset({"Ala", "Pro"})] == (150, 23)


def test_dataset_override(tmp_path, monkeypatch):
    for name in datasets.BUNDLE_FILES:
        shutil.copy(datasets.bundled_dir() / name, tmp_path / name)
    monkeypatch.setenv("CCT_DATA_DIR", str(tmp_path))
    assert load_dataset().directory == str(tmp_path)
    datasets.write_manifest(tmp_path)
    p = tmp_path / datasets.PAIR_RATES
    p.write_text(p.read_text().replace("\t63\t82\t", "\t64\t82\t"))
    with pytest.raises(datasets.DatasetError):
        load_dataset()


def test_normalized_margin():
    assert normalized_margin(1, 3) == pytest.approx(0.5)
    assert normalized_margin(3, 1) == pytest.approx(-0.5)


def test_report_counts(dataset):
    rep = evaluate_claims(P, Exponential(), dataset=dataset)
    assert rep.strict_total == 22 and rep.approx_total == 3
    assert 0 <= rep.strict_satisfied <= 22
    assert len(rep.results) == 25
    assert rep.eta["exp_phe_leu"] == 230


def test_report_byte_deterministic(dataset):
    a = evaluate_claims(P, Exponential(), dataset=dataset).to_json()
    b = evaluate_claims(P, Exponential(), dataset=dataset).to_json()
    assert a == b
    json.loads(a)


def test_constant_scale_does_not_change_verdicts(dataset):
    a = evaluate_claims(P, Constant(1), dataset=dataset)
    b = evaluate_claims(P, Constant(7), dataset=dataset)
    assert [r.satisfied for r in a.results] == [r.satisfied for r in b.results]


def test_slack_widens_approx_only(dataset):
    tight = evaluate_claims(P, Exponential(), dataset=dataset, slack=0.0)
    loose = evaluate_claims(P, Exponential(), dataset=dataset, slack=10.0)
    assert loose.strict_satisfied == tight.strict_satisfied
    assert loose.approx_satisfied >= tight.approx_satisfied


def test_hierarchy_report(dataset):
    rep = hierarchy_report(P, Constant(1), dataset=dataset)
    assert len(rep["links"]) == len(HIERARCHY_LINKS)
    trp_met = next(x for x in rep["links"] if (x["more_stable"], x["less_stable"]) == ("Trp", "Met"))
    assert trp_met["model"] == pytest.approx([7, 9])
    assert trp_met["model_agrees"] and trp_met["pet91_agrees"]
    sizes = rep["by_multiplet_size"]
    assert sum(len(v) for v in sizes.values()) == 20
    assert [a["amino_acid"] for a in sizes["1"]] == ["Trp", "Met"]


def test_text_report(dataset):
    text = evaluate_claims(P, Exponential(), dataset=dataset).to_text()
    assert "strict:" in text and "Trp >> Met" in text
