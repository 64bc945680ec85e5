"""Readers and writers for codon matrices, amino-acid matrices and codon usage."""

import csv
import io
import json
from pathlib import Path

import numpy as np

from .aggregation import AminoAcidMatrix, CodonUsage, UsageError
from .rates import CodonMatrix, MatrixKind
from .tables import SENSE_CODONS, InvalidCodonError, normalize_codon

__all__ = [
    "FormatError",
    "DimensionError",
    "UnknownLabelError",
    "MalformedNumberError",
    "CONVENTION",
    "matrix_to_csv",
    "matrix_from_csv",
    "save_matrix",
    "load_matrix",
    "matrix_to_json",
    "matrix_from_json",
    "aa_matrix_to_csv",
    "usage_from_tsv",
    "load_usage",
]

CONVENTION = "entry (row j, column i) is the rate or probability of codon i -> codon j"


class FormatError(ValueError):
    category = "format"


class DimensionError(FormatError):
    category = "dimension"


class UnknownLabelError(FormatError):
    category = "label"


class MalformedNumberError(FormatError):
    category = "number"


def _fmt(x):
    return format(float(x), ".17g")


def matrix_to_csv(m):
    out = io.StringIO()
    out.write(f"# kind: {m.kind.value}\n")
    out.write(f"# convention: {CONVENTION}\n")
    out.write(f"# metadata: {json.dumps(m.metadata, sort_keys=True)}\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["", *m.labels])
    for label, row in zip(m.labels, m.entries):
        w.writerow([label, *(_fmt(x) for x in row)])
    return out.getvalue()


def _check_labels(labels, where):
    out = []
    for label in labels:
        try:
            c = normalize_codon(label)
        except InvalidCodonError:
            raise UnknownLabelError(f"{where} label {label!r} is not a codon") from None
        if c not in SENSE_CODONS:
            raise UnknownLabelError(f"{where} label {label!r} is not a sense codon")
        out.append(c)
    return out


def matrix_from_csv(text):
    kind = MatrixKind.GENERATOR
    metadata = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            key, value = key.strip(), value.strip()
            if key == "kind":
                try:
                    kind = MatrixKind(value)
                except ValueError:
                    raise FormatError(f"unknown matrix kind {value!r}") from None
            elif key == "metadata":
                try:
                    metadata = json.loads(value)
                except json.JSONDecodeError as exc:
                    raise FormatError(f"bad metadata line: {exc}") from None
        elif line.strip():
            body.append(line)
    rows = list(csv.reader(body))
    if not rows:
        raise DimensionError("empty matrix file")
    header = rows[0][1:]
    n = len(SENSE_CODONS)
    if len(header) != n or len(rows) - 1 != n:
        raise DimensionError(f"expected {n} labels, got {len(header)} columns and {len(rows) - 1} rows")
    cols = _check_labels(header, "column")
    row_labels = _check_labels([r[0] for r in rows[1:]], "row")
    if len(set(cols)) != n or len(set(row_labels)) != n:
        raise UnknownLabelError("duplicate codon labels")
    entries = np.empty((n, n))
    for i, r in enumerate(rows[1:]):
        if len(r) != n + 1:
            raise DimensionError(f"row {r[0]} has {len(r) - 1} entries, expected {n}")
        for j, cell in enumerate(r[1:]):
            try:
                entries[i, j] = float(cell)
            except ValueError:
                raise MalformedNumberError(f"bad number {cell!r} at row {r[0]}, column {header[j]}") from None
    # reorder to canonical labels
    ri = [row_labels.index(c) for c in SENSE_CODONS]
    ci = [cols.index(c) for c in SENSE_CODONS]
    return CodonMatrix(entries[np.ix_(ri, ci)], kind, metadata)


def save_matrix(m, path):
    Path(path).write_text(matrix_to_csv(m))


def load_matrix(path):
    return matrix_from_csv(Path(path).read_text())


def matrix_to_json(m):
    doc = {
        "kind": m.kind.value,
        "convention": CONVENTION,
        "metadata": m.metadata,
        "labels": list(m.labels),
        "entries": [[float(x) for x in row] for row in m.entries],
    }
    return json.dumps(doc, sort_keys=True) + "\n"


def matrix_from_json(text):
    doc = json.loads(text)
    labels = _check_labels(doc["labels"], "matrix")
    if labels != list(SENSE_CODONS):
        raise UnknownLabelError("JSON matrix labels must be the 61 sense codons in canonical order")
    return CodonMatrix(np.array(doc["entries"], dtype=float), MatrixKind(doc["kind"]), doc.get("metadata", {}))


def aa_matrix_to_csv(m):
    out = io.StringIO()
    out.write(f"# metadata: {json.dumps(m.metadata, sort_keys=True)}\n")
    out.write("# entry (row b, column a) is the flow from amino acid a to amino acid b\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["", *m.labels])
    for label, row in zip(m.labels, m.entries):
        w.writerow([label, *(_fmt(x) for x in row)])
    return out.getvalue()


def aa_matrix_from_csv(text):
    rows = list(csv.reader(ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")))
    labels = tuple(rows[0][1:])
    return AminoAcidMatrix(np.array([[float(x) for x in r[1:]] for r in rows[1:]]), {}, labels)


def usage_from_tsv(text):
    """Parse ``CODON<TAB>frequency`` lines; ``#`` starts a comment."""
    freq = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise UsageError(f"line {lineno}: expected 'CODON<TAB>frequency'")
        try:
            codon = normalize_codon(parts[0])
        except InvalidCodonError:
            raise UsageError(f"line {lineno}: unknown codon {parts[0]!r}") from None
        try:
            freq[codon] = float(parts[1])
        except ValueError:
            raise UsageError(f"line {lineno}: bad frequency {parts[1]!r}") from None
    return CodonUsage(freq)


def load_usage(path):
    return usage_from_tsv(Path(path).read_text())
