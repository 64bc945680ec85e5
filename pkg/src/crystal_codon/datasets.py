"""Bundled TSV tables and their SHA-256 manifest."""

import csv
import hashlib
import io
import os
from functools import lru_cache
from importlib import resources
from pathlib import Path

MANIFEST = "MANIFEST.sha256"
DATA_ENV = "CCT_DATA_DIR"

CODON_TABLE = "codon_table.tsv"
DIMER_TABLE = "dimer_table.tsv"
PAIR_RATES = "pet91_pair_rates.tsv"
MUTABILITY = "relative_mutability.tsv"
DOUBLET_RATES = "doublet_rates.tsv"

BUNDLE_FILES = (CODON_TABLE, DIMER_TABLE, PAIR_RATES, MUTABILITY, DOUBLET_RATES)


class DatasetError(Exception):
    """A data file is missing, malformed or fails its checksum."""


def bundled_dir():
    return Path(resources.files("crystal_codon") / "data")


def data_dir(override=None):
    """Directory holding the experimental dataset.

    ``override`` wins over the ``CCT_DATA_DIR`` environment variable, which
    wins over the copy shipped with the package.
    """
    if override is not None:
        return Path(override)
    env = os.environ.get(DATA_ENV)
    if env:
        return Path(env)
    return bundled_dir()


def sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(directory, names=BUNDLE_FILES):
    directory = Path(directory)
    lines = [f"{sha256(directory / name)}  {name}\n" for name in names]
    (directory / MANIFEST).write_text("".join(lines))


def read_manifest(directory):
    entries = {}
    for line in (Path(directory) / MANIFEST).read_text().splitlines():
        if not line.strip():
            continue
        digest, name = line.split(None, 1)
        entries[name.strip()] = digest
    return entries


def verify_manifest(directory, names=None):
    """Check files in ``directory`` against its manifest.

    Returns the list of verified names.  A directory without a manifest is
    accepted only when it is not the bundled one.
    """
    directory = Path(directory)
    if not (directory / MANIFEST).exists():
        if directory.resolve() == bundled_dir().resolve():
            raise DatasetError(f"bundled data is missing {MANIFEST}")
        return []
    entries = read_manifest(directory)
    checked = []
    for name in names or entries:
        if name not in entries:
            raise DatasetError(f"{name} is not listed in {directory / MANIFEST}")
        path = directory / name
        if not path.exists():
            raise DatasetError(f"missing data file {path}")
        if sha256(path) != entries[name]:
            raise DatasetError(f"checksum mismatch for {path}")
        checked.append(name)
    return checked


def parse_tsv(text):
    """Parse a headed TSV with ``#`` comment lines into a list of dicts."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines)), delimiter="\t"))


def read_table(name, directory=None, verify=True):
    directory = bundled_dir() if directory is None else Path(directory)
    if verify:
        verify_manifest(directory, [name])
    path = directory / name
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise DatasetError(f"missing data file {path}") from None
    return parse_tsv(text)


@lru_cache(maxsize=None)
def bundled_text(name):
    return (bundled_dir() / name).read_text()


@lru_cache(maxsize=None)
def bundled_table(name):
    verify_manifest(bundled_dir(), [name])
    return tuple(parse_tsv(bundled_text(name)))
