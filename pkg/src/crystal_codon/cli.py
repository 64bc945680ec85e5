"""``cct`` command-line interface.

Exit status is 0 on success, 1 on domain errors (bad codon, unnormalized
usage, malformed files, infeasible search) and 2 on usage errors.  Errors
are reported on one line as ``error: <category>: <detail>``.
"""

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, datasets
from .aggregation import CodonUsage, UsageError, aggregate
from .crystal import TensorWord, decompose
from .crystal import format_half as half
from .distance import ModelParams, distance, r_value
from .fit import FitConfig, NoFeasiblePointError, search
from .formats import (
    FormatError,
    aa_matrix_to_csv,
    load_matrix,
    load_usage,
    matrix_to_csv,
    matrix_to_json,
)
from .predictions import DEFAULT_SLACK, evaluate_claims, load_dataset
from .rates import build_generator, evolve, pam_matrix, parse_strength
from .tables import (
    ALL_CODONS,
    ONE_LETTER,
    ChargeSource,
    InvalidCodonError,
    charge,
    charge_formula,
    codon_record,
    dimer,
    dimers,
    translate,
)

CODON_COLUMNS = ("codon", "amino_acid", "letter", "j_h", "j_v", "copy", "j3_h", "j3_v")


class CliError(Exception):
    def __init__(self, category, detail):
        super().__init__(detail)
        self.category = category


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"error: usage: {message}\n")


def _number(text):
    """Exact rational from a decimal or fraction string."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _fmt(x, digits=None):
    if isinstance(x, Fraction) and x.denominator == 1 and digits is None:
        return str(x.numerator)
    x = float(x)
    if digits is not None:
        x = round(x, digits)
    if x.is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


def _emit(args, text, doc):
    """Write ``doc`` as JSON when ``--json`` was given, else ``text``."""
    if args.json is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    payload = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.json == "-":
        sys.stdout.write(payload)
    else:
        Path(args.json).write_text(payload)


def _params(args):
    try:
        return ModelParams(
            args.alpha, args.beta, args.gamma, args.eta, ChargeSource(args.charge_source), args.strict_eta
        )
    except ValueError as exc:
        raise CliError("param", str(exc)) from None


def _strength(args):
    try:
        return parse_strength(args.strength)
    except ValueError as exc:
        raise CliError("param", str(exc)) from None


def _codon_table_tsv():
    derived = decompose(3)
    lines = ["\t".join(CODON_COLUMNS)]
    for c in ALL_CODONS:
        irrep, weight = derived[TensorWord.from_letters(c)]
        aa = translate(c)
        letter = "*" if aa == "Stop" else ONE_LETTER[aa]
        lines.append(
            "\t".join(
                [c, aa, letter, half(irrep.j_h), half(irrep.j_v), str(irrep.copy), half(weight.j3_h), half(weight.j3_v)]
            )
        )
    return "\n".join(lines) + "\n"


def cmd_tables(args):
    if args.table == "codons":
        text = _codon_table_tsv()
        doc = [
            dict(zip(CODON_COLUMNS, line.split("\t"))) for line in text.splitlines()[1:]
        ]
        return _emit(args, text, doc)
    rows = []
    lines = []
    header = ["dimer", "j_h", "j_v", "j3_h", "j3_v", "charge"]
    if args.check:
        header += ["charge_formula", "agree"]
    lines.append("\t".join(header))
    mismatches = []
    for d in dimers():
        row = {
            "dimer": d.letters,
            "j_h": half(d.j_h),
            "j_v": half(d.j_v),
            "j3_h": half(d.j3_h),
            "j3_v": half(d.j3_v),
            "charge": d.charge_table,
        }
        if args.check:
            f = charge_formula(d)
            row["charge_formula"] = f
            row["agree"] = f == d.charge_table
            if f != d.charge_table:
                mismatches.append(d)
        rows.append(row)
        lines.append("\t".join("yes" if v is True else "no" if v is False else str(v) for v in row.values()))
    doc = {"dimers": rows}
    if args.check:
        agree = len(rows) - len(mismatches)
        detail = ", ".join(f"{d.letters} (formula {charge_formula(d)}, table {d.charge_table})" for d in mismatches)
        lines.append(f"# {agree}/{len(rows)} charges agree; mismatches: {detail or 'none'}")
        doc["agree"] = agree
        doc["mismatches"] = [
            {"dimer": d.letters, "formula": charge_formula(d), "table": d.charge_table} for d in mismatches
        ]
    _emit(args, "\n".join(lines), doc)


def cmd_irrep(args):
    rec = codon_record(args.codon)
    text = f"{rec.irrep} J3H={half(rec.weight.j3_h)} J3V={half(rec.weight.j3_v)} {rec.amino_acid}"
    doc = {
        "codon": rec.codon,
        "amino_acid": rec.amino_acid,
        "j_h": half(rec.irrep.j_h),
        "j_v": half(rec.irrep.j_v),
        "copy": rec.irrep.copy,
        "j3_h": half(rec.weight.j3_h),
        "j3_v": half(rec.weight.j3_v),
    }
    _emit(args, text, doc)


def cmd_charge(args):
    d = dimer(args.dimer)
    value = charge(d, args.source)
    _emit(args, str(value), {"dimer": d.letters, "source": args.source, "charge": value})


def cmd_r(args):
    p = _params(args)
    value = r_value(args.codon, p)
    _emit(args, _fmt(value, args.round), {"codon": args.codon.upper(), "r": float(value), "params": p.to_dict()})


def cmd_dist(args):
    if len(args.codons) < 2:
        raise CliError("usage", "dist needs at least two codons")
    p = _params(args)
    pairs = list(zip(args.codons, args.codons[1:]))
    values = [distance(a, b, p) for a, b in pairs]
    text = "\n".join(_fmt(v, args.round) for v in values)
    doc = {
        "params": p.to_dict(),
        "distances": [{"from": a.upper(), "to": b.upper(), "d": float(v)} for (a, b), v in zip(pairs, values)],
    }
    _emit(args, text, doc)


def _write(args, text):
    target = args.output or (args.json if args.json not in (None, "-") else None)
    if target:
        Path(target).write_text(text)
    else:
        sys.stdout.write(text)


def _write_matrix(args, m):
    _write(args, matrix_to_json(m) if args.json is not None else matrix_to_csv(m))


def cmd_matrix(args):
    q = build_generator(_params(args), _strength(args))
    if args.kind == "pam":
        q = pam_matrix(q)
    elif args.kind == "evolution":
        q = evolve(q, float(args.time))
    _write_matrix(args, q)


def cmd_expm(args):
    q = load_matrix(args.matrix)
    if args.time < 0:
        raise CliError("param", "time must be nonnegative")
    try:
        p = evolve(q, float(args.time))
    except ValueError as exc:
        raise CliError("matrix", str(exc)) from None
    _write_matrix(args, p)


def cmd_aggregate(args):
    m = aggregate(load_matrix(args.matrix), _usage(args) or CodonUsage.uniform())
    if args.json is not None:
        doc = {"labels": list(m.labels), "entries": m.entries.tolist(), "metadata": m.metadata}
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        text = aa_matrix_to_csv(m)
    _write(args, text)


def _usage(args):
    if not getattr(args, "usage", None):
        return None
    return load_usage(args.usage)


def cmd_predict(args):
    rep = evaluate_claims(_params(args), _strength(args), _usage(args), load_dataset(args.data), args.slack)
    if args.json is None:
        sys.stdout.write(rep.to_text())
    elif args.json == "-":
        sys.stdout.write(rep.to_json())
    else:
        Path(args.json).write_text(rep.to_json())


def cmd_fit(args):
    try:
        cfg = FitConfig(
            seeds=args.seeds,
            iterations=args.iters,
            objective=args.objective,
            eta_min=float(args.eta_min),
            require_eq15=args.require_eq15,
            rng_seed=args.seed,
            strength=_strength(args),
            usage=_usage(args),
            charge_source=ChargeSource(args.charge_source),
        )
    except ValueError as exc:
        raise CliError("param", str(exc)) from None
    try:
        res = search(cfg, load_dataset(args.data))
    except NoFeasiblePointError as exc:
        raise CliError("infeasible", str(exc)) from None
    p = res.params
    text = (
        f"alpha={p.alpha!r} beta={p.beta!r} gamma={p.gamma!r} eta={p.eta!r}\n"
        f"satisfied {res.satisfied}/{res.total}  soft margin {res.soft_margin!r}\n"
        f"eq15 {'ok' if res.eq15[0] else 'violated'}  evaluations {res.evaluations}\n"
        f"violated: {' '.join(res.violated) or 'none'}\n"
    )
    if args.json is None:
        sys.stdout.write(text)
    elif args.json == "-":
        sys.stdout.write(res.to_json())
    else:
        Path(args.json).write_text(res.to_json())
        sys.stdout.write(text)


def _add_params(p):
    p.add_argument("--alpha", type=_number, default=Fraction(1))
    p.add_argument("--beta", type=_number, default=Fraction(1))
    p.add_argument("--gamma", type=_number, default=Fraction(1))
    p.add_argument("--eta", type=_number, default=Fraction(2))
    p.add_argument("--charge-source", choices=[s.value for s in ChargeSource], default="table")
    p.add_argument("--strict-eta", action="store_true", help="require eta > 2")


def _add_common(p):
    p.add_argument("--json", nargs="?", const="-", default=None, metavar="PATH",
                   help="JSON output, to PATH or stdout")
    p.add_argument("--round", type=int, default=None, metavar="N", help="round numbers to N decimals")


def build_parser():
    parser = _Parser(prog="cct", description="Crystal-basis codon mutation model.")
    parser.add_argument("--version", action="version", version=f"cct {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("tables", help="print the codon or dimer table as TSV")
    p.add_argument("table", choices=["codons", "dimers"])
    p.add_argument("--check", action="store_true", help="compare dimer charges with the closed form")
    _add_common(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("irrep", help="irrep, weights and amino acid of a codon")
    p.add_argument("codon")
    _add_common(p)
    p.set_defaults(func=cmd_irrep)

    p = sub.add_parser("charge", help="charge of a dinucleotide")
    p.add_argument("dimer")
    p.add_argument("--source", choices=[s.value for s in ChargeSource], default="table")
    _add_common(p)
    p.set_defaults(func=cmd_charge)

    p = sub.add_parser("r", help="codon eigenvalue")
    p.add_argument("codon")
    _add_params(p)
    _add_common(p)
    p.set_defaults(func=cmd_r)

    p = sub.add_parser("dist", help="distances between consecutive codons")
    p.add_argument("codons", nargs="+")
    _add_params(p)
    _add_common(p)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("matrix", help="codon generator (or PAM / evolution matrix) as CSV")
    _add_params(p)
    p.add_argument("--strength", default="exp:lambda=0.01")
    p.add_argument("--kind", choices=["generator", "pam", "evolution"], default="generator")
    p.add_argument("--time", type=float, default=1.0, help="time for --kind evolution")
    p.add_argument("-o", "--output")
    _add_common(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("expm", help="exponentiate a generator CSV")
    p.add_argument("matrix")
    p.add_argument("--time", type=float, default=1.0)
    p.add_argument("-o", "--output")
    _add_common(p)
    p.set_defaults(func=cmd_expm)

    p = sub.add_parser("aggregate", help="20x20 amino-acid matrix from a codon matrix CSV")
    p.add_argument("matrix")
    p.add_argument("--usage")
    p.add_argument("-o", "--output")
    _add_common(p)
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("predict", help="evaluate the rate inequalities and stability hierarchy")
    _add_params(p)
    p.add_argument("--strength", default="exp:lambda=0.01")
    p.add_argument("--usage")
    p.add_argument("--data", help="dataset directory (default: $CCT_DATA_DIR or bundled)")
    p.add_argument("--slack", type=float, default=DEFAULT_SLACK)
    _add_common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("fit", help="multi-start parameter search")
    p.add_argument("--seeds", type=int, default=8)
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--objective", choices=["margin", "count"], default="margin")
    p.add_argument("--eta-min", type=float, default=1.0)
    p.add_argument("--require-eq15", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strength", default="exp:lambda=0.01")
    p.add_argument("--charge-source", choices=[s.value for s in ChargeSource], default="table")
    p.add_argument("--usage")
    p.add_argument("--data")
    _add_common(p)
    p.set_defaults(func=cmd_fit)
    return parser


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except CliError as exc:
        return _fail(exc.category, exc, 2 if exc.category == "usage" else 1)
    except InvalidCodonError as exc:
        return _fail("codon", exc)
    except UsageError as exc:
        return _fail("usage-file", exc)
    except FormatError as exc:
        return _fail(exc.category, exc)
    except datasets.DatasetError as exc:
        return _fail("dataset", exc)
    except FileNotFoundError as exc:
        return _fail("file", f"{exc.filename}: not found")
    return 0


def _fail(category, exc, status=1):
    detail = " ".join(str(exc).split())
    sys.stderr.write(f"error: {category}: {detail}\n")
    return status


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
