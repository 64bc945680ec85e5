"""Crystal-basis model of codon point mutations."""

__version__ = "0.1.0"

from .aggregation import AminoAcidMatrix, CodonUsage, aggregate, mutability, pair_rate
from .crystal import IrrepLabel, Sign, TensorWord, Weight, decompose, lowering, raising
from .distance import ModelParams, distance, r_value
from .estimator import CrystalMutationModel, InequalitySearch
from .fit import FitConfig, FitResult, search
from .predictions import check_eq15, evaluate_claims, load_dataset
from .rates import CodonMatrix, Constant, Exponential, PowerLaw, build_generator, evolve, pam_matrix
from .tables import AMINO_ACIDS, SENSE_CODONS, ChargeSource, codon_record, multiplet, translate

__all__ = [
    "AMINO_ACIDS",
    "SENSE_CODONS",
    "AminoAcidMatrix",
    "ChargeSource",
    "CodonMatrix",
    "CodonUsage",
    "Constant",
    "CrystalMutationModel",
    "Exponential",
    "FitConfig",
    "FitResult",
    "InequalitySearch",
    "IrrepLabel",
    "ModelParams",
    "PowerLaw",
    "Sign",
    "TensorWord",
    "Weight",
    "aggregate",
    "build_generator",
    "check_eq15",
    "codon_record",
    "decompose",
    "distance",
    "evaluate_claims",
    "evolve",
    "load_dataset",
    "lowering",
    "multiplet",
    "mutability",
    "pair_rate",
    "pam_matrix",
    "r_value",
    "raising",
    "search",
    "translate",
]
