"""riskforge: explainable tabular risk prediction toolkit."""

__version__ = "0.1.0"

from .schema import FeatureSchema, FeatureSpec
from .dataset import Dataset, SplitPair, impute, load_csv, stratified_split, write_csv
from .encoding import EncodedMatrix, LinearEncoder, encode_for_linear, encode_for_trees

__all__ = [
    "__version__",
    "FeatureSchema",
    "FeatureSpec",
    "Dataset",
    "SplitPair",
    "load_csv",
    "write_csv",
    "impute",
    "stratified_split",
    "EncodedMatrix",
    "LinearEncoder",
    "encode_for_trees",
    "encode_for_linear",
]
