"""
Numeric layer: symmetric matrices, symmetric functions, derivation operator
"""
from .matrix import (
    EigenDecomposition,
    IndexSet,
    OrthogonalMatrix,
    SymMatrix,
    border_reduce,
    conjugate,
    deleted,
    eigen,
    principal_submatrix,
    zero_border,
)
from .symfunc import (
    Spectrum,
    SymFunctionTable,
    diag_esp,
    esp_newton,
    esp_table,
    minor_sum,
    sk_charpoly,
    sk_matrix,
    sk_partial,
)
from .derivation import DerivationMatrix, PIndex, derivation_matrix, lambda_brackets, lex_rank, lex_unrank

__all__ = [
    "EigenDecomposition",
    "IndexSet",
    "OrthogonalMatrix",
    "SymMatrix",
    "border_reduce",
    "conjugate",
    "deleted",
    "eigen",
    "principal_submatrix",
    "zero_border",
    "Spectrum",
    "SymFunctionTable",
    "diag_esp",
    "esp_newton",
    "esp_table",
    "minor_sum",
    "sk_charpoly",
    "sk_matrix",
    "sk_partial",
    "DerivationMatrix",
    "PIndex",
    "derivation_matrix",
    "lambda_brackets",
    "lex_rank",
    "lex_unrank",
]
