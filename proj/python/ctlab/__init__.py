"""Causal team semantics from Python: load teams, intervene, check formulas,
decide entailment and check derivations."""

from ._ctlab import (
    BudgetExceeded,
    Error,
    InvalidArgument,
    ParseError,
    Signature,
    SignatureMismatch,
    Team,
    check_proof,
    chi_k,
    classify,
    entails,
    fuzz_rule,
    leadsto,
    make_signature,
    normalize_formula,
    rule_names,
    uniformity,
    xi,
)

__all__ = [
    "BudgetExceeded",
    "Error",
    "InvalidArgument",
    "ParseError",
    "Signature",
    "SignatureMismatch",
    "Team",
    "check_proof",
    "chi_k",
    "classify",
    "entails",
    "fuzz_rule",
    "leadsto",
    "make_signature",
    "normalize_formula",
    "rule_names",
    "uniformity",
    "xi",
]
