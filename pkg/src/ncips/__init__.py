"""Toolkit for non-commutative polynomial proof certificates.

Pipeline: CNFs translate into non-commutative polynomial axioms;
tree-like formula-calculus refutations compile into single-formula
certificates; certificates are checked deterministically by a
branching-program identity test whose linear-algebra witnesses can be
extracted and re-verified.
"""

from .fields import (
    Field,
    FieldMismatchError,
    GF2_FIELD,
    QQ,
    parse_field_spec,
    prime_field,
)
from .poly import DEFAULT_TERM_CAP, NcPoly, TermBudgetError, Word
from .linalg import (
    FieldMatrix,
    LinForm,
    LinFormMatrix,
    NotInSpanError,
    express_in_basis,
    row_space_basis,
)
from .formula import (
    Const,
    Formula,
    FormulaParseError,
    InducedPart,
    Metrics,
    Plus,
    Times,
    Var,
    apply_induced_part,
    evaluate,
    expand,
    fold_zero_one,
    format_formula,
    induced_part,
    is_syntactically_homogeneous,
    metrics,
    parse_formula,
    substitute_var,
    syntactic_homogeneous_degree,
    variables,
)
from .transform import (
    BALANCE_DEPTH_FACTOR,
    DECOMPOSE_DEPTH_FACTOR,
    UnbalancedFormulaError,
    balance,
    decompose,
    homogeneous_parts,
    is_balanced,
    monotone_family_size,
    monotone_nonincreasing_maps,
    product_depth,
)
from .abp import (
    Abp,
    abp_expand,
    abp_to_dot,
    abp_to_json,
    formula_to_abp,
    level_matrices,
    split_degree_components,
)
from .pit import (
    NotHomogeneousError,
    NotIdenticallyZeroError,
    Witness,
    extract_witnesses,
    is_identically_zero,
    nonzero_witness,
    verify_witnesses,
    witness_from_json,
    witness_to_json,
)
from .proofsys import (
    AdditionStep,
    AxiomSystem,
    BooleanAxiomRef,
    CheckReport,
    Cnf,
    FpcProof,
    InputRef,
    IpsCertificate,
    ProductStep,
    ProofLine,
    RewriteStep,
    boolean_axiom_formula,
    build_axiom_system,
    certificate_from_json,
    certificate_to_json,
    check_fpc,
    commutator_axiom_formula,
    commutator_certificate,
    fpc_to_ips,
    format_dimacs,
    parse_dimacs,
    proof_from_json,
    proof_to_json,
    rewrite_delta,
    standalone_commutator_ymap,
    translate_clause,
    translate_cnf,
    translate_tr,
    verify_ips,
)

__version__ = "0.1.0"
