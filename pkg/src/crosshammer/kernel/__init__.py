"""Terms, syntax and normal forms."""
from .normal import (
    CompiledClauses,
    compile_clauses,
    CanonicalKey,
    Literal,
    NotAFormulaError,
    canonical_key,
    eval_cnf,
    key_of_clauses,
    strip_forall,
    to_cnf,
)
from .syntax import (
    Signature,
    TermSyntaxError,
    UnknownConstantError,
    parse_formula,
    parse_term,
    parse_type,
    print_term,
    print_type,
    well_typed,
)
from .terms import (
    BOOL,
    FALSE,
    LOGICAL_CONSTS,
    LOGICAL_NAMES,
    LOGICAL_TYCONS,
    TRUE,
    Abs,
    App,
    Const,
    ConstMapError,
    KernelError,
    Term,
    Ty,
    TyApp,
    TypeMismatchError,
    TyVar,
    Var,
    aconv,
    alpha_normalize,
    apply_const_map,
    beta_norm,
    consts_of,
    free_vars,
    fun,
    fun_arity,
    fun_n,
    invert_map,
    is_logical,
    mk_app,
    mk_binop,
    mk_eq,
    mk_exists,
    mk_forall,
    mk_neg,
    names_of,
    strip_comb,
    subst,
    subterm_strings,
    subterms,
    term_tycons,
    type_of,
)
