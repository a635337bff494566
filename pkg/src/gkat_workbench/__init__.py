"""Model-checking workbench for graded Kleene algebras with tests.

Finite algebras are explicit operation tables; procedural algebras are
operation functions checked by seeded sampling.  On top of either sit the
law suites (graded, idempotent, Boolean-test), Hoare-triple encodings and
proof-rule schemas, guard-commutation conditions, loop denesting, and the
derived set/relation/language/matrix algebras.
"""

from .algebra import (
    Algebra,
    AlgebraError,
    ClosureError,
    DivergenceError,
    DomainError,
    FiniteAlgebra,
    ProceduralAlgebra,
    SizeError,
    SortError,
    derived_leq,
    star_lfp,
)
from .algfile import AlgFileError, dump_algebra, load_algebra, loads_algebra
from .constructions import (
    flang_algebra,
    frel_algebra,
    frel_compose,
    frel_star,
    fset_algebra,
    mat_algebra,
    mat_star,
    mat_star_iter,
)
from .hoare import (
    ANNIHILATION_BRIDGE,
    RULES,
    CommutationReport,
    DenestReport,
    HoareTriple,
    PreconditionError,
    RuleSchema,
    StaleReportError,
    check_demorgan,
    check_rule,
    commutation_conditions,
    denesting_equivalence,
    rule_schema,
    triple_forms_equivalent,
    triple_to_equation,
)
from .instances import STANDARD_FINITE, make_builtin, parse_instance_spec
from .laws import (
    SUITES,
    Classification,
    Law,
    LawReport,
    check_law,
    classify,
    run_law_suite,
)
from .semantics import (
    Auto,
    Equation,
    Exhaustive,
    Sampled,
    Verdict,
    check_equation,
    check_quasi_equation,
    eval_term,
)
from .terms import (
    ParseError,
    Sort,
    Term,
    Var,
    desugar,
    free_vars,
    parse_program,
    parse_term,
    pretty,
)

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "AlgebraError",
    "AlgFileError",
    "ANNIHILATION_BRIDGE",
    "Auto",
    "Classification",
    "ClosureError",
    "CommutationReport",
    "DenestReport",
    "DivergenceError",
    "DomainError",
    "Equation",
    "Exhaustive",
    "FiniteAlgebra",
    "HoareTriple",
    "Law",
    "LawReport",
    "ParseError",
    "PreconditionError",
    "ProceduralAlgebra",
    "RULES",
    "RuleSchema",
    "Sampled",
    "SizeError",
    "Sort",
    "SortError",
    "StaleReportError",
    "STANDARD_FINITE",
    "SUITES",
    "Term",
    "Var",
    "Verdict",
    "check_demorgan",
    "check_equation",
    "check_law",
    "check_quasi_equation",
    "check_rule",
    "classify",
    "commutation_conditions",
    "denesting_equivalence",
    "derived_leq",
    "desugar",
    "dump_algebra",
    "eval_term",
    "flang_algebra",
    "free_vars",
    "frel_algebra",
    "frel_compose",
    "frel_star",
    "fset_algebra",
    "load_algebra",
    "loads_algebra",
    "make_builtin",
    "mat_algebra",
    "mat_star",
    "mat_star_iter",
    "parse_instance_spec",
    "parse_program",
    "parse_term",
    "pretty",
    "rule_schema",
    "run_law_suite",
    "star_lfp",
    "triple_forms_equivalent",
    "triple_to_equation",
]
