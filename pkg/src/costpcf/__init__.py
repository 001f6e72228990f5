"""costpcf: a call-by-push-value PCF with an explicit cost effect.

Programs are classified by a polarized type system, executed by a
cost-counting abstract machine, and interpreted into a delay/cost monad;
the harness checks that the two semantics agree.
"""

from .cost import (
    DEFAULT_MODEL,
    NAT_MONOID,
    STAR,
    CostModel,
    CostMonoid,
    Phase,
    get_monoid,
    monoid_instances,
    vector_monoid,
)
# NB: the interpretation function itself stays module-qualified
# (costpcf.denote.denote) so the submodule name is not shadowed.
from .denote import (
    Done,
    Later,
    bindT,
    bottom,
    charge,
    denote_closed,
    eta,
    ground_json,
    observe,
)
from .machine import Defined, Exhausted, Mismatch, eval_term, out, profile, run, trace
from .syntax import (
    ANS,
    NAT,
    TRIV,
    UNIT,
    YES,
    ZERO,
    Ans,
    Ap,
    Arrow,
    Bind,
    F,
    Fix,
    Ifz,
    Lam,
    Nat,
    No,
    ParseError,
    Ret,
    Step,
    Succ,
    Triv,
    U,
    Unit,
    Var,
    Yes,
    Zero,
    numeral,
    parse,
    parse_comp_type,
    print_comp_type,
    print_term,
    print_value_type,
    shift,
    subst,
)
from .typecheck import TypeCheckError, check_program, infer, show_type

__version__ = "0.1.0"

__all__ = [
    "ANS",
    "DEFAULT_MODEL",
    "NAT",
    "NAT_MONOID",
    "STAR",
    "TRIV",
    "UNIT",
    "YES",
    "ZERO",
    "Ans",
    "Ap",
    "Arrow",
    "Bind",
    "CostModel",
    "CostMonoid",
    "Defined",
    "Done",
    "Exhausted",
    "F",
    "Fix",
    "Ifz",
    "Lam",
    "Later",
    "Mismatch",
    "Nat",
    "No",
    "ParseError",
    "Phase",
    "Ret",
    "Step",
    "Succ",
    "Triv",
    "TypeCheckError",
    "U",
    "Unit",
    "Var",
    "Yes",
    "Zero",
    "bindT",
    "bottom",
    "charge",
    "check_program",
    "denote_closed",
    "eta",
    "eval_term",
    "get_monoid",
    "ground_json",
    "infer",
    "monoid_instances",
    "numeral",
    "observe",
    "out",
    "parse",
    "parse_comp_type",
    "print_comp_type",
    "print_term",
    "print_value_type",
    "profile",
    "run",
    "shift",
    "show_type",
    "subst",
    "trace",
    "vector_monoid",
]
