"""monograde: exact computation in monoid-graded commutative algebras.

Gradings live in a pluggable commutative monoid with a parity function;
algebra elements are truncated normal-form sums of polynomial coefficients
times generator words; morphisms between graded coordinate domains are
determined by coordinate images; derivations extend coordinate values by
the graded Leibniz rule.  Everything is exact over the rationals.
"""

from .basecoeff import BasePoly
from .calculus import (Derivation, DescentSequence, NotQClosed, bracket,
                       check_descent, check_exact, check_lie_axioms,
                       k_sequence, qk_verify)
from .expr import ExprError, parse_element, parse_poly, render_element, render_poly
from .galgebra import (AlgebraError, GeneratorSpec, GradedElement,
                       NotInvertible)
from .grading import (CyclicProduct, FiniteTable, GradingError, GradingSpec,
                      IntPower, KGroupElement, NatPower, Z2Power,
                      all_cancellative_tables, check_cancellative,
                      check_parity_cardinality, element_order, k_add, k_element,
                      k_embed, k_eq, k_mul, k_normalize, k_parity,
                      parity_functions_of_table, parity_of)
from .morphism import (Atlas, DomainSpec, Morphism, MorphismError,
                       check_cocycle, check_homomorphism, compose,
                       continuation, split_model, underlying_map)
from .reporting import CheckReport

__all__ = [
    "AlgebraError", "Atlas", "BasePoly", "CheckReport", "CyclicProduct",
    "Derivation", "DescentSequence", "DomainSpec", "ExprError", "FiniteTable",
    "GeneratorSpec", "GradedElement", "GradingError", "GradingSpec",
    "IntPower", "KGroupElement", "Morphism", "MorphismError", "NatPower",
    "NotInvertible", "NotQClosed", "Z2Power", "all_cancellative_tables",
    "bracket", "check_cancellative", "check_cocycle", "check_descent",
    "check_exact", "check_homomorphism", "check_lie_axioms",
    "check_parity_cardinality", "compose", "continuation", "element_order",
    "k_add", "k_element", "k_embed", "k_eq", "k_mul", "k_normalize",
    "k_parity", "k_sequence", "parity_functions_of_table", "parity_of",
    "parse_element", "parse_poly", "qk_verify", "render_element",
    "render_poly", "split_model", "underlying_map",
]

__version__ = "0.1.0"
