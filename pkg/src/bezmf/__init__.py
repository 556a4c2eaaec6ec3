"""bezmf: elementary matrix factorizations over Bezout domains.

Exact arithmetic on divisor lattices in factored form, Hom modules and
isomorphism decisions for elementary factorizations, Krull-Schmidt
normal forms with Smith-normal-form certificates over the integers,
class counting cross-validated by a brute-force census, and a finite
toolkit for divisibility groups and spectral trees.
"""

from .divisors import (
    FactoredElement,
    NormalizedDivisor,
    Potential,
    factor_integer,
    gcd,
    gcd_many,
    index_set,
    is_critical_divisor,
    is_prime,
    lcm,
    lcm_many,
    parse_element,
    parse_potential,
    reduction,
    validate_potential,
)
from .errors import BezmfError
from .factorizations import (
    ElementaryFactorization,
    GradedMorphismMatrix,
    MatrixFactorization,
    SmithDecomposition,
    TwoStepFactorization,
    differential,
    direct_sum,
    elementary,
    identity_morphism,
    is_zero_object,
    mf_validate,
    morphism_compose,
    opposite_transpose,
    similar,
    smith_decompose,
    support,
    suspension,
    two_step,
    two_step_support,
)
from .homology import (
    GcdDecomposition,
    HomModuleDescription,
    IsoWitness,
    MorphismClass,
    alpha,
    compose,
    end_ring_presentation,
    gcd_decomposition,
    hom_module,
    identity_class,
    iso_witness,
    morphism,
    solve_bezout_linear,
)
from .invariants import (
    DivisorialInvariant,
    EvenDivisorialInvariant,
    InvariantData,
    essence,
    essential_reduction,
    h,
    h_even,
    invariant,
    iso_even,
    iso_graded,
    iso_odd,
    reconstruct_s,
)
from .classify import (
    ClassCensus,
    KrullSchmidtForm,
    LiteralDiagnostic,
    PrimaryPart,
    count_classes,
    count_classes_literal,
    count_essential,
    enumerate_classes,
    grading_split,
    normal_form,
    primary_decompose,
)
from .divgroups import (
    FinitePoset,
    LatticeGroupElement,
    TreeReport,
    analyze_poset,
    check_principal_filter_prime,
    in_fx,
    in_up_one,
    is_positive,
    is_prime_principal_filter,
    minsupp,
    poset,
    vec_inf,
    vec_is_positive,
    vec_sup,
)

__version__ = "0.1.0"
