"""Exact symbolic verification of odd Jacobi geometry on graded charts."""

__version__ = "0.1.0"

from .core import (
    Chart,
    ChartError,
    EngineError,
    Generator,
    GeneratorError,
    Kind,
    Monomial,
    Parity,
    ParityError,
    Poly,
    Provenance,
    ShapeError,
    WeightError,
    left_derivative,
    make_chart,
    multiply,
    parity_of,
    random_poly,
    substitute,
    weight_of,
)
from .phase import (
    VectorField,
    anticotangent_chart,
    apply,
    canonical_symplectic_form,
    commutator,
    cotangent_chart,
    de_rham,
    de_rham_field,
    euler_field,
    field_weight,
    interior_product,
    poisson,
    symbol,
    unsymbol,
)
from .jacobi import (
    ConditionResult,
    OddJacobiStructure,
    VerificationReport,
    check_derivation_and_morphism,
    check_q_closed_hamiltonian,
    check_theorem_odd_jacobi_algebra,
    hamiltonian_vf,
    is_jacobi_vf,
    odd_jacobi_bracket,
    odd_jacobi_structure,
    random_function,
    verify_odd_jacobi,
)
from .constructions import (
    ExactQSData,
    QSData,
    QuasiQData,
    exact_qs_to_jacobi,
    homological_plus_cocycle_to_quasiq,
    quasiq_to_homological,
    schoutenize,
    verify_exact_qs,
    verify_qs,
    verify_quasi_q,
)
from .algebroid import (
    AlgebroidData,
    algebroid_data,
    algebroid_from_json,
    build_jacobi_algebroid,
    contact_check,
    extend_lie_to_jacobi,
    extract_quasiq,
    lie_algebroid_from_jacobi,
    odd_contact_structure,
    r_pullback,
    schoutenize_algebroid,
    section_report,
    verify_symplectomorphism,
)
from .dsl import DslError, Model, parse, render_model
from .catalog import catalog, catalog_names, catalog_source
