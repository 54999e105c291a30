//! Exact computational algebra for graded representations of finite
//! dimensional algebras: coefficient-ring tower, graded characters and
//! fingerprints, specialization maps and graded decomposition matrices.

pub mod algebra;
pub mod character;
pub mod decomp;
pub mod error;
pub mod fixtures;
mod idempotent;
pub mod laurent;
pub mod linalg;
pub mod rep;
pub mod ring;
pub mod session;
pub mod simples;
pub mod specialize;

pub use algebra::{AlgebraRef, GradedAlgebra, ValidationReport, Violation};
pub use character::{
    fingerprint, fingerprint_equal, graded_character, solve_multiplicities, Fingerprint,
    GradedCharacter, DEFAULT_FINGERPRINT_DEPTH,
};
pub use decomp::{
    check_factorization, decompose_module, decomposition_matrix, factorization_check,
    verify_diagram, verify_diagram_against, Factorization, GradedDecompMatrix,
    GRADING_CONVENTION,
};
pub use error::{Error, Result};
pub use fixtures::{fixture, fixture_session, FIXTURE_NAMES};
pub use laurent::LaurentPoly;
pub use linalg::Matrix;
pub use rep::{GradedClass, GradedModuleRep, UngradedModuleRep};
pub use ring::{parse_scalar, parse_structure_scalar, Ring, RingDescriptor, Scalar};
pub use session::{
    emit_session, export_algebra, export_module, parse_session, parse_session_str,
    validate_session, AlgebraSection, ModuleSection, ProductRule, SessionFile,
    SpecializationSection, TowerSection, ValidatedSession,
};
pub use simples::{
    check_split, composition_factors, grade_simple, graded_multiplicities, radical,
    simple_modules, SimpleSet, DEFAULT_DIMENSION_BOUND,
};
pub use specialize::{
    check_integrality, clear_denominators, make_specialization, make_tower, modular_reduce,
    specialize_algebra, transport_character, transport_fingerprint, Specialization,
    SpecializationTower,
};
