//! Exact computations with LDB division algebras: coefficient fields, linear
//! algebra, quadratic forms, Clifford algebras, canonical constructions,
//! standardization, classification and twisted operator spaces.

pub mod algebra;
pub mod clifford;
pub mod field;
pub mod forms;
pub mod linalg;
pub mod policy;
pub mod twisted;

pub use field::{Field, FieldElement, FieldError, Scalar};
pub use forms::QuadraticForm;
pub use linalg::{Matrix, Vector};
pub use policy::Policy;
