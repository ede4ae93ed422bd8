//! Exact arithmetic in truncated Grassmann algebras and the Z2-gradings
//! induced by their order-2 automorphisms.
//!
//! Everything is generic over an exact [`Scalar`]; the `Q*` aliases fix it
//! to arbitrary-precision rationals.

pub mod constructors;
mod error;
pub mod exterior;
pub mod grading;
pub mod identities;
pub mod isomorphism;
pub mod linalg;
pub mod linmap;
mod scalar;

pub use constructors::HomogeneousModel;
pub use error::{Error, Result};
pub use exterior::{Element, Monomial, Truncation, MAX_GENERATORS};
pub use grading::{ClassificationReport, Degree, Grading, GradingType, Parity};
pub use identities::{SuperPolynomial, Variable, Verdict};
pub use isomorphism::{Certificate, GradedMap};
pub use linmap::{Endomorphism, TailRule};
pub use scalar::Scalar;

pub type Rational = num_rational::BigRational;
pub type QElement = Element<Rational>;
pub type QEndomorphism = Endomorphism<Rational>;
pub type QGrading = Grading<Rational>;
pub type QGradedMap = GradedMap<Rational>;
pub type QCertificate = Certificate<Rational>;
pub type QSuperPolynomial = SuperPolynomial<Rational>;
pub type QVerdict = Verdict<Rational>;
