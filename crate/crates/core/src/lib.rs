//! Certified delta invariants of parameterized space curve singularities.
//!
//! A germ is given by `r` branches `t -> (x_1(t), ..., x_n(t))` with
//! polynomial entries and no constant terms. The local ring is the image of
//! `k[[x_1, ..., x_n]]` inside the product of `r` copies of `k[[t]]`; its
//! codimension is delta. The [`engine`] computes delta with linear algebra on
//! truncated series and certifies the answer by a tail argument, [`family`]
//! scans one-parameter families for semicontinuity, and [`oracle`] holds
//! slow independent reference computations.

pub mod coeffield;
pub mod engine;
pub mod family;
pub mod io;
pub mod oracle;
pub mod param;
pub mod series;

pub use coeffield::{
    FieldDescriptor, FieldError, Prime, QPoly, RationalFunction, RingDescriptor, RingElement,
    Scalar, SpecPoint,
};
pub use engine::{
    delta_bounded, delta_certified, DeltaCertificate, EngineError, EngineOptions, Outcome,
    Semigroup, Undecided,
};
pub use family::{
    scan, FamilyError, FamilyParameterization, FamilyPolynomial, ScanOptions, ScanReport,
};
pub use io::{parse_document, serialize_document, Document, IoError};
pub use param::{ParamError, Parameterization, ValidityReport};
pub use series::{BranchVector, OrderValue, Polynomial, SeriesError, TruncatedSeries};
