//! Private single-erasure repair and private retrieval for Reed-Solomon codes
//! built from subspace polynomials over small finite fields.

pub mod audit;
pub mod bounds;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod linspace;
pub mod poly;
pub mod protocol;
pub mod rs;
pub mod sim;

pub use audit::{AuditReport, CoalitionView, PosteriorTable};
pub use error::{Error, Result};
pub use gf::{make_field, Basis, FieldConfig, FieldCtx, FieldElem};
pub use linspace::{ImageBasis, LinSubspace, LinearizedPoly};
pub use poly::Poly;
pub use protocol::{ClientState, RepairTranscript, ResamplePolicy, Scheme, SchemeParams};
pub use rs::{CodeSpec, Codeword};
