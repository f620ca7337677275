//! Exact computation in the non-commutative Poisson algebra generated by
//! functions and vector fields on a flat chart (ℝⁿ or the n-torus).

pub mod chart;
pub mod classical;
pub mod conventions;
pub mod dsl;
pub mod error;
pub mod expr;
pub mod free;
pub mod fun;
pub mod normal;
pub mod quantum;
pub mod random;
pub mod report;
pub mod scalar;
pub mod scheme;
pub mod suite;
pub mod vector;

pub use chart::{ChartKind, ChartSpec};
pub use classical::ClassicalSymbol;
pub use error::{Error, Result};
pub use expr::PExpr;
pub use free::{dvf_defect, lie_env_check, DvfDefect, FreeElem, FreeLiePoisson, LieEnvVerdict};
pub use fun::FunElem;
pub use normal::{NfKey, NormalForm};
pub use report::{Record, Report, Verdict};
pub use quantum::{OpMatrix, RepConfig, ZSign};
pub use scalar::GaussRat;
pub use scheme::{construct_z, validate_scheme, PartitionScheme, Triple};
pub use vector::VecElem;
