//! Exact arithmetic over F_q(θ) for the Carlitz module, log-algebraic
//! special polynomials, Anderson-Stark units and multivariable L-series.

pub mod cache;
pub mod carlitz;
pub mod error;
pub mod field;
pub mod frac;
pub mod laurent;
pub mod logalg;
pub mod lseries;
pub mod multipoly;
pub mod norms;
pub mod poly;
pub mod scalar;
pub mod selfcheck;
pub mod series;
pub mod stark;
pub mod text;

pub use error::{Error, Result};
pub use field::{Fe, Field, FieldSpec, Fq};
pub use frac::Frac;
pub use multipoly::{APoly, KPoly, Monomial, MultiPoly, Vars};
pub use poly::{monic_enum, ThetaPoly};
pub use scalar::Scalar;
pub use series::{AZSeries, Series, SeriesVar, ZSeries};
