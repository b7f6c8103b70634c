pub mod bump;
pub mod closed_form;
pub mod error;
pub mod fit;
pub mod identity;
pub mod lemma;
pub mod optimizer;
pub mod params;
pub mod quadrature;
pub mod rayleigh;
pub mod special;
pub mod weight;

pub use error::{Error, Result};
