pub mod adm;
pub mod bounds;
pub mod conformal;
pub mod elliptic;
pub mod error;
pub mod geometry;
pub mod mollifier;
pub mod pipeline;
pub mod scenarios;

pub use error::{Error, Result};
