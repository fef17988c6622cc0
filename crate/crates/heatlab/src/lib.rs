//! Numerical toolkit for two-sided Dirichlet heat kernel and survival
//! probability estimates of isotropic unimodal pure-jump Levy processes on
//! smooth domains, validated at desk scale by a Monte Carlo simulator of the
//! killed process.

pub mod error;
pub mod models;
pub mod numerics;
pub mod kernel;
pub mod profile;
pub mod renewal;

pub use error::{Error, Result};
