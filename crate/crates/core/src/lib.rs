//! Closed-form growth modes of linear density perturbations in a flat
//! multicomponent cosmological medium, with numerical cross-checks.

pub mod error;
pub mod mb;
pub mod numfmt;
pub mod oracle;
pub mod params;
pub mod solutions;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
