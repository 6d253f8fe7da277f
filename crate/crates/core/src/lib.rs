#![allow(clippy::needless_range_loop, clippy::manual_checked_ops)]

pub mod cli;
pub mod error;
pub mod gaussian;
pub mod groupoid;
pub mod hodge;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod polyhedral;
pub mod report;
pub mod stacky;

pub use error::{Error, Result};
