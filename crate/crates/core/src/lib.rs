//! Toeplitz subshifts built by hole filling.
//!
//! The crate constructs Toeplitz words from seed schedules and analyzes their
//! period structure, odometer, boundary, factors and complexity.

pub mod boundary;
pub mod checks;
pub mod cli;
pub mod complexity;
pub mod elements;
pub mod error;
pub mod factors;
pub mod gallery;
pub mod odometer;
pub mod periodicity;
pub mod words;
