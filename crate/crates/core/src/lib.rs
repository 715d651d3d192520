//! Finite-dimensional braid group representations built from lowest-weight
//! subspaces of tensor products of the q-deformed oscillator algebra.
//!
//! The main entry points are [`weightspace`] for the lowest-weight bases and
//! [`braid::build_matrix`] for generator matrices, computed either directly
//! in tensor coordinates or by rewriting intertwiner monomials.

pub mod braid;
pub mod cli;
pub mod config;
pub mod error;
pub mod export;
pub mod laurent;
pub mod linalg;
pub mod oscillator;
pub mod params;
pub mod scalars;
pub mod verify;
pub mod weightspace;

pub use error::{Error, Result};
