//! Driven-dissipative collective spin models: spin algebra, parameter mapping, Lindblad
//! solvers, and steady-state observables.

pub mod error;
pub mod lindblad;
pub mod models;
pub mod observables;
pub mod operator;
pub mod params;
pub mod sparse;
pub mod spin;

pub use error::{Error, Result};
