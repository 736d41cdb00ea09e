//! Price competition between two sellers of a single good, where the weaker
//! seller (Alice) commits to one lottery and the stronger seller (Bob) may
//! post any pricing menu. The library models the buyer's sequential visit
//! choice, computes both sellers' expected revenues under a value
//! distribution, solves each seller's best-response problem, and constructs
//! lottery strategies with guaranteed revenue splits.

pub mod buyer;
pub mod cli;
pub mod competition;
pub mod distributions;
pub mod error;
pub mod menus;
mod numerics;
pub mod solvers;
pub mod verify;

pub use error::{Error, Result};
