//! Numerical geometry of O(2,n) acting on the Einstein universe and on
//! anti-de Sitter space.

pub mod causality;
pub mod domain;
pub mod error;
pub mod fixtures;
pub mod forms;
pub mod geodesics;
pub mod groups;
pub mod io;
pub mod limit_sets;
pub mod models;
pub mod projective;
pub mod sphere;

pub use error::{GeometryError, Result};
pub use nalgebra;
