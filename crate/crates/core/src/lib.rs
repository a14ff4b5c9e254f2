//! Median quasi-Monte Carlo integration over randomized digital nets and
//! polynomial lattice point sets.

mod error;
pub mod digital_net;
pub mod error_bounds;
pub mod gf_poly;
pub mod matrix;
pub mod median_qmc;
pub mod numeric;
pub mod poly_lattice;
pub mod scramble;
pub mod testbed;
pub mod verify;
pub mod weight_fns;

pub use digital_net::{generate_points, GenMatrixSet, PointSet};
pub use error::{Error, Result};
pub use gf_poly::{GfPoly, PrimeField};
pub use matrix::FbMatrix;
