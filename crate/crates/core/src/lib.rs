//! Aharonov-Bohm magnetic Laplacian spectra on spheres, caps, cylinders and
//! surfaces of revolution, together with the one-dimensional singular
//! Sturm-Liouville reductions and numerical checks of the associated
//! eigenvalue bounds.

pub mod error;
pub mod flux;
pub mod format;
pub mod model_weights;
pub mod numerics;
pub mod profile;
pub mod sl;
pub mod spectra;
pub mod surface;
pub mod verify;
pub mod weight;

pub use error::{Error, Result};
pub use flux::{reduce_flux, Flux, Rational, Scalar};
