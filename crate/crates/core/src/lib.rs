//! Exact spectra of the curl operator `*d` on `(n-1)/2`-forms of closed odd
//! dimensional manifolds: flat tori, round spheres and spherical space forms,
//! together with the spectral invariants computed from them.

pub mod analysis;
pub mod error;
pub mod exact;
pub mod sphere;
pub mod spaceform;
pub mod spectrum;
pub mod torus;

pub use error::{Error, Result};
pub use spectrum::{
    counting, symmetry_defect, validate_spectrum, Family, ManifoldDescriptor, Sign, SpectralLine, Spectrum,
};
