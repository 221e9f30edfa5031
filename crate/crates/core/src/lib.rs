//! Clifford algebra arithmetic, the Clifford-Fourier transform, and the
//! continuous Clifford wavelet transform on sampled n-dimensional fields,
//! together with numerical verification of the transform identities:
//! admissibility, isometry/Plancherel, reconstruction, and Heisenberg-type
//! uncertainty inequalities.

pub mod algebra;
pub mod cwt;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod io;
pub mod spin;
pub mod suite;
pub mod uncertainty;
pub mod wavelet;

#[doc(hidden)]
pub mod testutil;

pub use algebra::{blade_product, dot, reflect, wedge, Multivector, Vector};
pub use error::{CliffError, Result};
pub use grid::{CliffordField, Domain, GridSpec};
pub use spin::{haar_quadrature, SpinQuadrature, Spinor};
