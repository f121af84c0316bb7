//! Numerics for winding (topological) solutions of the (1+1)-dimensional
//! hyperbolic Heisenberg model (HHM) and hyperbolic sigma model (HSM), whose
//! field lives on the one-sheeted hyperboloid `ψ1² + ψ2² − ψ3² = 1`.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! - [`geometry`]: points and polar fields on the hyperboloid, winding numbers.
//! - [`elliptic`]: Jacobi `sn`, `cn`, `dn` and the complete integral `K(m)`.
//! - [`families`]: the closed-form travelling-wave and blow-up solutions.
//! - [`reduction`]: the effective potentials `P(p)`, root classification and
//!   the winding-existence decision procedure on the real line.
//! - [`evolution`]: method-of-lines RK4 integration of both models with
//!   conserved-quantity diagnostics.
#![no_std]
#![warn(missing_debug_implementations)]
// `num_traits::Float` supplies the float methods without std; when a workspace
// build links std through feature unification those imports look unused
#![allow(unused_imports)]
// `num_traits::Float` supplies the float methods without std; when a std
// build is unified in (tests), the imports become redundant.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod elliptic;
mod error;
pub mod evolution;
pub mod families;
mod fft;
pub mod geometry;
pub mod poly;
pub mod quad;
pub mod reduction;

pub use error::{Error, Result};
