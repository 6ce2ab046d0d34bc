//! Numerical laboratory for extremal Steklov eigenvalue problems and free
//! boundary minimal surfaces in the unit ball.
//!
//! - [`mesh`]: triangle meshes of the reference domains (disk, flat annulus,
//!   flat Möbius band, genus-0 with holes).
//! - [`spectral`]: FEM assembly, Dirichlet-to-Neumann Schur complement,
//!   Steklov spectra, and exact separation-of-variables oracles.
//! - [`minsurf`]: the free boundary minimal surface catalog (equatorial disk,
//!   critical catenoid, critical Möbius band, cones) with verification.
//! - [`conformal`]: conformal transformations of the ball, one-parameter
//!   flows, and the boundary-length variational identities.
//! - [`optimize`]: eigenvalue perturbation forms, σ₁L maximization over
//!   moduli and boundary densities, spherical certificates, flat-torus λ₁A.

pub mod conformal;
pub mod error;
pub mod geom;
pub mod mesh;
pub mod minsurf;
pub mod optimize;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
pub use mesh::{generate_domain, DomainKind, DomainSpec, TriangleMesh};
pub use spectral::{DiscreteMetric, OperatorSet, Spectrum};
