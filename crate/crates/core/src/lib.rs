//! Computational toolkit for the smooth noncommutative torus and the smooth
//! Heisenberg plane.
//!
//! - [`lattice`]: truncated coefficient lattices and the phase `q`.
//! - [`torus`]: the q-twisted product, involution, trace, derivations and
//!   higher-torus monomial reordering.
//! - [`matrep`]: clock–shift matrices, fiberwise evaluation of sections and
//!   the noncommutative circle.
//! - [`heisenberg`]: Weyl operators on sampled functions, the representation
//!   of lattice measures, and the inner-generator solver.
//! - [`twisted`]: both twisted convolutions, the gauge map, the Heisenberg
//!   group lift, Moyal series and the Fourier bridge between them.
//! - [`gns`]: positive forms and GNS triplets on finite quotients.

pub mod error;
pub mod exec;
pub mod gns;
pub mod grid;
pub mod heisenberg;
pub mod lattice;
pub mod matrep;
pub mod torus;
pub mod twisted;

pub use error::{Error, Result};
pub use exec::Exec;
pub use lattice::{CoeffLattice2, PhaseQ};
pub use num_complex::Complex64;
