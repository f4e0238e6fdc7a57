//! Finite-state abstractions of autonomous max-plus linear (MPL) systems
//! built entirely from tropical-algebra operations.
//!
//! An MPL system updates its state through `x(k+1) = A ⊗ x(k)` over the
//! max-plus semiring (ℝ ∪ {ε}, max, +) with ε = −∞. This crate provides
//! the pieces needed to analyse such systems symbolically:
//!
//! - [`tropical`]: the scalar semiring, dense tropical matrices, finite
//!   coefficients, region matrices, conjugates and definite forms;
//! - [`dbm`]: difference-bound matrices (zones) stored as tropical
//!   matrices, with intersection, canonical form and emptiness checking;
//! - [`pwa`]: the piecewise-affine representation of an MPL system and the
//!   disjoint partition whose cells become abstract states;
//! - [`reach`]: images and inverse images of zones under affine dynamics
//!   and under the full MPL system, plus forward/backward reach sets;
//! - [`abstraction`]: the finite transition system over abstract states;
//! - [`instance`]: seeded random benchmark instances;
//! - [`bench`]: the timing/operation-count benchmark harness;
//! - [`io`]: the JSON file formats shared by the library and the CLI.
//!
//! All values are immutable after construction and safe to share across
//! threads. Entries are exact 64-bit integers: every operation is a max or
//! a sum, so integral inputs never suffer rounding.

pub mod abstraction;
pub mod bench;
pub mod dbm;
mod error;
pub mod instance;
pub mod io;
pub mod metrics;
pub mod pwa;
pub mod reach;
pub mod tropical;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
