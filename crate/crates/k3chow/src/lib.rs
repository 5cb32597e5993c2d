//! Exact symbolic calculus for tautological Chow classes on powers of a K3
//! surface, together with a recursive zero-decision procedure for product
//! classes on Hilbert schemes of points.
//!
//! The workhorse representation is the *decorated partition*: a set partition
//! of the factors of `X^m` in which every block carries one of the
//! Beauville-Voisin decorations (fundamental class, basis divisor, the
//! distinguished point class `c_X`, or a formal point). Products, pushforwards
//! and pullbacks are computed exactly over the rationals, and a small set of
//! rewrite rules — all of them Chow identities — brings every class to a
//! normal form. A class whose normal form is empty is certified zero;
//! a nonempty normal form is only ever reported as "not reduced".
//!
//! On top of the surface calculus sit:
//!
//! * [`hilb`] — a formal Chern-character algebra on `X^[n] x X^k x X^l`
//!   with the nested-Hilbert-scheme recursion that decides vanishing of
//!   product classes by descending to the surface calculus;
//! * [`heisenberg`] — a Nakajima/Fock-space calculus used to cross-check the
//!   lowering-operator machinery at small `n`;
//! * [`filtration`] — boxtimes-power calculators for the induced filtration
//!   on zero-cycles;
//! * [`config`], [`instance`], [`report`] — the on-disk formats consumed by
//!   the command-line driver.

pub mod acceptance;
pub mod config;
pub mod error;
pub mod filtration;
pub mod heisenberg;
pub mod hilb;
pub mod instance;
pub mod newton;
pub mod partition;
pub mod rational;
pub mod report;
pub mod surface;
pub mod taut;

pub use error::Error;
pub use rational::Q;
pub use surface::{DivisorClass, SurfaceModel};
pub use taut::TautClass;
