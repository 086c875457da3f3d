//! Exact enumeration and cluster analysis of resonant wave triads.
//!
//! For rational dispersion laws ω = m/β(n) with integer wave vectors
//! (m, n), the three-wave resonance conditions
//!
//!   ω1 + ω2 = ω3,  m1 + m2 = m3
//!
//! form a Diophantine system. This crate finds every solution in a finite
//! domain 1 ≤ m, n ≤ D using exact integer arithmetic throughout: no
//! floating point, no tolerance thresholds anywhere. On top of the solver
//! sit a brute-force cross-check, cluster topology (components of the
//! triad-sharing graph classified up to isomorphism), vector multiplicity
//! statistics, and generation of the coupled amplitude ODE systems each
//! cluster obeys.
//!
//! Entry points: [`enumerate`] for the fast solver, [`brute_enumerate`]
//! for the reference check, [`topology`] and [`odegen`] for analysis of a
//! [`SolutionSet`], [`solfile`] for serialization.

mod canon;
pub mod dispersion;
pub mod enumerator;
pub mod error;
pub mod exactmath;
pub mod odegen;
pub mod oracle;
pub mod solfile;
pub mod topology;

pub use dispersion::{BetaLaw, BetaTable, DispersionSpec, Triad, WaveVector};
pub use enumerator::{enumerate, solve_n_triple, MFamily, SolutionSet};
pub use error::Error;
pub use oracle::{brute_enumerate, ORACLE_CAP};
