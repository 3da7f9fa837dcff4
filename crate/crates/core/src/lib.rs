//! Homogeneous polynomial interpolation over the integers.
//!
//! Given finitely many integer points with coprime coordinates, this crate
//! builds a nonconstant homogeneous polynomial taking the value 1 at every
//! point, decides for arbitrary integer targets whether a degree-`d`
//! homogeneous interpolant exists (exact Smith Normal Form), searches for the
//! least feasible degree, and emits replayable certificates of infeasibility
//! (per degree, or for every degree at once via reduction modulo a prime).
//!
//! Modules:
//! - [`poly`]: sparse homogeneous polynomials over `Z` or `Z/m`.
//! - [`zlinalg`]: Smith Normal Form with transforms and Diophantine solving.
//! - [`modular`]: unit-valued witnesses over `Z/a`, CRT gluing, factoring.
//! - [`interpolate`]: feasibility, minimal degree, obstructions, witnesses.

pub mod error;
pub mod interpolate;
pub mod modular;
pub mod poly;
pub mod serde_dec;
pub mod zlinalg;

pub use error::{Error, Result};
pub use interpolate::{
    candidate_primes, construct_witness, default_primes, eval_matrix, feasible_degree,
    forced_degree_divisor, min_degree, periodic_obstruction,
    separating_form, unit_linear_form, vanishing_poly, Certificate, FeasibilityResult,
    InterpolationInstance, MinDegreeOptions, Verdict, WitnessOptions, WitnessStrategy,
};
pub use modular::{
    crt_combine, factor, ff_unit_witness, lift_through_nilpotent, mod_witness, normalize_to_one,
    totient, FactoredInteger, ResiduePointSet,
};
pub use poly::{monomials_of_degree, HomogeneousPoly, Monomial, Point, PointSet};
pub use zlinalg::{in_image, snf, solve_diophantine, IntMatrix, SnfDecomposition};
