//! Exact symbolic/numeric verification of quantum-group Heisenberg-double
//! constructions: R-matrix calculus, Hecke-algebra projectors, RTT/RE/HD
//! noncommutative rewriting, Cayley–Hamilton–Newton identities, dynamical
//! R-matrices, theta-function evolution operators, and the dual pairing.
//!
//! Everything outside the `evolution` float checks is exact arithmetic over
//! the field ℚ(p, γ, μ₁…μₙ) with p = q^{1/n}.

pub mod kernel;
pub mod fixtures;
pub mod rmatrix;
pub mod hecke;
pub mod ncalgebra;
pub mod dynamical;
pub mod evolution;
pub mod pairing;
pub mod hdalgebra;
