//! Exact computer algebra for polarized k-symplectic geometry.
//!
//! Everything lives in the Darboux model: coordinates `x^{pi}` (1 ≤ p ≤ k,
//! 1 ≤ i ≤ n) and `y^i`, the canonical form `θ = Σ_p (Σ_i dx^{pi} ∧ dy^i) ⊗ v_p`
//! and the foliation `dy = 0`. Basic functions are polynomials in `y` over
//! the rationals, so every algebraic identity is checked by exact equality
//! of canonical forms.
//!
//! Module map:
//! - [`symbolic`]: exact multivariate polynomials, derivatives, parser.
//! - [`lie_algebra`]: structure constants, validation, Maurer–Cartan import.
//! - [`geometry`]: Hamiltonians, foliate fields, forms, coordinate transitions.
//! - [`poisson`]: subordinate and linear brackets, jacobiator, axiom checks.
//! - [`dynamics`]: RK4 integration of Hamilton's equations.
//! - [`problem`]: JSON problem files and schemas.
//! - [`sampling`]: seeded random Hamiltonians for property suites.

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod lie_algebra;
pub mod poisson;
pub mod problem;
pub mod sampling;
pub mod symbolic;

pub use error::{Error, Result};
pub use geometry::{
    AffineExpr, FoliateField, ModelManifold, PolarizedHamiltonian, Transition, VectorValued1Form,
};
pub use lie_algebra::{LieAlgebra, MaurerCartanData};
pub use poisson::BracketKind;
pub use symbolic::{BasicFn, Poly, Rational};
