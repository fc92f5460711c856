//! The Darboux model of a polarized k-symplectic manifold.
//!
//! Coordinates are `x^{pi}` (`p < k`, `i < n`) and `y^i` (`i < n`), 0-based in
//! the API and printed as `x_{p+1}_{i+1}` and `y{i+1}`. The canonical form
//! `θ = Σ_p (Σ_i dx^{pi} ∧ dy^i) ⊗ v_p` is never stored; it is implied by
//! [`contract_theta`]. The foliation is `dy = 0`, so basic functions are
//! polynomials in `y` alone.
//!
//! For the linear-map space `hom(G, R^{k+1})` of an `n`-dimensional Lie
//! algebra, the matrix entries `x^q_i` and `y_i` are exactly these
//! coordinates; see [`ModelManifold::for_lie_algebra`].

mod affine;
mod field;
mod form;
mod hamiltonian;
mod transition;

pub use affine::AffineExpr;
pub use field::FoliateField;
pub use form::{contract_theta, pair, FormComponent, VectorValued1Form};
pub use hamiltonian::{
    differential, hamiltonian_field, is_polarized_hamiltonian, PolarizationDefect,
    PolarizedHamiltonian,
};
pub use transition::Transition;

use crate::error::{Error, Result};
use crate::lie_algebra::LieAlgebra;

/// `k` copies of the leaf directions over an `n`-codimensional foliation;
/// `n(k+1)` coordinates in total.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModelManifold {
    k: usize,
    n: usize,
}

impl ModelManifold {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::Dimension(format!(
                "need k >= 1 and n >= 1, got k={k}, n={n}"
            )));
        }
        Ok(ModelManifold { k, n })
    }

    /// `hom(G, R^{k+1})` with its natural polarized structure.
    pub fn for_lie_algebra(k: usize, algebra: &LieAlgebra) -> Result<Self> {
        Self::new(k, algebra.dim())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.n * (self.k + 1)
    }

    /// Flat index of `x^{pi}` in row-major `(p, i)` order.
    pub fn x_index(&self, p: usize, i: usize) -> usize {
        debug_assert!(p < self.k && i < self.n);
        p * self.n + i
    }

    pub fn x_name(&self, p: usize, i: usize) -> String {
        format!("x_{}_{}", p + 1, i + 1)
    }

    pub fn y_name(&self, i: usize) -> String {
        format!("y{}", i + 1)
    }

    pub fn y_names(&self) -> Vec<String> {
        (0..self.n).map(|i| self.y_name(i)).collect()
    }

    /// Names of all coordinates: the `x^{pi}` in row-major order, then the `y^i`.
    /// This is the variable order of [`AffineExpr::to_poly`].
    pub fn coordinate_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.dimension());
        for p in 0..self.k {
            for i in 0..self.n {
                names.push(self.x_name(p, i));
            }
        }
        names.extend(self.y_names());
        names
    }

    pub(crate) fn ensure_same(&self, other: &ModelManifold) -> Result<()> {
        if self != other {
            return Err(Error::Dimension(format!(
                "manifold (k={}, n={}) vs (k={}, n={})",
                self.k, self.n, other.k, other.n
            )));
        }
        Ok(())
    }

    pub(crate) fn check_p(&self, p: usize) -> Result<()> {
        if p >= self.k {
            return Err(Error::IndexOutOfRange(format!(
                "component {} of {}",
                p + 1,
                self.k
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates() {
        let m = ModelManifold::new(2, 3).unwrap();
        assert_eq!(m.dimension(), 9);
        assert_eq!(m.x_index(1, 2), 5);
        assert_eq!(
            m.coordinate_names(),
            ["x_1_1", "x_1_2", "x_1_3", "x_2_1", "x_2_2", "x_2_3", "y1", "y2", "y3"]
        );
        assert!(ModelManifold::new(0, 1).is_err());
        assert!(ModelManifold::new(1, 0).is_err());
    }

    #[test]
    fn hom_space_of_a_lie_algebra() {
        let n4 = LieAlgebra::builtin("n4").unwrap();
        let m = ModelManifold::for_lie_algebra(2, &n4).unwrap();
        assert_eq!((m.k(), m.n(), m.dimension()), (2, 4, 12));
    }
}
