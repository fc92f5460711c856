use std::fmt;

use super::{AffineExpr, ModelManifold};
use crate::error::{Error, Result};
use crate::symbolic::{BasicFn, Poly, Rational};

/// `Σ ξ^{pi} ∂/∂x^{pi} + Σ η^j ∂/∂y^j` with `ξ` affine in `x` and `η` basic.
///
/// Basic `η` is the foliate condition. The affine restriction on `ξ` covers
/// every Hamiltonian field and is closed under the Lie bracket.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FoliateField {
    manifold: ModelManifold,
    xi: Vec<AffineExpr>,
    eta: Vec<BasicFn>,
}

impl FoliateField {
    pub fn new(manifold: ModelManifold, xi: Vec<AffineExpr>, eta: Vec<BasicFn>) -> Result<Self> {
        let (k, n) = (manifold.k(), manifold.n());
        if xi.len() != k * n || eta.len() != n {
            return Err(Error::Dimension(format!(
                "foliate field needs {} x-components and {n} y-components, got {} and {}",
                k * n,
                xi.len(),
                eta.len()
            )));
        }
        if xi.iter().any(|c| c.manifold() != manifold) {
            return Err(Error::Dimension("x-component on another manifold".into()));
        }
        if let Some(bad) = eta.iter().find(|f| f.nvars() != n) {
            return Err(Error::VariableMismatch {
                left: n,
                right: bad.nvars(),
            });
        }
        Ok(FoliateField { manifold, xi, eta })
    }

    pub fn zero(manifold: ModelManifold) -> Self {
        let n = manifold.n();
        FoliateField {
            manifold,
            xi: vec![AffineExpr::zero(manifold); manifold.k() * n],
            eta: vec![Poly::zero(n); n],
        }
    }

    /// `∂/∂x^{pi}`.
    pub fn d_x(manifold: ModelManifold, p: usize, i: usize) -> Self {
        let mut f = Self::zero(manifold);
        f.xi[manifold.x_index(p, i)] = AffineExpr::basic(manifold, Poly::one(manifold.n()))
            .expect("same variable count");
        f
    }

    /// `∂/∂y^j`.
    pub fn d_y(manifold: ModelManifold, j: usize) -> Self {
        let mut f = Self::zero(manifold);
        f.eta[j] = Poly::one(manifold.n());
        f
    }

    pub fn manifold(&self) -> ModelManifold {
        self.manifold
    }

    pub fn xi(&self, p: usize, i: usize) -> &AffineExpr {
        &self.xi[self.manifold.x_index(p, i)]
    }

    pub fn xi_all(&self) -> &[AffineExpr] {
        &self.xi
    }

    pub fn eta(&self, j: usize) -> &BasicFn {
        &self.eta[j]
    }

    pub fn eta_all(&self) -> &[BasicFn] {
        &self.eta
    }

    pub fn is_zero(&self) -> bool {
        self.xi.iter().all(AffineExpr::is_zero) && self.eta.iter().all(Poly::is_zero)
    }

    /// Derivative of an affine function along the field:
    /// `X(f) = Σ ξ^{qi} ∂f/∂x^{qi} + Σ η^j ∂f/∂y^j`.
    pub fn apply(&self, f: &AffineExpr) -> Result<AffineExpr> {
        self.manifold.ensure_same(&f.manifold())?;
        let mut acc = AffineExpr::zero(self.manifold);
        for (xi, c) in self.xi.iter().zip(f.x_coeffs()) {
            if !c.is_zero() {
                acc = &acc + &xi.mul_basic(c)?;
            }
        }
        for (j, eta) in self.eta.iter().enumerate() {
            if !eta.is_zero() {
                acc = &acc + &f.partial_y(j)?.mul_basic(eta)?;
            }
        }
        Ok(acc)
    }

    /// The coordinate Lie bracket `[X, Y] = XY - YX`.
    pub fn lie_bracket(&self, other: &FoliateField) -> Result<FoliateField> {
        self.manifold.ensure_same(&other.manifold)?;
        let m = self.manifold;
        let xi = self
            .xi
            .iter()
            .zip(&other.xi)
            .map(|(xs, xo)| Ok(&self.apply(xo)? - &other.apply(xs)?))
            .collect::<Result<Vec<_>>>()?;
        let eta = self
            .eta
            .iter()
            .zip(&other.eta)
            .map(|(es, eo)| {
                let lift = |f: &Poly| AffineExpr::basic(m, f.clone());
                let d = &self.apply(&lift(eo)?)? - &other.apply(&lift(es)?)?;
                debug_assert!(d.is_basic());
                Ok(d.constant().clone())
            })
            .collect::<Result<Vec<_>>>()?;
        FoliateField::new(m, xi, eta)
    }

    fn zip(&self, other: &Self, fx: impl Fn(&AffineExpr, &AffineExpr) -> AffineExpr, fy: impl Fn(&Poly, &Poly) -> Poly) -> Result<Self> {
        self.manifold.ensure_same(&other.manifold)?;
        Ok(FoliateField {
            manifold: self.manifold,
            xi: self.xi.iter().zip(&other.xi).map(|(a, b)| fx(a, b)).collect(),
            eta: self.eta.iter().zip(&other.eta).map(|(a, b)| fy(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        FoliateField {
            manifold: self.manifold,
            xi: self.xi.iter().map(|f| f.scale(c)).collect(),
            eta: self.eta.iter().map(|f| f.scale(c)).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        self.scale(&Rational::from_integer((-1).into()))
    }

    /// Components at a point: `(dx/dt` row-major `k×n`, `dy/dt)`.
    pub fn eval_f64(&self, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let dx = self
            .xi
            .iter()
            .map(|c| c.eval_f64(x, y))
            .collect::<Result<Vec<_>>>()?;
        let dy = self
            .eta
            .iter()
            .map(|c| c.eval_f64(y))
            .collect::<Result<Vec<_>>>()?;
        Ok((dx, dy))
    }
}

/// One line per component, `xi[p][i] = ...` then `eta[j] = ...`, 1-based.
impl fmt::Display for FoliateField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.manifold;
        let names = m.y_names();
        let mut lines = Vec::new();
        for p in 0..m.k() {
            for i in 0..m.n() {
                lines.push(format!("xi[{}][{}] = {}", p + 1, i + 1, self.xi(p, i)));
            }
        }
        for (j, e) in self.eta.iter().enumerate() {
            lines.push(format!("eta[{}] = {}", j + 1, e.display_with(&names)));
        }
        f.write_str(&lines.join("\n"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse_poly;

    #[test]
    fn one_term_bracket() {
        let m = ModelManifold::new(1, 1).unwrap();
        let dy = FoliateField::d_y(m, 0);
        // y1 ∂/∂x^{11}
        let mut xi = vec![AffineExpr::zero(m)];
        xi[0] = AffineExpr::basic(m, Poly::var(1, 0)).unwrap();
        let y_dx = FoliateField::new(m, xi, vec![Poly::zero(1)]).unwrap();
        assert_eq!(dy.lie_bracket(&y_dx).unwrap(), FoliateField::d_x(m, 0, 0));
        assert_eq!(y_dx.lie_bracket(&dy).unwrap(), FoliateField::d_x(m, 0, 0).negated());
    }

    #[test]
    fn self_bracket_vanishes() {
        let m = ModelManifold::new(2, 2).unwrap();
        let names = m.coordinate_names();
        let xi: Vec<AffineExpr> = ["x_1_1*y1", "y2^2", "x_2_1 - x_1_2", "3"]
            .iter()
            .map(|s| AffineExpr::from_poly(m, &parse_poly(s, &names).unwrap()).unwrap())
            .collect();
        let eta = vec![parse_poly("y1*y2", &["y1", "y2"]).unwrap(), Poly::var(2, 0)];
        let x = FoliateField::new(m, xi, eta).unwrap();
        assert!(x.lie_bracket(&x).unwrap().is_zero());
    }

    #[test]
    fn apply_is_a_derivation_on_coordinates() {
        let m = ModelManifold::new(1, 2).unwrap();
        let x = FoliateField::d_y(m, 1);
        let names = m.coordinate_names();
        let f = AffineExpr::from_poly(m, &parse_poly("x_1_1*y2^2 + y1*y2", &names).unwrap()).unwrap();
        assert_eq!(x.apply(&f).unwrap().to_string(), "2*x_1_1*y2 + y1");
    }

    #[test]
    fn display() {
        let m = ModelManifold::new(1, 1).unwrap();
        let f = FoliateField::d_y(m, 0).checked_add(&FoliateField::d_x(m, 0, 0)).unwrap();
        assert_eq!(f.to_string(), "xi[1][1] = 1\neta[1] = 1");
    }

    #[test]
    fn dimension_errors() {
        let m = ModelManifold::new(1, 1).unwrap();
        assert!(FoliateField::new(m, vec![], vec![Poly::zero(1)]).is_err());
        let other = ModelManifold::new(1, 2).unwrap();
        assert!(FoliateField::zero(m).lie_bracket(&FoliateField::zero(other)).is_err());
    }
}
