use std::fmt;

use super::{AffineExpr, FoliateField, ModelManifold};
use crate::error::{Error, Result};

/// One `R`-valued component `β^p = Σ β_{qi} dx^{qi} + Σ γ_i dy^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormComponent {
    dx: Vec<AffineExpr>,
    dy: Vec<AffineExpr>,
}

impl FormComponent {
    pub fn new(manifold: ModelManifold, dx: Vec<AffineExpr>, dy: Vec<AffineExpr>) -> Result<Self> {
        if dx.len() != manifold.k() * manifold.n() || dy.len() != manifold.n() {
            return Err(Error::Dimension(format!(
                "1-form component needs {} dx- and {} dy-coefficients, got {} and {}",
                manifold.k() * manifold.n(),
                manifold.n(),
                dx.len(),
                dy.len()
            )));
        }
        if dx.iter().chain(&dy).any(|c| c.manifold() != manifold) {
            return Err(Error::Dimension("1-form coefficient on another manifold".into()));
        }
        Ok(FormComponent { dx, dy })
    }

    /// Coefficient of `dx^{qi}` at flat index `q*n + i`.
    pub fn dx(&self) -> &[AffineExpr] {
        &self.dx
    }

    /// Coefficient of `dy^i`.
    pub fn dy(&self) -> &[AffineExpr] {
        &self.dy
    }

    fn is_zero(&self) -> bool {
        self.dx.iter().chain(&self.dy).all(AffineExpr::is_zero)
    }
}

/// `β = Σ_p β^p ⊗ v_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorValued1Form {
    manifold: ModelManifold,
    components: Vec<FormComponent>,
}

impl VectorValued1Form {
    pub fn new(manifold: ModelManifold, components: Vec<FormComponent>) -> Result<Self> {
        if components.len() != manifold.k() {
            return Err(Error::Dimension(format!(
                "R^{}-valued form needs {} components, got {}",
                manifold.k(),
                manifold.k(),
                components.len()
            )));
        }
        Ok(VectorValued1Form {
            manifold,
            components,
        })
    }

    pub fn zero(manifold: ModelManifold) -> Self {
        let comp = FormComponent {
            dx: vec![AffineExpr::zero(manifold); manifold.k() * manifold.n()],
            dy: vec![AffineExpr::zero(manifold); manifold.n()],
        };
        VectorValued1Form {
            manifold,
            components: vec![comp; manifold.k()],
        }
    }

    /// `d(f^1, ..., f^k)` computed by differentiating each component in
    /// every coordinate.
    pub fn exterior_derivative(manifold: ModelManifold, f: &[AffineExpr]) -> Result<Self> {
        if f.len() != manifold.k() {
            return Err(Error::Arity {
                expected: manifold.k(),
                actual: f.len(),
            });
        }
        let components = f
            .iter()
            .map(|fp| {
                let dx = fp
                    .x_coeffs()
                    .iter()
                    .map(|c| AffineExpr::basic(manifold, c.clone()))
                    .collect::<Result<Vec<_>>>()?;
                let dy = (0..manifold.n())
                    .map(|i| fp.partial_y(i))
                    .collect::<Result<Vec<_>>>()?;
                FormComponent::new(manifold, dx, dy)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(manifold, components)
    }

    pub fn manifold(&self) -> ModelManifold {
        self.manifold
    }

    pub fn component(&self, p: usize) -> &FormComponent {
        &self.components[p]
    }

    pub fn components(&self) -> &[FormComponent] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(FormComponent::is_zero)
    }

    pub fn negated(&self) -> Self {
        VectorValued1Form {
            manifold: self.manifold,
            components: self
                .components
                .iter()
                .map(|c| FormComponent {
                    dx: c.dx.iter().map(|e| -e).collect(),
                    dy: c.dy.iter().map(|e| -e).collect(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for VectorValued1Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.manifold;
        let mut comps = Vec::new();
        for (p, c) in self.components.iter().enumerate() {
            let mut terms = Vec::new();
            for q in 0..m.k() {
                for i in 0..m.n() {
                    let coeff = &c.dx[m.x_index(q, i)];
                    if !coeff.is_zero() {
                        terms.push(format!("({coeff})*d{}", m.x_name(q, i)));
                    }
                }
            }
            for (i, coeff) in c.dy.iter().enumerate() {
                if !coeff.is_zero() {
                    terms.push(format!("({coeff})*d{}", m.y_name(i)));
                }
            }
            let body = if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            };
            comps.push(format!("[{}] {body}", p + 1));
        }
        f.write_str(&comps.join("; "))
    }
}

/// `i(X)θ`: component `p` is `Σ_i (ξ^{pi} dy^i - η^i dx^{pi})`.
pub fn contract_theta(x: &FoliateField) -> Result<VectorValued1Form> {
    let m = x.manifold();
    let n = m.n();
    let mut components = Vec::with_capacity(m.k());
    for p in 0..m.k() {
        let mut dx = vec![AffineExpr::zero(m); m.k() * n];
        for i in 0..n {
            dx[m.x_index(p, i)] = -&AffineExpr::basic(m, x.eta(i).clone())?;
        }
        let dy = (0..n).map(|i| x.xi(p, i).clone()).collect();
        components.push(FormComponent::new(m, dx, dy)?);
    }
    VectorValued1Form::new(m, components)
}

/// `⟨β, X⟩ = Σ_p β^p(X) v_p`; component `p` is
/// `Σ_{q,i} β^p_{qi} ξ^{qi} + Σ_i γ^p_i η^i`.
///
/// Fails if a product of two `x`-dependent coefficients would leave the
/// affine class.
pub fn pair(beta: &VectorValued1Form, x: &FoliateField) -> Result<Vec<AffineExpr>> {
    let m = beta.manifold();
    m.ensure_same(&x.manifold())?;
    beta.components
        .iter()
        .map(|c| {
            let mut acc = AffineExpr::zero(m);
            for (b, xi) in c.dx.iter().zip(x.xi_all()) {
                if !b.is_zero() && !xi.is_zero() {
                    acc = &acc + &b.try_mul(xi)?;
                }
            }
            for (g, eta) in c.dy.iter().zip(x.eta_all()) {
                if !g.is_zero() && !eta.is_zero() {
                    acc = &acc + &g.mul_basic(eta)?;
                }
            }
            Ok(acc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Poly;

    fn m11() -> ModelManifold {
        ModelManifold::new(1, 1).unwrap()
    }

    #[test]
    fn contract_coordinate_fields() {
        let m = m11();
        // i(∂/∂y)θ = -dx
        let form = contract_theta(&FoliateField::d_y(m, 0)).unwrap();
        assert_eq!(form.component(0).dx()[0].to_string(), "-1");
        assert!(form.component(0).dy()[0].is_zero());
        // i(∂/∂x)θ = dy
        let form = contract_theta(&FoliateField::d_x(m, 0, 0)).unwrap();
        assert!(form.component(0).dx()[0].is_zero());
        assert_eq!(form.component(0).dy()[0].to_string(), "1");
    }

    #[test]
    fn pair_coordinate_form_with_coordinate_field() {
        let m = ModelManifold::new(2, 1).unwrap();
        let dx11 = VectorValued1Form::exterior_derivative(
            m,
            &[AffineExpr::x(m, 0, 0), AffineExpr::zero(m)],
        )
        .unwrap();
        let v = pair(&dx11, &FoliateField::d_x(m, 0, 0)).unwrap();
        assert_eq!(v[0].to_string(), "1");
        assert!(v[1].is_zero());
        let zero = pair(&dx11, &FoliateField::zero(m)).unwrap();
        assert!(zero.iter().all(AffineExpr::is_zero));
    }

    #[test]
    fn pair_rejects_non_affine_products() {
        let m = m11();
        let x = AffineExpr::x(m, 0, 0);
        let beta = VectorValued1Form::new(
            m,
            vec![FormComponent::new(m, vec![x.clone()], vec![AffineExpr::zero(m)]).unwrap()],
        )
        .unwrap();
        let field = FoliateField::new(m, vec![x], vec![Poly::zero(1)]).unwrap();
        assert!(pair(&beta, &field).is_err());
    }
}
