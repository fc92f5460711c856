use std::fmt;

use thiserror::Error;

use super::{AffineExpr, FoliateField, FormComponent, ModelManifold, VectorValued1Form};
use crate::error::{Error, Result};
use crate::symbolic::{BasicFn, Poly, Rational};

/// `H^p = Σ_j a_j(y) x^{pj} + b^p(y)` for `p = 1..k`.
///
/// The `a_j` are shared by every component, which is what makes the
/// x-gradient `∂H^p/∂x^{qi} = δ^p_q a_i` basic and independent of `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolarizedHamiltonian {
    manifold: ModelManifold,
    a: Vec<BasicFn>,
    b: Vec<BasicFn>,
}

impl PolarizedHamiltonian {
    pub fn new(manifold: ModelManifold, a: Vec<BasicFn>, b: Vec<BasicFn>) -> Result<Self> {
        let (k, n) = (manifold.k(), manifold.n());
        if a.len() != n || b.len() != k {
            return Err(Error::Dimension(format!(
                "Hamiltonian on (k={k}, n={n}) needs {n} a-coefficients and {k} b-components, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        if let Some(bad) = a.iter().chain(&b).find(|f| f.nvars() != n) {
            return Err(Error::VariableMismatch {
                left: n,
                right: bad.nvars(),
            });
        }
        Ok(PolarizedHamiltonian { manifold, a, b })
    }

    pub fn zero(manifold: ModelManifold) -> Self {
        let n = manifold.n();
        PolarizedHamiltonian {
            manifold,
            a: vec![Poly::zero(n); n],
            b: vec![Poly::zero(n); manifold.k()],
        }
    }

    /// The constant map `c ∈ R^k`.
    pub fn constant(manifold: ModelManifold, c: &[Rational]) -> Result<Self> {
        if c.len() != manifold.k() {
            return Err(Error::Arity {
                expected: manifold.k(),
                actual: c.len(),
            });
        }
        let n = manifold.n();
        let b = c.iter().map(|v| Poly::constant(n, v.clone())).collect();
        Self::new(manifold, vec![Poly::zero(n); n], b)
    }

    pub fn manifold(&self) -> ModelManifold {
        self.manifold
    }

    pub fn a(&self) -> &[BasicFn] {
        &self.a
    }

    pub fn b(&self) -> &[BasicFn] {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().chain(&self.b).all(Poly::is_zero)
    }

    /// True when `H` is basic, i.e. every `a_j` vanishes.
    pub fn is_basic(&self) -> bool {
        self.a.iter().all(Poly::is_zero)
    }

    /// `H` with its `x`-dependent part dropped.
    pub fn basic_part(&self) -> Self {
        let n = self.manifold.n();
        PolarizedHamiltonian {
            manifold: self.manifold,
            a: vec![Poly::zero(n); n],
            b: self.b.clone(),
        }
    }

    /// Component `H^p` as an affine expression.
    pub fn component(&self, p: usize) -> Result<AffineExpr> {
        self.manifold.check_p(p)?;
        let m = self.manifold;
        let n = m.n();
        let mut linear = vec![Poly::zero(n); m.k() * n];
        for (j, aj) in self.a.iter().enumerate() {
            linear[m.x_index(p, j)] = aj.clone();
        }
        AffineExpr::new(m, self.b[p].clone(), linear)
    }

    pub fn components(&self) -> Vec<AffineExpr> {
        (0..self.manifold.k())
            .map(|p| self.component(p).expect("p in range"))
            .collect()
    }

    fn zip(&self, other: &Self, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<Self> {
        self.manifold.ensure_same(&other.manifold)?;
        Ok(PolarizedHamiltonian {
            manifold: self.manifold,
            a: self.a.iter().zip(&other.a).map(|(x, y)| f(x, y)).collect(),
            b: self.b.iter().zip(&other.b).map(|(x, y)| f(x, y)).collect(),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |x, y| x + y)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |x, y| x - y)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolarizedHamiltonian {
            manifold: self.manifold,
            a: self.a.iter().map(|f| f.scale(c)).collect(),
            b: self.b.iter().map(|f| f.scale(c)).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        self.scale(&-Rational::from_integer(1.into()))
    }

    /// `H^p(x, y)` for every `p`.
    pub fn eval_f64(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.components()
            .iter()
            .map(|c| c.eval_f64(x, y))
            .collect()
    }
}

impl fmt::Display for PolarizedHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[Poly]| -> String {
            v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
        };
        write!(f, "a = [{}]; b = [{}]", show(&self.a), show(&self.b))
    }
}

/// `dH`: component `p` has `dx^{pi}`-coefficient `a_i`, no `dx^{qi}` terms
/// for `q ≠ p`, and `dy^i`-coefficient `Σ_j x^{pj} ∂a_j/∂y^i + ∂b^p/∂y^i`.
pub fn differential(h: &PolarizedHamiltonian) -> Result<VectorValued1Form> {
    let m = h.manifold;
    let n = m.n();
    let mut comps = Vec::with_capacity(m.k());
    for p in 0..m.k() {
        let mut dx = vec![AffineExpr::zero(m); m.k() * n];
        for (i, ai) in h.a.iter().enumerate() {
            dx[m.x_index(p, i)] = AffineExpr::basic(m, ai.clone())?;
        }
        let hp = h.component(p)?;
        let dy = (0..n).map(|i| hp.partial_y(i)).collect::<Result<Vec<_>>>()?;
        comps.push(FormComponent::new(m, dx, dy)?);
    }
    VectorValued1Form::new(m, comps)
}

/// The polarized Hamiltonian field `X_H`, characterized by `i(X_H)θ = -dH`:
/// `η^j = a_j` and `ξ^{ps} = -(Σ_j x^{pj} ∂a_j/∂y^s + ∂b^p/∂y^s)`.
pub fn hamiltonian_field(h: &PolarizedHamiltonian) -> Result<FoliateField> {
    let m = h.manifold;
    let n = m.n();
    let mut xi = vec![AffineExpr::zero(m); m.k() * n];
    for p in 0..m.k() {
        let hp = h.component(p)?;
        for s in 0..n {
            xi[m.x_index(p, s)] = -&hp.partial_y(s)?;
        }
    }
    FoliateField::new(m, xi, h.a.clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolarizationDefect {
    #[error("expected {expected} components, got {actual}")]
    ComponentCount { expected: usize, actual: usize },
    #[error("component {p} is defined on a different manifold")]
    Manifold { p: usize },
    #[error("component {p} depends on x_{q}_{i} from another component")]
    CrossComponent { p: usize, q: usize, i: usize },
    #[error("d(component {p})/d(x_{p}_{i}) = {found} differs from component 1's {expected}")]
    Unshared {
        p: usize,
        i: usize,
        expected: String,
        found: String,
    },
}

/// Decides whether `k` affine components form a polarized Hamiltonian:
/// `∂F^p/∂x^{qi} = 0` for `q ≠ p` and `∂F^p/∂x^{pi}` is the same basic
/// function for every `p`. Returns the `(a, b)` decomposition on success.
///
/// Defect indices are 1-based.
pub fn is_polarized_hamiltonian(
    manifold: ModelManifold,
    components: &[AffineExpr],
) -> std::result::Result<PolarizedHamiltonian, PolarizationDefect> {
    let (k, n) = (manifold.k(), manifold.n());
    if components.len() != k {
        return Err(PolarizationDefect::ComponentCount {
            expected: k,
            actual: components.len(),
        });
    }
    for (p, f) in components.iter().enumerate() {
        if f.manifold() != manifold {
            return Err(PolarizationDefect::Manifold { p: p + 1 });
        }
        for q in (0..k).filter(|&q| q != p) {
            for i in 0..n {
                if !f.x_coeff(q, i).is_zero() {
                    return Err(PolarizationDefect::CrossComponent {
                        p: p + 1,
                        q: q + 1,
                        i: i + 1,
                    });
                }
            }
        }
    }
    let a: Vec<Poly> = (0..n).map(|i| components[0].x_coeff(0, i).clone()).collect();
    for (p, f) in components.iter().enumerate().skip(1) {
        for (i, ai) in a.iter().enumerate() {
            let found = f.x_coeff(p, i);
            if found != ai {
                return Err(PolarizationDefect::Unshared {
                    p: p + 1,
                    i: i + 1,
                    expected: ai.to_string(),
                    found: found.to_string(),
                });
            }
        }
    }
    let b = components.iter().map(|f| f.constant().clone()).collect();
    Ok(PolarizedHamiltonian::new(manifold, a, b).expect("dimensions checked"))
}

impl PolarizedHamiltonian {
    /// Adds a constant `c ∈ R^k`.
    pub fn add_constant(&self, c: &[Rational]) -> Result<Self> {
        self.checked_add(&Self::constant(self.manifold, c)?)
    }

    /// True if every coefficient is the zero polynomial except constants.
    pub fn is_constant(&self) -> bool {
        self.is_basic() && self.b.iter().all(Poly::is_constant)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::contract_theta;
    use crate::symbolic::{int, parse_poly};

    fn m11() -> ModelManifold {
        ModelManifold::new(1, 1).unwrap()
    }

    fn xy() -> PolarizedHamiltonian {
        PolarizedHamiltonian::new(m11(), vec![Poly::var(1, 0)], vec![Poly::zero(1)]).unwrap()
    }

    #[test]
    fn differential_of_xy() {
        let d = differential(&xy()).unwrap();
        assert_eq!(d.component(0).dx()[0].to_string(), "y1");
        assert_eq!(d.component(0).dy()[0].to_string(), "x_1_1");
        let c = PolarizedHamiltonian::constant(m11(), &[int(4)]).unwrap();
        assert!(differential(&c).unwrap().is_zero());
        let basic = PolarizedHamiltonian::new(m11(), vec![Poly::zero(1)], vec![Poly::var(1, 0)]).unwrap();
        assert!(differential(&basic).unwrap().component(0).dx()[0].is_zero());
    }

    #[test]
    fn field_of_xy() {
        let x = hamiltonian_field(&xy()).unwrap();
        assert_eq!(x.to_string(), "xi[1][1] = -x_1_1\neta[1] = y1");
        assert_eq!(contract_theta(&x).unwrap(), differential(&xy()).unwrap().negated());
    }

    #[test]
    fn field_of_y() {
        let h = PolarizedHamiltonian::new(m11(), vec![Poly::zero(1)], vec![Poly::var(1, 0)]).unwrap();
        let x = hamiltonian_field(&h).unwrap();
        assert_eq!(x, FoliateField::d_x(m11(), 0, 0).negated());
        let c = PolarizedHamiltonian::constant(m11(), &[int(2)]).unwrap();
        assert!(hamiltonian_field(&c).unwrap().is_zero());
    }

    #[test]
    fn polarization_detection() {
        let m = ModelManifold::new(2, 1).unwrap();
        let names = m.coordinate_names();
        let f = |s: &str| AffineExpr::from_poly(m, &parse_poly(s, &names).unwrap()).unwrap();
        let h = is_polarized_hamiltonian(m, &[f("x_1_1 + y1"), f("x_2_1 + 5")]).unwrap();
        assert_eq!(h.a(), &[Poly::one(1)]);
        assert_eq!(h.b()[0], Poly::var(1, 0));
        assert_eq!(h.b()[1], Poly::constant(1, int(5)));
        assert!(matches!(
            is_polarized_hamiltonian(m, &[f("x_2_1"), f("0")]),
            Err(PolarizationDefect::CrossComponent { p: 1, q: 2, i: 1 })
        ));
        assert!(matches!(
            is_polarized_hamiltonian(m, &[f("x_1_1"), f("2*x_2_1")]),
            Err(PolarizationDefect::Unshared { p: 2, i: 1, .. })
        ));
        assert!(matches!(
            is_polarized_hamiltonian(m, &[f("x_1_1")]),
            Err(PolarizationDefect::ComponentCount { .. })
        ));
        assert_eq!(is_polarized_hamiltonian(m, &h.components()).unwrap(), h);
    }

    #[test]
    fn display_and_arithmetic() {
        let h = xy();
        assert_eq!(h.to_string(), "a = [y1]; b = [0]");
        assert!(h.checked_sub(&h).unwrap().is_zero());
        assert_eq!(h.add_constant(&[int(1)]).unwrap().b()[0], Poly::one(1));
        assert!(PolarizedHamiltonian::new(m11(), vec![], vec![Poly::zero(1)]).is_err());
    }
}
