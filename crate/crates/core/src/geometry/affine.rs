use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use super::ModelManifold;
use crate::error::{Error, Result};
use crate::symbolic::{BasicFn, Poly, Rational};

/// `c₀(y) + Σ_{q,j} c_{qj}(y) x^{qj}`: a function affine in `x` with basic
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineExpr {
    manifold: ModelManifold,
    constant: BasicFn,
    /// `c_{qj}` at `manifold.x_index(q, j)`.
    linear: Vec<BasicFn>,
}

impl AffineExpr {
    pub fn new(manifold: ModelManifold, constant: BasicFn, linear: Vec<BasicFn>) -> Result<Self> {
        let n = manifold.n();
        if linear.len() != manifold.k() * n {
            return Err(Error::Dimension(format!(
                "affine expression needs {} x-coefficients, got {}",
                manifold.k() * n,
                linear.len()
            )));
        }
        if constant.nvars() != n || linear.iter().any(|c| c.nvars() != n) {
            return Err(Error::Dimension(format!(
                "affine coefficients must be polynomials in {n} y-variables"
            )));
        }
        Ok(AffineExpr {
            manifold,
            constant,
            linear,
        })
    }

    pub fn zero(manifold: ModelManifold) -> Self {
        let n = manifold.n();
        AffineExpr {
            manifold,
            constant: Poly::zero(n),
            linear: vec![Poly::zero(n); manifold.k() * n],
        }
    }

    /// A basic function viewed as an affine expression (no `x` terms).
    pub fn basic(manifold: ModelManifold, f: BasicFn) -> Result<Self> {
        let mut out = Self::zero(manifold);
        if f.nvars() != manifold.n() {
            return Err(Error::VariableMismatch {
                left: manifold.n(),
                right: f.nvars(),
            });
        }
        out.constant = f;
        Ok(out)
    }

    /// The coordinate function `x^{pi}`.
    pub fn x(manifold: ModelManifold, p: usize, i: usize) -> Self {
        let mut out = Self::zero(manifold);
        out.linear[manifold.x_index(p, i)] = Poly::one(manifold.n());
        out
    }

    pub fn manifold(&self) -> ModelManifold {
        self.manifold
    }

    pub fn constant(&self) -> &BasicFn {
        &self.constant
    }

    /// `∂/∂x^{qj}`, a basic function.
    pub fn x_coeff(&self, q: usize, j: usize) -> &BasicFn {
        &self.linear[self.manifold.x_index(q, j)]
    }

    pub fn x_coeffs(&self) -> &[BasicFn] {
        &self.linear
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.is_basic()
    }

    /// True when there is no `x` dependence.
    pub fn is_basic(&self) -> bool {
        self.linear.iter().all(Poly::is_zero)
    }

    fn map(&self, f: impl Fn(&Poly) -> Poly) -> AffineExpr {
        AffineExpr {
            manifold: self.manifold,
            constant: f(&self.constant),
            linear: self.linear.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &AffineExpr, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<AffineExpr> {
        self.manifold.ensure_same(&other.manifold)?;
        Ok(AffineExpr {
            manifold: self.manifold,
            constant: f(&self.constant, &other.constant),
            linear: self
                .linear
                .iter()
                .zip(&other.linear)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn checked_add(&self, other: &AffineExpr) -> Result<AffineExpr> {
        self.zip(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &AffineExpr) -> Result<AffineExpr> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> AffineExpr {
        self.map(|p| p.scale(c))
    }

    /// Product with a basic function; stays affine.
    pub fn mul_basic(&self, f: &BasicFn) -> Result<AffineExpr> {
        if f.nvars() != self.manifold.n() {
            return Err(Error::VariableMismatch {
                left: self.manifold.n(),
                right: f.nvars(),
            });
        }
        Ok(self.map(|p| p * f))
    }

    /// Product of two affine expressions, defined when at least one factor
    /// is basic.
    pub fn try_mul(&self, other: &AffineExpr) -> Result<AffineExpr> {
        self.manifold.ensure_same(&other.manifold)?;
        if other.is_basic() {
            self.mul_basic(&other.constant)
        } else if self.is_basic() {
            other.mul_basic(&self.constant)
        } else {
            Err(Error::Dimension(
                "product of two x-dependent affine expressions is not affine".into(),
            ))
        }
    }

    /// `∂/∂y^s`, coefficient-wise.
    pub fn partial_y(&self, s: usize) -> Result<AffineExpr> {
        let constant = self.constant.partial(s)?;
        let linear = self
            .linear
            .iter()
            .map(|c| c.partial(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(AffineExpr {
            manifold: self.manifold,
            constant,
            linear,
        })
    }

    /// The same function as a polynomial in all `n(k+1)` coordinates, in
    /// the order of [`ModelManifold::coordinate_names`].
    pub fn to_poly(&self) -> Poly {
        let m = self.manifold;
        let total = m.dimension();
        let offset = m.k() * m.n();
        let mut out = self.constant.embed(total, offset).expect("in range");
        for (idx, c) in self.linear.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = &c.embed(total, offset).expect("in range") * &Poly::var(total, idx);
            out = &out + &term;
        }
        out
    }

    /// Inverse of [`AffineExpr::to_poly`]; fails unless `f` is affine in `x`.
    pub fn from_poly(manifold: ModelManifold, f: &Poly) -> Result<AffineExpr> {
        let total = manifold.dimension();
        if f.nvars() != total {
            return Err(Error::VariableMismatch {
                left: total,
                right: f.nvars(),
            });
        }
        let nx = manifold.k() * manifold.n();
        let n = manifold.n();
        let mut constant_terms = Vec::new();
        let mut linear_terms: Vec<Vec<(Vec<u32>, Rational)>> = vec![Vec::new(); nx];
        for (mono, c) in f.terms() {
            let exps = mono.exponents();
            let x_degree: u32 = exps[..nx].iter().sum();
            let y_part = exps[nx..].to_vec();
            match x_degree {
                0 => constant_terms.push((y_part, c.clone())),
                1 => {
                    let idx = exps[..nx].iter().position(|&e| e == 1).expect("degree 1");
                    linear_terms[idx].push((y_part, c.clone()));
                }
                _ => {
                    return Err(Error::Dimension(format!(
                        "expression has degree {x_degree} in the x-coordinates"
                    )))
                }
            }
        }
        let constant = Poly::from_terms(n, constant_terms)?;
        let linear = linear_terms
            .into_iter()
            .map(|t| Poly::from_terms(n, t))
            .collect::<Result<Vec<_>>>()?;
        AffineExpr::new(manifold, constant, linear)
    }

    /// Evaluates at `x` (row-major `k×n`) and `y`.
    pub fn eval_f64(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != self.linear.len() {
            return Err(Error::Arity {
                expected: self.linear.len(),
                actual: x.len(),
            });
        }
        let mut acc = self.constant.eval_f64(y)?;
        for (c, xv) in self.linear.iter().zip(x) {
            if !c.is_zero() {
                acc += c.eval_f64(y)? * xv;
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        if x.len() != self.linear.len() {
            return Err(Error::Arity {
                expected: self.linear.len(),
                actual: x.len(),
            });
        }
        let mut acc = self.constant.eval(y)?;
        for (c, xv) in self.linear.iter().zip(x) {
            if !c.is_zero() && !xv.is_zero() {
                acc += c.eval(y)? * xv;
            }
        }
        Ok(acc)
    }
}

/// Canonical form: the full-coordinate polynomial with `x_p_i` and `y_i`
/// names, graded-lex order.
impl fmt::Display for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.manifold.coordinate_names();
        self.to_poly().display_with(&names).fmt(f)
    }
}

impl Add<&AffineExpr> for &AffineExpr {
    type Output = AffineExpr;
    fn add(self, rhs: &AffineExpr) -> AffineExpr {
        self.checked_add(rhs).expect("affine expressions on different manifolds")
    }
}

impl Sub<&AffineExpr> for &AffineExpr {
    type Output = AffineExpr;
    fn sub(self, rhs: &AffineExpr) -> AffineExpr {
        self.checked_sub(rhs).expect("affine expressions on different manifolds")
    }
}

impl Neg for &AffineExpr {
    type Output = AffineExpr;
    fn neg(self) -> AffineExpr {
        self.map(|p| -p)
    }
}
