use num_traits::{One, Zero};

use super::{AffineExpr, FoliateField, ModelManifold, PolarizedHamiltonian};
use crate::error::{Error, Result};
use crate::symbolic::{BasicFn, Poly, Rational};

/// An adapted coordinate change with affine leaf map:
/// `ȳ = A y + c`, `x̄^{pi} = Σ_j x^{pj} (A⁻¹)_{ji} + φ^{pi}(y)`.
///
/// Only transitions that preserve `θ` are constructible. That holds iff
/// `Σ_i A_{il} φ^{pi}` is a `y`-gradient for every `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    manifold: ModelManifold,
    a: Vec<Rational>,
    a_inv: Vec<Rational>,
    c: Vec<Rational>,
    /// `φ^{pi}` at `manifold.x_index(p, i)`, polynomials in the old `y`.
    phi: Vec<BasicFn>,
    /// `y^j` as polynomials in `ȳ`.
    y_of_ybar: Vec<Poly>,
}

/// Inverse of a row-major `n×n` matrix by Gauss–Jordan elimination.
pub(crate) fn invert(n: usize, m: &[Rational]) -> Result<Vec<Rational>> {
    if m.len() != n * n {
        return Err(Error::Dimension(format!(
            "expected {} matrix entries, got {}",
            n * n,
            m.len()
        )));
    }
    let w = 2 * n;
    let mut aug = vec![Rational::zero(); n * w];
    for r in 0..n {
        for col in 0..n {
            aug[r * w + col] = m[r * n + col].clone();
        }
        aug[r * w + n + r] = Rational::one();
    }
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !aug[r * w + col].is_zero())
            .ok_or(Error::SingularMatrix)?;
        if pivot != col {
            for j in 0..w {
                aug.swap(pivot * w + j, col * w + j);
            }
        }
        let inv = aug[col * w + col].recip();
        for j in 0..w {
            aug[col * w + j] = &aug[col * w + j] * &inv;
        }
        for r in (0..n).filter(|&r| r != col) {
            let f = aug[r * w + col].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..w {
                let delta = &f * &aug[col * w + j];
                aug[r * w + j] -= delta;
            }
        }
    }
    Ok((0..n)
        .flat_map(|r| aug[r * w + n..r * w + w].to_vec())
        .collect())
}

impl Transition {
    /// `a` is row-major `n×n`, `c` has length `n`, `phi` has `k·n` entries
    /// in the old `y`.
    pub fn new(
        manifold: ModelManifold,
        a: Vec<Rational>,
        c: Vec<Rational>,
        phi: Vec<BasicFn>,
    ) -> Result<Self> {
        let (k, n) = (manifold.k(), manifold.n());
        if c.len() != n {
            return Err(Error::Arity {
                expected: n,
                actual: c.len(),
            });
        }
        if phi.len() != k * n {
            return Err(Error::Arity {
                expected: k * n,
                actual: phi.len(),
            });
        }
        if let Some(bad) = phi.iter().find(|f| f.nvars() != n) {
            return Err(Error::VariableMismatch {
                left: n,
                right: bad.nvars(),
            });
        }
        let a_inv = invert(n, &a)?;
        // y = A⁻¹ (ȳ - c)
        let y_of_ybar = (0..n)
            .map(|j| {
                let mut acc = Poly::zero(n);
                for l in 0..n {
                    let coeff = &a_inv[j * n + l];
                    if coeff.is_zero() {
                        continue;
                    }
                    let shifted = &Poly::var(n, l) - &Poly::constant(n, c[l].clone());
                    acc = &acc + &shifted.scale(coeff);
                }
                acc
            })
            .collect();
        let t = Transition {
            manifold,
            a,
            a_inv,
            c,
            phi,
            y_of_ybar,
        };
        t.check_theta()?;
        Ok(t)
    }

    pub fn identity(manifold: ModelManifold) -> Self {
        let n = manifold.n();
        let mut a = vec![Rational::zero(); n * n];
        for i in 0..n {
            a[i * n + i] = Rational::one();
        }
        let phi = vec![Poly::zero(n); manifold.k() * n];
        Self::new(manifold, a, vec![Rational::zero(); n], phi).expect("identity is valid")
    }

    /// `φ^{pi} = Σ_l (A⁻¹)_{li} ∂ψ^p/∂y^l`, which always preserves `θ`.
    pub fn from_potential(
        manifold: ModelManifold,
        a: Vec<Rational>,
        c: Vec<Rational>,
        psi: &[BasicFn],
    ) -> Result<Self> {
        let (k, n) = (manifold.k(), manifold.n());
        if psi.len() != k {
            return Err(Error::Arity {
                expected: k,
                actual: psi.len(),
            });
        }
        let a_inv = invert(n, &a)?;
        let mut phi = Vec::with_capacity(k * n);
        for psi_p in psi {
            let grad = (0..n).map(|l| psi_p.partial(l)).collect::<Result<Vec<_>>>()?;
            for i in 0..n {
                let mut acc = Poly::zero(n);
                for (l, g) in grad.iter().enumerate() {
                    acc = &acc + &g.scale(&a_inv[l * n + i]);
                }
                phi.push(acc);
            }
        }
        Self::new(manifold, a, c, phi)
    }

    fn check_theta(&self) -> Result<()> {
        let (k, n) = (self.manifold.k(), self.manifold.n());
        for p in 0..k {
            let g: Vec<Poly> = (0..n)
                .map(|l| {
                    (0..n).fold(Poly::zero(n), |acc, i| {
                        &acc + &self.phi[self.manifold.x_index(p, i)].scale(&self.a[i * n + l])
                    })
                })
                .collect();
            for l in 0..n {
                for m in l + 1..n {
                    if g[l].partial(m)? != g[m].partial(l)? {
                        return Err(Error::NotSymplectic(format!(
                            "Σ_i A_(i,l) φ^(p,i) is not a gradient for p={}, (l,m)=({},{})",
                            p + 1,
                            l + 1,
                            m + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn manifold(&self) -> ModelManifold {
        self.manifold
    }

    pub fn matrix(&self) -> &[Rational] {
        &self.a
    }

    pub fn inverse_matrix(&self) -> &[Rational] {
        &self.a_inv
    }

    pub fn shift(&self) -> &[Rational] {
        &self.c
    }

    pub fn phi(&self) -> &[BasicFn] {
        &self.phi
    }

    /// The transition back to the old coordinates:
    /// `A' = A⁻¹`, `c' = -A⁻¹c`, `φ'^{pj}(ȳ) = -Σ_i A_{ij} φ^{pi}(y(ȳ))`.
    pub fn inverse(&self) -> Result<Self> {
        let (k, n) = (self.manifold.k(), self.manifold.n());
        let c = (0..n)
            .map(|j| {
                -(0..n).fold(Rational::zero(), |acc, l| {
                    acc + &self.a_inv[j * n + l] * &self.c[l]
                })
            })
            .collect();
        let mut phi = Vec::with_capacity(k * n);
        for p in 0..k {
            for j in 0..n {
                let mut acc = Poly::zero(n);
                for i in 0..n {
                    let f = &self.phi[self.manifold.x_index(p, i)];
                    acc = &acc - &f.scale(&self.a[i * n + j]);
                }
                phi.push(acc.compose(&self.y_of_ybar)?);
            }
        }
        Self::new(self.manifold, self.a_inv.clone(), c, phi)
    }

    /// `f(y)` rewritten as a function of `ȳ`.
    pub fn transform_basic(&self, f: &BasicFn) -> Result<BasicFn> {
        f.compose(&self.y_of_ybar)
    }

    /// Substitutes `x^{ql} = Σ_i A_{il}(x̄^{qi} - φ^{qi})` and `y = y(ȳ)`.
    pub fn transform_affine(&self, f: &AffineExpr) -> Result<AffineExpr> {
        let m = self.manifold;
        self.manifold.ensure_same(&f.manifold())?;
        let (k, n) = (m.k(), m.n());
        let mut constant = f.constant().clone();
        let mut linear = vec![Poly::zero(n); k * n];
        for q in 0..k {
            for i in 0..n {
                let coeff = (0..n).fold(Poly::zero(n), |acc, l| {
                    &acc + &f.x_coeff(q, l).scale(&self.a[i * n + l])
                });
                if coeff.is_zero() {
                    continue;
                }
                constant = &constant - &(&coeff * &self.phi[m.x_index(q, i)]);
                linear[m.x_index(q, i)] = coeff;
            }
        }
        let constant = self.transform_basic(&constant)?;
        let linear = linear
            .iter()
            .map(|c| self.transform_basic(c))
            .collect::<Result<Vec<_>>>()?;
        AffineExpr::new(m, constant, linear)
    }

    /// `ā_i = Σ_l A_{il} a_l`, `b̄^p = b^p - Σ_i ā_i φ^{pi}`, all composed
    /// with `y(ȳ)`.
    pub fn transform_hamiltonian(&self, h: &PolarizedHamiltonian) -> Result<PolarizedHamiltonian> {
        let m = self.manifold;
        m.ensure_same(&h.manifold())?;
        let (k, n) = (m.k(), m.n());
        let a_bar: Vec<Poly> = (0..n)
            .map(|i| {
                (0..n).fold(Poly::zero(n), |acc, l| {
                    &acc + &h.a()[l].scale(&self.a[i * n + l])
                })
            })
            .collect();
        let b_bar = (0..k)
            .map(|p| {
                let shift = (0..n).fold(Poly::zero(n), |acc, i| {
                    &acc + &(&a_bar[i] * &self.phi[m.x_index(p, i)])
                });
                self.transform_basic(&(&h.b()[p] - &shift))
            })
            .collect::<Result<Vec<_>>>()?;
        let a_bar = a_bar
            .iter()
            .map(|f| self.transform_basic(f))
            .collect::<Result<Vec<_>>>()?;
        PolarizedHamiltonian::new(m, a_bar, b_bar)
    }

    /// Push-forward: `η̄^i = Σ_l A_{il} η^l` and
    /// `ξ̄^{pi} = Σ_j ξ^{pj} (A⁻¹)_{ji} + Σ_m η^m ∂φ^{pi}/∂y^m`, expressed in
    /// the new coordinates.
    pub fn transform_field(&self, x: &FoliateField) -> Result<FoliateField> {
        let m = self.manifold;
        m.ensure_same(&x.manifold())?;
        let (k, n) = (m.k(), m.n());
        let mut xi = Vec::with_capacity(k * n);
        for p in 0..k {
            for i in 0..n {
                let mut acc = AffineExpr::zero(m);
                for j in 0..n {
                    acc = &acc + &x.xi(p, j).scale(&self.a_inv[j * n + i]);
                }
                let phi = &self.phi[m.x_index(p, i)];
                let mut basic = Poly::zero(n);
                for mm in 0..n {
                    basic = &basic + &(x.eta(mm) * &phi.partial(mm)?);
                }
                acc = &acc + &AffineExpr::basic(m, basic)?;
                xi.push(self.transform_affine(&acc)?);
            }
        }
        let eta = (0..n)
            .map(|i| {
                let lin = (0..n).fold(Poly::zero(n), |acc, l| {
                    &acc + &x.eta(l).scale(&self.a[i * n + l])
                });
                self.transform_basic(&lin)
            })
            .collect::<Result<Vec<_>>>()?;
        FoliateField::new(m, xi, eta)
    }
}
