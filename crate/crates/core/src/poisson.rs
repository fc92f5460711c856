//! Polarized vectorial Poisson brackets on polarized Hamiltonians.
//!
//! The subordinate bracket is `{H,K}^p = Σ_i (∂H^p/∂y^i ∂K^p/∂x^{pi} -
//! ∂H^p/∂x^{pi} ∂K^p/∂y^i)`. On `hom(G, R^{k+1})` the linear bracket is
//! `{H,K}^L = Σ_l (Σ_{i,j} C_{ij}^l a^i a'^j) x^p_l ⊗ v_p`. Both return
//! polarized Hamiltonians, and both have Hamiltonian fields with
//! `X_H(K) = {K,H}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{hamiltonian_field, AffineExpr, FoliateField, ModelManifold, PolarizedHamiltonian};
use crate::lie_algebra::LieAlgebra;
use crate::symbolic::{rat, BasicFn, Poly, Rational};

/// Σ_i (f_i ∂g/∂y^i) for a vector field `f` on the leaf space.
fn derivative_along(f: &[BasicFn], g: &BasicFn) -> Result<BasicFn> {
    let mut acc = Poly::zero(g.nvars());
    for (i, fi) in f.iter().enumerate() {
        if fi.is_zero() {
            continue;
        }
        acc = &acc + &(fi * &g.partial(i)?);
    }
    Ok(acc)
}

/// `{H,K}` with `a''_j = Σ_i (a'_i ∂a_j/∂y^i - a_i ∂a'_j/∂y^i)` and
/// `b''^p = Σ_i (a'_i ∂b^p/∂y^i - a_i ∂b'^p/∂y^i)`.
pub fn subordinate_bracket(
    h: &PolarizedHamiltonian,
    k: &PolarizedHamiltonian,
) -> Result<PolarizedHamiltonian> {
    let m = h.manifold();
    m.ensure_same(&k.manifold())?;
    let (a, ap) = (h.a(), k.a());
    let combine = |f: &BasicFn, g: &BasicFn| -> Result<BasicFn> {
        Ok(&derivative_along(ap, f)? - &derivative_along(a, g)?)
    };
    let a2 = a
        .iter()
        .zip(ap)
        .map(|(f, g)| combine(f, g))
        .collect::<Result<Vec<_>>>()?;
    let b2 = h
        .b()
        .iter()
        .zip(k.b())
        .map(|(f, g)| combine(f, g))
        .collect::<Result<Vec<_>>>()?;
    PolarizedHamiltonian::new(m, a2, b2)
}

fn check_algebra_dim(algebra: &LieAlgebra, m: ModelManifold) -> Result<()> {
    if algebra.dim() != m.n() {
        return Err(Error::Dimension(format!(
            "Lie algebra of dimension {} on a manifold with n={}",
            algebra.dim(),
            m.n()
        )));
    }
    Ok(())
}

/// `{H,K}^L`; rejects `L` unless it passes validation.
pub fn linear_bracket(
    algebra: &LieAlgebra,
    h: &PolarizedHamiltonian,
    k: &PolarizedHamiltonian,
) -> Result<PolarizedHamiltonian> {
    algebra.ensure_valid()?;
    linear_bracket_unchecked(algebra, h, k)
}

/// `{H,K}^L` for arbitrary structure constants, valid or not.
pub fn linear_bracket_unchecked(
    algebra: &LieAlgebra,
    h: &PolarizedHamiltonian,
    k: &PolarizedHamiltonian,
) -> Result<PolarizedHamiltonian> {
    let m = h.manifold();
    m.ensure_same(&k.manifold())?;
    check_algebra_dim(algebra, m)?;
    let n = m.n();
    let mut a2 = vec![Poly::zero(n); n];
    for i in 0..n {
        for j in 0..n {
            let prod = &h.a()[i] * &k.a()[j];
            if prod.is_zero() {
                continue;
            }
            for (l, out) in a2.iter_mut().enumerate() {
                let c = algebra.constant(i, j, l);
                if !num_traits::Zero::is_zero(c) {
                    *out = &*out + &prod.scale(c);
                }
            }
        }
    }
    PolarizedHamiltonian::new(m, a2, vec![Poly::zero(n); m.k()])
}

/// `(dH^p_X ∘ j_q)(ω^i) = δ^p_q a^i`, 0-based `p`, `q`.
pub fn gradient_restriction(h: &PolarizedHamiltonian, p: usize, q: usize) -> Result<Vec<BasicFn>> {
    let m = h.manifold();
    for idx in [p, q] {
        if idx >= m.k() {
            return Err(Error::IndexOutOfRange(format!(
                "component {} of {}",
                idx + 1,
                m.k()
            )));
        }
    }
    if p == q {
        Ok(h.a().to_vec())
    } else {
        Ok(vec![Poly::zero(m.n()); m.n()])
    }
}

/// The field of `H` for the linear bracket: `η = 0`,
/// `ξ^{pi} = Σ_{j,l} C_{ij}^l a^j x^p_l`, so that `X_H(K) = {K,H}^L`.
pub fn linear_hamiltonian_field(algebra: &LieAlgebra, h: &PolarizedHamiltonian) -> Result<FoliateField> {
    let m = h.manifold();
    check_algebra_dim(algebra, m)?;
    let (k, n) = (m.k(), m.n());
    let mut xi = Vec::with_capacity(k * n);
    for p in 0..k {
        for i in 0..n {
            let mut linear = vec![Poly::zero(n); k * n];
            for (j, aj) in h.a().iter().enumerate() {
                if aj.is_zero() {
                    continue;
                }
                for l in 0..n {
                    let c = algebra.constant(i, j, l);
                    if !num_traits::Zero::is_zero(c) {
                        let slot = &mut linear[m.x_index(p, l)];
                        *slot = &*slot + &aj.scale(c);
                    }
                }
            }
            xi.push(AffineExpr::new(m, Poly::zero(n), linear)?);
        }
    }
    FoliateField::new(m, xi, vec![Poly::zero(n); n])
}

/// Which bracket to use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BracketKind {
    Subordinate,
    Linear(LieAlgebra),
}

impl BracketKind {
    /// Linear bracket of a validated algebra.
    pub fn linear(algebra: LieAlgebra) -> Result<Self> {
        algebra.ensure_valid()?;
        Ok(BracketKind::Linear(algebra))
    }

    /// Linear bracket without validation; for negative controls.
    pub fn linear_unchecked(algebra: LieAlgebra) -> Self {
        BracketKind::Linear(algebra)
    }

    pub fn bracket(&self, h: &PolarizedHamiltonian, k: &PolarizedHamiltonian) -> Result<PolarizedHamiltonian> {
        match self {
            BracketKind::Subordinate => subordinate_bracket(h, k),
            BracketKind::Linear(l) => linear_bracket_unchecked(l, h, k),
        }
    }

    /// `X_H` with `X_H(K) = {K,H}`.
    pub fn field(&self, h: &PolarizedHamiltonian) -> Result<FoliateField> {
        match self {
            BracketKind::Subordinate => hamiltonian_field(h),
            BracketKind::Linear(l) => linear_hamiltonian_field(l, h),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BracketKind::Subordinate => "subordinate",
            BracketKind::Linear(_) => "linear",
        }
    }
}

/// `{{H,K},G} + {{K,G},H} + {{G,H},K}`.
pub fn jacobiator(
    kind: &BracketKind,
    h: &PolarizedHamiltonian,
    k: &PolarizedHamiltonian,
    g: &PolarizedHamiltonian,
) -> Result<PolarizedHamiltonian> {
    let b = |x: &PolarizedHamiltonian, y: &PolarizedHamiltonian| kind.bracket(x, y);
    let t1 = b(&b(h, k)?, g)?;
    let t2 = b(&b(k, g)?, h)?;
    let t3 = b(&b(g, h)?, k)?;
    t1.checked_add(&t2)?.checked_add(&t3)
}

/// `[X_H, X_K] - X_{{K,H}}`, which vanishes for both brackets.
pub fn homomorphism_defect(
    kind: &BracketKind,
    h: &PolarizedHamiltonian,
    k: &PolarizedHamiltonian,
) -> Result<FoliateField> {
    let lhs = kind.field(h)?.lie_bracket(&kind.field(k)?)?;
    let rhs = kind.field(&kind.bracket(k, h)?)?;
    lhs.checked_sub(&rhs)
}

/// Hamiltonians with constant unit `a`-vectors along the first Jacobi
/// violation of `algebra`, and their nonzero jacobiator. `None` when the
/// algebra satisfies Jacobi.
pub fn jacobi_witness(
    algebra: &LieAlgebra,
    k: usize,
) -> Result<Option<([PolarizedHamiltonian; 3], PolarizedHamiltonian)>> {
    let m = ModelManifold::new(k, algebra.dim())?;
    let n = m.n();
    let unit = |i: usize| -> Result<PolarizedHamiltonian> {
        let mut a = vec![Poly::zero(n); n];
        a[i] = Poly::one(n);
        PolarizedHamiltonian::new(m, a, vec![Poly::zero(n); k])
    };
    let kind = BracketKind::linear_unchecked(algebra.clone());
    for v in algebra.validate().jacobi {
        let triple = [unit(v.i)?, unit(v.j)?, unit(v.k)?];
        let jac = jacobiator(&kind, &triple[0], &triple[1], &triple[2])?;
        if !jac.is_zero() {
            return Ok(Some((triple, jac)));
        }
    }
    Ok(None)
}

/// Outcome of one axiom over a sample set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub cases: usize,
    /// First failing case, if any.
    pub witness: Option<String>,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub bracket: &'static str,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, c) in self.checks.iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            match &c.witness {
                None => write!(f, "{}: pass ({} cases)", c.name, c.cases)?,
                Some(w) => write!(f, "{}: FAIL: {w}", c.name)?,
            }
        }
        Ok(())
    }
}

struct Recorder {
    name: &'static str,
    cases: usize,
    witness: Option<String>,
}

impl Recorder {
    fn new(name: &'static str) -> Self {
        Recorder {
            name,
            cases: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn finish(self) -> AxiomCheck {
        AxiomCheck {
            name: self.name,
            cases: self.cases,
            witness: self.witness,
        }
    }
}

/// Checks the four axioms of a polarized Poisson structure, exactly, on
/// `samples`. Pairs and triples are taken cyclically: `(H_i, H_{i+1})` and
/// `(H_i, H_{i+1}, H_{i+2})`.
pub fn verify_axioms(
    kind: &BracketKind,
    manifold: ModelManifold,
    samples: &[PolarizedHamiltonian],
) -> Result<AxiomReport> {
    if samples.is_empty() {
        return Err(Error::Input("verify_axioms needs at least one sample".into()));
    }
    if let Some(s) = samples.iter().find(|s| s.manifold() != manifold) {
        manifold.ensure_same(&s.manifold())?;
    }
    if let BracketKind::Linear(l) = kind {
        check_algebra_dim(l, manifold)?;
    }
    let len = samples.len();
    let at = |i: usize| &samples[i % len];
    let (alpha, beta): (Rational, Rational) = (rat(2, 1), rat(-1, 3));

    let mut bilinear = Recorder::new("bilinearity");
    let mut antisym = Recorder::new("antisymmetry");
    let mut jacobi = Recorder::new("jacobi");
    let mut basic = Recorder::new("vanishes on basic functions");
    let mut field = Recorder::new("foliate hamiltonian field");

    for i in 0..len {
        let (h, k, g) = (at(i), at(i + 1), at(i + 2));

        let combo = h.scale(&alpha).checked_add(&k.scale(&beta))?;
        let left = kind.bracket(&combo, g)?;
        let expected = kind
            .bracket(h, g)?
            .scale(&alpha)
            .checked_add(&kind.bracket(k, g)?.scale(&beta))?;
        let right = kind.bracket(g, &combo)?;
        let expected_r = kind
            .bracket(g, h)?
            .scale(&alpha)
            .checked_add(&kind.bracket(g, k)?.scale(&beta))?;
        bilinear.record(left == expected && right == expected_r, || {
            format!("samples ({i}, {})", (i + 1) % len)
        });

        let hk = kind.bracket(h, k)?;
        let kh = kind.bracket(k, h)?;
        antisym.record(hk == kh.negated(), || {
            format!("{{H,K}} + {{K,H}} != 0 for samples ({i}, {})", (i + 1) % len)
        });
        let hh = kind.bracket(h, h)?;
        antisym.record(hh.is_zero(), || format!("{{H,H}} = {hh} for sample {i}"));

        let jac = jacobiator(kind, h, k, g)?;
        jacobi.record(jac.is_zero(), || {
            format!(
                "jacobiator of samples ({i}, {}, {}) = {jac}",
                (i + 1) % len,
                (i + 2) % len
            )
        });

        let bb = kind.bracket(&h.basic_part(), &k.basic_part())?;
        basic.record(bb.is_zero(), || {
            format!("basic parts of samples ({i}, {}) bracket to {bb}", (i + 1) % len)
        });

        let xh = kind.field(h)?;
        let mut ok = true;
        for p in 0..manifold.k() {
            ok &= xh.apply(&k.component(p)?)? == kh.component(p)?;
        }
        field.record(ok, || {
            format!("X_H(K) != {{K,H}} for samples ({i}, {})", (i + 1) % len)
        });
    }
    Ok(AxiomReport {
        bracket: kind.name(),
        checks: vec![
            bilinear.finish(),
            antisym.finish(),
            jacobi.finish(),
            basic.finish(),
            field.finish(),
        ],
    })
}
