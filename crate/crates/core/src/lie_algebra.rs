//! Finite-dimensional Lie algebras given by exact structure constants.
//!
//! Indices are 0-based in the API and 1-based in every printed or JSON form.
//! `C[i][j][l]` is the coefficient of `e_l` in `[e_i, e_j]`.
//!
//! Maurer–Cartan data uses the convention `dω^l(e_i, e_j) = -ω^l([e_i, e_j])`,
//! so `dω^l = Σ_{i<j} d^l_{ij} ω^i ∧ ω^j` corresponds to `C[i][j][l] = -d^l_{ij}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::symbolic::{format_rational, int, Rational};

/// `(l, C[i][j][l])` for the nonzero entries of one bracket.
pub type BracketCoeffs = Vec<(usize, Rational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    constants: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntisymmetryViolation {
    pub i: usize,
    pub j: usize,
    pub l: usize,
    /// `C[i][j][l] + C[j][i][l]`, which should vanish.
    pub excess: Rational,
}

/// A nonzero component of the Jacobi sum
/// `Σ_m C[i][j][m]C[m][k][l] + C[j][k][m]C[m][i][l] + C[k][i][m]C[m][j][l]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub value: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub antisymmetry: Vec<AntisymmetryViolation>,
    pub jacobi: Vec<JacobiViolation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.antisymmetry.is_empty() && self.jacobi.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("ok");
        }
        let mut lines = Vec::new();
        for v in &self.antisymmetry {
            lines.push(format!(
                "antisymmetry violated at (i,j,l)=({},{},{}): C[i][j][l] + C[j][i][l] = {}",
                v.i + 1,
                v.j + 1,
                v.l + 1,
                format_rational(&v.excess)
            ));
        }
        for v in &self.jacobi {
            lines.push(format!(
                "Jacobi violated at (i,j,k)=({},{},{}), component e{}: {}",
                v.i + 1,
                v.j + 1,
                v.k + 1,
                v.l + 1,
                format_rational(&v.value)
            ));
        }
        f.write_str(&lines.join("\n"))
    }
}

impl LieAlgebra {
    /// Takes the raw tensor in `[i][j][l]` row-major order. No validation is
    /// performed, so non-Lie tensors can be represented and diagnosed.
    pub fn from_structure_constants(dim: usize, constants: Vec<Rational>) -> Result<Self> {
        if constants.len() != dim * dim * dim {
            return Err(Error::Dimension(format!(
                "structure tensor of a {dim}-dimensional algebra needs {} entries, got {}",
                dim * dim * dim,
                constants.len()
            )));
        }
        Ok(LieAlgebra { dim, constants })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            constants: vec![Rational::zero(); dim * dim * dim],
        }
    }

    /// Builds an antisymmetric tensor from `[e_i, e_j] ∋ coeff·e_l` entries.
    /// Each entry also sets its partner `C[j][i][l]`; repeated entries add.
    pub fn from_brackets<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, Rational)>,
    {
        let mut alg = Self::abelian(dim);
        for (i, j, l, c) in entries {
            if i >= dim || j >= dim || l >= dim {
                return Err(Error::IndexOutOfRange(format!(
                    "bracket entry ({},{},{}) in dimension {dim}",
                    i + 1,
                    j + 1,
                    l + 1
                )));
            }
            if i == j {
                if c.is_zero() {
                    continue;
                }
                return Err(Error::InvalidAlgebra(format!(
                    "[e{0}, e{0}] must vanish",
                    i + 1
                )));
            }
            let ij = alg.index(i, j, l);
            let ji = alg.index(j, i, l);
            alg.constants[ij] += &c;
            alg.constants[ji] -= &c;
        }
        Ok(alg)
    }

    fn index(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.dim + j) * self.dim + l
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `C[i][j][l]`. Panics on out-of-range indices.
    pub fn constant(&self, i: usize, j: usize, l: usize) -> &Rational {
        &self.constants[self.index(i, j, l)]
    }

    pub fn constants(&self) -> &[Rational] {
        &self.constants
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.iter().all(Zero::is_zero)
    }

    /// Nonzero brackets `[e_i, e_j]` with `i < j`, as `(i, j, [(l, coeff)])`.
    pub fn brackets(&self) -> Vec<(usize, usize, BracketCoeffs)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let coeffs: Vec<_> = (0..n)
                    .filter_map(|l| {
                        let c = self.constant(i, j, l);
                        (!c.is_zero()).then(|| (l, c.clone()))
                    })
                    .collect();
                if !coeffs.is_empty() {
                    out.push((i, j, coeffs));
                }
            }
        }
        out
    }

    fn jacobi_component(&self, i: usize, j: usize, k: usize, l: usize) -> Rational {
        let mut s = Rational::zero();
        for m in 0..self.dim {
            s += self.constant(i, j, m) * self.constant(m, k, l);
            s += self.constant(j, k, m) * self.constant(m, i, l);
            s += self.constant(k, i, m) * self.constant(m, j, l);
        }
        s
    }

    /// Lists every antisymmetry and Jacobi violation. Empty iff the tensor
    /// defines a Lie algebra.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim;
        let mut report = ValidationReport::default();
        for i in 0..n {
            for j in i..n {
                for l in 0..n {
                    let excess = self.constant(i, j, l) + self.constant(j, i, l);
                    if !excess.is_zero() {
                        report
                            .antisymmetry
                            .push(AntisymmetryViolation { i, j, l, excess });
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let value = self.jacobi_component(i, j, k, l);
                        if !value.is_zero() {
                            report.jacobi.push(JacobiViolation { i, j, k, l, value });
                        }
                    }
                }
            }
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Fails with the first violation if the tensor is not a Lie algebra.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_empty() {
            Ok(())
        } else {
            let first = report.to_string();
            let first = first.lines().next().unwrap_or_default().to_string();
            Err(Error::InvalidAlgebra(first))
        }
    }

    /// `w_l = Σ_{i,j} C[i][j][l] u_i v_j`.
    pub fn bracket_vectors(&self, u: &[Rational], v: &[Rational]) -> Result<Vec<Rational>> {
        for len in [u.len(), v.len()] {
            if len != self.dim {
                return Err(Error::Arity {
                    expected: self.dim,
                    actual: len,
                });
            }
        }
        let n = self.dim;
        let mut w = vec![Rational::zero(); n];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let uv = ui * vj;
                for (l, wl) in w.iter_mut().enumerate() {
                    let c = self.constant(i, j, l);
                    if !c.is_zero() {
                        *wl += c * &uv;
                    }
                }
            }
        }
        Ok(w)
    }

    /// Exports `dω^l = Σ_{i<j} d^l_{ij} ω^i ∧ ω^j` with `d^l_{ij} = -C[i][j][l]`.
    pub fn to_maurer_cartan(&self) -> MaurerCartanData {
        let mut d = BTreeMap::new();
        for (i, j, coeffs) in self.brackets() {
            for (l, c) in coeffs {
                d.insert((l, i, j), -c);
            }
        }
        MaurerCartanData { dim: self.dim, d }
    }

    /// Catalog lookup: `abelian(n)`, `heisenberg3`, `h3_plus_a`, `n4`.
    pub fn builtin(name: &str) -> Result<Self> {
        let name = name.trim();
        if let Some(arg) = name
            .strip_prefix("abelian(")
            .and_then(|rest| rest.strip_suffix(')'))
        {
            let dim: usize = arg
                .trim()
                .parse()
                .map_err(|_| Error::UnknownAlgebra(name.to_string()))?;
            return Ok(Self::abelian(dim));
        }
        match name {
            "heisenberg3" => Self::from_brackets(3, [(0, 1, 2, Rational::one())]),
            "h3_plus_a" => from_maurer_cartan(&MaurerCartanData::new(4, [(0, 1, 2, int(1))])?),
            "n4" => from_maurer_cartan(&MaurerCartanData::new(
                4,
                [(2, 0, 1, int(1)), (3, 0, 2, int(1))],
            )?),
            _ => Err(Error::UnknownAlgebra(name.to_string())),
        }
    }

    /// The four example algebras, by catalog name.
    pub fn catalog() -> Vec<(&'static str, LieAlgebra)> {
        ["abelian(2)", "heisenberg3", "h3_plus_a", "n4"]
            .into_iter()
            .map(|name| (name, Self::builtin(name).expect("catalog algebra")))
            .collect()
    }
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let brackets = self.brackets();
        if brackets.is_empty() {
            return write!(f, "abelian, dim {}", self.dim);
        }
        let parts: Vec<String> = brackets
            .into_iter()
            .map(|(i, j, coeffs)| {
                let rhs: Vec<String> = coeffs
                    .iter()
                    .map(|(l, c)| {
                        if c.is_one() {
                            format!("e{}", l + 1)
                        } else if *c == -Rational::one() {
                            format!("-e{}", l + 1)
                        } else {
                            format!("{}*e{}", format_rational(c), l + 1)
                        }
                    })
                    .collect();
                format!("[e{}, e{}] = {}", i + 1, j + 1, rhs.join(" + "))
            })
            .collect();
        f.write_str(&parts.join("; "))
    }
}

/// Exterior derivatives of the dual basis: `dω^l = Σ_{i<j} d^l_{ij} ω^i ∧ ω^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaurerCartanData {
    dim: usize,
    /// `(l, i, j) -> d^l_{ij}`, `i < j`, no zero entries.
    d: BTreeMap<(usize, usize, usize), Rational>,
}

impl MaurerCartanData {
    /// Entries are `(l, i, j, coeff)` with `i < j`; repeated entries add.
    pub fn new<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, Rational)>,
    {
        let mut d: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for (l, i, j, c) in entries {
            if l >= dim || i >= dim || j >= dim {
                return Err(Error::IndexOutOfRange(format!(
                    "Maurer–Cartan entry (l,i,j)=({},{},{}) in dimension {dim}",
                    l + 1,
                    i + 1,
                    j + 1
                )));
            }
            if i >= j {
                return Err(Error::Input(format!(
                    "Maurer–Cartan entry needs i < j, got i={} j={}",
                    i + 1,
                    j + 1
                )));
            }
            *d.entry((l, i, j)).or_insert_with(Rational::zero) += c;
        }
        d.retain(|_, c| !c.is_zero());
        Ok(MaurerCartanData { dim, d })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nonzero entries as `((l, i, j), d^l_{ij})`.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Rational)> {
        self.d.iter()
    }
}

/// Converts Maurer–Cartan data to structure constants (`C[i][j][l] = -d^l_{ij}`)
/// and rejects the result unless it is a Lie algebra.
pub fn from_maurer_cartan(m: &MaurerCartanData) -> Result<LieAlgebra> {
    let alg = LieAlgebra::from_brackets(
        m.dim,
        m.d.iter().map(|(&(l, i, j), c)| (i, j, l, -c.clone())),
    )?;
    alg.ensure_valid()?;
    Ok(alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::rat;

    fn unit(n: usize, i: usize) -> Vec<Rational> {
        (0..n).map(|k| if k == i { int(1) } else { int(0) }).collect()
    }

    #[test]
    fn abelian_is_valid() {
        assert!(LieAlgebra::abelian(3).validate().is_empty());
        let a2 = LieAlgebra::builtin("abelian(2)").unwrap();
        assert!(a2.constants().iter().all(Zero::is_zero));
        assert_eq!(a2.dim(), 2);
    }

    #[test]
    fn heisenberg() {
        let h = LieAlgebra::builtin("heisenberg3").unwrap();
        assert!(h.validate().is_empty());
        assert_eq!(h.constant(0, 1, 2), &int(1));
        assert_eq!(h.constant(1, 0, 2), &int(-1));
        assert_eq!(
            h.bracket_vectors(&unit(3, 0), &unit(3, 1)).unwrap(),
            unit(3, 2)
        );
        assert_eq!(h.to_string(), "[e1, e2] = e3");
    }

    #[test]
    fn self_bracket_vanishes() {
        let h = LieAlgebra::builtin("n4").unwrap();
        let u = vec![rat(1, 2), int(-3), int(2), rat(5, 7)];
        assert!(h.bracket_vectors(&u, &u).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn maurer_cartan_signs() {
        // dω1 = ω2∧ω3  =>  [e2, e3] = -e1
        let h3a = LieAlgebra::builtin("h3_plus_a").unwrap();
        assert_eq!(h3a.constant(1, 2, 0), &int(-1));
        assert_eq!(h3a.brackets().len(), 1);

        let n4 = LieAlgebra::builtin("n4").unwrap();
        assert_eq!(n4.dim(), 4);
        assert_eq!(n4.brackets().len(), 2);
        assert_eq!(
            n4.bracket_vectors(&unit(4, 0), &unit(4, 1)).unwrap(),
            unit(4, 2).iter().map(|c| -c).collect::<Vec<_>>()
        );
        assert_eq!(n4.constant(0, 2, 3), &int(-1));
        assert_eq!(n4.to_string(), "[e1, e2] = -e3; [e1, e3] = -e4");
    }

    #[test]
    fn zero_maurer_cartan_is_abelian() {
        let m = MaurerCartanData::new(3, std::iter::empty()).unwrap();
        assert_eq!(from_maurer_cartan(&m).unwrap(), LieAlgebra::abelian(3));
    }

    #[test]
    fn maurer_cartan_round_trip() {
        for (_, alg) in LieAlgebra::catalog() {
            let m = alg.to_maurer_cartan();
            assert_eq!(from_maurer_cartan(&m).unwrap(), alg);
            assert_eq!(from_maurer_cartan(&m).unwrap().to_maurer_cartan(), m);
        }
    }

    #[test]
    fn maurer_cartan_rejects_non_lie_data() {
        // dω1 = ω1∧ω3, dω2 = ω1∧ω2 fails d² = 0
        let m = MaurerCartanData::new(3, [(0, 0, 2, int(1)), (1, 0, 1, int(1))]).unwrap();
        let alg = LieAlgebra::from_brackets(
            3,
            m.entries().map(|(&(l, i, j), c)| (i, j, l, -c.clone())),
        )
        .unwrap();
        assert!(!alg.validate().jacobi.is_empty());
        assert!(matches!(
            from_maurer_cartan(&m),
            Err(Error::InvalidAlgebra(_))
        ));
        assert!(MaurerCartanData::new(3, [(0, 2, 1, int(1))]).is_err());
    }

    #[test]
    fn jacobi_violation_is_reported() {
        // heisenberg3 plus [e1, e3] = e1 breaks Jacobi at (1,2,3)
        let broken = LieAlgebra::from_brackets(3, [(0, 1, 2, int(1)), (0, 2, 0, int(1))]).unwrap();
        let report = broken.validate();
        assert!(report.antisymmetry.is_empty());
        assert!(report
            .jacobi
            .iter()
            .any(|v| (v.i, v.j, v.k) == (0, 1, 2) && v.l == 2 && v.value == int(-1)));
    }

    #[test]
    fn antisymmetry_violation_is_reported() {
        let mut c = vec![int(0); 8];
        c[1] = int(1); // C[0][0][1]
        let alg = LieAlgebra::from_structure_constants(2, c).unwrap();
        let report = alg.validate();
        assert_eq!(report.antisymmetry.len(), 1);
        assert_eq!(report.antisymmetry[0].excess, int(2));
        assert!(alg.ensure_valid().is_err());
    }

    #[test]
    fn builtin_errors() {
        assert!(matches!(
            LieAlgebra::builtin("so3"),
            Err(Error::UnknownAlgebra(_))
        ));
        assert!(LieAlgebra::builtin("abelian(x)").is_err());
        assert_eq!(LieAlgebra::builtin("abelian(4)").unwrap().dim(), 4);
    }

    #[test]
    fn arity_mismatch() {
        let h = LieAlgebra::builtin("heisenberg3").unwrap();
        assert!(matches!(
            h.bracket_vectors(&unit(2, 0), &unit(3, 0)),
            Err(Error::Arity { .. })
        ));
    }
}
