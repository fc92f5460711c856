//! JSON problem files.
//!
//! ```json
//! {
//!   "manifold": {"k": 1, "n": 3},
//!   "lie_algebra": {"builtin": "heisenberg3"},
//!   "hamiltonians": {
//!     "H": {"a": ["1", "0", "0"], "b": ["y1"]},
//!     "K": {"components": ["x_1_2 + y3"]}
//!   }
//! }
//! ```
//!
//! Algebras may also be given as `{"dim": 3, "brackets": [{"i": 1, "j": 2,
//! "coeffs": {"3": "1"}}]}` or as Maurer–Cartan data `{"dim": 4, "d":
//! [{"l": 1, "i": 2, "j": 3, "coeff": "1"}]}`. Indices are 1-based.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{is_polarized_hamiltonian, AffineExpr, ModelManifold, PolarizedHamiltonian};
use crate::lie_algebra::{from_maurer_cartan, LieAlgebra, MaurerCartanData};
use crate::symbolic::{format_rational, parse_poly, parse_rational, Poly, Rational};

/// A rational written as a string (`"3/2"`) or a JSON integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Int(i64),
    Text(String),
}

impl RationalText {
    fn value(&self) -> Result<Rational> {
        match self {
            RationalText::Int(v) => Ok(Rational::from_integer((*v).into())),
            RationalText::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    pub k: usize,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HamiltonianSpec {
    Split {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        a: Vec<String>,
        b: Vec<String>,
    },
    Components {
        components: Vec<String>,
    },
}

impl HamiltonianSpec {
    /// The `{"k","n","a","b"}` form with canonical expressions.
    pub fn from_hamiltonian(h: &PolarizedHamiltonian) -> Self {
        let m = h.manifold();
        let names = m.y_names();
        let show = |v: &[Poly]| v.iter().map(|f| f.display_with(&names).to_string()).collect();
        HamiltonianSpec::Split {
            k: Some(m.k()),
            n: Some(m.n()),
            a: show(h.a()),
            b: show(h.b()),
        }
    }

    /// Parses against `manifold`; errors carry a field path relative to
    /// this object.
    pub fn resolve(&self, manifold: ModelManifold) -> std::result::Result<PolarizedHamiltonian, Diagnostic> {
        match self {
            HamiltonianSpec::Split { k, n, a, b } => {
                for (field, declared, actual) in [("k", k, manifold.k()), ("n", n, manifold.n())] {
                    if let Some(d) = declared {
                        if *d != actual {
                            return Err(Diagnostic::new(
                                field,
                                format!("declared {field}={d} but the manifold has {field}={actual}"),
                            ));
                        }
                    }
                }
                if a.len() != manifold.n() {
                    return Err(Diagnostic::new(
                        "a",
                        format!("expected {} entries, got {}", manifold.n(), a.len()),
                    ));
                }
                if b.len() != manifold.k() {
                    return Err(Diagnostic::new(
                        "b",
                        format!("expected {} entries, got {}", manifold.k(), b.len()),
                    ));
                }
                let names = manifold.y_names();
                let parse = |field: &str, list: &[String]| {
                    list.iter()
                        .enumerate()
                        .map(|(i, s)| {
                            parse_poly(s, &names)
                                .map_err(|e| Diagnostic::new(format!("{field}[{i}]"), format!("`{s}` {e}")))
                        })
                        .collect::<std::result::Result<Vec<_>, _>>()
                };
                let a = parse("a", a)?;
                let b = parse("b", b)?;
                PolarizedHamiltonian::new(manifold, a, b).map_err(|e| Diagnostic::new("", e.to_string()))
            }
            HamiltonianSpec::Components { components } => {
                if components.len() != manifold.k() {
                    return Err(Diagnostic::new(
                        "components",
                        format!("expected {} entries, got {}", manifold.k(), components.len()),
                    ));
                }
                let names = manifold.coordinate_names();
                let mut affine = Vec::with_capacity(components.len());
                for (p, s) in components.iter().enumerate() {
                    let path = format!("components[{p}]");
                    let poly = parse_poly(s, &names)
                        .map_err(|e| Diagnostic::new(path.clone(), format!("`{s}` {e}")))?;
                    let expr = AffineExpr::from_poly(manifold, &poly)
                        .map_err(|e| Diagnostic::new(path.clone(), e.to_string()))?;
                    affine.push(expr);
                }
                is_polarized_hamiltonian(manifold, &affine).map_err(|d| {
                    Diagnostic::new("components", format!("not a polarized Hamiltonian: {d}"))
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    /// Output basis index (1-based, as a string key) to coefficient.
    pub coeffs: BTreeMap<String, RationalText>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaurerCartanEntry {
    pub l: usize,
    pub i: usize,
    pub j: usize,
    pub coeff: RationalText,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LieAlgebraSpec {
    Builtin { builtin: String },
    Brackets { dim: usize, brackets: Vec<BracketEntry> },
    MaurerCartan { dim: usize, d: Vec<MaurerCartanEntry> },
}

fn one_based(path: &str, idx: usize, dim: usize) -> std::result::Result<usize, Diagnostic> {
    if idx == 0 || idx > dim {
        Err(Diagnostic::new(path, format!("index {idx} outside 1..={dim}")))
    } else {
        Ok(idx - 1)
    }
}

impl LieAlgebraSpec {
    /// The bracket form, one entry per `i < j` with nonzero bracket.
    pub fn from_algebra(l: &LieAlgebra) -> Self {
        let brackets = l
            .brackets()
            .into_iter()
            .map(|(i, j, coeffs)| BracketEntry {
                i: i + 1,
                j: j + 1,
                coeffs: coeffs
                    .into_iter()
                    .map(|(k, c)| ((k + 1).to_string(), RationalText::Text(format_rational(&c))))
                    .collect(),
            })
            .collect();
        LieAlgebraSpec::Brackets {
            dim: l.dim(),
            brackets,
        }
    }

    /// Builds the tensor without validating it.
    pub fn resolve(&self) -> std::result::Result<LieAlgebra, Diagnostic> {
        match self {
            LieAlgebraSpec::Builtin { builtin } => {
                LieAlgebra::builtin(builtin).map_err(|e| Diagnostic::new("builtin", e.to_string()))
            }
            LieAlgebraSpec::Brackets { dim, brackets } => {
                let mut entries = Vec::new();
                for (idx, b) in brackets.iter().enumerate() {
                    let path = format!("brackets[{idx}]");
                    let i = one_based(&format!("{path}.i"), b.i, *dim)?;
                    let j = one_based(&format!("{path}.j"), b.j, *dim)?;
                    for (key, c) in &b.coeffs {
                        let cpath = format!("{path}.coeffs.{key}");
                        let l: usize = key
                            .parse()
                            .map_err(|_| Diagnostic::new(cpath.clone(), "key is not an index"))?;
                        let l = one_based(&cpath, l, *dim)?;
                        let c = c.value().map_err(|e| Diagnostic::new(cpath.clone(), e.to_string()))?;
                        entries.push((i, j, l, c));
                    }
                }
                LieAlgebra::from_brackets(*dim, entries)
                    .map_err(|e| Diagnostic::new("brackets", e.to_string()))
            }
            LieAlgebraSpec::MaurerCartan { dim, d } => {
                let mut entries = Vec::new();
                for (idx, e) in d.iter().enumerate() {
                    let path = format!("d[{idx}]");
                    let l = one_based(&format!("{path}.l"), e.l, *dim)?;
                    let i = one_based(&format!("{path}.i"), e.i, *dim)?;
                    let j = one_based(&format!("{path}.j"), e.j, *dim)?;
                    let c = e
                        .coeff
                        .value()
                        .map_err(|err| Diagnostic::new(format!("{path}.coeff"), err.to_string()))?;
                    entries.push((l, i, j, c));
                }
                let data = MaurerCartanData::new(*dim, entries)
                    .map_err(|e| Diagnostic::new("d", e.to_string()))?;
                from_maurer_cartan(&data).map_err(|e| Diagnostic::new("d", e.to_string()))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub manifold: ManifoldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lie_algebra: Option<LieAlgebraSpec>,
    #[serde(default)]
    pub hamiltonians: BTreeMap<String, HamiltonianSpec>,
}

/// A problem located by field path, e.g. `hamiltonians.H.a[0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            path: path.into(),
            message: message.into(),
        }
    }

    fn under(mut self, prefix: &str) -> Self {
        self.path = if self.path.is_empty() {
            prefix.to_string()
        } else {
            format!("{prefix}.{}", self.path)
        };
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

/// A fully parsed and checked problem file.
#[derive(Clone, Debug)]
pub struct Problem {
    pub manifold: ModelManifold,
    pub algebra: Option<LieAlgebra>,
    pub hamiltonians: BTreeMap<String, PolarizedHamiltonian>,
}

impl ProblemFile {
    /// Syntax and shape only. Errors mention line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))
    }

    /// Every semantic check: expressions parse, dimensions agree, the
    /// algebra validates, Hamiltonians are polarized. All problems are
    /// reported, not just the first.
    pub fn resolve(&self) -> std::result::Result<Problem, Vec<Diagnostic>> {
        let mut diags = Vec::new();
        let manifold = match ModelManifold::new(self.manifold.k, self.manifold.n) {
            Ok(m) => m,
            Err(e) => return Err(vec![Diagnostic::new("manifold", e.to_string())]),
        };
        let algebra = match &self.lie_algebra {
            None => None,
            Some(spec) => match spec.resolve() {
                Err(d) => {
                    diags.push(d.under("lie_algebra"));
                    None
                }
                Ok(l) => {
                    if l.dim() != manifold.n() {
                        diags.push(Diagnostic::new(
                            "lie_algebra",
                            format!("dimension {} but manifold.n = {}", l.dim(), manifold.n()),
                        ));
                    }
                    let report = l.validate();
                    for line in report.to_string().lines().filter(|_| !report.is_empty()) {
                        diags.push(Diagnostic::new("lie_algebra", line));
                    }
                    Some(l)
                }
            },
        };
        let mut hamiltonians = BTreeMap::new();
        for (name, spec) in &self.hamiltonians {
            match spec.resolve(manifold) {
                Ok(h) => {
                    hamiltonians.insert(name.clone(), h);
                }
                Err(d) => diags.push(d.under(&format!("hamiltonians.{name}"))),
            }
        }
        if diags.is_empty() {
            Ok(Problem {
                manifold,
                algebra,
                hamiltonians,
            })
        } else {
            Err(diags)
        }
    }
}

impl Problem {
    pub fn hamiltonian(&self, name: &str) -> Result<&PolarizedHamiltonian> {
        self.hamiltonians.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.hamiltonians.keys().map(String::as_str).collect();
            Error::Input(format!(
                "no Hamiltonian named `{name}` (known: {})",
                if known.is_empty() { "none".to_string() } else { known.join(", ") }
            ))
        })
    }
}
