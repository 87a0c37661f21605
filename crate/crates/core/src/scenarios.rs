//! Bundled realization fixtures: non-positive parts written as vector
//! fields, with the expected outcome of each computation.
//!
//! A fixture is a TOML document. Fields are written in the grammar of
//! [`crate::parse`]; generating functions of contact fields may be given
//! instead when a `[contact]` table is present. Every expectation carries an
//! `origin` (`reported` or `derived`) and a `source` string.
//!
//! ```toml
//! name = "demo"
//! title = "gl(1) acting on a line"
//! citation = "toy example"
//! prime = 3
//!
//! [[variables]]
//! name = "x1"
//! parity = "even"
//! weight = 1
//!
//! [[generators]]
//! label = "Y1"
//! degree = -1
//! field = "d1"
//!
//! [[generators]]
//! label = "H"
//! degree = 0
//! field = "x1*d1"
//!
//! [[claims]]
//! kind = "profile"
//! profile = ["1|0"]
//! origin = "derived"
//! source = "hand count"
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::divided::{Parity, Variable, VariableSpec};
use crate::field::PrimeField;
use crate::graded::{Element, GradedAlgebra, GradedError, Sdim};
use crate::linalg::rref;
use crate::parse::{parse_poly, resolve_labels_with, PowerMode, Scope};
use crate::prolong::DepthConstraint;
use crate::vectorfield::{Ambient, ContactStructure, VectorField, WeightGrading};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("no scenario named `{0}`")]
    NotFound(String),
    #[error("{name}:{line}:{column}: {msg}")]
    Syntax {
        name: String,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{name}: {msg}")]
    Invalid { name: String, msg: String },
    #[error("{name}: {source}")]
    Graded {
        name: String,
        #[source]
        source: GradedError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    #[default]
    Required,
    Optional,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Required => "required",
            Status::Optional => "optional",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    /// Stated in the source the fixture transcribes.
    Reported,
    /// Obtained by an independent computation.
    Derived,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Origin::Reported => "reported",
            Origin::Derived => "derived",
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableDecl {
    pub name: String,
    pub parity: ParityDecl,
    pub weight: i64,
    #[serde(default = "one")]
    pub height: u32,
}

fn one() -> u32 {
    1
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityDecl {
    Even,
    Odd,
}

impl From<ParityDecl> for Parity {
    fn from(p: ParityDecl) -> Parity {
        match p {
            ParityDecl::Even => Parity::Even,
            ParityDecl::Odd => Parity::Odd,
        }
    }
}

/// `dt + Σ (p dq - q dp) + Σ B_{jk} θ_j dθ_k`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContactDecl {
    pub t: String,
    #[serde(default)]
    pub pairs: Vec<(String, String)>,
    #[serde(default)]
    pub odd: Vec<String>,
    /// The symmetric matrix `B`, indexed like `odd`.
    #[serde(default)]
    pub odd_form: Vec<Vec<i64>>,
}

/// A labelled element given as a field or as a contact generating function.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDecl {
    pub label: String,
    #[serde(default)]
    pub degree: Option<i64>,
    #[serde(default)]
    pub parity: Option<ParityDecl>,
    #[serde(default)]
    pub field: Option<String>,
    #[serde(default)]
    pub function: Option<String>,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BorelDecl {
    #[serde(default)]
    pub cartan: Vec<String>,
    #[serde(default)]
    pub lowering: Vec<String>,
    #[serde(default)]
    pub raising: Vec<String>,
}

/// Bilinear form values checked against an independent evaluation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingDecl {
    /// Basis labels of the paired space, e.g. `t^(2)` or `t^(3)*theta`.
    pub basis: Vec<String>,
    pub values: Vec<PairingValue>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingValue {
    pub left: String,
    pub right: String,
    pub value: i64,
}

/// Which algebra a claim is evaluated on.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseDecl {
    pub name: String,
    #[serde(flatten)]
    pub kind: CaseKind,
    #[serde(default)]
    pub constraint: Option<DepthConstraint>,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CaseKind {
    /// Partial prolong from the `g_0`-module generated by the seeds in `g_1`,
    /// inside the complete prolong or inside the algebra of another case.
    Partial {
        seeds: Vec<String>,
        #[serde(default)]
        base: Option<String>,
    },
    /// Complete prolong with `g_0` replaced by `der_0(g_-)`.
    Der0,
    /// Complete prolong with `g_0` replaced by `[g_{-1}, g_1]` of the
    /// complete prolong.
    BracketG0,
    /// Complete prolong with `g_0` replaced by the listed elements.
    G0 { generators: Vec<String> },
}

/// What an N-independence claim compares across heights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    /// The positive profile.
    #[default]
    Profile,
    /// Per-degree superdimensions of the simple part.
    SimplePart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lowest,
    Highest,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Lowest => "lowest",
            Direction::Highest => "highest",
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Claim {
    #[serde(default)]
    pub case: Option<String>,
    /// Heights of the even variables, in declaration order.
    #[serde(default)]
    pub heights: Option<Vec<u32>>,
    pub origin: Origin,
    pub source: String,
    #[serde(flatten)]
    pub kind: ClaimKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClaimKind {
    /// Superdimensions of `g_k` for the listed non-positive degrees.
    Nonpositive {
        degrees: Vec<i64>,
        sdims: Vec<Sdim>,
    },
    /// `g_1, g_2, ...` up to the first zero component.
    Profile {
        profile: Vec<Sdim>,
    },
    /// A profile known only by its length and its ends.
    ProfileShape {
        length: usize,
        #[serde(default)]
        prefix: Vec<Sdim>,
        #[serde(default)]
        suffix: Vec<Sdim>,
    },
    /// Total superdimension.
    Total {
        sdim: Sdim,
    },
    /// Singular vectors of `g_degree` under the `g_0` Borel choice.
    Singular {
        degree: i64,
        direction: Direction,
        count: usize,
        #[serde(default)]
        vectors: Vec<String>,
    },
    Irreducible {
        degree: i64,
        expected: bool,
    },
    /// `g_0`-module generated by the seeds.
    Module {
        seeds: Vec<String>,
        sdim: Sdim,
    },
    /// `M, [M, M], [M, [M, M]], ...` for the `g_0`-module `M` generated by
    /// the seeds.
    AdChain {
        seeds: Vec<String>,
        profile: Vec<Sdim>,
    },
    Simplicity {
        simple: bool,
        #[serde(default)]
        failing: Vec<String>,
    },
    /// Distinct superdimensions of the proper nonzero graded ideals, by
    /// increasing dimension.
    Ideals {
        sdims: Vec<Sdim>,
    },
    Der0 {
        sdim: Sdim,
        #[serde(default)]
        contains: Vec<String>,
    },
    /// The subalgebra generated by `g_{≤0}` and `g_1`.
    SimplePart {
        #[serde(default)]
        sdim: Option<Sdim>,
        #[serde(default)]
        profile: Option<Vec<Sdim>>,
        /// Per-degree superdimensions of what the simple part misses.
        #[serde(default)]
        complement: Option<BTreeMap<String, Sdim>>,
    },
    /// `[g_left, g_right]`.
    Bracket {
        left: i64,
        right: i64,
        sdim: Sdim,
        #[serde(default)]
        equals_component: Option<bool>,
        #[serde(default)]
        subalgebra: Option<bool>,
        /// Superdimension of `[B, B]` for the bracket `B`.
        #[serde(default)]
        derived: Option<Sdim>,
    },
    /// The measured shape is unchanged when each height is raised by one,
    /// up to `max_height`.
    NIndependence {
        max_height: u32,
        /// Positions among the even variables to vary; all by default.
        #[serde(default)]
        slots: Option<Vec<usize>>,
        #[serde(default)]
        measure: Measure,
    },
    /// `g_degree` is spanned by the listed elements.
    Span {
        degree: i64,
        vectors: Vec<String>,
    },
    /// The listed elements lie in the computed algebra.
    Contains {
        vectors: Vec<String>,
    },
    /// The pairing values agree with an independent evaluation and the
    /// Gram matrix has the stated rank.
    PairingRank {
        rank: usize,
    },
}

impl ClaimKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClaimKind::Nonpositive { .. } => "nonpositive",
            ClaimKind::Profile { .. } => "profile",
            ClaimKind::ProfileShape { .. } => "profile-shape",
            ClaimKind::Total { .. } => "total",
            ClaimKind::Singular { .. } => "singular",
            ClaimKind::Irreducible { .. } => "irreducible",
            ClaimKind::Module { .. } => "module",
            ClaimKind::AdChain { .. } => "ad-chain",
            ClaimKind::Simplicity { .. } => "simplicity",
            ClaimKind::Ideals { .. } => "ideals",
            ClaimKind::Der0 { .. } => "der0",
            ClaimKind::SimplePart { .. } => "simple-part",
            ClaimKind::Bracket { .. } => "bracket",
            ClaimKind::NIndependence { .. } => "n-independence",
            ClaimKind::Span { .. } => "span",
            ClaimKind::Contains { .. } => "contains",
            ClaimKind::PairingRank { .. } => "pairing-rank",
        }
    }
}

/// A fixture as written.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    pub title: String,
    pub citation: String,
    #[serde(default)]
    pub status: Status,
    pub prime: u32,
    #[serde(default)]
    pub power: PowerMode,
    /// Whether `prime` may not be overridden from the command line.
    #[serde(default = "yes")]
    pub prime_pinned: bool,
    #[serde(default)]
    pub notes: Vec<String>,
    pub variables: Vec<VariableDecl>,
    #[serde(default)]
    pub contact: Option<ContactDecl>,
    pub generators: Vec<ElementDecl>,
    #[serde(default)]
    pub borel: BorelDecl,
    #[serde(default)]
    pub vectors: Vec<ElementDecl>,
    #[serde(default)]
    pub pairing: Option<PairingDecl>,
    #[serde(default)]
    pub cases: Vec<CaseDecl>,
    #[serde(default)]
    pub claims: Vec<Claim>,
}

const BUNDLED: &[(&str, &str)] = &[
    ("bj3N3", include_str!("../fixtures/bj3N3.toml")),
    ("bj2_4", include_str!("../fixtures/bj2_4.toml")),
    ("bj3_5", include_str!("../fixtures/bj3_5.toml")),
    ("me3N3", include_str!("../fixtures/me3N3.toml")),
    ("melikyan_p5_null", include_str!("../fixtures/melikyan_p5_null.toml")),
    ("brj4_3", include_str!("../fixtures/brj4_3.toml")),
    ("brj3_4", include_str!("../fixtures/brj3_4.toml")),
    ("brj3_4prime", include_str!("../fixtures/brj3_4prime.toml")),
    ("brj3_3", include_str!("../fixtures/brj3_3.toml")),
    ("k1N5", include_str!("../fixtures/k1N5.toml")),
    ("k1N9", include_str!("../fixtures/k1N9.toml")),
    ("f4_p3", include_str!("../fixtures/f4_p3.toml")),
    ("e6_p3", include_str!("../fixtures/e6_p3.toml")),
    ("e7_p3", include_str!("../fixtures/e7_p3.toml")),
    ("e8_p3", include_str!("../fixtures/e8_p3.toml")),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub title: String,
    pub citation: String,
    pub status: Status,
}

/// Names of the bundled fixtures, in catalog order.
pub fn names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

/// Raw text of a bundled fixture.
pub fn source(name: &str) -> Result<&'static str, ScenarioError> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| ScenarioError::NotFound(name.to_string()))
}

pub fn catalog() -> Result<Vec<CatalogEntry>, ScenarioError> {
    BUNDLED
        .iter()
        .map(|(n, s)| {
            let spec = parse_spec(n, s)?;
            Ok(CatalogEntry {
                name: spec.name,
                title: spec.title,
                citation: spec.citation,
                status: spec.status,
            })
        })
        .collect()
}

/// Parses fixture text, reporting syntax errors by line and column.
pub fn parse_spec(name: &str, text: &str) -> Result<ScenarioSpec, ScenarioError> {
    let spec: ScenarioSpec = toml::from_str(text).map_err(|e| {
        let (line, column) = match e.span() {
            Some(r) => line_col(text, r.start),
            None => (0, 0),
        };
        ScenarioError::Syntax {
            name: name.to_string(),
            line,
            column,
            msg: e.message().to_string(),
        }
    })?;
    spec.check_references()?;
    Ok(spec)
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
    (line, column)
}

/// Loads and validates a bundled fixture in its pinned characteristic.
pub fn load(name: &str) -> Result<ScenarioSpec, ScenarioError> {
    parse_spec(name, source(name)?)
}

/// A fixture materialized over `F`.
#[derive(Clone)]
pub struct Scenario<F: PrimeField> {
    pub spec: Arc<ScenarioSpec>,
    pub ambient: Arc<Ambient>,
    pub contact: Option<ContactStructure<F>>,
    /// Every labelled element: generators and reference vectors.
    pub labels: HashMap<String, VectorField<F>>,
    pub generators: Vec<(String, i64, VectorField<F>)>,
    pub nonpositive: GradedAlgebra<F>,
    pub borel: Borel<F>,
}

impl<F: PrimeField> std::fmt::Debug for Scenario<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Scenario({}, {:?})", self.spec.name, self.nonpositive)
    }
}

/// Cartan, lowering and raising elements of `g_0`.
#[derive(Clone, Default)]
pub struct Borel<F> {
    pub cartan: Vec<VectorField<F>>,
    pub lowering: Vec<VectorField<F>>,
    pub raising: Vec<VectorField<F>>,
}

impl ScenarioSpec {
    fn invalid(&self, msg: impl Into<String>) -> ScenarioError {
        ScenarioError::Invalid {
            name: self.name.clone(),
            msg: msg.into(),
        }
    }

    fn check_references(&self) -> Result<(), ScenarioError> {
        let mut seen = std::collections::HashSet::new();
        for e in self.generators.iter().chain(&self.vectors) {
            if !seen.insert(e.label.as_str()) {
                return Err(self.invalid(format!("label `{}` defined twice", e.label)));
            }
            if e.field.is_some() == e.function.is_some() {
                return Err(self.invalid(format!("`{}` needs exactly one of `field`, `function`", e.label)));
            }
            if e.function.is_some() && self.contact.is_none() {
                return Err(self.invalid(format!(
                    "`{}` is a generating function but there is no [contact]",
                    e.label
                )));
            }
        }
        for g in &self.generators {
            if g.degree.is_none() {
                return Err(self.invalid(format!("generator `{}` has no degree", g.label)));
            }
        }
        let known = |l: &String| seen.contains(l.as_str());
        for l in self
            .borel
            .cartan
            .iter()
            .chain(&self.borel.lowering)
            .chain(&self.borel.raising)
        {
            if !known(l) {
                return Err(self.invalid(format!("borel refers to unknown label `{l}`")));
            }
        }
        let case_names: Vec<&str> = self.cases.iter().map(|c| c.name.as_str()).collect();
        for c in &self.cases {
            let refs: &[String] = match &c.kind {
                CaseKind::Partial { seeds, .. } => seeds,
                CaseKind::G0 { generators } => generators,
                _ => &[],
            };
            if let Some(l) = refs.iter().find(|l| !known(l)) {
                return Err(self.invalid(format!("case `{}` refers to unknown label `{l}`", c.name)));
            }
            if let CaseKind::Partial { base: Some(b), .. } = &c.kind {
                match self.case(b) {
                    Some(bc) if !matches!(bc.kind, CaseKind::Partial { .. }) => {}
                    _ => {
                        return Err(self.invalid(format!(
                            "case `{}` has base `{b}`, which is not a non-partial case",
                            c.name
                        )))
                    }
                }
            }
        }
        for c in &self.claims {
            if let Some(n) = &c.case {
                if !case_names.contains(&n.as_str()) {
                    return Err(self.invalid(format!("claim refers to unknown case `{n}`")));
                }
            }
            let refs: Vec<&String> = match &c.kind {
                ClaimKind::Singular { vectors, .. }
                | ClaimKind::Span { vectors, .. }
                | ClaimKind::Contains { vectors } => vectors.iter().collect(),
                ClaimKind::Module { seeds, .. } | ClaimKind::AdChain { seeds, .. } => seeds.iter().collect(),
                ClaimKind::Der0 { contains, .. } => contains.iter().collect(),
                _ => Vec::new(),
            };
            if let Some(l) = refs.into_iter().find(|l| !known(l)) {
                return Err(self.invalid(format!("claim refers to unknown label `{l}`")));
            }
            if let Some(h) = &c.heights {
                if h.len() != self.even_count() {
                    return Err(self.invalid(format!("claim heights {h:?} do not match the even variables")));
                }
            }
            if matches!(c.kind, ClaimKind::PairingRank { .. }) && self.pairing.is_none() {
                return Err(self.invalid("pairing claim without a [pairing] table"));
            }
        }
        Ok(())
    }

    pub fn even_count(&self) -> usize {
        self.variables.iter().filter(|v| v.parity == ParityDecl::Even).count()
    }

    /// Default heights of the even variables.
    pub fn heights(&self) -> Vec<u32> {
        self.variables
            .iter()
            .filter(|v| v.parity == ParityDecl::Even)
            .map(|v| v.height)
            .collect()
    }

    pub fn case(&self, name: &str) -> Option<&CaseDecl> {
        self.cases.iter().find(|c| c.name == name)
    }

    /// The variable spec with optional height override.
    pub fn variable_spec(&self, heights: Option<&[u32]>) -> Result<VariableSpec, ScenarioError> {
        if let Some(h) = heights {
            if h.len() != self.even_count() {
                return Err(self.invalid(format!(
                    "{} heights given for {} even variables",
                    h.len(),
                    self.even_count()
                )));
            }
        }
        let mut k = 0;
        let vars = self
            .variables
            .iter()
            .map(|v| {
                let mut height = v.height;
                if v.parity == ParityDecl::Even {
                    if let Some(h) = heights {
                        height = h[k];
                    }
                    k += 1;
                }
                Variable {
                    name: v.name.clone(),
                    parity: v.parity.into(),
                    height,
                }
            })
            .collect();
        VariableSpec::new(self.prime, vars).map_err(|e| self.invalid(e.to_string()))
    }

    /// Materializes the fixture over `F`, checking declared degrees,
    /// parities and bracket closure of the non-positive part.
    pub fn build<F: PrimeField>(&self, heights: Option<&[u32]>) -> Result<Scenario<F>, ScenarioError> {
        if F::CHARACTERISTIC != self.prime {
            return Err(self.invalid(format!(
                "fixture is over F_{} but was built over F_{}",
                self.prime,
                F::CHARACTERISTIC
            )));
        }
        let spec = self.variable_spec(heights)?;
        let weights = self.variables.iter().map(|v| v.weight).collect();
        let grading = WeightGrading::new(&spec, weights).map_err(|e| self.invalid(e.to_string()))?;
        let ambient = Arc::new(Ambient::new(spec.clone(), grading));
        let contact = match &self.contact {
            Some(c) => Some(self.contact_structure::<F>(&spec, c)?),
            None => None,
        };
        let empty = HashMap::new();
        let scope = Scope {
            spec: &spec,
            power: self.power,
            labels: &empty,
        };
        let mut known = HashMap::new();
        let mut defs = Vec::new();
        for e in self.generators.iter().chain(&self.vectors) {
            if let Some(f) = &e.function {
                let poly = parse_poly::<F>(f, &scope).map_err(|err| self.invalid(format!("`{}`: {err}", e.label)))?;
                let k = contact.as_ref().expect("checked on parse");
                known.insert(e.label.clone(), k.field(&spec, &poly));
            } else if let Some(f) = &e.field {
                defs.push((e.label.clone(), f.clone()));
            }
        }
        let labels = resolve_labels_with(&spec, self.power, known, &defs).map_err(|e| self.invalid(e.to_string()))?;
        let mut generators = Vec::new();
        for g in &self.generators {
            let x = labels[&g.label].clone();
            let degree = g.degree.expect("checked on parse");
            if let Some(p) = g.parity {
                match x.parity(&spec) {
                    Some(q) if q == Parity::from(p) => {}
                    _ if x.is_zero() => {}
                    _ => return Err(self.invalid(format!("generator `{}` is not {:?}", g.label, p).to_lowercase())),
                }
            }
            generators.push((g.label.clone(), degree, x));
        }
        for v in &self.vectors {
            let x = &labels[&v.label];
            if let Some(d) = v.degree {
                if ambient.degree_of(x) != Some(d) && !x.is_zero() {
                    return Err(self.invalid(format!("vector `{}` is not homogeneous of degree {d}", v.label)));
                }
            }
            if let Some(p) = v.parity {
                if x.parity(&spec) != Some(p.into()) {
                    return Err(self.invalid(format!("vector `{}` has the wrong parity", v.label)));
                }
            }
        }
        let nonpositive =
            GradedAlgebra::from_generators(ambient.clone(), &generators).map_err(|source| ScenarioError::Graded {
                name: self.name.clone(),
                source,
            })?;
        nonpositive.check_closure().map_err(|source| ScenarioError::Graded {
            name: self.name.clone(),
            source,
        })?;
        let pick = |ls: &[String]| ls.iter().map(|l| labels[l].clone()).collect::<Vec<_>>();
        let borel = Borel {
            cartan: pick(&self.borel.cartan),
            lowering: pick(&self.borel.lowering),
            raising: pick(&self.borel.raising),
        };
        Ok(Scenario {
            spec: Arc::new(self.clone()),
            ambient,
            contact,
            labels,
            generators,
            nonpositive,
            borel,
        })
    }

    fn contact_structure<F: PrimeField>(
        &self,
        spec: &VariableSpec,
        c: &ContactDecl,
    ) -> Result<ContactStructure<F>, ScenarioError> {
        let idx = |n: &str| {
            spec.index_of(n)
                .ok_or_else(|| self.invalid(format!("contact variable `{n}` unknown")))
        };
        let t = idx(&c.t)?;
        let pairs = c
            .pairs
            .iter()
            .map(|(p, q)| Ok((idx(p)?, idx(q)?)))
            .collect::<Result<Vec<_>, ScenarioError>>()?;
        let odd = c.odd.iter().map(|n| idx(n)).collect::<Result<Vec<_>, _>>()?;
        let n = odd.len();
        if c.odd_form.len() != n || c.odd_form.iter().any(|r| r.len() != n) {
            return Err(self.invalid("odd_form must be square of the size of `odd`"));
        }
        let mut aug: Vec<Vec<F>> = Vec::new();
        for (i, row) in c.odd_form.iter().enumerate() {
            let mut r: Vec<F> = row.iter().map(|&v| F::from_i64(v)).collect();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            aug.push(r);
        }
        let red = rref(&aug, 2 * n).map_err(|e| self.invalid(e.to_string()))?;
        if red.dim() != n || red.pivots().iter().enumerate().any(|(i, &p)| i != p) {
            return Err(self.invalid("odd_form is degenerate"));
        }
        let odd_form_inverse = red.rows().iter().map(|r| r[n..].to_vec()).collect();
        Ok(ContactStructure {
            t,
            pairs,
            odd,
            odd_form_inverse,
        })
    }
}

impl<F: PrimeField> Scenario<F> {
    pub fn label(&self, l: &str) -> &VectorField<F> {
        &self.labels[l]
    }

    /// A labelled element with its degree.
    pub fn element(&self, l: &str) -> Option<Element<F>> {
        let x = self.labels.get(l)?;
        Some((self.ambient.degree_of(x)?, x.clone()))
    }

    /// Degree-0 generators.
    pub fn g0(&self) -> Vec<VectorField<F>> {
        self.nonpositive.fields(0)
    }
}
