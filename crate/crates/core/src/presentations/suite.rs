//! The bundled presentation checks: for each listed Cartan matrix, the
//! quotient by its relations, the contragredient algebra of the matrix and
//! the Chevalley generators of each realization must agree.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::field::PrimeField;
use crate::graded::{GradedAlgebra, Sdim};
use crate::report;
use crate::scenarios;
use crate::structure::simple_part;
use crate::vectorfield::VectorField;
use crate::{F3, F5, F7};

use super::cartan::{chevalley_skeleton, CartanSpec};
use super::dsl::Relation;
use super::free::Quotient;
use super::presentation::{quotient, verify_relations, Generator, Presentation};
use super::realize::{grading_lattice, root_decomposition, Fields};
use super::PresentationError;

const SOURCE: &str = include_str!("../../fixtures/presentations.toml");

/// Degrees are heights over the simple roots; every listed algebra is
/// zero well below this.
const MAX_HEIGHT: i64 = 12;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteFile {
    algebra: Vec<AlgebraDecl>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDecl {
    pub name: String,
    pub title: String,
    pub prime: u32,
    pub sdim: Sdim,
    #[serde(default)]
    pub realizations: Vec<RealizationDecl>,
    pub matrix: Vec<MatrixDecl>,
}

/// A case algebra of a bundled scenario, or its simple part.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationDecl {
    pub scenario: String,
    pub case: Option<String>,
    #[serde(default)]
    pub simple_part: bool,
}

impl RealizationDecl {
    pub fn describe(&self) -> String {
        let mut s = self.scenario.clone();
        if let Some(c) = &self.case {
            s.push('/');
            s.push_str(c);
        }
        if self.simple_part {
            s.push_str(" simple part");
        }
        s
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDecl {
    pub label: String,
    pub rows: Vec<Vec<String>>,
    pub names: Option<Vec<String>>,
    pub note: Option<String>,
    pub standard: Vec<String>,
    pub relations: Vec<String>,
}

impl MatrixDecl {
    pub fn cartan(&self) -> Result<CartanSpec, PresentationError> {
        CartanSpec::parse(&self.rows)
    }

    pub fn names(&self) -> Vec<String> {
        match &self.names {
            Some(n) => n.clone(),
            None => (1..=self.rows.len()).map(|i| format!("x{i}")).collect(),
        }
    }

    /// Positive generators of degree 1 with the standard and the listed
    /// relations.
    pub fn presentation(&self) -> Result<Presentation, PresentationError> {
        let a = self.cartan()?;
        let gens = self
            .names()
            .iter()
            .zip(a.parities())
            .map(|(n, p)| Generator::new(n, p, 1))
            .collect();
        let rels = self
            .standard
            .iter()
            .chain(&self.relations)
            .map(|r| r.parse::<Relation>())
            .collect::<Result<Vec<_>, _>>()?;
        Presentation::new(gens, rels)
    }
}

pub fn load() -> Result<Vec<AlgebraDecl>, String> {
    let f: SuiteFile = toml::from_str(SOURCE).map_err(|e| format!("presentations fixture: {e}"))?;
    Ok(f.algebra)
}

/// One realization seen from one matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationCheck {
    pub source: String,
    pub total: Sdim,
    /// Borels on which the matrix is read.
    pub borels: usize,
    /// Of those, the ones where the skeleton, standard and listed
    /// relations all vanish and the height profile is the quotient's.
    pub passing: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixCheck {
    pub algebra: String,
    pub label: String,
    pub matrix: String,
    pub expected: Sdim,
    /// Quotient by the standard and listed relations, by height.
    pub quotient: BTreeMap<i64, Sdim>,
    pub finite: bool,
    pub total: Sdim,
    /// `n_+` of the contragredient algebra of the matrix, by height.
    pub contragredient: BTreeMap<i64, Sdim>,
    /// Standard and listed relations vanish in the contragredient algebra.
    pub hold_in_contragredient: bool,
    pub realizations: Vec<RealizationCheck>,
}

impl MatrixCheck {
    pub fn ok(&self) -> bool {
        self.finite
            && self.total == self.expected
            && self.quotient == self.contragredient
            && self.hold_in_contragredient
            && self
                .realizations
                .iter()
                .all(|r| r.error.is_none() && r.total == self.expected && r.passing > 0)
    }

    pub fn line(&self) -> String {
        let heights: Vec<String> = self.quotient.values().map(|s| s.to_string()).collect();
        let mut s = format!(
            "{} matrix {} {}: positive part [{}], total {}",
            self.algebra,
            self.label,
            self.matrix,
            heights.join(", "),
            self.total
        );
        if !self.finite {
            s.push_str(" (quotient not finite)");
        }
        if self.quotient != self.contragredient {
            s.push_str(", differs from g(A)");
        }
        s.push_str(if self.hold_in_contragredient {
            ", relations hold in g(A)"
        } else {
            ", relations fail in g(A)"
        });
        for r in &self.realizations {
            match &r.error {
                Some(e) => s.push_str(&format!("; {}: error: {e}", r.source)),
                None => s.push_str(&format!(
                    "; {} ({}): relations hold on {} of {} Borels",
                    r.source, r.total, r.passing, r.borels
                )),
            }
        }
        format!("{} {s}", if self.ok() { "ok  " } else { "FAIL" })
    }
}

fn trim(m: BTreeMap<i64, Sdim>) -> BTreeMap<i64, Sdim> {
    m.into_iter().filter(|(_, s)| !s.is_zero()).collect()
}

struct Realized<F: PrimeField> {
    source: String,
    algebra: GradedAlgebra<F>,
    seeds: Vec<VectorField<F>>,
}

fn realize<F: PrimeField>(r: &RealizationDecl) -> Result<Realized<F>, String> {
    let spec = scenarios::load(&r.scenario).map_err(|e| e.to_string())?;
    let (sc, mut g) = report::case_algebra::<F>(&spec, r.case.as_deref()).map_err(|e| e.to_string())?;
    if r.simple_part {
        g = simple_part(&g).map_err(|e| e.to_string())?;
    }
    let mut labels: Vec<(&String, &VectorField<F>)> = sc.labels.iter().collect();
    labels.sort_by(|a, b| a.0.cmp(b.0));
    Ok(Realized {
        source: r.describe(),
        algebra: g,
        seeds: labels.into_iter().map(|(_, x)| x.clone()).collect(),
    })
}

fn check_realization<F: PrimeField>(
    real: &Realized<F>,
    a: &CartanSpec,
    p: &Presentation,
    names: &[String],
    heights: &BTreeMap<i64, Sdim>,
) -> Result<RealizationCheck, String> {
    let spec = real.algebra.ambient().spec().clone();
    let lattice = grading_lattice(&spec, &real.seeds);
    let rd = root_decomposition(&real.algebra, &lattice).map_err(|e| e.to_string())?;
    let skeleton = chevalley_skeleton(a, None).map_err(|e| e.to_string())?;
    let fields = Fields { spec: &spec };
    let (mut borels, mut passing) = (0, 0);
    for ch in rd.chevalley_bases(&spec) {
        let ms = ch.matches(a);
        if ms.is_empty() {
            continue;
        }
        borels += 1;
        let mut ok = false;
        for m in &ms {
            let images = ch.images(&spec, m, names);
            let sk = verify_relations(&skeleton, &fields, &images).map_err(|e| e.to_string())?;
            let rel = verify_relations(p, &fields, &images).map_err(|e| e.to_string())?;
            ok |= sk.holds && rel.holds && trim(ch.heights.clone()) == *heights;
        }
        passing += usize::from(ok);
    }
    Ok(RealizationCheck {
        source: real.source.clone(),
        total: real.algebra.total_sdim(),
        borels,
        passing,
        error: None,
    })
}

fn check_algebra<F: PrimeField>(decl: &AlgebraDecl) -> Result<Vec<MatrixCheck>, String> {
    let realized: Vec<Result<Realized<F>, String>> = decl.realizations.iter().map(realize::<F>).collect();
    let mut out = Vec::new();
    for m in &decl.matrix {
        let err = |e: PresentationError| format!("{} matrix {}: {e}", decl.name, m.label);
        let a = m.cartan().map_err(err)?;
        let p = m.presentation().map_err(err)?;
        let names = m.names();
        let q = quotient::<F>(&p, MAX_HEIGHT).map_err(err)?;
        let quotient_heights = trim(q.sdims());
        let pos = q.total();
        let total = Sdim::new(2 * pos.even + a.cartan_dim::<F>(), 2 * pos.odd);

        let ga = Quotient::contragredient(a.parities(), &a.matrix::<F>(), MAX_HEIGHT);
        let letters: BTreeMap<String, _> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), ga.free.algebra.letter::<F>(i)))
            .collect();
        let hold = ga.vanishes_above && verify_relations(&p, &ga, &letters).map_err(|e| err(e.into()))?.holds;

        let mut realizations = Vec::new();
        for r in &realized {
            realizations.push(match r {
                Ok(real) => {
                    check_realization(real, &a, &p, &names, &quotient_heights).unwrap_or_else(|e| RealizationCheck {
                        source: real.source.clone(),
                        total: real.algebra.total_sdim(),
                        borels: 0,
                        passing: 0,
                        error: Some(e),
                    })
                }
                Err(e) => RealizationCheck {
                    source: String::new(),
                    total: Sdim::ZERO,
                    borels: 0,
                    passing: 0,
                    error: Some(e.clone()),
                },
            });
        }
        out.push(MatrixCheck {
            algebra: decl.name.clone(),
            label: m.label.clone(),
            matrix: a.to_string(),
            expected: decl.sdim,
            quotient: quotient_heights,
            finite: q.vanishes_above,
            total,
            contragredient: trim(ga.sdims()),
            hold_in_contragredient: hold,
            realizations,
        });
    }
    Ok(out)
}

/// Runs every check of one algebra over its characteristic.
pub fn check(decl: &AlgebraDecl) -> Result<Vec<MatrixCheck>, String> {
    match decl.prime {
        3 => check_algebra::<F3>(decl),
        5 => check_algebra::<F5>(decl),
        7 => check_algebra::<F7>(decl),
        p => Err(format!("{}: characteristic {p} is not supported", decl.name)),
    }
}

pub struct SuiteReport {
    pub ok: bool,
    pub lines: Vec<String>,
    pub checks: Vec<MatrixCheck>,
}

/// All bundled presentation checks, one line per matrix.
pub fn verify_suite() -> SuiteReport {
    let mut report = SuiteReport {
        ok: true,
        lines: Vec::new(),
        checks: Vec::new(),
    };
    let decls = match load() {
        Ok(d) => d,
        Err(e) => {
            report.ok = false;
            report.lines.push(format!("FAIL {e}"));
            return report;
        }
    };
    for d in &decls {
        match check(d) {
            Ok(cs) => {
                for c in cs {
                    report.ok &= c.ok();
                    report.lines.push(c.line());
                    report.checks.push(c);
                }
            }
            Err(e) => {
                report.ok = false;
                report.lines.push(format!("FAIL {e}"));
            }
        }
    }
    report
}
