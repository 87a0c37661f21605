//! Runs a scenario through the engine and checks each of its claims.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::divided::{Parity, SuperPolynomial, Variable, VariableSpec};
use crate::field::PrimeField;
use crate::graded::{Element, GradedAlgebra, Sdim};
use crate::linalg::{rank, LinalgError, Subspace};
use crate::parse::{parse_poly, Scope};
use crate::prolong::{
    complete_prolong, der0, partial_prolong, prolong_with_g0, DepthConstraint, ProlongError, ProlongOptions,
    ProlongResult, Termination,
};
use crate::scenarios::{CaseKind, Claim, ClaimKind, Direction, Measure, Origin, Scenario, ScenarioError, ScenarioSpec};
use crate::structure::{
    ad_chain, all_graded_ideals, graded_ideals, is_irreducible, module_span, sdim_of, simple_part,
    simplicity_certificate, singular_vectors, StructureError, Torus,
};
use crate::vectorfield::{FieldError, VectorField};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("{0}")]
    Prolong(#[from] ProlongError),
    #[error("{0}")]
    Structure(#[from] StructureError),
    #[error("{0}")]
    Field(#[from] FieldError),
    #[error("{0}")]
    Linalg(#[from] LinalgError),
    #[error("{0}")]
    Settings(String),
}

/// Engine settings for one run. `None` means the fixture default.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunSettings {
    pub heights: Option<Vec<u32>>,
    pub cap: Option<i64>,
    pub constraint: Option<DepthConstraint>,
    /// Only evaluate claims of this case, and report its algebra.
    pub partial: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Match,
    Mismatch,
    Unchecked,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
            Verdict::Unchecked => "unchecked",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimReport {
    pub index: usize,
    pub kind: &'static str,
    pub case: Option<String>,
    pub heights: Vec<u32>,
    pub origin: Origin,
    pub source: String,
    pub expected: String,
    pub computed: String,
    pub verdict: Verdict,
    /// Depth constraint the claim was evaluated with.
    pub constraint: DepthConstraint,
}

/// Summary of the algebra a run focuses on.
#[derive(Debug, Clone, Serialize)]
pub struct AlgebraSummary {
    pub case: Option<String>,
    pub heights: Vec<u32>,
    pub constraint: DepthConstraint,
    pub sdims: BTreeMap<i64, Sdim>,
    pub total: Sdim,
    pub termination: Termination,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub prime: u32,
    pub settings: RunSettings,
    pub algebra: AlgebraSummary,
    pub claims: Vec<ClaimReport>,
    /// Milliseconds per stage; left out of deterministic output.
    #[serde(skip)]
    pub timings: Vec<(String, f64)>,
}

impl RunReport {
    pub fn all_match(&self) -> bool {
        self.claims.iter().all(|c| c.verdict != Verdict::Mismatch)
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.claims.iter().filter(|c| c.verdict == v).count()
    }
}

fn fmt_list<T: std::fmt::Display>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// One computed algebra and what it was computed from.
struct Computed<F: PrimeField> {
    result: ProlongResult<F>,
}

/// Lazily built scenarios and case algebras, keyed by heights.
struct Context<'a> {
    spec: &'a ScenarioSpec,
    settings: &'a RunSettings,
}

struct Cache<F: PrimeField> {
    scenarios: HashMap<Vec<u32>, Scenario<F>>,
    algebras: HashMap<(Vec<u32>, Option<String>), Computed<F>>,
}

impl<'a> Context<'a> {
    fn constraint(&self, case: Option<&str>) -> DepthConstraint {
        if let Some(c) = self.settings.constraint {
            return c;
        }
        case.and_then(|n| self.spec.case(n))
            .and_then(|c| c.constraint)
            .unwrap_or_default()
    }

    fn opts(&self, case: Option<&str>) -> ProlongOptions {
        ProlongOptions {
            cap: self.settings.cap,
            constraint: self.constraint(case),
        }
    }

    fn scenario<'c, F: PrimeField>(&self, cache: &'c mut Cache<F>, h: &[u32]) -> Result<&'c Scenario<F>, ReportError> {
        if !cache.scenarios.contains_key(h) {
            let sc = self.spec.build::<F>(Some(h))?;
            cache.scenarios.insert(h.to_vec(), sc);
        }
        Ok(&cache.scenarios[h])
    }

    fn algebra<F: PrimeField>(
        &self,
        cache: &mut Cache<F>,
        h: &[u32],
        case: Option<&str>,
    ) -> Result<ProlongResult<F>, ReportError> {
        let key = (h.to_vec(), case.map(str::to_string));
        if let Some(c) = cache.algebras.get(&key) {
            return Ok(c.result.clone());
        }
        let opts = self.opts(case);
        let result = match case.map(|n| self.spec.case(n).expect("checked on parse")) {
            None => {
                let sc = self.scenario(cache, h)?;
                complete_prolong(&sc.nonpositive, opts)?
            }
            Some(c) => match &c.kind {
                CaseKind::Partial { seeds, base } => {
                    let host = self.algebra(cache, h, base.as_deref())?;
                    let sc = self.scenario(cache, h)?;
                    let amb = &sc.ambient;
                    let seeds: Vec<VectorField<F>> = seeds.iter().map(|l| sc.label(l).clone()).collect();
                    let m = module_span(amb, 1, &seeds, &host.algebra.fields(0))?;
                    partial_prolong(&host.algebra, &amb.fields_of(1, &m), opts)?
                }
                CaseKind::Der0 => {
                    let sc = self.scenario(cache, h)?;
                    let d = der0(&sc.nonpositive)?;
                    let g0: Vec<Element<F>> = sc.ambient.fields_of(0, &d).into_iter().map(|x| (0, x)).collect();
                    prolong_with_g0(&sc.nonpositive, &g0, opts)?
                }
                CaseKind::BracketG0 => {
                    let full = self.algebra(cache, h, None)?;
                    let sc = self.scenario(cache, h)?;
                    let g0 = bracket_component(&full.algebra, -1, 1)?;
                    let g0: Vec<Element<F>> = sc.ambient.fields_of(0, &g0).into_iter().map(|x| (0, x)).collect();
                    prolong_with_g0(&sc.nonpositive, &g0, opts)?
                }
                CaseKind::G0 { generators } => {
                    let sc = self.scenario(cache, h)?;
                    let g0: Vec<Element<F>> = generators.iter().map(|l| (0, sc.label(l).clone())).collect();
                    prolong_with_g0(&sc.nonpositive, &g0, opts)?
                }
            },
        };
        cache.algebras.insert(key, Computed { result: result.clone() });
        Ok(result)
    }
}

/// `[g_i, g_j]` as a subspace of degree `i + j`.
fn bracket_component<F: PrimeField>(g: &GradedAlgebra<F>, i: i64, j: i64) -> Result<Subspace<F>, ReportError> {
    let a: Vec<Element<F>> = g.fields(i).into_iter().map(|x| (i, x)).collect();
    let b: Vec<Element<F>> = g.fields(j).into_iter().map(|x| (j, x)).collect();
    Ok(g.bracket_span(&a, &b)?.component(i + j))
}

/// The Borel data of the scenario that lies in the algebra's `g_0`.
fn borel_in<F: PrimeField>(
    sc: &Scenario<F>,
    g: &GradedAlgebra<F>,
) -> Result<(Torus<F>, Vec<VectorField<F>>, Vec<VectorField<F>>), ReportError> {
    let keep = |xs: &[VectorField<F>]| -> Result<Vec<VectorField<F>>, ReportError> {
        let mut out = Vec::new();
        for x in xs {
            if g.contains(0, x)? {
                out.push(x.clone());
            }
        }
        Ok(out)
    };
    let torus = Torus::new(&sc.ambient, &keep(&sc.borel.cartan)?)?;
    Ok((torus, keep(&sc.borel.lowering)?, keep(&sc.borel.raising)?))
}

/// `(f, g) = ∫ (f_0 g_0' - f_1 g_1) dt` on functions of one even `t` of
/// height one and one odd `θ`, with `f = f_0 + f_1 θ` and `∫ t^(p-1) = 1`.
pub fn pairing_value<F: PrimeField>(spec: &VariableSpec, f: &SuperPolynomial<F>, g: &SuperPolynomial<F>) -> F {
    let split = |h: &SuperPolynomial<F>| {
        let mut even = SuperPolynomial::zero();
        let mut odd = SuperPolynomial::zero();
        for (m, &c) in &h.terms {
            if m.odd == 0 {
                even.add_term(m.clone(), c);
            } else {
                let mut m = m.clone();
                m.odd = 0;
                odd.add_term(m, c);
            }
        }
        (even, odd)
    };
    let (f0, f1) = split(f);
    let (g0, g1) = split(g);
    let dg0 = spec.partial(&g0, 0).expect("t is variable 0");
    let mut integrand = spec.multiply(&f0, &dg0);
    integrand.add_assign_scaled(&spec.multiply(&f1, &g1), -F::one());
    let top = spec.variable_power(0, spec.prime() - 1).expect("height one");
    integrand.terms.get(&top).copied().unwrap_or_else(F::zero)
}

/// The `1|1`-dimensional coordinate space `t, θ` of the pairing.
pub fn pairing_space(prime: u32) -> VariableSpec {
    VariableSpec::new(
        prime,
        vec![
            Variable {
                name: "t".into(),
                parity: Parity::Even,
                height: 1,
            },
            Variable {
                name: "theta".into(),
                parity: Parity::Odd,
                height: 1,
            },
        ],
    )
    .expect("valid")
}

fn check<T: PartialEq + std::fmt::Debug>(expected: T, computed: T) -> Verdict {
    if expected == computed {
        Verdict::Match
    } else {
        Verdict::Mismatch
    }
}

struct Outcome {
    expected: String,
    computed: String,
    verdict: Verdict,
}

fn outcome(expected: impl Into<String>, computed: impl Into<String>, verdict: Verdict) -> Outcome {
    Outcome {
        expected: expected.into(),
        computed: computed.into(),
        verdict,
    }
}

fn evaluate<F: PrimeField>(
    ctx: &Context<'_>,
    cache: &mut Cache<F>,
    claim: &Claim,
    h: &[u32],
) -> Result<Outcome, ReportError> {
    let case = claim.case.as_deref();
    let r = ctx.algebra(cache, h, case)?;
    let g = &r.algebra;
    let capped = matches!(r.termination, Termination::DegreeCap(_));
    let sc = ctx.scenario(cache, h)?;
    let amb = sc.ambient.clone();
    let labels = |ls: &[String]| -> Vec<VectorField<F>> { ls.iter().map(|l| sc.label(l).clone()).collect() };
    Ok(match &claim.kind {
        ClaimKind::Nonpositive { degrees, sdims } => {
            let got: Vec<Sdim> = degrees.iter().map(|&k| g.sdim(k)).collect();
            outcome(fmt_list(sdims), fmt_list(&got), check(sdims, &got))
        }
        ClaimKind::Profile { profile } => {
            let got = r.profile();
            let v = if capped {
                Verdict::Unchecked
            } else {
                check(profile, &got)
            };
            outcome(fmt_list(profile), fmt_list(&got), v)
        }
        ClaimKind::ProfileShape { length, prefix, suffix } => {
            let got = r.profile();
            let ok = got.len() == *length && got.starts_with(prefix) && got.ends_with(suffix);
            let v = if capped {
                Verdict::Unchecked
            } else if ok {
                Verdict::Match
            } else {
                Verdict::Mismatch
            };
            outcome(
                format!("{length} components, {} .. {}", fmt_list(prefix), fmt_list(suffix)),
                format!("{} components, {}", got.len(), fmt_list(&got)),
                v,
            )
        }
        ClaimKind::Total { sdim } => {
            let got = g.total_sdim();
            let v = if capped { Verdict::Unchecked } else { check(*sdim, got) };
            outcome(sdim.to_string(), got.to_string(), v)
        }
        ClaimKind::Singular {
            degree,
            direction,
            count,
            vectors,
        } => {
            let (torus, lower, raise) = borel_in(sc, g)?;
            let ops = match direction {
                Direction::Lowest => &lower,
                Direction::Highest => &raise,
            };
            let found = singular_vectors(g, *degree, &torus, ops)?;
            let kernel = amb.span(*degree, &found.iter().map(|s| s.vector.clone()).collect::<Vec<_>>())?;
            let listed = amb.span(*degree, &labels(vectors))?;
            let mut ok = found.len() == *count;
            if !vectors.is_empty() {
                ok &= listed == kernel;
            }
            let shown: Vec<String> = found.iter().map(|s| s.vector.render(amb.spec())).collect();
            outcome(
                format!("{count} {direction} {}", fmt_list(vectors)),
                format!("{} {direction}: {}", found.len(), shown.join("; ")),
                if ok { Verdict::Match } else { Verdict::Mismatch },
            )
        }
        ClaimKind::Irreducible { degree, expected } => {
            let (torus, _, _) = borel_in(sc, g)?;
            let res = is_irreducible(g, *degree, &torus, &g.fields(0))?;
            let computed = match &res.witness {
                Some(w) => format!("reducible, submodule {}", sdim_of(&amb, *degree, w)),
                None => format!("{}", if res.irreducible { "irreducible" } else { "zero" }),
            };
            let exp = if *expected { "irreducible" } else { "reducible" };
            outcome(exp, computed, check(*expected, res.irreducible))
        }
        ClaimKind::Module { seeds, sdim } => {
            let xs = labels(seeds);
            let d = amb.degree_of(&xs[0]).unwrap_or(0);
            let m = module_span(&amb, d, &xs, &g.fields(0))?;
            let got = sdim_of(&amb, d, &m);
            outcome(sdim.to_string(), got.to_string(), check(*sdim, got))
        }
        ClaimKind::AdChain { seeds, profile } => {
            let xs = labels(seeds);
            let d = amb.degree_of(&xs[0]).unwrap_or(0);
            let m = module_span(&amb, d, &xs, &g.fields(0))?;
            let chain = ad_chain(&amb, d, &m)?;
            let got: Vec<Sdim> = chain
                .iter()
                .enumerate()
                .map(|(i, s)| sdim_of(&amb, d * (i as i64 + 1), s))
                .collect();
            outcome(fmt_list(profile), fmt_list(&got), check(profile, &got))
        }
        ClaimKind::Simplicity { simple, failing } => {
            let (torus, lower, raise) = borel_in(sc, g)?;
            let cert = simplicity_certificate(g, &torus)?;
            let failed: Vec<String> = cert.failing().iter().map(|c| c.to_string()).collect();
            let mut ok = cert.simple() == *simple && failing.iter().all(|f| failed.contains(f));
            let mut computed = if cert.simple() {
                "simple".to_string()
            } else {
                format!("not simple, failing {}", fmt_list(&failed))
            };
            if cert.simple() {
                // a certificate must not coexist with a proper ideal
                let ideals = graded_ideals(g, &torus, &lower, &raise)?;
                if !ideals.is_empty() {
                    ok = false;
                    let _ = write!(computed, ", yet {} ideals", ideals.len());
                }
            }
            let exp = if *simple {
                "simple".to_string()
            } else {
                format!("not simple, failing at least {}", fmt_list(failing))
            };
            outcome(exp, computed, if ok { Verdict::Match } else { Verdict::Mismatch })
        }
        ClaimKind::Ideals { sdims } => {
            let (torus, _, _) = borel_in(sc, g)?;
            let ideals = all_graded_ideals(g, &torus)?;
            let mut got: Vec<Sdim> = ideals.iter().map(|i| i.total_sdim()).collect();
            got.dedup();
            outcome(
                fmt_list(sdims),
                format!("{} ({} ideals)", fmt_list(&got), ideals.len()),
                check(sdims, &got),
            )
        }
        ClaimKind::Der0 { sdim, contains } => {
            let d = der0(&g.truncated(i64::MIN, -1))?;
            let got = sdim_of(&amb, 0, &d);
            let mut missing = Vec::new();
            for (l, x) in contains.iter().zip(labels(contains)) {
                if !d.contains(&amb.coords(&x, 0)?)? {
                    missing.push(l.clone());
                }
            }
            let mut computed = got.to_string();
            if !missing.is_empty() {
                let _ = write!(computed, ", missing {}", fmt_list(&missing));
            }
            let ok = got == *sdim && missing.is_empty();
            outcome(
                format!("{sdim} containing {}", fmt_list(contains)),
                computed,
                if ok { Verdict::Match } else { Verdict::Mismatch },
            )
        }
        ClaimKind::SimplePart {
            sdim,
            profile,
            complement,
        } => {
            let s = simple_part(g)?;
            let mut ok = true;
            let mut exp = Vec::new();
            let mut got = Vec::new();
            if let Some(t) = sdim {
                ok &= s.total_sdim() == *t;
                exp.push(format!("total {t}"));
                got.push(format!("total {}", s.total_sdim()));
            }
            if let Some(p) = profile {
                let sp = s.positive_profile();
                ok &= sp == *p;
                exp.push(format!("profile {}", fmt_list(p)));
                got.push(format!("profile {}", fmt_list(&sp)));
            }
            if let Some(c) = complement {
                let mut diff = BTreeMap::new();
                for k in g.degrees() {
                    let a = g.sdim(k);
                    let b = s.sdim(k);
                    if a != b {
                        diff.insert(k.to_string(), Sdim::new(a.even - b.even, a.odd - b.odd));
                    }
                }
                ok &= diff == *c;
                let show = |m: &BTreeMap<String, Sdim>| {
                    let v: Vec<String> = m.iter().map(|(k, s)| format!("{k}: {s}")).collect();
                    format!("complement {{{}}}", v.join(", "))
                };
                exp.push(show(c));
                got.push(show(&diff));
            }
            if capped {
                ok = false;
            }
            let v = if capped {
                Verdict::Unchecked
            } else if ok {
                Verdict::Match
            } else {
                Verdict::Mismatch
            };
            outcome(exp.join("; "), got.join("; "), v)
        }
        ClaimKind::Bracket {
            left,
            right,
            sdim,
            equals_component,
            subalgebra,
            derived,
        } => {
            let a: Vec<Element<F>> = g.fields(*left).into_iter().map(|x| (*left, x)).collect();
            let b: Vec<Element<F>> = g.fields(*right).into_iter().map(|x| (*right, x)).collect();
            let br = g.bracket_span(&a, &b)?;
            let k = left + right;
            let got = br.sdim(k);
            let mut ok = got == *sdim;
            let mut exp = vec![sdim.to_string()];
            let mut comp = vec![got.to_string()];
            if let Some(e) = equals_component {
                let eq = br.component(k) == g.component(k);
                ok &= eq == *e;
                exp.push(format!("equals g_{k}: {e}"));
                comp.push(format!("equals g_{k}: {eq}"));
            }
            if let Some(e) = subalgebra {
                let closed = br.check_closure().is_ok();
                ok &= closed == *e;
                exp.push(format!("subalgebra: {e}"));
                comp.push(format!("subalgebra: {closed}"));
            }
            if let Some(d) = derived {
                let els = br.elements();
                let dd = g.bracket_span(&els, &els)?.total_sdim();
                ok &= dd == *d;
                exp.push(format!("derived {d}"));
                comp.push(format!("derived {dd}"));
            }
            outcome(
                exp.join(", "),
                comp.join(", "),
                if ok { Verdict::Match } else { Verdict::Mismatch },
            )
        }
        ClaimKind::NIndependence {
            max_height,
            slots,
            measure,
        } => {
            let shape = |r: &ProlongResult<F>| -> Result<Vec<Sdim>, ReportError> {
                Ok(match measure {
                    Measure::Profile => r.profile(),
                    Measure::SimplePart => simple_part(&r.algebra)?.sdims().into_values().collect(),
                })
            };
            let base = h.to_vec();
            let base_shape = shape(&r)?;
            let slots: Vec<usize> = slots.clone().unwrap_or_else(|| (0..base.len()).collect());
            let mut diffs = Vec::new();
            let mut unchecked = capped;
            for &s in &slots {
                for n in base[s] + 1..=*max_height {
                    let mut hh = base.clone();
                    hh[s] = n;
                    let other = ctx.algebra(cache, &hh, case)?;
                    unchecked |= matches!(other.termination, Termination::DegreeCap(_));
                    let got = shape(&other)?;
                    if got != base_shape {
                        diffs.push(format!("{hh:?}: {} components {}", got.len(), fmt_list(&got)));
                    }
                }
            }
            let v = if !diffs.is_empty() {
                Verdict::Mismatch
            } else if unchecked {
                Verdict::Unchecked
            } else {
                Verdict::Match
            };
            let what = match measure {
                Measure::Profile => "profile",
                Measure::SimplePart => "simple part",
            };
            let computed = if diffs.is_empty() {
                format!("same {what} {}", fmt_list(&base_shape))
            } else {
                format!("differs at {}", diffs.join("; "))
            };
            outcome(
                format!("{what} unchanged in slots {slots:?} up to height {max_height}"),
                computed,
                v,
            )
        }
        ClaimKind::Span { degree, vectors } => {
            let s = amb.span(*degree, &labels(vectors))?;
            let comp = g.component(*degree);
            let got = sdim_of(&amb, *degree, &comp);
            outcome(
                format!("g_{degree} = span {}", fmt_list(vectors)),
                format!("g_{degree} of sdim {got}, spanned: {}", s == comp),
                check(&s, &comp),
            )
        }
        ClaimKind::Contains { vectors } => {
            let mut missing = Vec::new();
            for (l, x) in vectors.iter().zip(labels(vectors)) {
                let inside = match amb.degree_of(&x) {
                    Some(d) => g.contains(d, &x)?,
                    None => x.is_zero(),
                };
                if !inside {
                    missing.push(l.clone());
                }
            }
            outcome(
                format!("contains {}", fmt_list(vectors)),
                if missing.is_empty() {
                    "all contained".to_string()
                } else {
                    format!("missing {}", fmt_list(&missing))
                },
                if missing.is_empty() {
                    Verdict::Match
                } else {
                    Verdict::Mismatch
                },
            )
        }
        ClaimKind::PairingRank { rank: expected_rank } => {
            let pairing = ctx.spec.pairing.as_ref().expect("checked on parse");
            let spec = pairing_space(ctx.spec.prime);
            let empty = HashMap::new();
            let scope = Scope::<F> {
                spec: &spec,
                power: ctx.spec.power,
                labels: &empty,
            };
            let poly = |s: &str| {
                parse_poly::<F>(s, &scope).map_err(|e| ReportError::Settings(format!("pairing element `{s}`: {e}")))
            };
            let basis = pairing.basis.iter().map(|b| poly(b)).collect::<Result<Vec<_>, _>>()?;
            let gram: Vec<Vec<F>> = basis
                .iter()
                .map(|f| basis.iter().map(|g| pairing_value(&spec, f, g)).collect())
                .collect();
            let got_rank = rank(&gram, basis.len())?;
            let mut bad = Vec::new();
            for v in &pairing.values {
                let got = pairing_value(&spec, &poly(&v.left)?, &poly(&v.right)?);
                if got != F::from_i64(v.value) {
                    bad.push(format!("({}, {}) = {}", v.left, v.right, got.signed()));
                }
            }
            let ok = bad.is_empty() && got_rank == *expected_rank;
            let mut computed = format!("rank {got_rank}");
            if !bad.is_empty() {
                let _ = write!(computed, ", differing values {}", bad.join(", "));
            }
            outcome(
                format!("rank {expected_rank}, {} listed values", pairing.values.len()),
                computed,
                if ok { Verdict::Match } else { Verdict::Mismatch },
            )
        }
    })
}

fn summary<F: PrimeField>(r: &ProlongResult<F>, case: Option<&str>, h: &[u32]) -> AlgebraSummary {
    AlgebraSummary {
        case: case.map(str::to_string),
        heights: h.to_vec(),
        constraint: r.constraint,
        sdims: r.algebra.sdims(),
        total: r.algebra.total_sdim(),
        termination: r.termination,
    }
}

/// Runs the scenario over `F` and evaluates its claims.
pub fn run_with<F: PrimeField>(spec: &ScenarioSpec, settings: &RunSettings) -> Result<RunReport, ReportError> {
    if let Some(c) = &settings.partial {
        if spec.case(c).is_none() {
            return Err(ReportError::Settings(format!("{}: no case named `{c}`", spec.name)));
        }
    }
    let defaults = spec.heights();
    let heights = settings.heights.clone().unwrap_or(defaults.clone());
    if heights.len() != defaults.len() {
        return Err(ReportError::Settings(format!(
            "{}: expected {} heights, got {}",
            spec.name,
            defaults.len(),
            heights.len()
        )));
    }
    let ctx = Context { spec, settings };
    let mut cache = Cache::<F> {
        scenarios: HashMap::new(),
        algebras: HashMap::new(),
    };
    let mut timings = Vec::new();
    let t = Instant::now();
    let focus = settings.partial.as_deref();
    let main = ctx.algebra(&mut cache, &heights, focus)?;
    timings.push(("prolong".to_string(), t.elapsed().as_secs_f64() * 1e3));
    let algebra = summary(&main, focus, &heights);
    let mut claims = Vec::new();
    for (index, claim) in spec.claims.iter().enumerate() {
        if focus.is_some() && claim.case.as_deref() != focus {
            continue;
        }
        // claims pinned to other heights only run at the fixture defaults
        let h = match &claim.heights {
            Some(ch) if settings.heights.is_none() => ch.clone(),
            Some(_) => continue,
            None => heights.clone(),
        };
        let t = Instant::now();
        let o = evaluate(&ctx, &mut cache, claim, &h)?;
        timings.push((
            format!("claim {index} {}", claim.kind.name()),
            t.elapsed().as_secs_f64() * 1e3,
        ));
        claims.push(ClaimReport {
            index,
            kind: claim.kind.name(),
            case: claim.case.clone(),
            heights: h,
            origin: claim.origin,
            source: claim.source.clone(),
            expected: o.expected,
            computed: o.computed,
            verdict: o.verdict,
            constraint: ctx.constraint(claim.case.as_deref()),
        });
    }
    Ok(RunReport {
        scenario: spec.name.clone(),
        prime: spec.prime,
        settings: settings.clone(),
        algebra,
        claims,
        timings,
    })
}

/// Dispatches on the characteristic of the fixture.
#[macro_export]
macro_rules! with_prime {
    ($p:expr, $f:ident ( $($arg:expr),* )) => {
        match $p {
            3 => Ok($f::<$crate::F3>($($arg),*)),
            5 => Ok($f::<$crate::F5>($($arg),*)),
            7 => Ok($f::<$crate::F7>($($arg),*)),
            p => Err(p),
        }
    };
}

/// Builds one case algebra (`None` for the complete prolong) at the default
/// heights, with the scenario it lives in.
pub fn case_algebra<F: PrimeField>(
    spec: &ScenarioSpec,
    case: Option<&str>,
) -> Result<(Scenario<F>, GradedAlgebra<F>), ReportError> {
    if let Some(c) = case {
        if spec.case(c).is_none() {
            return Err(ReportError::Settings(format!("{}: no case named `{c}`", spec.name)));
        }
    }
    let settings = RunSettings::default();
    let ctx = Context {
        spec,
        settings: &settings,
    };
    let mut cache = Cache::<F> {
        scenarios: HashMap::new(),
        algebras: HashMap::new(),
    };
    let h = spec.heights();
    let g = ctx.algebra(&mut cache, &h, case)?.algebra;
    let sc = cache.scenarios.remove(&h).expect("built with the algebra");
    Ok((sc, g))
}

pub fn run(spec: &ScenarioSpec, settings: &RunSettings) -> Result<RunReport, ReportError> {
    with_prime!(spec.prime, run_with(spec, settings))
        .map_err(|p| ReportError::Settings(format!("characteristic {p} is not supported (3, 5, 7)")))?
}

/// Human-readable table.
pub fn render_table(r: &RunReport, timings: bool) -> String {
    let mut s = String::new();
    let a = &r.algebra;
    let _ = writeln!(
        s,
        "== {} (p = {}, N = {:?}, {}{})",
        r.scenario,
        r.prime,
        a.heights,
        a.constraint,
        a.case.as_ref().map(|c| format!(", case {c}")).unwrap_or_default()
    );
    let degs: Vec<String> = a.sdims.keys().map(|k| format!("{k:>6}")).collect();
    let dims: Vec<String> = a.sdims.values().map(|d| format!("{:>6}", d.to_string())).collect();
    let _ = writeln!(s, "  degree {}", degs.join(""));
    let _ = writeln!(s, "  sdim   {}", dims.join(""));
    let term = match a.termination {
        Termination::ZeroComponent(k) => format!("g_{k} = 0"),
        Termination::DegreeCap(k) => format!("degree cap {k}"),
    };
    let _ = writeln!(s, "  total {} ({term})", a.total);
    for c in &r.claims {
        let mark = match c.verdict {
            Verdict::Match => "ok  ",
            Verdict::Mismatch => "FAIL",
            Verdict::Unchecked => "--  ",
        };
        let case = c.case.as_ref().map(|x| format!(" [{x}]")).unwrap_or_default();
        let _ = writeln!(
            s,
            "  {mark} #{} {}{case} N={:?}: {}",
            c.index, c.kind, c.heights, c.source
        );
        if c.verdict != Verdict::Match {
            let _ = writeln!(s, "         expected {}", c.expected);
            let _ = writeln!(s, "         computed {}", c.computed);
        }
    }
    let _ = writeln!(
        s,
        "  {} match, {} mismatch, {} unchecked",
        r.count(Verdict::Match),
        r.count(Verdict::Mismatch),
        r.count(Verdict::Unchecked)
    );
    if timings {
        for (k, ms) in &r.timings {
            let _ = writeln!(s, "  time {k}: {ms:.1} ms");
        }
    }
    s
}

#[derive(Serialize)]
struct ClaimRecord<'a> {
    record: &'static str,
    scenario: &'a str,
    #[serde(flatten)]
    claim: &'a ClaimReport,
}

#[derive(Serialize)]
struct HeaderRecord<'a> {
    record: &'static str,
    scenario: &'a str,
    prime: u32,
    settings: &'a RunSettings,
    algebra: &'a AlgebraSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings_ms: Option<BTreeMap<&'a str, f64>>,
}

/// One JSON object per line: a header for the run, then one per claim.
pub fn render_records(r: &RunReport, timings: bool) -> String {
    let mut s = String::new();
    let header = HeaderRecord {
        record: "run",
        scenario: &r.scenario,
        prime: r.prime,
        settings: &r.settings,
        algebra: &r.algebra,
        timings_ms: timings.then(|| r.timings.iter().map(|(k, v)| (k.as_str(), *v)).collect()),
    };
    s.push_str(&serde_json::to_string(&header).expect("serializable"));
    s.push('\n');
    for c in &r.claims {
        let rec = ClaimRecord {
            record: "claim",
            scenario: &r.scenario,
            claim: c,
        };
        s.push_str(&serde_json::to_string(&rec).expect("serializable"));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::parse_spec;
    use crate::F5;

    const LINE: &str = r#"
name = "line"
title = "vect(1) in characteristic 3"
citation = "none"
prime = 3

[[variables]]
name = "x1"
parity = "even"
weight = 1

[[generators]]
label = "Y"
degree = -1
field = "d1"

[[generators]]
label = "H"
degree = 0
field = "x1*d1"

[[claims]]
kind = "profile"
profile = ["1|0"]
origin = "derived"
source = "x^(2) d is the only degree-1 field"

[[claims]]
kind = "total"
sdim = "4|0"
origin = "derived"
source = "deliberately wrong"
"#;

    #[test]
    fn verdicts_and_determinism() {
        let spec = parse_spec("line", LINE).unwrap();
        let r = run(&spec, &RunSettings::default()).unwrap();
        assert_eq!(r.claims[0].verdict, Verdict::Match);
        assert_eq!(r.claims[1].verdict, Verdict::Mismatch);
        assert_eq!(r.claims[1].computed, "3|0");
        assert!(!r.all_match());
        let again = run(&spec, &RunSettings::default()).unwrap();
        assert_eq!(render_records(&r, false), render_records(&again, false));
        assert!(render_table(&r, false).contains("FAIL"));
    }

    #[test]
    fn cap_makes_profiles_unchecked() {
        let spec = parse_spec("line", LINE).unwrap();
        let settings = RunSettings {
            cap: Some(0),
            ..Default::default()
        };
        let r = run(&spec, &settings).unwrap();
        assert_eq!(r.claims[0].verdict, Verdict::Unchecked);
    }

    #[test]
    fn pairing_of_divided_powers() {
        let spec = pairing_space(5);
        let empty = HashMap::new();
        let scope = Scope::<F5> {
            spec: &spec,
            power: Default::default(),
            labels: &empty,
        };
        let p = |s: &str| parse_poly::<F5>(s, &scope).unwrap();
        assert_eq!(pairing_value(&spec, &p("t"), &p("t^(4)")), F5::from_i64(4));
        assert_eq!(pairing_value(&spec, &p("t^(4)"), &p("t")), F5::from_i64(-4));
        assert_eq!(
            pairing_value(&spec, &p("t^(2)*theta"), &p("t^(2)*theta")),
            F5::from_i64(-1)
        );
    }
}
