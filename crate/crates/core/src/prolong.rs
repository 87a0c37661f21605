//! Complete and partial prolongation of a non-positive part inside `vect`,
//! and the degree-zero derivation algebra `der_0(g_-)`.
//!
//! `g_{i+1}` is the set of degree-`(i+1)` fields `X` with
//! `[X, g_{-j}] ⊆ g_{i+1-j}` for every `j = 1..d` (or only `j = 1` in the
//! [`DepthConstraint::J1Only`] variant). It is the kernel of the map sending
//! each candidate monomial field to its stacked brackets with a basis of
//! `g_{-j}`, reduced modulo the already known components.

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::field::PrimeField;
use crate::graded::{Element, GradedAlgebra, GradedError, Sdim};
use crate::linalg::{kernel_of_map, SparseVec, Subspace};
use crate::vectorfield::{Ambient, FieldError, VectorField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProlongError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("component of degree {0} is missing")]
    MissingComponent(i64),
    #[error("not a g_0-submodule: [{x}, {y}] = {z} leaves it")]
    NotSubmodule { x: String, y: String, z: String },
    #[error("seed is not contained in the complete first prolong")]
    NotInProlong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DepthConstraint {
    /// `[X, g_{-j}] ⊆ g_{i+1-j}` for all `j = 1..d`.
    #[default]
    AllJ,
    /// Only `[X, g_{-1}] ⊆ g_i`.
    J1Only,
}

impl std::str::FromStr for DepthConstraint {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all-j" => Ok(DepthConstraint::AllJ),
            "j1-only" => Ok(DepthConstraint::J1Only),
            _ => Err(format!("unknown depth constraint `{s}` (all-j, j1-only)")),
        }
    }
}

impl std::fmt::Display for DepthConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DepthConstraint::AllJ => "all-j",
            DepthConstraint::J1Only => "j1-only",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ProlongOptions {
    /// Highest degree to compute; by default run until a zero component.
    pub cap: Option<i64>,
    pub constraint: DepthConstraint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case", tag = "reason", content = "degree")]
pub enum Termination {
    /// The component of this degree is zero.
    ZeroComponent(i64),
    /// Stopped after computing this degree.
    DegreeCap(i64),
}

#[derive(Debug, Clone)]
pub struct ProlongResult<F: PrimeField> {
    pub algebra: GradedAlgebra<F>,
    pub termination: Termination,
    pub constraint: DepthConstraint,
}

impl<F: PrimeField> ProlongResult<F> {
    pub fn profile(&self) -> Vec<Sdim> {
        self.algebra.positive_profile()
    }
}

/// Checks that the non-positive part closes under bracket.
pub fn validate_nonpositive<F: PrimeField>(g: &GradedAlgebra<F>) -> Result<(), ProlongError> {
    g.check_closure()?;
    Ok(())
}

/// `{X ∈ vect_k : [X, g_{-j}] ⊆ g_{k-j}}` over the `j` selected by the
/// constraint variant. Degrees below the depth count as zero.
pub fn constrained_component<F: PrimeField>(
    g: &GradedAlgebra<F>,
    k: i64,
    constraint: DepthConstraint,
) -> Result<Subspace<F>, ProlongError> {
    let amb: &Arc<Ambient> = g.ambient();
    let d = g.depth();
    let js: Vec<i64> = match constraint {
        DepthConstraint::AllJ => (1..=d).collect(),
        DepthConstraint::J1Only => vec![1.min(d)],
    };
    // (target degree, negative basis element, quotient data)
    struct Block<F> {
        target: i64,
        y: VectorField<F>,
        known: Subspace<F>,
        free_pos: Vec<Option<usize>>,
        offset: usize,
    }
    let mut blocks = Vec::new();
    let mut offset = 0;
    for &j in &js {
        if j == 0 {
            continue;
        }
        let target = k - j;
        if target >= -d && !g.has(target) {
            return Err(ProlongError::MissingComponent(target));
        }
        let known = g.component(target);
        let free = known.free_columns();
        let mut free_pos = vec![None; known.ambient()];
        for (a, &c) in free.iter().enumerate() {
            free_pos[c] = Some(a);
        }
        for y in g.fields(-j) {
            blocks.push(Block {
                target,
                y,
                known: known.clone(),
                free_pos: free_pos.clone(),
                offset,
            });
            offset += free.len();
        }
    }
    let basis = amb.basis(k);
    let images: Vec<SparseVec<F>> = basis
        .elems()
        .par_iter()
        .map(|(m, i)| {
            let mut x = VectorField::zero();
            x.add_term(m.clone(), *i, F::one());
            let mut img = SparseVec::new();
            for b in &blocks {
                let z = amb.bracket(&x, &b.y);
                if z.is_zero() {
                    continue;
                }
                let c = amb.coords(&z, b.target).expect("bracket lands in target degree");
                let r = if b.known.is_zero() {
                    c
                } else {
                    b.known.reduce(&c).expect("length")
                };
                for (col, v) in r.into_iter().enumerate() {
                    if !v.is_zero() {
                        img.insert(
                            b.offset + b.free_pos[col].expect("reduced vectors live on free columns"),
                            v,
                        );
                    }
                }
            }
            img
        })
        .collect();
    Ok(kernel_of_map(&images))
}

/// `g_{i+1}` from the components `-d..=i`.
pub fn prolong_step<F: PrimeField>(
    g: &GradedAlgebra<F>,
    i: i64,
    constraint: DepthConstraint,
) -> Result<Subspace<F>, ProlongError> {
    for k in -g.depth()..=i {
        if !g.has(k) {
            return Err(ProlongError::MissingComponent(k));
        }
    }
    constrained_component(g, i + 1, constraint)
}

/// `der_0(g_-)`: degree-zero fields preserving every negative component.
pub fn der0<F: PrimeField>(g: &GradedAlgebra<F>) -> Result<Subspace<F>, ProlongError> {
    let neg = g.truncated(i64::MIN, -1);
    constrained_component(&neg, 0, DepthConstraint::AllJ)
}

/// Stops once `depth` consecutive components vanish: a field of the next
/// degree would commute with all of `g_-`. With `g_-` generated by `g_{-1}`
/// one zero component already suffices, but e.g. an abelian `g_-` with a
/// gap in its weights can have `g_k = 0` and `g_{k+1} != 0`.
fn run<F: PrimeField>(
    mut g: GradedAlgebra<F>,
    start: i64,
    opts: ProlongOptions,
) -> Result<ProlongResult<F>, ProlongError> {
    // without a cap the component past the top degree of vect is empty
    let cap = opts.cap.unwrap_or(i64::MAX);
    let depth = g.depth().max(1);
    let mut zeros = (0..depth)
        .take_while(|&j| start - j >= 1 && g.component(start - j).is_zero())
        .count() as i64;
    let mut i = start;
    loop {
        if zeros >= depth || i >= g.ambient().max_degree() {
            let first = i + 1 - zeros;
            for k in first..=i {
                g.remove_component(k);
            }
            return Ok(ProlongResult {
                algebra: g,
                termination: Termination::ZeroComponent(first),
                constraint: opts.constraint,
            });
        }
        if i >= cap {
            return Ok(ProlongResult {
                algebra: g,
                termination: Termination::DegreeCap(i),
                constraint: opts.constraint,
            });
        }
        let next = prolong_step(&g, i, opts.constraint)?;
        zeros = if next.is_zero() { zeros + 1 } else { 0 };
        g.set_component(i + 1, next);
        i += 1;
    }
}

/// Complete prolong of a non-positive part.
pub fn complete_prolong<F: PrimeField>(
    g: &GradedAlgebra<F>,
    opts: ProlongOptions,
) -> Result<ProlongResult<F>, ProlongError> {
    let base = g.truncated(i64::MIN, 0);
    let mut base = base;
    if !base.has(0) {
        base.set_component(0, Subspace::zero(g.ambient().basis(0).len()));
    }
    run(base, 0, opts)
}

/// Partial prolong starting from a `g_0`-submodule `h1` of the complete
/// `g_1`, given by degree-1 elements.
pub fn partial_prolong<F: PrimeField>(
    g: &GradedAlgebra<F>,
    h1: &[VectorField<F>],
    opts: ProlongOptions,
) -> Result<ProlongResult<F>, ProlongError> {
    let mut base = g.truncated(i64::MIN, 0);
    if !base.has(0) {
        base.set_component(0, Subspace::zero(g.ambient().basis(0).len()));
    }
    let full1 = prolong_step(&base, 0, opts.constraint)?;
    let amb = g.ambient().clone();
    let mut h = Subspace::zero(amb.basis(1).len());
    for x in h1 {
        let c = amb.coords(x, 1)?;
        if !full1.contains(&c).map_err(FieldError::from)? {
            return Err(ProlongError::NotInProlong);
        }
        h.insert(c).map_err(FieldError::from)?;
    }
    for y in base.fields(0) {
        for x in amb.fields_of(1, &h) {
            let z = amb.bracket(&y, &x);
            if !h.contains(&amb.coords(&z, 1)?).map_err(FieldError::from)? {
                let s = amb.spec();
                return Err(ProlongError::NotSubmodule {
                    x: y.render(s),
                    y: x.render(s),
                    z: z.render(s),
                });
            }
        }
    }
    base.set_component(1, h);
    run(base, 1, opts)
}

/// The complete prolong with `g_0` replaced by `g0` (given as elements).
pub fn prolong_with_g0<F: PrimeField>(
    g: &GradedAlgebra<F>,
    g0: &[Element<F>],
    opts: ProlongOptions,
) -> Result<ProlongResult<F>, ProlongError> {
    let mut base = g.truncated(i64::MIN, -1);
    let amb = g.ambient().clone();
    let mut s = Subspace::zero(amb.basis(0).len());
    for (_, x) in g0 {
        s.insert(amb.coords(x, 0)?).map_err(FieldError::from)?;
    }
    base.set_component(0, s);
    run(base, 0, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divided::{SuperMonomial, SuperPolynomial, VariableSpec};
    use crate::field::Fp;
    use crate::vectorfield::WeightGrading;
    use num_traits::One;

    type F3 = Fp<3>;

    fn linear_nonpositive(heights: &[u32], odd: usize) -> GradedAlgebra<F3> {
        let s = VariableSpec::standard(3, heights, odd).unwrap();
        let amb = Arc::new(Ambient::new(s.clone(), WeightGrading::standard(&s)));
        let gens: Vec<(String, i64, VectorField<F3>)> = (0..s.len())
            .map(|i| (format!("d{i}"), -1, VectorField::partial(&s, i)))
            .collect();
        let mut g = GradedAlgebra::from_generators(amb.clone(), &gens).unwrap();
        let d0 = der0(&g).unwrap();
        g.set_component(0, d0);
        g
    }

    #[test]
    fn der0_of_linear_part_is_gl() {
        let g = linear_nonpositive(&[1, 1], 1);
        // gl(2|1): 5|4
        assert_eq!(g.sdim(0), Sdim::new(5, 4));
    }

    #[test]
    fn vect_is_its_own_prolong() {
        let g = linear_nonpositive(&[1], 1);
        let amb = g.ambient().clone();
        let r = complete_prolong(&g, ProlongOptions::default()).unwrap();
        for k in 1..=amb.max_degree() {
            assert_eq!(r.algebra.component(k).dim(), amb.basis(k).len(), "degree {k}");
        }
        assert_eq!(r.termination, Termination::ZeroComponent(amb.max_degree() + 1));
    }

    #[test]
    fn cap_is_reported() {
        let g = linear_nonpositive(&[2], 0);
        let r = complete_prolong(
            &g,
            ProlongOptions {
                cap: Some(2),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.termination, Termination::DegreeCap(2));
        assert_eq!(r.profile().len(), 2);
    }

    #[test]
    fn missing_component_is_an_error() {
        let g = linear_nonpositive(&[1], 0);
        assert!(matches!(
            prolong_step(&g, 3, DepthConstraint::AllJ),
            Err(ProlongError::MissingComponent(1))
        ));
    }

    #[test]
    fn partial_with_full_seed_is_complete() {
        let g = linear_nonpositive(&[1, 1], 0);
        let full = complete_prolong(&g, ProlongOptions::default()).unwrap();
        let part = partial_prolong(&g, &full.algebra.fields(1), ProlongOptions::default()).unwrap();
        assert_eq!(part.algebra, full.algebra);
    }

    #[test]
    fn non_submodule_seed_is_rejected() {
        let g = linear_nonpositive(&[1, 1], 0);
        let full = complete_prolong(&g, ProlongOptions::default()).unwrap();
        let one = vec![full.algebra.fields(1)[0].clone()];
        assert!(matches!(
            partial_prolong(&g, &one, ProlongOptions::default()),
            Err(ProlongError::NotSubmodule { .. })
        ));
    }

    #[test]
    fn a_zero_component_need_not_end_the_prolong() {
        // g_- = <d_t, d_x> with t of weight 2 is not generated by g_{-1}
        let s = VariableSpec::standard(3, &[1, 1], 0).unwrap();
        let amb = Arc::new(Ambient::new(s.clone(), WeightGrading::new(&s, vec![2, 1]).unwrap()));
        let mut t = SuperMonomial::one(2);
        t.exps[0] = 1;
        let gens = vec![
            ("dt".to_string(), -2, VectorField::partial(&s, 0)),
            ("dx".to_string(), -1, VectorField::partial(&s, 1)),
            (
                "tdt".to_string(),
                0,
                VectorField::from_component(&SuperPolynomial::monomial(t, F3::one()), 0),
            ),
        ];
        let g = GradedAlgebra::from_generators(amb, &gens).unwrap();
        let r = partial_prolong(&g, &[], ProlongOptions::default()).unwrap();
        assert_eq!(r.algebra.sdim(1), Sdim::ZERO);
        assert_eq!(r.algebra.sdim(2), Sdim::new(1, 0));
        assert_eq!(r.termination, Termination::ZeroComponent(3));
    }
}
