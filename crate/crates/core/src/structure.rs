//! `g_0`-module structure of the components and ideal structure of a graded
//! algebra: weights, singular vectors, generated submodules,
//! irreducibility, graded ideals and simplicity.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::divided::{Parity, Slot};
use crate::field::PrimeField;
use crate::graded::{Element, GradedAlgebra, Sdim};
use crate::linalg::{kernel_of_map, sum_and_intersect, LinalgError, SparseVec, Subspace};
use crate::vectorfield::{Ambient, FieldError, FieldKey, VectorField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("cartan element {0} is not diagonal on monomial fields")]
    NotDiagonal(String),
    #[error("cartan elements {0} and {1} do not commute")]
    NotCommuting(String, String),
    #[error("the subspace of degree {0} is not stable under the cartan elements")]
    NotStable(i64),
}

/// A weight: the eigenvalues of the cartan elements, as residues.
pub type Weight = Vec<u32>;

/// Commuting diagonal elements `h = Σ c_k x_k ∂_k`.
#[derive(Debug, Clone)]
pub struct Torus<F> {
    /// `coeffs[a][k]` is the coefficient of `x_k ∂_k` in the `a`-th element.
    coeffs: Vec<Vec<F>>,
}

impl<F: PrimeField> Torus<F> {
    pub fn new(amb: &Ambient, cartan: &[VectorField<F>]) -> Result<Self, StructureError> {
        let spec = amb.spec();
        let mut coeffs = Vec::new();
        for h in cartan {
            let mut c = vec![F::zero(); spec.len()];
            for ((m, i), &v) in h.terms() {
                let var = spec.variable_power(*i, 1).map_err(FieldError::from)?;
                if *m != var {
                    return Err(StructureError::NotDiagonal(h.render(spec)));
                }
                c[*i] = v;
            }
            coeffs.push(c);
        }
        for (a, x) in cartan.iter().enumerate() {
            for y in &cartan[a + 1..] {
                if !amb.bracket(x, y).is_zero() {
                    return Err(StructureError::NotCommuting(x.render(spec), y.render(spec)));
                }
            }
        }
        Ok(Torus { coeffs })
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// Weight of the monomial field `x^a ξ^J ∂_i`.
    pub fn weight_of(&self, amb: &Ambient, key: &FieldKey) -> Weight {
        let spec = amb.spec();
        let (m, i) = key;
        self.coeffs
            .iter()
            .map(|c| {
                let mut w = -c[*i];
                for (k, &ck) in c.iter().enumerate() {
                    let e = match spec.slot(k) {
                        Slot::Even(j) => m.exps[j] as i64,
                        Slot::Odd(j) => (m.odd >> j & 1) as i64,
                    };
                    w += ck * F::from_i64(e);
                }
                w.value()
            })
            .collect()
    }

    /// Weight of a homogeneous weight vector, if it is one.
    pub fn weight_of_field(&self, amb: &Ambient, x: &VectorField<F>) -> Option<Weight> {
        let mut ws = x.terms().keys().map(|k| self.weight_of(amb, k));
        let first = ws.next()?;
        ws.all(|w| w == first).then_some(first)
    }
}

/// Simultaneous eigenspaces of the torus on a stable subspace of degree `k`.
pub fn weight_decompose<F: PrimeField>(
    amb: &Ambient,
    torus: &Torus<F>,
    k: i64,
    s: &Subspace<F>,
) -> Result<BTreeMap<Weight, Subspace<F>>, StructureError> {
    let basis = amb.basis(k);
    let weights: Vec<Weight> = basis.elems().iter().map(|key| torus.weight_of(amb, key)).collect();
    let mut out: BTreeMap<Weight, Subspace<F>> = BTreeMap::new();
    for row in s.rows() {
        let mut parts: BTreeMap<&Weight, Vec<F>> = BTreeMap::new();
        for (c, &v) in row.iter().enumerate() {
            if !v.is_zero() {
                parts.entry(&weights[c]).or_insert_with(|| vec![F::zero(); row.len()])[c] = v;
            }
        }
        for (w, part) in parts {
            if !s.contains(&part)? {
                return Err(StructureError::NotStable(k));
            }
            out.entry(w.clone())
                .or_insert_with(|| Subspace::zero(row.len()))
                .insert(part)?;
        }
    }
    Ok(out)
}

/// Weight spaces further split by parity.
pub fn weight_parity_decompose<F: PrimeField>(
    amb: &Ambient,
    torus: &Torus<F>,
    k: i64,
    s: &Subspace<F>,
) -> Result<BTreeMap<(Weight, Parity), Subspace<F>>, StructureError> {
    let mut out = BTreeMap::new();
    for (w, sub) in weight_decompose(amb, torus, k, s)? {
        let (e, o) = amb.parity_parts(k, &sub);
        if !e.is_zero() {
            out.insert((w.clone(), Parity::Even), e);
        }
        if !o.is_zero() {
            out.insert((w, Parity::Odd), o);
        }
    }
    Ok(out)
}

/// Joint kernel of `ad(ops)` on the subspace `s` of degree `k`.
pub fn joint_kernel<F: PrimeField>(
    amb: &Ambient,
    k: i64,
    s: &Subspace<F>,
    ops: &[VectorField<F>],
) -> Result<Subspace<F>, StructureError> {
    let fields = amb.fields_of(k, s);
    let mut images = Vec::with_capacity(fields.len());
    for x in &fields {
        let mut img = SparseVec::new();
        let mut offset = 0;
        for z in ops {
            let y = amb.bracket(z, x);
            let Some(d) = amb.degree_of(z) else {
                continue;
            };
            let target = amb.basis(k + d).len();
            if !y.is_zero() {
                for (c, v) in amb.coords(&y, k + d)?.into_iter().enumerate() {
                    if !v.is_zero() {
                        img.insert(offset + c, v);
                    }
                }
            }
            offset += target;
        }
        images.push(img);
    }
    let ker = kernel_of_map(&images);
    let mut out = Subspace::zero(s.ambient());
    for coeffs in ker.rows() {
        let mut v = vec![F::zero(); s.ambient()];
        for (row, &c) in s.rows().iter().zip(coeffs) {
            if !c.is_zero() {
                for (a, &b) in v.iter_mut().zip(row) {
                    *a += c * b;
                }
            }
        }
        out.insert(v)?;
    }
    Ok(out)
}

/// A singular vector with its weight, normalized to leading coefficient 1.
#[derive(Clone)]
pub struct Singular<F> {
    pub weight: Weight,
    pub vector: VectorField<F>,
}

/// Weight vectors of `g_k` annihilated by every lowering (or raising)
/// operator.
pub fn singular_vectors<F: PrimeField>(
    g: &GradedAlgebra<F>,
    k: i64,
    torus: &Torus<F>,
    ops: &[VectorField<F>],
) -> Result<Vec<Singular<F>>, StructureError> {
    let amb = g.ambient();
    let ker = joint_kernel(amb, k, &g.component(k), ops)?;
    let mut out = Vec::new();
    for ((weight, _), sub) in weight_parity_decompose(amb, torus, k, &ker)? {
        for row in sub.rows() {
            out.push(Singular {
                weight: weight.clone(),
                vector: amb.field(k, row),
            });
        }
    }
    Ok(out)
}

/// Smallest subspace of degree `k` containing the seeds and stable under
/// `ad` of the degree-zero `action`.
pub fn module_span<F: PrimeField>(
    amb: &Ambient,
    k: i64,
    seeds: &[VectorField<F>],
    action: &[VectorField<F>],
) -> Result<Subspace<F>, StructureError> {
    let mut span = Subspace::zero(amb.basis(k).len());
    let mut queue = Vec::new();
    for x in seeds {
        if span.insert(amb.coords(x, k)?)? {
            queue.push(x.clone());
        }
    }
    while let Some(x) = queue.pop() {
        for a in action {
            let y = amb.bracket(a, &x);
            if !y.is_zero() && span.insert(amb.coords(&y, k)?)? {
                queue.push(y);
            }
        }
    }
    Ok(span)
}

/// Every line of a small space, one representative each.
fn lines<F: PrimeField>(s: &Subspace<F>) -> Vec<Vec<F>> {
    let d = s.dim();
    let p = F::CHARACTERISTIC as u64;
    let mut out = Vec::new();
    // coefficient vectors whose first nonzero entry is 1
    let total = p.saturating_pow(d as u32);
    for code in 1..total {
        let mut c = Vec::with_capacity(d);
        let mut n = code;
        for _ in 0..d {
            c.push(F::from_i64((n % p) as i64));
            n /= p;
        }
        if c.iter().find(|x| !x.is_zero()) != Some(&F::one()) {
            continue;
        }
        let mut v = vec![F::zero(); s.ambient()];
        for (row, &a) in s.rows().iter().zip(&c) {
            if !a.is_zero() {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x += a * r;
                }
            }
        }
        out.push(v);
    }
    out
}

/// Largest weight-space dimension for which every line is tried.
pub const MAX_LINE_SEARCH_DIM: usize = 8;

#[derive(Clone)]
pub struct Irreducibility<F> {
    pub irreducible: bool,
    /// A proper nonzero submodule when reducible.
    pub witness: Option<Subspace<F>>,
}

/// Decides whether `g_k` is an irreducible module over `action`.
///
/// Every submodule is stable under the torus, so it contains a weight
/// vector of one parity; the module is irreducible iff each such vector
/// generates everything. Weight spaces are searched line by line.
pub fn is_irreducible<F: PrimeField>(
    g: &GradedAlgebra<F>,
    k: i64,
    torus: &Torus<F>,
    action: &[VectorField<F>],
) -> Result<Irreducibility<F>, StructureError> {
    let amb = g.ambient();
    let m = g.component(k);
    for (_, sub) in weight_parity_decompose(amb, torus, k, &m)? {
        if sub.dim() > MAX_LINE_SEARCH_DIM {
            return Err(StructureError::NotStable(k));
        }
        for v in lines(&sub) {
            let span = module_span(amb, k, &[amb.field(k, &v)], action)?;
            if span.dim() < m.dim() {
                return Ok(Irreducibility {
                    irreducible: false,
                    witness: Some(span),
                });
            }
        }
    }
    Ok(Irreducibility {
        irreducible: !m.is_zero(),
        witness: None,
    })
}

/// Componentwise sum of two graded subspaces of the same ambient.
pub fn graded_sum<F: PrimeField>(
    a: &GradedAlgebra<F>,
    b: &GradedAlgebra<F>,
) -> Result<GradedAlgebra<F>, StructureError> {
    let mut out = a.clone();
    for k in b.degrees() {
        let s = match a.component_ref(k) {
            Some(x) => sum_and_intersect(x, &b.component(k))?.0,
            None => b.component(k),
        };
        out.set_component(k, s);
    }
    Ok(out)
}

/// Whether `sub` is stable under `ad` of every element of `host`.
pub fn is_ideal<F: PrimeField>(host: &GradedAlgebra<F>, sub: &GradedAlgebra<F>) -> Result<bool, StructureError> {
    let amb = host.ambient();
    for (i, x) in host.elements() {
        for (j, y) in sub.elements() {
            if !sub.contains(i + j, &amb.bracket(&x, &y))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn push_distinct<F: PrimeField>(list: &mut Vec<GradedAlgebra<F>>, g: GradedAlgebra<F>) -> bool {
    if list.iter().any(|h| *h == g) {
        false
    } else {
        list.push(g);
        true
    }
}

/// Closes a family of ideals under sums and keeps the proper nonzero ones,
/// by increasing total dimension.
fn join_closure<F: PrimeField>(
    host: &GradedAlgebra<F>,
    mut ideals: Vec<GradedAlgebra<F>>,
) -> Result<Vec<GradedAlgebra<F>>, StructureError> {
    let total = host.total_sdim().total();
    let mut i = 0;
    while i < ideals.len() {
        for j in 0..i {
            let s = graded_sum(&ideals[i], &ideals[j])?;
            push_distinct(&mut ideals, s);
        }
        i += 1;
    }
    let mut out: Vec<_> = ideals
        .into_iter()
        .filter(|g| {
            let n = g.total_sdim().total();
            n > 0 && n < total
        })
        .collect();
    out.sort_by_key(|g| (g.total_sdim().total(), g.total_sdim()));
    Ok(out)
}

/// Graded ideals generated by singular vectors of every component, closed
/// under sums.
pub fn graded_ideals<F: PrimeField>(
    host: &GradedAlgebra<F>,
    torus: &Torus<F>,
    lowering: &[VectorField<F>],
    raising: &[VectorField<F>],
) -> Result<Vec<GradedAlgebra<F>>, StructureError> {
    let mut principal = Vec::new();
    for k in host.degrees() {
        for ops in [lowering, raising] {
            for s in singular_vectors(host, k, torus, ops)? {
                push_distinct(&mut principal, host.ideal(&[(k, s.vector)])?);
            }
        }
    }
    join_closure(host, principal)
}

/// Every graded ideal, from the principal ideals of all weight lines of one
/// parity. Exponential in the weight multiplicities; meant for small
/// algebras as an oracle for [`graded_ideals`].
pub fn all_graded_ideals<F: PrimeField>(
    host: &GradedAlgebra<F>,
    torus: &Torus<F>,
) -> Result<Vec<GradedAlgebra<F>>, StructureError> {
    let amb = host.ambient();
    let mut principal = Vec::new();
    for k in host.degrees() {
        for (_, sub) in weight_parity_decompose(amb, torus, k, &host.component(k))? {
            for v in lines(&sub) {
                push_distinct(&mut principal, host.ideal(&[(k, amb.field(k, &v))])?);
            }
        }
    }
    join_closure(host, principal)
}

/// The subalgebra generated by `g_{≤0}` and `g_1`.
pub fn simple_part<F: PrimeField>(g: &GradedAlgebra<F>) -> Result<GradedAlgebra<F>, StructureError> {
    let seeds: Vec<Element<F>> = g.elements().into_iter().filter(|(k, _)| *k <= 1).collect();
    Ok(g.generated(&seeds)?)
}

/// `M, [M, M], [M, [M, M]], ...` until zero, for `M ⊆ g_d`.
pub fn ad_chain<F: PrimeField>(amb: &Ambient, d: i64, m: &Subspace<F>) -> Result<Vec<Subspace<F>>, StructureError> {
    let gens = amb.fields_of(d, m);
    let mut chain = vec![m.clone()];
    let mut k = d;
    loop {
        let prev = amb.fields_of(k, chain.last().expect("nonempty"));
        let mut next = Subspace::zero(amb.basis(k + d).len());
        for x in &gens {
            for y in &prev {
                let z = amb.bracket(x, y);
                if !z.is_zero() {
                    next.insert(amb.coords(&z, k + d)?)?;
                }
            }
        }
        if next.is_zero() {
            return Ok(chain);
        }
        chain.push(next);
        k += d;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    /// `g_{-1}` is an irreducible `g_0`-module.
    IrreducibleGMinus1,
    /// No nonzero element of degree `≥ 0` commutes with `g_{-1}`.
    Transitive,
    /// No nonzero element of degree `≤ -2` commutes with `g_1`.
    Cotransitive,
    /// The ideal generated by `g_{-1}` is everything.
    IdealOfGMinus1,
    /// `g_{<0}` is generated by `g_{-1}`.
    NegativeGenerated,
    /// `g_{>0}` is generated by `g_1`.
    PositiveGenerated,
    /// `[g_{-1}, g_1] = g_0`.
    BracketIsG0,
}

impl Clause {
    pub const ALL: [Clause; 7] = [
        Clause::IrreducibleGMinus1,
        Clause::Transitive,
        Clause::Cotransitive,
        Clause::IdealOfGMinus1,
        Clause::NegativeGenerated,
        Clause::PositiveGenerated,
        Clause::BracketIsG0,
    ];

    /// The clauses whose conjunction proves graded simplicity: a nonzero
    /// graded ideal reaches `g_{-1}` by transitivity, then contains it by
    /// irreducibility, then everything.
    pub fn sufficient(self) -> bool {
        matches!(
            self,
            Clause::IrreducibleGMinus1 | Clause::Transitive | Clause::Cotransitive | Clause::IdealOfGMinus1
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Clause::IrreducibleGMinus1 => "irreducible-g-1",
            Clause::Transitive => "transitive",
            Clause::Cotransitive => "cotransitive",
            Clause::IdealOfGMinus1 => "ideal-of-g-1",
            Clause::NegativeGenerated => "negative-generated",
            Clause::PositiveGenerated => "positive-generated",
            Clause::BracketIsG0 => "bracket-is-g0",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub clauses: Vec<(Clause, bool)>,
}

impl Certificate {
    /// All clauses hold. The four [`Clause::sufficient`] ones already force
    /// simplicity; the rest pin down the expected transitive shape.
    pub fn simple(&self) -> bool {
        self.clauses.iter().all(|(_, ok)| *ok)
    }

    pub fn failing(&self) -> Vec<Clause> {
        self.clauses.iter().filter(|(_, ok)| !ok).map(|(c, _)| *c).collect()
    }
}

/// Whether some nonzero element of `g_k` brackets to zero with all of `g_j`.
fn has_centralizer<F: PrimeField>(g: &GradedAlgebra<F>, k: i64, j: i64) -> Result<bool, StructureError> {
    let amb = g.ambient();
    let others = g.fields(j);
    let ker = joint_kernel(amb, k, &g.component(k), &others)?;
    Ok(!ker.is_zero())
}

pub fn simplicity_certificate<F: PrimeField>(
    g: &GradedAlgebra<F>,
    torus: &Torus<F>,
) -> Result<Certificate, StructureError> {
    let amb = g.ambient();
    let lo = g.min_degree().unwrap_or(0);
    let hi = g.max_degree().unwrap_or(0);
    let g0 = g.fields(0);
    let mut clauses = Vec::new();
    for c in Clause::ALL {
        let ok = match c {
            Clause::IrreducibleGMinus1 => is_irreducible(g, -1, torus, &g0)?.irreducible,
            Clause::Transitive => {
                let mut ok = true;
                for k in 0..=hi {
                    ok &= !has_centralizer(g, k, -1)?;
                }
                ok
            }
            Clause::Cotransitive => {
                let mut ok = true;
                for k in lo..=-2 {
                    ok &= !has_centralizer(g, k, 1)?;
                }
                ok
            }
            Clause::IdealOfGMinus1 => {
                let seeds: Vec<Element<F>> = g.fields(-1).into_iter().map(|x| (-1, x)).collect();
                g.ideal(&seeds)? == *g
            }
            Clause::NegativeGenerated => {
                let seeds: Vec<Element<F>> = g.fields(-1).into_iter().map(|x| (-1, x)).collect();
                g.generated(&seeds)? == g.truncated(lo, -1)
            }
            Clause::PositiveGenerated => {
                let seeds: Vec<Element<F>> = g.fields(1).into_iter().map(|x| (1, x)).collect();
                g.generated(&seeds)? == g.truncated(1, hi)
            }
            Clause::BracketIsG0 => {
                let a: Vec<Element<F>> = g.fields(-1).into_iter().map(|x| (-1, x)).collect();
                let b: Vec<Element<F>> = g.fields(1).into_iter().map(|x| (1, x)).collect();
                g.bracket_span(&a, &b)?.component(0) == g.component(0)
            }
        };
        clauses.push((c, ok));
    }
    let _ = amb;
    Ok(Certificate { clauses })
}

/// `(even, odd)` dimensions of a subspace of degree `k`.
pub fn sdim_of<F: PrimeField>(amb: &Ambient, k: i64, s: &Subspace<F>) -> Sdim {
    let (e, o) = amb.sdim(k, s);
    Sdim::new(e, o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divided::VariableSpec;
    use crate::vectorfield::WeightGrading;
    use crate::F3;
    use std::sync::Arc;

    /// `gl(2)` acting on `vect(2)` with the standard grading.
    fn gl2() -> (Arc<Ambient>, GradedAlgebra<F3>) {
        let s = VariableSpec::standard(3, &[1, 1], 0).unwrap();
        let amb = Arc::new(Ambient::new(s.clone(), WeightGrading::standard(&s)));
        let mut g = GradedAlgebra::new(amb.clone());
        for i in 0..2 {
            g.insert(-1, &VectorField::partial(&s, i)).unwrap();
            for j in 0..2 {
                let mut x = VectorField::zero();
                x.add_term(s.variable_power(i, 1).unwrap(), j, F3::new(1));
                g.insert(0, &x).unwrap();
            }
        }
        (amb, g)
    }

    fn field(amb: &Ambient, terms: &[(usize, usize)]) -> VectorField<F3> {
        let mut x = VectorField::zero();
        for &(v, i) in terms {
            x.add_term(amb.spec().variable_power(v, 1).unwrap(), i, F3::new(1));
        }
        x
    }

    #[test]
    fn cartan_has_weight_zero() {
        let (amb, g) = gl2();
        let h = vec![field(&amb, &[(0, 0)]), field(&amb, &[(1, 1)])];
        let t = Torus::new(&amb, &h).unwrap();
        let s = amb.span(0, &h).unwrap();
        let dec = weight_decompose(&amb, &t, 0, &s).unwrap();
        assert_eq!(dec.len(), 1);
        assert_eq!(dec.keys().next().unwrap(), &vec![0, 0]);
        let full = weight_decompose(&amb, &t, 0, &g.component(0)).unwrap();
        assert_eq!(full.values().map(|s| s.dim()).sum::<usize>(), 4);
    }

    #[test]
    fn non_diagonal_cartan_is_rejected() {
        let (amb, _) = gl2();
        let e = field(&amb, &[(1, 0)]);
        assert!(matches!(Torus::new(&amb, &[e]), Err(StructureError::NotDiagonal(_))));
    }

    #[test]
    fn standard_module_is_irreducible() {
        let (amb, g) = gl2();
        let h = vec![field(&amb, &[(0, 0)]), field(&amb, &[(1, 1)])];
        let t = Torus::new(&amb, &h).unwrap();
        let r = is_irreducible(&g, -1, &t, &g.fields(0)).unwrap();
        assert!(r.irreducible);
        // only the cartan acting: every coordinate line is a submodule
        let r = is_irreducible(&g, -1, &t, &h).unwrap();
        assert!(!r.irreducible);
        assert_eq!(r.witness.unwrap().dim(), 1);
    }

    #[test]
    fn singular_vectors_of_standard_module() {
        let (amb, g) = gl2();
        let h = vec![field(&amb, &[(0, 0)]), field(&amb, &[(1, 1)])];
        let t = Torus::new(&amb, &h).unwrap();
        // x1 ∂2 lowers ∂1 to -∂2 and kills ∂2
        let lower = vec![field(&amb, &[(0, 1)])];
        let s = singular_vectors(&g, -1, &t, &lower).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].vector, VectorField::partial(amb.spec(), 1));
    }

    #[test]
    fn module_span_is_idempotent() {
        let (amb, g) = gl2();
        let s = module_span(&amb, -1, &[VectorField::partial(amb.spec(), 0)], &g.fields(0)).unwrap();
        assert_eq!(s.dim(), 2);
        let again = module_span(&amb, -1, &amb.fields_of(-1, &s), &g.fields(0)).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn ideals_of_gl2_plus_translations() {
        // vect(2)_{-1} + gl(2) with p = 3: g_{-1} plus any ideal of gl(2).
        let (amb, g) = gl2();
        let h = vec![field(&amb, &[(0, 0)]), field(&amb, &[(1, 1)])];
        let t = Torus::new(&amb, &h).unwrap();
        let all = all_graded_ideals(&g, &t).unwrap();
        for i in &all {
            assert!(is_ideal(&g, i).unwrap());
        }
        let dims: Vec<Sdim> = all.iter().map(|i| i.total_sdim()).collect();
        assert_eq!(dims, vec![Sdim::new(2, 0), Sdim::new(3, 0), Sdim::new(5, 0)]);
        let seeded = graded_ideals(&g, &t, &[field(&amb, &[(0, 1)])], &[field(&amb, &[(1, 0)])]).unwrap();
        assert_eq!(seeded.len(), all.len());
    }

    #[test]
    fn ad_chain_of_abelian_piece_stops() {
        let (amb, g) = gl2();
        let chain = ad_chain(&amb, -1, &g.component(-1)).unwrap();
        assert_eq!(chain.len(), 1);
    }
}
