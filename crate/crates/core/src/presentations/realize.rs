//! Chevalley generators of a graded algebra of vector fields: a
//! multigrading by integer weights of the variables, the root
//! decomposition it induces, and one Cartan matrix per Borel.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::divided::{Parity, VariableSpec};
use crate::field::PrimeField;
use crate::graded::{GradedAlgebra, Sdim};
use crate::vectorfield::{bracket, FieldError, FieldKey, VectorField};

use super::cartan::{coroot_name, lowering_name, raising_name, CartanSpec};
use super::dsl::LieSuper;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("the algebra is not graded by the weights {0:?}")]
    NotGraded(Vec<i64>),
    #[error("root {0:?} occurs in several degrees or parities")]
    MixedRoot(Vec<i64>),
    #[error("the zero-weight part has dimension {found}, the grading rank is {rank}")]
    CartanSize { found: usize, rank: usize },
}

/// Vector fields under the superbracket of one variable spec.
pub struct Fields<'a> {
    pub spec: &'a VariableSpec,
}

impl<F: PrimeField> LieSuper<F> for Fields<'_> {
    type Elem = VectorField<F>;

    fn zero(&self) -> VectorField<F> {
        VectorField::zero()
    }

    fn bracket(&self, a: &VectorField<F>, b: &VectorField<F>) -> VectorField<F> {
        bracket(self.spec, a, b)
    }

    fn add_scaled(&self, acc: &mut VectorField<F>, x: &VectorField<F>, c: F) {
        acc.add_scaled(x, c);
    }

    fn is_zero(&self, x: &VectorField<F>) -> bool {
        x.is_zero()
    }
}

type Q = Ratio<i64>;

/// Exponent vector of the coefficient minus the unit vector of `∂_i`.
fn multidegree(spec: &VariableSpec, (m, i): &FieldKey) -> Vec<i64> {
    let mut v = vec![0i64; spec.len()];
    for (k, &a) in m.exps.iter().enumerate() {
        v[spec.even_var(k)] += a as i64;
    }
    for k in 0..spec.odd_count() {
        if m.odd >> k & 1 == 1 {
            v[spec.odd_var(k)] += 1;
        }
    }
    v[*i] -= 1;
    v
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduced row echelon form over the rationals; returns pivot columns.
fn rref(m: &mut [Vec<Q>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..m.len()).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, k);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for k in 0..m.len() {
            if k != r && !m[k][c].is_zero() {
                let f = m[k][c];
                let row = m[r].clone();
                for (x, y) in m[k].iter_mut().zip(row) {
                    *x -= f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A basis of the integer vectors orthogonal to all `rows`, each scaled to
/// coprime integer entries.
fn integer_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(x)).collect())
        .collect();
    let pivots = rref(&mut m, n);
    let mut out = Vec::new();
    for f in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); n];
        v[f] = Q::from_integer(1);
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[r][f];
        }
        let den = v.iter().fold(1i64, |l, x| l.lcm(x.denom()));
        let ints: Vec<i64> = v.iter().map(|x| (x * den).to_integer()).collect();
        let g = ints.iter().fold(0i64, |g, x| g.gcd(x)).max(1);
        out.push(ints.into_iter().map(|x| x / g).collect());
    }
    out
}

/// Rational coordinates of `target` in the span of `basis`.
fn coordinates(basis: &[Vec<i64>], target: &[i64]) -> Option<Vec<Q>> {
    let k = basis.len();
    let mut m: Vec<Vec<Q>> = (0..target.len())
        .map(|r| {
            let mut row: Vec<Q> = basis.iter().map(|b| Q::from_integer(b[r])).collect();
            row.push(Q::from_integer(target[r]));
            row
        })
        .collect();
    let pivots = rref(&mut m, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Q::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][k];
    }
    Some(x)
}

/// All integer weightings of the variables under which each of `fields`
/// is homogeneous.
pub fn grading_lattice<F: PrimeField>(spec: &VariableSpec, fields: &[VectorField<F>]) -> Vec<Vec<i64>> {
    let mut rows = Vec::new();
    for x in fields {
        let mds: Vec<Vec<i64>> = x.terms().keys().map(|k| multidegree(spec, k)).collect();
        for md in mds.iter().skip(1) {
            rows.push(md.iter().zip(&mds[0]).map(|(a, b)| a - b).collect());
        }
    }
    integer_kernel(&rows, spec.len())
}

#[derive(Debug, Clone)]
pub struct RootSpace<F: PrimeField> {
    pub degree: i64,
    pub parity: Parity,
    pub basis: Vec<VectorField<F>>,
}

/// `g = h ⊕ ⊕ g_α` for the multigrading by a weight lattice.
#[derive(Debug, Clone)]
pub struct RootDecomposition<F: PrimeField> {
    pub lattice: Vec<Vec<i64>>,
    pub cartan: Vec<VectorField<F>>,
    pub roots: BTreeMap<Vec<i64>, RootSpace<F>>,
}

/// Splits `g` by the weights of `lattice` (rows: weightings of the
/// variables) and checks that every piece stays in `g`.
pub fn root_decomposition<F: PrimeField>(
    g: &GradedAlgebra<F>,
    lattice: &[Vec<i64>],
) -> Result<RootDecomposition<F>, RealizeError> {
    let amb = g.ambient();
    let spec = amb.spec();
    let mut pieces: BTreeMap<Vec<i64>, (i64, Vec<VectorField<F>>)> = BTreeMap::new();
    for k in g.degrees() {
        for x in g.fields(k) {
            let mut split: BTreeMap<Vec<i64>, VectorField<F>> = BTreeMap::new();
            for (key, &c) in x.terms() {
                let md = multidegree(spec, key);
                let w: Vec<i64> = lattice.iter().map(|l| dot(l, &md)).collect();
                split.entry(w).or_default().add_term(key.0.clone(), key.1, c);
            }
            for (w, piece) in split {
                if !g.contains(k, &piece)? {
                    return Err(RealizeError::NotGraded(w));
                }
                let e = pieces.entry(w.clone()).or_insert((k, Vec::new()));
                if e.0 != k {
                    return Err(RealizeError::MixedRoot(w));
                }
                e.1.push(piece);
            }
        }
    }
    let mut roots = BTreeMap::new();
    let mut cartan = Vec::new();
    for (w, (k, fields)) in pieces {
        let s = amb.span(k, &fields)?;
        let basis = amb.fields_of(k, &s);
        let parities: BTreeSet<Parity> = basis.iter().map(|x| g.parity(x)).collect();
        if parities.len() != 1 {
            return Err(RealizeError::MixedRoot(w));
        }
        if w.iter().all(|&c| c == 0) {
            cartan = basis;
        } else {
            let parity = *parities.first().expect("nonempty");
            roots.insert(
                w,
                RootSpace {
                    degree: k,
                    parity,
                    basis,
                },
            );
        }
    }
    if cartan.len() != lattice.len() {
        return Err(RealizeError::CartanSize {
            found: cartan.len(),
            rank: lattice.len(),
        });
    }
    Ok(RootDecomposition {
        lattice: lattice.to_vec(),
        cartan,
        roots,
    })
}

/// Chevalley generators of one Borel: `[Xp_i, Xm_i] = H_i`, `[H_i, Xp_j] =
/// A_ij Xp_j`, with `A_ii` scaled to 2 for even and 1 for odd roots when
/// nonzero.
#[derive(Debug, Clone)]
pub struct Chevalley<F: PrimeField> {
    pub simple: Vec<Vec<i64>>,
    pub parities: Vec<Parity>,
    pub plus: Vec<VectorField<F>>,
    pub minus: Vec<VectorField<F>>,
    pub coroots: Vec<VectorField<F>>,
    pub matrix: Vec<Vec<F>>,
    /// Positive part by height over the simple roots.
    pub heights: BTreeMap<i64, Sdim>,
}

/// How a Cartan matrix sits on a Borel: simple root `perm[i]` carries
/// generator `i`, and row `i` is `scale[i]` times the extracted row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match<F> {
    pub perm: Vec<usize>,
    pub scale: Vec<F>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Ratio `a / b` when `a = c b` for a single scalar `c`.
fn proportion<F: PrimeField>(a: &VectorField<F>, b: &VectorField<F>) -> Option<F> {
    let (key, &cb) = b.terms().iter().next()?;
    let c = a.terms().get(key).copied().unwrap_or(F::zero()) / cb;
    (b.scale(c) == *a).then_some(c)
}

impl<F: PrimeField> RootDecomposition<F> {
    /// Every positive system cut out by a generic linear functional, with
    /// its simple roots and Chevalley generators. Systems whose simple
    /// roots are not all one-dimensional are skipped.
    pub fn chevalley_bases(&self, spec: &VariableSpec) -> Vec<Chevalley<F>> {
        let r = self.lattice.len();
        let roots: Vec<&Vec<i64>> = self.roots.keys().collect();
        let mut systems: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
        let bound = 12i64;
        let side = (2 * bound + 1) as usize;
        for idx in 0..side.pow(r as u32) {
            let phi: Vec<i64> = (0..r)
                .map(|k| (idx / side.pow(k as u32) % side) as i64 - bound)
                .collect();
            if roots.iter().any(|a| dot(&phi, a) == 0) {
                continue;
            }
            systems.insert(
                roots
                    .iter()
                    .filter(|a| dot(&phi, a) > 0)
                    .map(|a| (*a).clone())
                    .collect(),
            );
        }
        let mut out = Vec::new();
        for positive in systems {
            let sum = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
            let simple: Vec<Vec<i64>> = positive
                .iter()
                .filter(|a| !positive.iter().any(|b| positive.iter().any(|c| sum(b, c) == **a)))
                .cloned()
                .collect();
            if let Some(ch) = self.chevalley(spec, &simple, &positive) {
                out.push(ch);
            }
        }
        out
    }

    fn chevalley(&self, spec: &VariableSpec, simple: &[Vec<i64>], positive: &[Vec<i64>]) -> Option<Chevalley<F>> {
        let n = simple.len();
        let neg = |a: &[i64]| -> Vec<i64> { a.iter().map(|x| -x).collect() };
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        let mut parities = Vec::new();
        for a in simple {
            let (p, m) = (self.roots.get(a)?, self.roots.get(&neg(a))?);
            if p.basis.len() != 1 || m.basis.len() != 1 {
                return None;
            }
            plus.push(p.basis[0].clone());
            minus.push(m.basis[0].clone());
            parities.push(p.parity);
        }
        let mut coroots = Vec::new();
        let mut matrix = vec![vec![F::zero(); n]; n];
        for i in 0..n {
            let mut h = bracket(spec, &plus[i], &minus[i]);
            if h.is_zero() {
                return None;
            }
            for j in 0..n {
                matrix[i][j] = proportion(&bracket(spec, &h, &plus[j]), &plus[j])?;
            }
            let target = match parities[i] {
                Parity::Even => F::from_i64(2),
                Parity::Odd => F::one(),
            };
            if let Some(inv) = matrix[i][i].inv() {
                let s = target * inv;
                minus[i] = minus[i].scale(s);
                h = h.scale(s);
                for x in matrix[i].iter_mut() {
                    *x *= s;
                }
            }
            coroots.push(h);
        }
        let mut heights: BTreeMap<i64, Sdim> = BTreeMap::new();
        for a in positive {
            let c = coordinates(simple, a)?;
            if c.iter().any(|x| !x.is_integer() || x.is_negative()) {
                return None;
            }
            let ht = c.iter().map(|x| x.to_integer()).sum();
            let space = &self.roots[a];
            let e = heights.entry(ht).or_default();
            match space.parity {
                Parity::Even => e.even += space.basis.len(),
                Parity::Odd => e.odd += space.basis.len(),
            }
        }
        Some(Chevalley {
            simple: simple.to_vec(),
            parities,
            plus,
            minus,
            coroots,
            matrix,
            heights,
        })
    }
}

impl<F: PrimeField> Chevalley<F> {
    /// Ways to read `a` on this Borel, up to renumbering the simple roots
    /// and rescaling rows with zero diagonal.
    pub fn matches(&self, a: &CartanSpec) -> Vec<Match<F>> {
        let n = a.size();
        if n != self.parities.len() {
            return Vec::new();
        }
        let target = a.matrix::<F>();
        let mut out = Vec::new();
        'perm: for perm in permutations(n) {
            let mut scale = vec![F::one(); n];
            for i in 0..n {
                if a.parities()[i] != self.parities[perm[i]] {
                    continue 'perm;
                }
                let row: Vec<F> = (0..n).map(|j| self.matrix[perm[i]][perm[j]]).collect();
                if target[i][i].is_zero() {
                    let Some(j) = (0..n).find(|&j| !row[j].is_zero()) else {
                        if target[i].iter().all(|x| x.is_zero()) {
                            continue;
                        }
                        continue 'perm;
                    };
                    scale[i] = target[i][j] / row[j];
                }
                if (0..n).any(|j| scale[i] * row[j] != target[i][j]) {
                    continue 'perm;
                }
            }
            out.push(Match { perm, scale });
        }
        out
    }

    /// Images of the generators named `names` (one per row of the matrix)
    /// and of the skeleton generators `Xp_i`, `Xm_i`, `H_i`, rescaled so
    /// that the matrix is exactly `a`.
    pub fn images(&self, spec: &VariableSpec, m: &Match<F>, names: &[String]) -> BTreeMap<String, VectorField<F>> {
        let mut out = BTreeMap::new();
        for (i, &k) in m.perm.iter().enumerate() {
            let xp = self.plus[k].clone();
            let xm = self.minus[k].scale(m.scale[i]);
            out.insert(coroot_name(i), bracket(spec, &xp, &xm));
            out.insert(names[i].clone(), xp.clone());
            out.insert(raising_name(i), xp);
            out.insert(lowering_name(i), xm);
        }
        out
    }
}
