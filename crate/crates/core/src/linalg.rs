//! Exact linear algebra over `F_p`: reduced row-echelon forms, kernels,
//! membership, sums and intersections.
//!
//! Vectors are dense rows. A [`Subspace`] is always stored in reduced
//! row-echelon form with leading coefficient one, so two subspaces of the same
//! ambient space are equal exactly when their stored forms are equal.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::field::PrimeField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Incrementally maintained reduced row-echelon basis.
///
/// Rows are kept sorted by pivot column and fully reduced, so the basis is
/// canonical at every point.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace<F> {
    ambient: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: PrimeField> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Subspace(dim {} in {})", self.dim(), self.ambient)?;
        for r in &self.rows {
            let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", s.join(" "))?;
        }
        Ok(())
    }
}

impl<F: PrimeField> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let mut s = Self::zero(ambient);
        for i in 0..ambient {
            let mut r = vec![F::zero(); ambient];
            r[i] = F::one();
            s.rows.push(r);
            s.pivots.push(i);
        }
        s
    }

    /// Canonical span of `rows`.
    pub fn span<I>(ambient: usize, rows: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = Vec<F>>,
    {
        let mut s = Self::zero(ambient);
        for r in rows {
            s.insert(r)?;
        }
        Ok(s)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_len(&self, v: &[F]) -> Result<(), LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Subtracts the basis combination that clears every pivot column of `v`.
    /// The result is zero exactly when `v` lies in the span.
    pub fn reduce(&self, v: &[F]) -> Result<Vec<F>, LinalgError> {
        self.check_len(v)?;
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        Ok(w)
    }

    fn reduce_in_place(&self, w: &mut [F]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc];
            if !c.is_zero() {
                for (x, &r) in w[pc..].iter_mut().zip(&row[pc..]) {
                    *x -= c * r;
                }
            }
        }
    }

    pub fn contains(&self, v: &[F]) -> Result<bool, LinalgError> {
        Ok(self.reduce(v)?.iter().all(|x| x.is_zero()))
    }

    /// Coefficients of `v` in the stored basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[F]) -> Result<Option<Vec<F>>, LinalgError> {
        self.check_len(v)?;
        let coords: Vec<F> = self.pivots.iter().map(|&pc| v[pc]).collect();
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        if w.iter().all(|x| x.is_zero()) {
            Ok(Some(coords))
        } else {
            Ok(None)
        }
    }

    /// Adds `v` to the span. Returns `true` if the dimension grew.
    pub fn insert(&mut self, v: Vec<F>) -> Result<bool, LinalgError> {
        self.check_len(&v)?;
        let mut w = v;
        self.reduce_in_place(&mut w);
        let Some(pc) = w.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        let inv = w[pc].inv().expect("nonzero pivot");
        for x in w[pc..].iter_mut() {
            *x *= inv;
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if !c.is_zero() {
                for (x, &r) in row[pc..].iter_mut().zip(&w[pc..]) {
                    *x -= c * r;
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pc);
        self.rows.insert(at, w);
        self.pivots.insert(at, pc);
        Ok(true)
    }

    pub fn is_subspace_of(&self, other: &Subspace<F>) -> Result<bool, LinalgError> {
        for r in &self.rows {
            if !other.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Columns that carry no pivot; their unit vectors complete the basis.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut free = Vec::with_capacity(self.ambient - self.dim());
        let mut it = self.pivots.iter().peekable();
        for c in 0..self.ambient {
            if it.peek() == Some(&&c) {
                it.next();
            } else {
                free.push(c);
            }
        }
        free
    }

    /// Residual of `v` expressed on the free columns only: a coordinate system
    /// for the quotient `ambient / self`.
    pub fn quotient_coordinates(&self, v: &[F]) -> Result<Vec<F>, LinalgError> {
        let w = self.reduce(v)?;
        Ok(self.free_columns().into_iter().map(|c| w[c]).collect())
    }
}

/// Canonical row space of a matrix given by rows of length `ncols`.
pub fn rref<F: PrimeField>(matrix: &[Vec<F>], ncols: usize) -> Result<Subspace<F>, LinalgError> {
    Subspace::span(ncols, matrix.iter().cloned())
}

pub fn rank<F: PrimeField>(matrix: &[Vec<F>], ncols: usize) -> Result<usize, LinalgError> {
    Ok(rref(matrix, ncols)?.dim())
}

/// `{ v : M v = 0 }` for the matrix with the given rows.
pub fn kernel<F: PrimeField>(matrix: &[Vec<F>], ncols: usize) -> Result<Subspace<F>, LinalgError> {
    kernel_of_rowspace(&rref(matrix, ncols)?)
}

/// Null space of the linear forms spanned by `rows`.
pub fn kernel_of_rowspace<F: PrimeField>(rows: &Subspace<F>) -> Result<Subspace<F>, LinalgError> {
    let n = rows.ambient();
    let free = rows.free_columns();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![F::zero(); n];
        v[fc] = F::one();
        for (row, &pc) in rows.rows().iter().zip(rows.pivots()) {
            v[pc] = -row[fc];
        }
        basis.push(v);
    }
    Subspace::span(n, basis)
}

/// `(A + B, A ∩ B)` via the Zassenhaus construction.
pub fn sum_and_intersect<F: PrimeField>(
    a: &Subspace<F>,
    b: &Subspace<F>,
) -> Result<(Subspace<F>, Subspace<F>), LinalgError> {
    let n = a.ambient();
    if b.ambient() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: b.ambient(),
        });
    }
    let mut z = Subspace::zero(2 * n);
    for r in a.rows() {
        let mut row = r.clone();
        row.extend_from_slice(r);
        z.insert(row)?;
    }
    for r in b.rows() {
        let mut row = r.clone();
        row.extend(std::iter::repeat(F::zero()).take(n));
        z.insert(row)?;
    }
    let mut sum = Subspace::zero(n);
    let mut inter = Subspace::zero(n);
    for (row, &pc) in z.rows().iter().zip(z.pivots()) {
        if pc < n {
            sum.insert(row[..n].to_vec())?;
        } else {
            inter.insert(row[n..].to_vec())?;
        }
    }
    Ok((sum, inter))
}

/// Image of a linear map given by the images of basis vectors.
pub fn image<F: PrimeField>(columns: &[Vec<F>], target_dim: usize) -> Result<Subspace<F>, LinalgError> {
    Subspace::span(target_dim, columns.iter().cloned())
}

/// Sparse vector: coordinate index to nonzero entry.
pub type SparseVec<F> = BTreeMap<usize, F>;

fn axpy<F: PrimeField>(dst: &mut SparseVec<F>, src: &SparseVec<F>, c: F) {
    for (&i, &v) in src {
        let e = dst.entry(i).or_insert_with(F::zero);
        *e += c * v;
        if e.is_zero() {
            dst.remove(&i);
        }
    }
}

/// Kernel of the linear map sending the `j`-th unit vector to `images[j]`,
/// by sparse elimination that tracks the combinations of columns.
pub fn kernel_of_map<F: PrimeField>(images: &[SparseVec<F>]) -> Subspace<F> {
    let n = images.len();
    // pivot index -> (image normalized at pivot, combination)
    let mut pivots: BTreeMap<usize, (SparseVec<F>, SparseVec<F>)> = BTreeMap::new();
    let mut kernel = Subspace::zero(n);
    for (j, img) in images.iter().enumerate() {
        let mut v = img.clone();
        let mut combo = SparseVec::new();
        combo.insert(j, F::one());
        loop {
            let Some((&lead, &c)) = v.iter().next() else {
                let mut dense = vec![F::zero(); n];
                for (&i, &x) in &combo {
                    dense[i] = x;
                }
                kernel.insert(dense).expect("length");
                break;
            };
            match pivots.get(&lead) {
                Some((row, rc)) => {
                    axpy(&mut v, row, -c);
                    axpy(&mut combo, rc, -c);
                }
                None => {
                    let inv = c.inv().expect("nonzero");
                    v.values_mut().for_each(|x| *x *= inv);
                    combo.values_mut().for_each(|x| *x *= inv);
                    pivots.insert(lead, (v, combo));
                    break;
                }
            }
        }
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use num_traits::Zero;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    type F3 = Fp<3>;
    type F5 = Fp<5>;

    fn m<F: PrimeField>(rows: &[&[i64]]) -> Vec<Vec<F>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| F::from_i64(x)).collect())
            .collect()
    }

    /// Rank by searching for the largest nonsingular square minor, with
    /// determinants by cofactor expansion. Exponential; test sizes only.
    fn rank_by_minors<F: PrimeField>(a: &[Vec<F>]) -> usize {
        fn det<F: PrimeField>(a: &[Vec<F>]) -> F {
            let n = a.len();
            if n == 1 {
                return a[0][0];
            }
            let mut acc = F::zero();
            for j in 0..n {
                let minor: Vec<Vec<F>> = a[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let term = a[0][j] * det(&minor);
                if j % 2 == 0 {
                    acc += term
                } else {
                    acc -= term
                }
            }
            acc
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let (r, c) = (a.len(), a[0].len());
        for k in (1..=r.min(c)).rev() {
            for rs in subsets(r, k) {
                for cs in subsets(c, k) {
                    let sub: Vec<Vec<F>> = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j]).collect()).collect();
                    if !det(&sub).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn rref_of_dependent_rows() {
        let s = rref(&m::<F3>(&[&[1, 2], &[2, 4]]), 2).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.rows()[0], vec![F3::new(1), F3::new(2)]);
    }

    #[test]
    fn rref_of_identity_is_identity() {
        let id: Vec<Vec<F5>> = (0..4)
            .map(|i| (0..4).map(|j| F5::from_i64((i == j) as i64)).collect())
            .collect();
        let s = rref(&id, 4).unwrap();
        assert_eq!(s.rows(), &id[..]);
        assert_eq!(s, Subspace::full(4));
    }

    #[test]
    fn rref_rank_matches_minor_oracle() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let a: Vec<Vec<F3>> = (0..6)
                .map(|_| (0..9).map(|_| F3::from_i64(rng.gen_range(0..3))).collect())
                .collect();
            assert_eq!(rank(&a, 9).unwrap(), rank_by_minors(&a));
        }
    }

    #[test]
    fn ragged_rows_rejected() {
        let a = vec![vec![F3::new(1), F3::new(0)], vec![F3::new(1)]];
        assert_eq!(
            rref(&a, 2).unwrap_err(),
            LinalgError::DimensionMismatch { expected: 2, found: 1 }
        );
    }

    #[test]
    fn kernel_of_zero_and_invertible() {
        let z = vec![vec![F5::zero(); 3]; 3];
        assert_eq!(kernel(&z, 3).unwrap().dim(), 3);
        let inv = m::<F5>(&[&[1, 2], &[3, 4]]);
        assert!(kernel(&inv, 2).unwrap().is_zero());
    }

    #[test]
    fn kernel_of_all_ones_row_mod_3() {
        let a = m::<F3>(&[&[1, 1, 1]]);
        let k = kernel(&a, 3).unwrap();
        // enumerate all 27 vectors
        let mut count = 0;
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    if (x + y + z) % 3 == 0 {
                        count += 1;
                        let v = vec![F3::from_i64(x), F3::from_i64(y), F3::from_i64(z)];
                        assert!(k.contains(&v).unwrap());
                    }
                }
            }
        }
        assert_eq!(count, 9);
        assert_eq!(k.dim(), 2);
        assert!(k.contains(&m::<F3>(&[&[1, 2, 0]])[0]).unwrap());
        assert!(k.contains(&m::<F3>(&[&[1, 0, 2]])[0]).unwrap());
    }

    #[test]
    fn membership_edge_cases() {
        let full = Subspace::<F5>::full(3);
        let v = m::<F5>(&[&[1, 4, 2]]).remove(0);
        assert!(full.contains(&v).unwrap());
        assert!(!Subspace::<F5>::zero(3).contains(&v).unwrap());
        assert!(full.contains(&[F5::zero(); 2]).is_err());
    }

    #[test]
    fn membership_of_constructed_combination() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let rows: Vec<Vec<F5>> = (0..3)
                .map(|_| (0..7).map(|_| F5::from_i64(rng.gen_range(0..5))).collect())
                .collect();
            let s = rref(&rows, 7).unwrap();
            let (a, b) = (F5::from_i64(rng.gen_range(0..5)), F5::from_i64(rng.gen_range(0..5)));
            let v: Vec<F5> = rows[0].iter().zip(&rows[2]).map(|(&x, &y)| a * x + b * y).collect();
            assert!(s.contains(&v).unwrap());
        }
    }

    #[test]
    fn sum_intersect_trivial_cases() {
        let a = rref(&m::<F3>(&[&[1, 0, 0], &[0, 1, 0]]), 3).unwrap();
        let (s, i) = sum_and_intersect(&a, &a).unwrap();
        assert_eq!(s, a);
        assert_eq!(i, a);
        let b = rref(&m::<F3>(&[&[0, 0, 1]]), 3).unwrap();
        let (s, i) = sum_and_intersect(&a, &b).unwrap();
        assert_eq!(s, Subspace::full(3));
        assert!(i.is_zero());
        assert!(sum_and_intersect(&a, &Subspace::zero(4)).is_err());
    }

    fn arb_matrix(p: i64, rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        proptest::collection::vec(proptest::collection::vec(0..p, cols), rows)
    }

    fn lift<F: PrimeField>(a: &[Vec<i64>]) -> Vec<Vec<F>> {
        a.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn rank_nullity_mod_3(a in arb_matrix(3, 5, 7)) {
            let a = lift::<F3>(&a);
            let r = rank(&a, 7).unwrap();
            let k = kernel(&a, 7).unwrap();
            prop_assert_eq!(r + k.dim(), 7);
            for v in k.rows() {
                for row in &a {
                    let dot = row.iter().zip(v).fold(F3::zero(), |acc, (&x, &y)| acc + x * y);
                    prop_assert!(dot.is_zero());
                }
            }
        }

        #[test]
        fn rank_nullity_mod_5(a in arb_matrix(5, 6, 6)) {
            let a = lift::<F5>(&a);
            prop_assert_eq!(rank(&a, 6).unwrap() + kernel(&a, 6).unwrap().dim(), 6);
        }

        #[test]
        fn sparse_kernel_matches_dense(a in arb_matrix(3, 5, 7)) {
            let a = lift::<F3>(&a);
            let images: Vec<SparseVec<F3>> = (0..7)
                .map(|j| (0..5).filter(|&i| !a[i][j].is_zero()).map(|i| (i, a[i][j])).collect())
                .collect();
            prop_assert_eq!(kernel_of_map(&images), kernel(&a, 7).unwrap());
        }

        #[test]
        fn rref_is_canonical(a in arb_matrix(3, 6, 5)) {
            let a = lift::<F3>(&a);
            let s = rref(&a, 5).unwrap();
            prop_assert_eq!(rref(s.rows(), 5).unwrap(), s.clone());
            let mut rev = a.clone();
            rev.reverse();
            prop_assert_eq!(rref(&rev, 5).unwrap(), s);
        }

        #[test]
        fn dimension_formula_mod_3(a in arb_matrix(3, 3, 6), b in arb_matrix(3, 4, 6)) {
            let sa = rref(&lift::<F3>(&a), 6).unwrap();
            let sb = rref(&lift::<F3>(&b), 6).unwrap();
            let (s, i) = sum_and_intersect(&sa, &sb).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), sa.dim() + sb.dim());
            prop_assert!(i.is_subspace_of(&sa).unwrap() && i.is_subspace_of(&sb).unwrap());
            prop_assert!(sa.is_subspace_of(&s).unwrap() && sb.is_subspace_of(&s).unwrap());
        }

        #[test]
        fn dimension_formula_mod_5(a in arb_matrix(5, 3, 5), b in arb_matrix(5, 3, 5)) {
            let sa = rref(&lift::<F5>(&a), 5).unwrap();
            let sb = rref(&lift::<F5>(&b), 5).unwrap();
            let (s, i) = sum_and_intersect(&sa, &sb).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), sa.dim() + sb.dim());
        }
    }
}
