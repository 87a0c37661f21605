//! Free Lie superalgebras inside the tensor algebra, their nilpotent
//! quotients by homogeneous ideals, and the positive part of the
//! contragredient algebra of a Cartan matrix.
//!
//! The free Lie superalgebra on `x_i` is the span of iterated
//! supercommutators of the `x_i` in the free associative algebra. Each
//! `(degree, parity)` block is kept as a subspace of the span of words.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::divided::Parity;
use crate::field::PrimeField;
use crate::graded::Sdim;
use crate::linalg::Subspace;

use super::dsl::LieSuper;

/// Generator indices, left to right.
pub type Word = Vec<u8>;

/// A noncommutative polynomial.
pub type Tensor<F> = BTreeMap<Word, F>;

pub type BlockKey = (i64, Parity);

/// The tensor algebra on parity- and degree-tagged letters, with the
/// supercommutator as bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorAlgebra {
    pub parities: Vec<Parity>,
    pub degrees: Vec<i64>,
}

impl TensorAlgebra {
    pub fn new(parities: Vec<Parity>, degrees: Vec<i64>) -> Self {
        assert_eq!(parities.len(), degrees.len());
        assert!(parities.len() <= u8::MAX as usize, "too many generators");
        TensorAlgebra { parities, degrees }
    }

    pub fn rank(&self) -> usize {
        self.parities.len()
    }

    pub fn letter<F: PrimeField>(&self, i: usize) -> Tensor<F> {
        [(vec![i as u8], F::one())].into()
    }

    pub fn word_parity(&self, w: &[u8]) -> Parity {
        w.iter().fold(Parity::Even, |p, &i| p.add(self.parities[i as usize]))
    }

    pub fn word_degree(&self, w: &[u8]) -> i64 {
        w.iter().map(|&i| self.degrees[i as usize]).sum()
    }

    /// Block of a nonzero homogeneous tensor.
    pub fn key_of<F: PrimeField>(&self, t: &Tensor<F>) -> Option<BlockKey> {
        let mut keys = t.keys().map(|w| (self.word_degree(w), self.word_parity(w)));
        let first = keys.next()?;
        keys.all(|k| k == first).then_some(first)
    }
}

fn add_to<F: PrimeField>(acc: &mut Tensor<F>, w: Word, c: F) {
    if c.is_zero() {
        return;
    }
    match acc.entry(w) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

impl<F: PrimeField> LieSuper<F> for TensorAlgebra {
    type Elem = Tensor<F>;

    fn zero(&self) -> Tensor<F> {
        Tensor::new()
    }

    fn bracket(&self, a: &Tensor<F>, b: &Tensor<F>) -> Tensor<F> {
        let mut out = Tensor::new();
        for (u, &cu) in a {
            let pu = self.word_parity(u);
            for (v, &cv) in b {
                let sign = pu.koszul::<F>(self.word_parity(v));
                let c = cu * cv;
                add_to(&mut out, [u.as_slice(), v].concat(), c);
                add_to(&mut out, [v.as_slice(), u].concat(), -(sign * c));
            }
        }
        out
    }

    fn add_scaled(&self, acc: &mut Tensor<F>, x: &Tensor<F>, c: F) {
        for (w, &v) in x {
            add_to(acc, w.clone(), c * v);
        }
    }

    fn is_zero(&self, x: &Tensor<F>) -> bool {
        x.is_empty()
    }
}

/// A finite family of tensors of one block, as a subspace of the span of
/// the words occurring in it.
#[derive(Debug, Clone)]
pub struct Block<F: PrimeField> {
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    space: Subspace<F>,
}

impl<F: PrimeField> Block<F> {
    fn span(tensors: &[Tensor<F>]) -> Self {
        let words: Vec<Word> = tensors
            .iter()
            .flat_map(|t| t.keys().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut block = Block {
            space: Subspace::zero(words.len()),
            words,
            index,
        };
        for t in tensors {
            let v = block.coords(t).expect("words collected above");
            block.space.insert(v).expect("length");
        }
        block
    }

    /// Coordinates over this block's words, `None` if a word is foreign.
    pub fn coords(&self, t: &Tensor<F>) -> Option<Vec<F>> {
        let mut v = vec![F::zero(); self.words.len()];
        for (w, &c) in t {
            v[*self.index.get(w)?] = c;
        }
        Some(v)
    }

    pub fn tensor(&self, v: &[F]) -> Tensor<F> {
        v.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (self.words[i].clone(), c))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis(&self) -> Vec<Tensor<F>> {
        self.space.rows().iter().map(|r| self.tensor(r)).collect()
    }

    pub fn space(&self) -> &Subspace<F> {
        &self.space
    }

    /// The subspace of this block spanned by `tensors`, which must lie in it.
    pub fn subspace(&self, tensors: &[Tensor<F>]) -> Subspace<F> {
        let mut s = Subspace::zero(self.words.len());
        for t in tensors {
            s.insert(self.coords(t).expect("tensor lies in the block"))
                .expect("length");
        }
        s
    }
}

/// Per-degree blocks of the free Lie superalgebra up to a degree.
#[derive(Debug, Clone)]
pub struct FreeNilpotent<F: PrimeField> {
    pub algebra: TensorAlgebra,
    pub max_degree: i64,
    blocks: BTreeMap<BlockKey, Block<F>>,
}

impl<F: PrimeField> FreeNilpotent<F> {
    /// Blocks of degree `1..=max_degree`. Generator degrees must be positive.
    pub fn new(algebra: TensorAlgebra, max_degree: i64) -> Self {
        assert!(
            algebra.degrees.iter().all(|&d| d > 0),
            "generator degrees must be positive"
        );
        let mut free = FreeNilpotent {
            algebra,
            max_degree: 0,
            blocks: BTreeMap::new(),
        };
        for d in 1..=max_degree {
            free.extend_to(d);
        }
        free
    }

    /// Adds the blocks of degree `d`, all lower degrees being present.
    fn extend_to(&mut self, d: i64) {
        assert_eq!(d, self.max_degree + 1);
        for parity in [Parity::Even, Parity::Odd] {
            let mut span = Vec::new();
            for i in 0..self.algebra.rank() {
                let (di, pi) = (self.algebra.degrees[i], self.algebra.parities[i]);
                let x = self.algebra.letter::<F>(i);
                if di == d && pi == parity {
                    span.push(x.clone());
                }
                if let Some(b) = self.blocks.get(&(d - di, parity.add(pi))) {
                    for y in b.basis() {
                        let z = self.algebra.bracket(&x, &y);
                        if !z.is_empty() {
                            span.push(z);
                        }
                    }
                }
            }
            self.blocks.insert((d, parity), Block::span(&span));
        }
        self.max_degree = d;
    }

    pub fn block(&self, key: BlockKey) -> Option<&Block<F>> {
        self.blocks.get(&key)
    }

    pub fn sdim(&self, d: i64) -> Sdim {
        let dim = |p| self.blocks.get(&(d, p)).map_or(0, Block::dim);
        Sdim::new(dim(Parity::Even), dim(Parity::Odd))
    }

    pub fn sdims(&self) -> BTreeMap<i64, Sdim> {
        (1..=self.max_degree).map(|d| (d, self.sdim(d))).collect()
    }
}

/// `L / I` for a homogeneous ideal `I` of the free Lie superalgebra `L`,
/// computed degree by degree.
#[derive(Debug, Clone)]
pub struct Quotient<F: PrimeField> {
    pub free: FreeNilpotent<F>,
    ideal: BTreeMap<BlockKey, Subspace<F>>,
    /// The quotient vanishes in every degree above `max_degree`.
    pub vanishes_above: bool,
}

impl<F: PrimeField> Quotient<F> {
    /// Builds the blocks up to `max_degree`, stopping early once the
    /// quotient is zero in a run of degrees as long as the largest
    /// generator degree, after which it stays zero.
    fn build(
        algebra: TensorAlgebra,
        max_degree: i64,
        mut ideal_block: impl FnMut(&FreeNilpotent<F>, &BTreeMap<BlockKey, Subspace<F>>, BlockKey) -> Subspace<F>,
    ) -> Self {
        let run = algebra.degrees.iter().copied().max().unwrap_or(1);
        let mut free = FreeNilpotent::new(algebra, 0);
        let mut ideal = BTreeMap::new();
        let mut zero_run = 0;
        let mut vanishes_above = false;
        for d in 1..=max_degree {
            free.extend_to(d);
            let mut all_zero = true;
            for p in [Parity::Even, Parity::Odd] {
                let s = ideal_block(&free, &ideal, (d, p));
                all_zero &= s.dim() == free.blocks[&(d, p)].dim();
                ideal.insert((d, p), s);
            }
            zero_run = if all_zero { zero_run + 1 } else { 0 };
            if zero_run >= run {
                vanishes_above = true;
                break;
            }
        }
        Quotient {
            free,
            ideal,
            vanishes_above,
        }
    }

    /// Quotient by the ideal generated by homogeneous `relations`, given as
    /// tensors of the free algebra.
    pub fn by_relations(algebra: TensorAlgebra, relations: &[Tensor<F>], max_degree: i64) -> Self {
        let mut by_key: BTreeMap<BlockKey, Vec<Tensor<F>>> = BTreeMap::new();
        for r in relations {
            if let Some(k) = algebra.key_of(r) {
                by_key.entry(k).or_default().push(r.clone());
            }
        }
        Self::build(algebra, max_degree, |free, ideal, (d, p)| {
            let block = &free.blocks[&(d, p)];
            let mut span = by_key.get(&(d, p)).cloned().unwrap_or_default();
            for i in 0..free.algebra.rank() {
                let (di, pi) = (free.algebra.degrees[i], free.algebra.parities[i]);
                let Some(lower) = ideal.get(&(d - di, p.add(pi))) else {
                    continue;
                };
                let lb = &free.blocks[&(d - di, p.add(pi))];
                let x = free.algebra.letter::<F>(i);
                for r in lower.rows() {
                    span.push(free.algebra.bracket(&x, &lb.tensor(r)));
                }
            }
            block.subspace(&span)
        })
    }

    /// The positive part `n_+` of the contragredient algebra `g(A)`: the
    /// free algebra on `X_i^+` modulo the largest graded ideal that meets
    /// the Cartan subalgebra trivially. `a[i][j]` is the eigenvalue of
    /// `H_i` on `X_j^+`, and every `X_i^+` has degree 1.
    pub fn contragredient(parities: Vec<Parity>, a: &[Vec<F>], max_degree: i64) -> Self {
        let n = parities.len();
        let algebra = TensorAlgebra::new(parities.clone(), vec![1; n]);
        // [X_j^-, X_j^+] = c_j H_j
        let c: Vec<F> = parities.iter().map(|p| -p.koszul::<F>(*p)).collect();
        let lower = |t: &Tensor<F>, j: usize| -> Tensor<F> {
            let mut out = Tensor::new();
            for (w, &cw) in t {
                let mut prefix = Parity::Even;
                for k in 0..w.len() {
                    let i = w[k] as usize;
                    if i == j {
                        let tail: F = w[k + 1..].iter().fold(F::zero(), |s, &m| s + a[j][m as usize]);
                        let v = cw * prefix.koszul::<F>(parities[j]) * c[j] * tail;
                        let mut rest = w.clone();
                        rest.remove(k);
                        add_to(&mut out, rest, v);
                    }
                    prefix = prefix.add(parities[i]);
                }
            }
            out
        };
        Self::build(algebra, max_degree, |free, radical, (d, p)| {
            let block = &free.blocks[&(d, p)];
            if d == 1 {
                return Subspace::zero(block.space.ambient());
            }
            // y lies in the radical iff every X_j^- sends it into the radical.
            let basis = block.basis();
            let mut images: Vec<crate::linalg::SparseVec<F>> = vec![Default::default(); basis.len()];
            let mut offset = 0;
            for j in 0..n {
                let key = (d - 1, p.add(parities[j]));
                let (lb, rad) = (&free.blocks[&key], &radical[&key]);
                for (col, y) in basis.iter().enumerate() {
                    let v = lb.coords(&lower(y, j)).expect("lowering stays in the free algebra");
                    let q = rad.quotient_coordinates(&v).expect("length");
                    for (r, x) in q.into_iter().enumerate() {
                        if !x.is_zero() {
                            images[col].insert(offset + r, x);
                        }
                    }
                }
                offset += lb.space.ambient();
            }
            let kernel = crate::linalg::kernel_of_map(&images);
            let elems: Vec<Tensor<F>> = kernel
                .rows()
                .iter()
                .map(|k| {
                    let mut t = Tensor::new();
                    for (y, &c) in basis.iter().zip(k) {
                        free.algebra.add_scaled(&mut t, y, c);
                    }
                    t
                })
                .collect();
            block.subspace(&elems)
        })
    }

    pub fn ideal(&self, key: BlockKey) -> Option<&Subspace<F>> {
        self.ideal.get(&key)
    }

    pub fn sdim(&self, d: i64) -> Sdim {
        let dim = |p| match (self.free.block((d, p)), self.ideal.get(&(d, p))) {
            (Some(b), Some(i)) => b.dim() - i.dim(),
            _ => 0,
        };
        Sdim::new(dim(Parity::Even), dim(Parity::Odd))
    }

    /// Per-degree superdimensions over the computed range.
    pub fn sdims(&self) -> BTreeMap<i64, Sdim> {
        (1..=self.free.max_degree).map(|d| (d, self.sdim(d))).collect()
    }

    pub fn total(&self) -> Sdim {
        self.sdims().into_values().sum()
    }

    /// Whether a homogeneous element of the free algebra vanishes in the
    /// quotient. `None` past the computed range of a quotient not known to
    /// vanish there.
    pub fn vanishes(&self, t: &Tensor<F>) -> Option<bool> {
        let Some(key) = self.free.algebra.key_of(t) else {
            // zero, or a sum over several blocks: test each part
            let mut parts: BTreeMap<BlockKey, Tensor<F>> = BTreeMap::new();
            for (w, &c) in t {
                let k = (self.free.algebra.word_degree(w), self.free.algebra.word_parity(w));
                parts.entry(k).or_default().insert(w.clone(), c);
            }
            let mut all = true;
            for part in parts.values() {
                all &= self.vanishes(part)?;
            }
            return Some(all);
        };
        if key.0 > self.free.max_degree {
            return self.vanishes_above.then_some(true);
        }
        let block = self.free.block(key)?;
        let v = block.coords(t)?;
        self.ideal[&key].contains(&v).ok()
    }
}

/// Relations evaluated in a quotient: an element is zero when it lies in
/// the ideal.
impl<F: PrimeField> LieSuper<F> for Quotient<F> {
    type Elem = Tensor<F>;

    fn zero(&self) -> Tensor<F> {
        Tensor::new()
    }

    fn bracket(&self, a: &Tensor<F>, b: &Tensor<F>) -> Tensor<F> {
        self.free.algebra.bracket(a, b)
    }

    fn add_scaled(&self, acc: &mut Tensor<F>, x: &Tensor<F>, c: F) {
        <TensorAlgebra as LieSuper<F>>::add_scaled(&self.free.algebra, acc, x, c)
    }

    fn is_zero(&self, x: &Tensor<F>) -> bool {
        self.vanishes(x) == Some(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{F3, F5};

    fn algebra(parities: &[Parity]) -> TensorAlgebra {
        TensorAlgebra::new(parities.to_vec(), vec![1; parities.len()])
    }

    #[test]
    fn one_even_generator_is_abelian() {
        let f = FreeNilpotent::<F3>::new(algebra(&[Parity::Even]), 4);
        assert_eq!(
            f.sdims().into_values().collect::<Vec<_>>(),
            vec![Sdim::new(1, 0), Sdim::ZERO, Sdim::ZERO, Sdim::ZERO]
        );
    }

    #[test]
    fn one_odd_generator_stops_after_its_square() {
        for dims in [
            FreeNilpotent::<F3>::new(algebra(&[Parity::Odd]), 4).sdims(),
            FreeNilpotent::<F5>::new(algebra(&[Parity::Odd]), 4).sdims(),
        ] {
            assert_eq!(
                dims.into_values().collect::<Vec<_>>(),
                vec![Sdim::new(0, 1), Sdim::new(1, 0), Sdim::ZERO, Sdim::ZERO]
            );
        }
    }

    /// Dimension of the span of all iterated brackets of two even letters,
    /// enumerated as nested bracket trees rather than built inductively.
    #[test]
    fn two_even_generators_in_degree_three() {
        let a = algebra(&[Parity::Even, Parity::Even]);
        fn trees(a: &TensorAlgebra, d: usize) -> Vec<Tensor<F5>> {
            if d == 1 {
                return vec![a.letter(0), a.letter(1)];
            }
            let mut out = Vec::new();
            for k in 1..d {
                for x in trees(a, k) {
                    for y in trees(a, d - k) {
                        out.push(a.bracket(&x, &y));
                    }
                }
            }
            out
        }
        let brute = Block::span(&trees(&a, 3)).dim();
        assert_eq!(brute, 2);
        assert_eq!(FreeNilpotent::<F5>::new(a, 3).sdim(3), Sdim::new(2, 0));
    }

    #[test]
    fn witt_dimensions_of_two_even_letters() {
        // (1/d) Σ_{e | d} μ(e) 2^(d/e)
        let expected = [2, 1, 2, 3, 6, 9, 18];
        let f = FreeNilpotent::<F5>::new(algebra(&[Parity::Even, Parity::Even]), 7);
        for (d, &n) in (1..=7).zip(&expected) {
            assert_eq!(f.sdim(d), Sdim::new(n, 0), "degree {d}");
        }
    }

    #[test]
    fn no_relations_gives_the_free_algebra() {
        let a = algebra(&[Parity::Odd, Parity::Even]);
        let q = Quotient::<F3>::by_relations(a.clone(), &[], 5);
        assert_eq!(q.sdims(), FreeNilpotent::<F3>::new(a, 5).sdims());
        assert!(!q.vanishes_above);
    }

    #[test]
    fn serre_relations_of_sl3() {
        let a = algebra(&[Parity::Even, Parity::Even]);
        let (x, y) = (a.letter::<F5>(0), a.letter::<F5>(1));
        let r1 = a.bracket(&x, &a.bracket(&x, &y));
        let r2 = a.bracket(&y, &a.bracket(&y, &x));
        let q = Quotient::by_relations(a, &[r1, r2], 6);
        assert!(q.vanishes_above);
        assert_eq!(q.total(), Sdim::new(3, 0));
    }

    #[test]
    fn contragredient_of_classical_matrices() {
        let m = |rows: &[[i64; 2]]| -> Vec<Vec<F5>> {
            rows.iter()
                .map(|r| r.iter().map(|&x| F5::from_i64(x)).collect())
                .collect()
        };
        // sl(3), sp(4), and sl(1|2) with an odd isotropic root
        let cases = [
            (
                vec![Parity::Even, Parity::Even],
                m(&[[2, -1], [-1, 2]]),
                Sdim::new(3, 0),
            ),
            (
                vec![Parity::Even, Parity::Even],
                m(&[[2, -2], [-1, 2]]),
                Sdim::new(4, 0),
            ),
            (vec![Parity::Odd, Parity::Even], m(&[[0, -1], [-1, 2]]), Sdim::new(1, 2)),
            (vec![Parity::Even, Parity::Odd], m(&[[2, -1], [-1, 1]]), Sdim::new(4, 2)),
        ];
        for (parities, a, expected) in cases {
            let q = Quotient::contragredient(parities, &a, 10);
            assert!(q.vanishes_above);
            assert_eq!(q.total(), expected, "{a:?}");
        }
    }
}
