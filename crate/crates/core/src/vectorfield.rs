//! `vect(m; N | n)`: vector fields with divided-power coefficients, the
//! superbracket, weight gradings and per-degree monomial bases.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::divided::{AlgebraError, Parity, Slot, SuperMonomial, SuperPolynomial, VariableSpec};
use crate::field::PrimeField;
use crate::linalg::{LinalgError, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("weights must be positive, one per variable ({0})")]
    BadWeights(String),
    #[error("field is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("field term outside the degree-{degree} basis")]
    OutsideBasis { degree: i64 },
}

/// `deg x_i = w_i > 0`, `deg ∂_i = -w_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightGrading {
    weights: Vec<i64>,
}

impl WeightGrading {
    pub fn new(spec: &VariableSpec, weights: Vec<i64>) -> Result<Self, FieldError> {
        if weights.len() != spec.len() || weights.iter().any(|&w| w <= 0) {
            return Err(FieldError::BadWeights(format!(
                "{weights:?} for {} variables",
                spec.len()
            )));
        }
        Ok(WeightGrading { weights })
    }

    pub fn standard(spec: &VariableSpec) -> Self {
        WeightGrading {
            weights: vec![1; spec.len()],
        }
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.weights[i]
    }

    pub fn max_weight(&self) -> i64 {
        self.weights.iter().copied().max().unwrap_or(0)
    }
}

/// Basis element `x^(a) ξ_I ∂_i`, ordered by monomial first.
pub type FieldKey = (SuperMonomial, usize);

/// A finite sum `Σ f_i ∂_i`, stored as a sparse map over monomial fields.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VectorField<F> {
    terms: BTreeMap<FieldKey, F>,
}

impl<F> Default for VectorField<F> {
    fn default() -> Self {
        VectorField { terms: BTreeMap::new() }
    }
}

impl<F: PrimeField> fmt::Debug for VectorField<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField{{")?;
        for ((m, i), c) in &self.terms {
            write!(f, " {c}*{:?}/{:x}*d{} ", m.exps, m.odd, i + 1)?;
        }
        write!(f, "}}")
    }
}

impl<F: PrimeField> VectorField<F> {
    pub fn zero() -> Self {
        VectorField { terms: BTreeMap::new() }
    }

    /// `∂_i`.
    pub fn partial(spec: &VariableSpec, i: usize) -> Self {
        let mut v = Self::zero();
        v.add_term(SuperMonomial::one(spec.even_count()), i, F::one());
        v
    }

    /// `f ∂_i`.
    pub fn from_component(f: &SuperPolynomial<F>, i: usize) -> Self {
        let mut v = Self::zero();
        for (m, &c) in &f.terms {
            v.add_term(m.clone(), i, c);
        }
        v
    }

    pub fn terms(&self) -> &BTreeMap<FieldKey, F> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: SuperMonomial, i: usize, c: F) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((m, i)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: F) {
        if c.is_zero() {
            return;
        }
        for ((m, i), &v) in &other.terms {
            self.add_term(m.clone(), *i, v * c);
        }
    }

    pub fn scale(&self, c: F) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, F::one());
        out
    }

    /// Components `f_i` of `Σ f_i ∂_i`.
    pub fn components(&self) -> BTreeMap<usize, SuperPolynomial<F>> {
        let mut out: BTreeMap<usize, SuperPolynomial<F>> = BTreeMap::new();
        for ((m, i), &c) in &self.terms {
            out.entry(*i).or_default().add_term(m.clone(), c);
        }
        out
    }

    /// Parity when homogeneous; `None` for zero or mixed fields.
    pub fn parity(&self, spec: &VariableSpec) -> Option<Parity> {
        let mut it = self.terms.keys().map(|(m, i)| m.parity().add(spec.var(*i).parity));
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// Weighted degree when homogeneous.
    pub fn degree(&self, spec: &VariableSpec, grading: &WeightGrading) -> Option<i64> {
        let mut it = self
            .terms
            .keys()
            .map(|(m, i)| spec.monomial_degree(m, grading.weights()) - grading.weight(*i));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Splits into homogeneous pieces keyed by (degree, parity).
    pub fn homogeneous_parts(&self, spec: &VariableSpec, grading: &WeightGrading) -> BTreeMap<(i64, Parity), Self> {
        let mut out: BTreeMap<(i64, Parity), Self> = BTreeMap::new();
        for ((m, i), &c) in &self.terms {
            let d = spec.monomial_degree(m, grading.weights()) - grading.weight(*i);
            let p = m.parity().add(spec.var(*i).parity);
            out.entry((d, p)).or_default().add_term(m.clone(), *i, c);
        }
        out
    }

    /// `X(f) = Σ f_i ∂_i(f)`.
    pub fn apply(&self, spec: &VariableSpec, f: &SuperPolynomial<F>) -> SuperPolynomial<F> {
        let mut out = SuperPolynomial::zero();
        for ((m, i), &c) in &self.terms {
            for (mf, &cf) in &f.terms {
                if let Some((neg, d)) = spec.partial_monomial(mf, *i) {
                    if let Some((k, prod)) = spec.multiply_monomials::<F>(m, &d) {
                        let v = c * cf * k;
                        out.add_term(prod, if neg { -v } else { v });
                    }
                }
            }
        }
        out
    }

    pub fn render(&self, spec: &VariableSpec) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, ((m, i), c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                s.push_str(" + ");
            }
            let body = spec.render_monomial(m);
            let d = format!("d{}", spec.var(*i).name);
            let c = c.value();
            let coeff = if c == 1 { String::new() } else { format!("{c}*") };
            if body.is_empty() {
                s.push_str(&format!("{coeff}{d}"));
            } else {
                s.push_str(&format!("{coeff}{body}*{d}"));
            }
        }
        s
    }
}

/// The superbracket `[X, Y] = X∘Y - (-1)^{p(X)p(Y)} Y∘X` of derivations,
/// computed term by term: `[f∂_i, g∂_j] = f ∂_i(g) ∂_j - (-1)^{..} g ∂_j(f) ∂_i`.
pub fn bracket<F: PrimeField>(spec: &VariableSpec, x: &VectorField<F>, y: &VectorField<F>) -> VectorField<F> {
    let mut out = VectorField::zero();
    for ((mx, i), &cx) in &x.terms {
        let px = mx.parity().add(spec.var(*i).parity);
        for ((my, j), &cy) in &y.terms {
            let py = my.parity().add(spec.var(*j).parity);
            if let Some((neg, d)) = spec.partial_monomial(my, *i) {
                if let Some((k, prod)) = spec.multiply_monomials::<F>(mx, &d) {
                    let v = cx * cy * k;
                    out.add_term(prod, *j, if neg { -v } else { v });
                }
            }
            if let Some((neg, d)) = spec.partial_monomial(mx, *j) {
                if let Some((k, prod)) = spec.multiply_monomials::<F>(my, &d) {
                    let v = cx * cy * k * px.koszul::<F>(py);
                    out.add_term(prod, *i, if neg { v } else { -v });
                }
            }
        }
    }
    out
}

/// All monomial fields of one degree, in the fixed basis order, with a
/// reverse index for coordinates.
#[derive(Debug, Clone)]
pub struct DegreeBasis {
    pub degree: i64,
    elems: Vec<FieldKey>,
    index: HashMap<FieldKey, usize>,
}

impl DegreeBasis {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[FieldKey] {
        &self.elems
    }

    pub fn index_of(&self, key: &FieldKey) -> Option<usize> {
        self.index.get(key).copied()
    }
}

/// Monomials of weighted degree exactly `d`.
pub fn monomials_of_degree(spec: &VariableSpec, grading: &WeightGrading, d: i64) -> Vec<SuperMonomial> {
    let mut out = Vec::new();
    if d < 0 {
        return out;
    }
    let n = spec.len();
    let mut cur = SuperMonomial::one(spec.even_count());
    fn rec(
        spec: &VariableSpec,
        w: &[i64],
        i: usize,
        n: usize,
        left: i64,
        cur: &mut SuperMonomial,
        out: &mut Vec<SuperMonomial>,
    ) {
        if i == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        match spec.slot(i) {
            Slot::Even(k) => {
                let max = (left / w[i]).min(spec.bound(k) as i64 - 1);
                for a in 0..=max {
                    cur.exps[k] = a as u32;
                    rec(spec, w, i + 1, n, left - a * w[i], cur, out);
                }
                cur.exps[k] = 0;
            }
            Slot::Odd(k) => {
                rec(spec, w, i + 1, n, left, cur, out);
                if left >= w[i] {
                    cur.odd |= 1 << k;
                    rec(spec, w, i + 1, n, left - w[i], cur, out);
                    cur.odd &= !(1 << k);
                }
            }
        }
    }
    rec(spec, grading.weights(), 0, n, d, &mut cur, &mut out);
    out
}

/// `vect(m;N|n)` with a grading and a write-once cache of degree bases.
#[derive(Debug)]
pub struct Ambient {
    spec: VariableSpec,
    grading: WeightGrading,
    cache: Mutex<HashMap<i64, Arc<DegreeBasis>>>,
}

impl Clone for Ambient {
    fn clone(&self) -> Self {
        Ambient::new(self.spec.clone(), self.grading.clone())
    }
}

impl Ambient {
    pub fn new(spec: VariableSpec, grading: WeightGrading) -> Self {
        Ambient {
            spec,
            grading,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn spec(&self) -> &VariableSpec {
        &self.spec
    }

    pub fn grading(&self) -> &WeightGrading {
        &self.grading
    }

    /// Largest degree carrying a nonzero field.
    pub fn max_degree(&self) -> i64 {
        let top: i64 = (0..self.spec.len())
            .map(|i| match self.spec.slot(i) {
                Slot::Even(k) => (self.spec.bound(k) as i64 - 1) * self.grading.weight(i),
                Slot::Odd(_) => self.grading.weight(i),
            })
            .sum();
        let min_w = self.grading.weights().iter().copied().min().unwrap_or(0);
        top - min_w
    }

    pub fn min_degree(&self) -> i64 {
        -self.grading.max_weight()
    }

    /// The degree-`k` basis `{x^(a) ξ_J ∂_i}`, cached.
    pub fn basis(&self, k: i64) -> Arc<DegreeBasis> {
        if let Some(b) = self.cache.lock().unwrap().get(&k) {
            return b.clone();
        }
        let mut elems = Vec::new();
        if k >= self.min_degree() && k <= self.max_degree() {
            let mut by_var: Vec<Vec<SuperMonomial>> = Vec::with_capacity(self.spec.len());
            for i in 0..self.spec.len() {
                by_var.push(monomials_of_degree(
                    &self.spec,
                    &self.grading,
                    k + self.grading.weight(i),
                ));
            }
            for (i, ms) in by_var.into_iter().enumerate() {
                elems.extend(ms.into_iter().map(|m| (m, i)));
            }
            elems.sort();
        }
        let index = elems.iter().cloned().enumerate().map(|(a, b)| (b, a)).collect();
        let b = Arc::new(DegreeBasis {
            degree: k,
            elems,
            index,
        });
        self.cache.lock().unwrap().entry(k).or_insert(b).clone()
    }

    /// Coordinates of a degree-`k` field.
    pub fn coords<F: PrimeField>(&self, x: &VectorField<F>, k: i64) -> Result<Vec<F>, FieldError> {
        let b = self.basis(k);
        let mut v = vec![F::zero(); b.len()];
        for (key, &c) in x.terms() {
            let idx = b.index_of(key).ok_or(FieldError::OutsideBasis { degree: k })?;
            v[idx] = c;
        }
        Ok(v)
    }

    pub fn field<F: PrimeField>(&self, k: i64, coords: &[F]) -> VectorField<F> {
        let b = self.basis(k);
        let mut x = VectorField::zero();
        for (key, &c) in b.elems().iter().zip(coords) {
            x.add_term(key.0.clone(), key.1, c);
        }
        x
    }

    pub fn bracket<F: PrimeField>(&self, x: &VectorField<F>, y: &VectorField<F>) -> VectorField<F> {
        bracket(&self.spec, x, y)
    }

    pub fn degree_of<F: PrimeField>(&self, x: &VectorField<F>) -> Option<i64> {
        x.degree(&self.spec, &self.grading)
    }

    /// Canonical span of homogeneous degree-`k` fields.
    pub fn span<F: PrimeField>(&self, k: i64, fields: &[VectorField<F>]) -> Result<Subspace<F>, FieldError> {
        let n = self.basis(k).len();
        let mut s = Subspace::zero(n);
        for x in fields {
            s.insert(self.coords(x, k)?)?;
        }
        Ok(s)
    }

    /// Fields spanning a subspace of the degree-`k` component.
    pub fn fields_of<F: PrimeField>(&self, k: i64, s: &Subspace<F>) -> Vec<VectorField<F>> {
        s.rows().iter().map(|r| self.field(k, r)).collect()
    }

    /// (even, odd) dimension split of a subspace of degree `k`. The basis
    /// monomial fields are parity-homogeneous, so the split is read off the
    /// echelon form after separating parities.
    pub fn sdim<F: PrimeField>(&self, k: i64, s: &Subspace<F>) -> (usize, usize) {
        let b = self.basis(k);
        let mut even = Subspace::zero(b.len());
        let mut odd = Subspace::zero(b.len());
        for r in s.rows() {
            let (mut e, mut o) = (vec![F::zero(); b.len()], vec![F::zero(); b.len()]);
            for (idx, &c) in r.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (m, i) = &b.elems()[idx];
                if m.parity().add(self.spec.var(*i).parity) == Parity::Even {
                    e[idx] = c;
                } else {
                    o[idx] = c;
                }
            }
            even.insert(e).expect("length");
            odd.insert(o).expect("length");
        }
        (even.dim(), odd.dim())
    }

    /// Parity of the basis element at `idx` of degree `k`.
    pub fn basis_parity(&self, k: i64, idx: usize) -> Parity {
        let b = self.basis(k);
        let (m, i) = &b.elems()[idx];
        m.parity().add(self.spec.var(*i).parity)
    }

    /// Splits a degree-`k` subspace into its even and odd parts (only valid
    /// for super subspaces, i.e. spans of homogeneous vectors).
    pub fn parity_parts<F: PrimeField>(&self, k: i64, s: &Subspace<F>) -> (Subspace<F>, Subspace<F>) {
        let n = self.basis(k).len();
        let mut even = Subspace::zero(n);
        let mut odd = Subspace::zero(n);
        for r in s.rows() {
            let mut e = vec![F::zero(); n];
            let mut o = vec![F::zero(); n];
            for (idx, &c) in r.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if self.basis_parity(k, idx) == Parity::Even {
                    e[idx] = c
                } else {
                    o[idx] = c
                }
            }
            even.insert(e).expect("length");
            odd.insert(o).expect("length");
        }
        (even, odd)
    }
}

/// Reduces an action of degree-0 elements on a module to a faithful one: the
/// returned elements act by linearly independent operators spanning the same
/// space of operators, so the annihilator is dropped.
pub fn annihilator_quotient<F: PrimeField>(
    ambient: &Ambient,
    g0: &[VectorField<F>],
    module: &[(i64, VectorField<F>)],
) -> Result<Vec<VectorField<F>>, FieldError> {
    let mut ops = Subspace::zero(0);
    let mut keep = Vec::new();
    let mut layout: Vec<(i64, usize)> = Vec::new();
    let mut total = 0;
    for (k, _) in module {
        let n = ambient.basis(*k).len();
        layout.push((*k, total));
        total += n;
    }
    if ops.ambient() != total * module.len() {
        ops = Subspace::zero(total * module.len());
    }
    for x in g0 {
        let mut row = vec![F::zero(); total * module.len()];
        for (slot, (k, y)) in module.iter().enumerate() {
            let img = ambient.bracket(x, y);
            let c = ambient.coords(&img, *k)?;
            let off = slot * total + layout[slot].1;
            row[off..off + c.len()].copy_from_slice(&c);
        }
        if ops.insert(row)? {
            keep.push(x.clone());
        }
    }
    Ok(keep)
}

/// Contact structure `α = dt + Σ (p_i dq_i - q_i dp_i) + Σ B_{jk} θ_j dθ_k`
/// used to turn generating functions into vector fields.
#[derive(Debug, Clone)]
pub struct ContactStructure<F> {
    pub t: usize,
    pub pairs: Vec<(usize, usize)>,
    pub odd: Vec<usize>,
    /// Inverse of the symmetric odd form `B`, indexed like `odd`.
    pub odd_form_inverse: Vec<Vec<F>>,
}

impl<F: PrimeField> ContactStructure<F> {
    /// `K_f = (2 - E)(f) ∂_t - H_f + ∂_t(f) E`, with `E = Σ y ∂_y` over
    /// all non-`t` coordinates and
    /// `H_f = Σ (∂_p f ∂_q - ∂_q f ∂_p) - (-1)^{p(f)} Σ C_{jk} ∂_{θ_j} f ∂_{θ_k}`.
    pub fn field(&self, spec: &VariableSpec, f: &SuperPolynomial<F>) -> VectorField<F> {
        let mut out = VectorField::zero();
        // split f by parity so the sign in H_f is well defined
        let mut parts: BTreeMap<Parity, SuperPolynomial<F>> = BTreeMap::new();
        for (m, &c) in &f.terms {
            parts.entry(m.parity()).or_default().add_term(m.clone(), c);
        }
        let non_t: Vec<usize> = (0..spec.len()).filter(|&i| i != self.t).collect();
        for (parity, g) in parts {
            // (2 - E)(g) ∂_t
            let mut two_minus_e = SuperPolynomial::zero();
            for (m, &c) in &g.terms {
                let mut e = 0i64;
                for &i in &non_t {
                    e += match spec.slot(i) {
                        Slot::Even(k) => m.exps[k] as i64,
                        Slot::Odd(k) => (m.odd >> k & 1) as i64,
                    };
                }
                two_minus_e.add_term(m.clone(), c * F::from_i64(2 - e));
            }
            out.add_scaled(&VectorField::from_component(&two_minus_e, self.t), F::one());
            // -H_g
            for &(p, q) in &self.pairs {
                let dp = spec.partial(&g, p).expect("index");
                let dq = spec.partial(&g, q).expect("index");
                out.add_scaled(&VectorField::from_component(&dp, q), -F::one());
                out.add_scaled(&VectorField::from_component(&dq, p), F::one());
            }
            let sign = if parity == Parity::Odd { -F::one() } else { F::one() };
            for (a, &j) in self.odd.iter().enumerate() {
                let dj = spec.partial(&g, j).expect("index");
                if dj.is_zero() {
                    continue;
                }
                for (b, &k) in self.odd.iter().enumerate() {
                    let c = self.odd_form_inverse[a][b];
                    if !c.is_zero() {
                        out.add_scaled(&VectorField::from_component(&dj, k), sign * c);
                    }
                }
            }
            // ∂_t(g) E
            let dt = spec.partial(&g, self.t).expect("index");
            if !dt.is_zero() {
                for &i in &non_t {
                    let yi = SuperPolynomial::monomial(spec.variable_power(i, 1).expect("variable"), F::one());
                    let coeff = spec.multiply(&dt, &yi);
                    out.add_scaled(&VectorField::from_component(&coeff, i), F::one());
                }
            }
        }
        out
    }
}
