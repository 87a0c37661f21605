//! The coefficient algebra `O(m; N | n)`: divided powers in even
//! indeterminates with heights `N`, exterior generators for odd ones.
//!
//! Conventions:
//! * `x^(a)` is the divided power, `x^(a) x^(b) = binom(a+b, a) x^(a+b)`, and
//!   vanishes once `a + b >= p^N`.
//! * Odd monomials are stored with indices in increasing order; the sign of a
//!   product comes from sorting the concatenated index list.
//! * `∂` on an odd variable is a left derivative: moving `ξ_k` to the front
//!   of `ξ_I` costs `(-1)^#{i in I : i < k}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::field::PrimeField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: u32) -> Self {
        if b % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn add(self, other: Parity) -> Parity {
        Parity::from_bit(self.bit() + other.bit())
    }

    /// `(-1)^(self * other)` as a field element.
    pub fn koszul<F: PrimeField>(self, other: Parity) -> F {
        if self == Parity::Odd && other == Parity::Odd {
            -F::one()
        } else {
            F::one()
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("variable index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("exponent {exp} of {name} exceeds height bound {bound}")]
    ExponentTooLarge { name: String, exp: u32, bound: u32 },
    #[error("odd variable {0} repeated in a monomial")]
    RepeatedOdd(String),
    #[error("invalid variable specification: {0}")]
    InvalidSpec(String),
}

/// Where a variable lives inside a [`SuperMonomial`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Even(usize),
    Odd(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub parity: Parity,
    /// Height `N_i` for even variables; ignored for odd ones.
    pub height: u32,
}

/// Indeterminates of `O(m; N | n)` in the user's numbering, which may
/// interleave even and odd variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSpec {
    prime: u32,
    vars: Vec<Variable>,
    slots: Vec<Slot>,
    even_vars: Vec<usize>,
    odd_vars: Vec<usize>,
    bounds: Vec<u32>,
}

impl VariableSpec {
    pub fn new(prime: u32, vars: Vec<Variable>) -> Result<Self, AlgebraError> {
        if prime < 3 || !crate::field::is_prime(prime) {
            return Err(AlgebraError::InvalidSpec(format!("{prime} is not an odd prime")));
        }
        let mut slots = Vec::with_capacity(vars.len());
        let mut even_vars = Vec::new();
        let mut odd_vars = Vec::new();
        let mut bounds = Vec::new();
        for (i, v) in vars.iter().enumerate() {
            match v.parity {
                Parity::Even => {
                    if v.height == 0 {
                        return Err(AlgebraError::InvalidSpec(format!("height of {} must be >= 1", v.name)));
                    }
                    let bound = (prime as u64).checked_pow(v.height).filter(|&b| b <= u32::MAX as u64);
                    let Some(bound) = bound else {
                        return Err(AlgebraError::InvalidSpec(format!("height of {} too large", v.name)));
                    };
                    slots.push(Slot::Even(even_vars.len()));
                    even_vars.push(i);
                    bounds.push(bound as u32);
                }
                Parity::Odd => {
                    slots.push(Slot::Odd(odd_vars.len()));
                    odd_vars.push(i);
                }
            }
        }
        if odd_vars.len() > 64 {
            return Err(AlgebraError::InvalidSpec("at most 64 odd variables".into()));
        }
        for (i, a) in vars.iter().enumerate() {
            if vars[..i].iter().any(|b| b.name == a.name) {
                return Err(AlgebraError::InvalidSpec(format!("duplicate variable name {}", a.name)));
            }
        }
        Ok(VariableSpec {
            prime,
            vars,
            slots,
            even_vars,
            odd_vars,
            bounds,
        })
    }

    /// `m` even variables `x1..xm` with the given heights followed by `n` odd
    /// variables continuing the numbering.
    pub fn standard(prime: u32, heights: &[u32], odd: usize) -> Result<Self, AlgebraError> {
        let mut vars: Vec<Variable> = heights
            .iter()
            .enumerate()
            .map(|(i, &h)| Variable {
                name: format!("x{}", i + 1),
                parity: Parity::Even,
                height: h,
            })
            .collect();
        let m = vars.len();
        vars.extend((0..odd).map(|j| Variable {
            name: format!("x{}", m + j + 1),
            parity: Parity::Odd,
            height: 1,
        }));
        Self::new(prime, vars)
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var(&self, i: usize) -> &Variable {
        &self.vars[i]
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn slot(&self, i: usize) -> Slot {
        self.slots[i]
    }

    pub fn even_count(&self) -> usize {
        self.even_vars.len()
    }

    pub fn odd_count(&self) -> usize {
        self.odd_vars.len()
    }

    /// Global index of the `k`-th even variable.
    pub fn even_var(&self, k: usize) -> usize {
        self.even_vars[k]
    }

    pub fn odd_var(&self, k: usize) -> usize {
        self.odd_vars[k]
    }

    /// Exclusive exponent bound `p^{N_k}` of the `k`-th even variable.
    pub fn bound(&self, k: usize) -> u32 {
        self.bounds[k]
    }

    pub fn heights(&self) -> Vec<u32> {
        self.even_vars.iter().map(|&i| self.vars[i].height).collect()
    }

    pub fn with_heights(&self, heights: &[u32]) -> Result<Self, AlgebraError> {
        if heights.len() != self.even_count() {
            return Err(AlgebraError::InvalidSpec(format!(
                "expected {} heights, got {}",
                self.even_count(),
                heights.len()
            )));
        }
        let mut vars = self.vars.clone();
        for (k, &h) in heights.iter().enumerate() {
            vars[self.even_vars[k]].height = h;
        }
        Self::new(self.prime, vars)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// `dim O(m;N|n) = p^{ΣN_i} 2^n`.
    pub fn dimension(&self) -> u128 {
        let even: u128 = self.bounds.iter().map(|&b| b as u128).product();
        even << self.odd_count()
    }

    /// Every monomial of the algebra, in monomial order.
    pub fn monomials(&self) -> Vec<SuperMonomial> {
        let mut out = vec![SuperMonomial::one(self.even_count())];
        for k in 0..self.even_count() {
            let mut next = Vec::with_capacity(out.len() * self.bounds[k] as usize);
            for m in &out {
                for a in 0..self.bounds[k] {
                    let mut m2 = m.clone();
                    m2.exps[k] = a;
                    next.push(m2);
                }
            }
            out = next;
        }
        let n = self.odd_count();
        let mut all = Vec::with_capacity(out.len() << n);
        for m in &out {
            for mask in 0u64..(1u64 << n) {
                let mut m2 = m.clone();
                m2.odd = mask;
                all.push(m2);
            }
        }
        all.sort();
        all
    }

    pub fn monomial_parity(&self, m: &SuperMonomial) -> Parity {
        m.parity()
    }

    /// Builds `x^(a)` for a single variable (divided power for even, `a` in
    /// {0,1} for odd).
    pub fn variable_power(&self, i: usize, a: u32) -> Result<SuperMonomial, AlgebraError> {
        let mut m = SuperMonomial::one(self.even_count());
        match self.slots.get(i).ok_or(AlgebraError::IndexOutOfRange(i))? {
            Slot::Even(k) => {
                if a >= self.bounds[*k] {
                    return Err(AlgebraError::ExponentTooLarge {
                        name: self.vars[i].name.clone(),
                        exp: a,
                        bound: self.bounds[*k],
                    });
                }
                m.exps[*k] = a;
            }
            Slot::Odd(k) => {
                if a > 1 {
                    return Err(AlgebraError::RepeatedOdd(self.vars[i].name.clone()));
                }
                if a == 1 {
                    m.odd = 1 << k;
                }
            }
        }
        Ok(m)
    }

    /// Product of two monomials: coefficient and monomial, or `None` if zero.
    pub fn multiply_monomials<F: PrimeField>(
        &self,
        a: &SuperMonomial,
        b: &SuperMonomial,
    ) -> Option<(F, SuperMonomial)> {
        if a.odd & b.odd != 0 {
            return None;
        }
        let mut coeff = F::one();
        let mut exps = Vec::with_capacity(a.exps.len());
        for k in 0..a.exps.len() {
            let s = a.exps[k] + b.exps[k];
            if s >= self.bounds[k] {
                return None;
            }
            let c = binom_mod_p(s as u64, a.exps[k] as u64, self.prime);
            if c == 0 {
                return None;
            }
            coeff *= F::from_i64(c as i64);
            exps.push(s);
        }
        if merge_sign(a.odd, b.odd) {
            coeff = -coeff;
        }
        Some((
            coeff,
            SuperMonomial {
                exps,
                odd: a.odd | b.odd,
            },
        ))
    }

    pub fn multiply<F: PrimeField>(&self, f: &SuperPolynomial<F>, g: &SuperPolynomial<F>) -> SuperPolynomial<F> {
        let mut out = SuperPolynomial::zero();
        for (ma, &ca) in &f.terms {
            for (mb, &cb) in &g.terms {
                if let Some((c, m)) = self.multiply_monomials::<F>(ma, mb) {
                    out.add_term(m, c * ca * cb);
                }
            }
        }
        out
    }

    /// `∂_i m` as (sign, monomial), or `None` when it vanishes.
    pub fn partial_monomial(&self, m: &SuperMonomial, i: usize) -> Option<(bool, SuperMonomial)> {
        match self.slots[i] {
            Slot::Even(k) => {
                if m.exps[k] == 0 {
                    None
                } else {
                    let mut m2 = m.clone();
                    m2.exps[k] -= 1;
                    Some((false, m2))
                }
            }
            Slot::Odd(k) => {
                let bit = 1u64 << k;
                if m.odd & bit == 0 {
                    None
                } else {
                    let before = (m.odd & (bit - 1)).count_ones();
                    let mut m2 = m.clone();
                    m2.odd &= !bit;
                    Some((before % 2 == 1, m2))
                }
            }
        }
    }

    pub fn partial<F: PrimeField>(&self, f: &SuperPolynomial<F>, i: usize) -> Result<SuperPolynomial<F>, AlgebraError> {
        if i >= self.len() {
            return Err(AlgebraError::IndexOutOfRange(i));
        }
        let mut out = SuperPolynomial::zero();
        for (m, &c) in &f.terms {
            if let Some((neg, m2)) = self.partial_monomial(m, i) {
                out.add_term(m2, if neg { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Weighted degree of a monomial.
    pub fn monomial_degree(&self, m: &SuperMonomial, weights: &[i64]) -> i64 {
        let mut d = 0;
        for (k, &a) in m.exps.iter().enumerate() {
            d += a as i64 * weights[self.even_vars[k]];
        }
        for k in 0..self.odd_count() {
            if m.odd >> k & 1 == 1 {
                d += weights[self.odd_vars[k]];
            }
        }
        d
    }

    pub fn render_monomial(&self, m: &SuperMonomial) -> String {
        let mut parts = Vec::new();
        for (i, v) in self.vars.iter().enumerate() {
            match self.slots[i] {
                Slot::Even(k) => match m.exps[k] {
                    0 => {}
                    1 => parts.push(v.name.clone()),
                    a => parts.push(format!("{}^({})", v.name, a)),
                },
                Slot::Odd(k) => {
                    if m.odd >> k & 1 == 1 {
                        parts.push(v.name.clone());
                    }
                }
            }
        }
        parts.join("*")
    }

    pub fn render<F: PrimeField>(&self, f: &SuperPolynomial<F>) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (m, c)) in f.terms.iter().enumerate() {
            let body = self.render_monomial(m);
            let c = c.value();
            if idx > 0 {
                s.push_str(" + ");
            }
            match (c, body.is_empty()) {
                (_, true) => s.push_str(&c.to_string()),
                (1, false) => s.push_str(&body),
                (_, false) => s.push_str(&format!("{c}*{body}")),
            }
        }
        s
    }
}

/// `true` when merging the sorted index sets `a` then `b` takes an odd number
/// of transpositions.
fn merge_sign(a: u64, b: u64) -> bool {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        // elements of a greater than j must pass over ξ_j
        inversions += (a >> j >> 1).count_ones();
    }
    inversions % 2 == 1
}

/// `binom(a, b) mod p` by Lucas' theorem. Returns 0 for `b > a`.
pub fn binom_mod_p(mut a: u64, mut b: u64, p: u32) -> u32 {
    if b > a {
        return 0;
    }
    let p = p as u64;
    let mut acc = 1u64;
    while b > 0 || a > 0 {
        let (ad, bd) = (a % p, b % p);
        if bd > ad {
            return 0;
        }
        acc = acc * small_binom(ad, bd) % p;
        a /= p;
        b /= p;
    }
    acc as u32
}

fn small_binom(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut r = 1u128;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as u64
}

/// A monomial `x^(a) ξ_I`. Even exponents are indexed by even slot, the odd
/// set is a bitmask over odd slots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SuperMonomial {
    pub exps: Vec<u32>,
    pub odd: u64,
}

impl SuperMonomial {
    pub fn one(even_count: usize) -> Self {
        SuperMonomial {
            exps: vec![0; even_count],
            odd: 0,
        }
    }

    pub fn is_one(&self) -> bool {
        self.odd == 0 && self.exps.iter().all(|&a| a == 0)
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd.count_ones())
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum::<u32>() + self.odd.count_ones()
    }
}

impl Ord for SuperMonomial {
    /// Degree-lex: total (unweighted) degree first, then exponents, then the
    /// odd set read as a sorted index list.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.exps.cmp(&self.exps))
            .then_with(|| self.odd.reverse_bits().cmp(&other.odd.reverse_bits()).reverse())
    }
}

impl PartialOrd for SuperMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite `F_p`-combination of monomials with no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SuperPolynomial<F> {
    pub terms: BTreeMap<SuperMonomial, F>,
}

impl<F: PrimeField> Default for SuperPolynomial<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: PrimeField> SuperPolynomial<F> {
    pub fn zero() -> Self {
        SuperPolynomial { terms: BTreeMap::new() }
    }

    pub fn constant(spec: &VariableSpec, c: F) -> Self {
        Self::monomial(SuperMonomial::one(spec.even_count()), c)
    }

    pub fn monomial(m: SuperMonomial, c: F) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: SuperMonomial, c: F) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn add_assign_scaled(&mut self, other: &Self, c: F) {
        if c.is_zero() {
            return;
        }
        for (m, &v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scale(&self, c: F) -> Self {
        let mut out = Self::zero();
        out.add_assign_scaled(self, c);
        out
    }

    /// Parity if every monomial agrees, `None` for zero or mixed.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.parity());
        let first = it.next()?;
        if it.all(|p| p == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use num_traits::One;
    use proptest::prelude::*;

    type F3 = Fp<3>;
    type F5 = Fp<5>;

    fn factorial_binom(a: u64, b: u64) -> u128 {
        (0..b).fold(1u128, |acc, i| acc * (a - i) as u128 / (i + 1) as u128)
    }

    #[test]
    fn lucas_binomials() {
        assert_eq!(binom_mod_p(4, 2, 3), 0);
        assert_eq!(binom_mod_p(6, 3, 5), 0);
        assert_eq!(binom_mod_p(9, 0, 3), 1);
        assert_eq!(binom_mod_p(2, 1, 3), 2);
        assert_eq!(binom_mod_p(2, 3, 3), 0);
        for p in [3u32, 5, 7] {
            for a in 0..60u64 {
                for b in 0..=a {
                    assert_eq!(binom_mod_p(a, b, p) as u128, factorial_binom(a, b) % p as u128);
                }
            }
        }
    }

    fn spec(p: u32, heights: &[u32], odd: usize) -> VariableSpec {
        VariableSpec::standard(p, heights, odd).unwrap()
    }

    fn var<F: PrimeField>(s: &VariableSpec, i: usize, a: u32) -> SuperPolynomial<F> {
        SuperPolynomial::monomial(s.variable_power(i, a).unwrap(), F::one())
    }

    #[test]
    fn divided_power_products() {
        let s = spec(3, &[1], 0);
        let x1 = var::<F3>(&s, 0, 1);
        let x2 = var::<F3>(&s, 0, 2);
        assert_eq!(s.multiply(&x1, &x1), x2.scale(F3::new(2)));
        assert!(s.multiply(&x1, &x2).is_zero());
        let s2 = spec(3, &[2], 0);
        // binom(3,1) = 3 = 0 mod 3 even though x^(3) exists at height 2
        assert!(s2.multiply(&var::<F3>(&s2, 0, 1), &var::<F3>(&s2, 0, 2)).is_zero());
    }

    #[test]
    fn exterior_products() {
        let s = spec(3, &[], 2);
        let (a, b) = (var::<F3>(&s, 0, 1), var::<F3>(&s, 1, 1));
        assert!(s.multiply(&a, &a).is_zero());
        let ab = s.multiply(&a, &b);
        assert_eq!(s.multiply(&b, &a), ab.scale(-F3::one()));
    }

    #[test]
    fn partials() {
        let s = spec(3, &[1], 2);
        let x2 = var::<F3>(&s, 0, 2);
        assert_eq!(s.partial(&x2, 0).unwrap(), var(&s, 0, 1));
        assert!(s
            .partial(&SuperPolynomial::constant(&s, F3::one()), 0)
            .unwrap()
            .is_zero());
        let (a, b) = (var::<F3>(&s, 1, 1), var::<F3>(&s, 2, 1));
        let ab = s.multiply(&a, &b);
        // ∂_b(ab) via Leibniz: ∂_b(a) b - a ∂_b(b) = -a
        assert_eq!(s.partial(&ab, 2).unwrap(), a.scale(-F3::one()));
        assert_eq!(s.partial(&ab, 1).unwrap(), b);
        assert!(s.partial(&ab, 7).is_err());
    }

    #[test]
    fn dimension_matches_enumeration() {
        for (p, h, n) in [(3u32, vec![1u32, 2], 2usize), (5, vec![1], 3), (3, vec![1, 1, 1], 3)] {
            let s = spec(p, &h, n);
            let ms = s.monomials();
            assert_eq!(ms.len() as u128, s.dimension());
            let expected = (p as u128).pow(h.iter().sum()) << n;
            assert_eq!(s.dimension(), expected);
        }
    }

    #[test]
    fn rendering() {
        let s = spec(3, &[1, 1], 1);
        let mut f = SuperPolynomial::<F3>::zero();
        let mut m = SuperMonomial::one(2);
        m.exps[0] = 2;
        m.odd = 1;
        f.add_term(m, F3::new(2));
        assert_eq!(s.render(&f), "2*x1^(2)*x3");
    }

    /// Brute-force product of two monomials: integer factorial binomials,
    /// sign by bubble-sorting the concatenated odd index list.
    fn oracle_product(s: &VariableSpec, a: &SuperMonomial, b: &SuperMonomial) -> Option<(i64, SuperMonomial)> {
        let mut coeff: i128 = 1;
        let mut exps = vec![];
        for k in 0..a.exps.len() {
            let sum = a.exps[k] + b.exps[k];
            if sum >= s.bound(k) {
                return None;
            }
            coeff *= factorial_binom(sum as u64, a.exps[k] as u64) as i128;
            exps.push(sum);
        }
        let mut list: Vec<u32> = (0..64).filter(|k| a.odd >> k & 1 == 1).collect();
        list.extend((0..64).filter(|k| b.odd >> k & 1 == 1));
        let mut swaps = 0;
        for i in 0..list.len() {
            for j in 0..list.len() - 1 - i {
                if list[j] == list[j + 1] {
                    return None;
                }
                if list[j] > list[j + 1] {
                    list.swap(j, j + 1);
                    swaps += 1;
                }
            }
        }
        if list.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        let p = s.prime() as i128;
        let mut c = coeff.rem_euclid(p);
        if swaps % 2 == 1 {
            c = (-c).rem_euclid(p);
        }
        if c == 0 {
            return None;
        }
        Some((
            c as i64,
            SuperMonomial {
                exps,
                odd: a.odd | b.odd,
            },
        ))
    }

    #[test]
    fn monomial_products_match_oracle() {
        let s = spec(3, &[1, 2], 3);
        let ms = s.monomials();
        for a in ms.iter().step_by(7) {
            for b in ms.iter().step_by(5) {
                let got = s.multiply_monomials::<F3>(a, b).map(|(c, m)| (c.value() as i64, m));
                assert_eq!(got, oracle_product(&s, a, b), "{a:?} * {b:?}");
            }
        }
        let s5 = spec(5, &[1, 1], 2);
        for a in &s5.monomials() {
            for b in &s5.monomials() {
                let got = s5.multiply_monomials::<F5>(a, b).map(|(c, m)| (c.value() as i64, m));
                assert_eq!(got, oracle_product(&s5, a, b));
            }
        }
    }

    fn arb_poly<F: PrimeField>(s: &VariableSpec) -> impl Strategy<Value = SuperPolynomial<F>> {
        let ms = s.monomials();
        let n = ms.len();
        proptest::collection::vec((0..n, 1..F::CHARACTERISTIC as i64), 0..5).prop_map(move |ts| {
            let mut f = SuperPolynomial::zero();
            for (i, c) in ts {
                f.add_term(ms[i].clone(), F::from_i64(c));
            }
            f
        })
    }

    /// Splits into homogeneous parity parts.
    fn parts<F: PrimeField>(f: &SuperPolynomial<F>) -> [(Parity, SuperPolynomial<F>); 2] {
        let mut e = SuperPolynomial::zero();
        let mut o = SuperPolynomial::zero();
        for (m, &c) in &f.terms {
            if m.parity() == Parity::Even {
                e.add_term(m.clone(), c)
            } else {
                o.add_term(m.clone(), c)
            }
        }
        [(Parity::Even, e), (Parity::Odd, o)]
    }

    fn check_identities<F: PrimeField>(
        s: &VariableSpec,
        f: &SuperPolynomial<F>,
        g: &SuperPolynomial<F>,
        h: &SuperPolynomial<F>,
    ) {
        // associativity
        assert_eq!(s.multiply(&s.multiply(f, g), h), s.multiply(f, &s.multiply(g, h)));
        for (pf, fp) in parts(f) {
            for (pg, gp) in parts(g) {
                // supercommutativity
                let lhs = s.multiply(&fp, &gp);
                let rhs = s.multiply(&gp, &fp).scale(pf.koszul(pg));
                assert_eq!(lhs, rhs);
                // super-Leibniz
                for i in 0..s.len() {
                    let pd = s.var(i).parity;
                    let left = s.partial(&s.multiply(&fp, &gp), i).unwrap();
                    let mut right = s.multiply(&s.partial(&fp, i).unwrap(), &gp);
                    right.add_assign_scaled(&s.multiply(&fp, &s.partial(&gp, i).unwrap()), pd.koszul(pf));
                    assert_eq!(left, right);
                }
            }
        }
        // partials supercommute; odd ones square to zero
        for i in 0..s.len() {
            for j in 0..s.len() {
                let a = s.partial(&s.partial(f, j).unwrap(), i).unwrap();
                let b = s.partial(&s.partial(f, i).unwrap(), j).unwrap();
                let sign = s.var(i).parity.koszul::<F>(s.var(j).parity);
                assert_eq!(a, b.scale(sign));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn algebra_identities_p3((f, g, h) in {
            let s = spec(3, &[1, 2], 3);
            (arb_poly::<F3>(&s), arb_poly::<F3>(&s), arb_poly::<F3>(&s))
        }) {
            check_identities(&spec(3, &[1, 2], 3), &f, &g, &h);
        }

        #[test]
        fn algebra_identities_p5((f, g, h) in {
            let s = spec(5, &[1, 1], 2);
            (arb_poly::<F5>(&s), arb_poly::<F5>(&s), arb_poly::<F5>(&s))
        }) {
            check_identities(&spec(5, &[1, 1], 2), &f, &g, &h);
        }
    }
}
