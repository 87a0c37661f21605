//! Graded subalgebras of `vect`: one canonical subspace per degree.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::divided::Parity;
use crate::field::PrimeField;
use crate::linalg::Subspace;
use crate::vectorfield::{Ambient, FieldError, VectorField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("generator `{label}` is not homogeneous")]
    Inhomogeneous { label: String },
    #[error("generator `{label}` has degree {found}, declared {declared}")]
    WrongDegree { label: String, declared: i64, found: i64 },
    #[error("not closed under bracket: [{x}, {y}] = {z} leaves degree {degree}")]
    NotClosed {
        degree: i64,
        x: String,
        y: String,
        z: String,
    },
}

/// `(even, odd)` dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Sdim {
    pub even: usize,
    pub odd: usize,
}

impl Sdim {
    pub const ZERO: Sdim = Sdim { even: 0, odd: 0 };

    pub fn new(even: usize, odd: usize) -> Self {
        Sdim { even, odd }
    }

    pub fn total(self) -> usize {
        self.even + self.odd
    }

    pub fn is_zero(self) -> bool {
        self.total() == 0
    }
}

impl std::ops::Add for Sdim {
    type Output = Sdim;
    fn add(self, o: Sdim) -> Sdim {
        Sdim::new(self.even + o.even, self.odd + o.odd)
    }
}

impl std::iter::Sum for Sdim {
    fn sum<I: Iterator<Item = Sdim>>(iter: I) -> Sdim {
        iter.fold(Sdim::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Sdim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.even, self.odd)
    }
}

impl std::str::FromStr for Sdim {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once('|').ok_or_else(|| format!("bad superdimension `{s}`"))?;
        let a = a.trim().parse().map_err(|_| format!("bad superdimension `{s}`"))?;
        let b = b.trim().parse().map_err(|_| format!("bad superdimension `{s}`"))?;
        Ok(Sdim::new(a, b))
    }
}

impl serde::Serialize for Sdim {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Sdim {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A homogeneous element tagged with its degree.
pub type Element<F> = (i64, VectorField<F>);

/// `g = ⊕ g_k` inside `vect`, each `g_k` a canonical subspace of the
/// degree-`k` monomial-field basis. Missing degrees are zero.
#[derive(Clone)]
pub struct GradedAlgebra<F> {
    ambient: Arc<Ambient>,
    components: BTreeMap<i64, Subspace<F>>,
}

impl<F: PrimeField> fmt::Debug for GradedAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedAlgebra[")?;
        for (k, s) in self.sdims() {
            write!(f, " {k}:{s}")?;
        }
        write!(f, " ]")
    }
}

impl<F: PrimeField> PartialEq for GradedAlgebra<F> {
    fn eq(&self, other: &Self) -> bool {
        let nz = |g: &Self| -> Vec<(i64, Subspace<F>)> {
            g.components
                .iter()
                .filter(|(_, s)| !s.is_zero())
                .map(|(k, s)| (*k, s.clone()))
                .collect()
        };
        nz(self) == nz(other)
    }
}

impl<F: PrimeField> GradedAlgebra<F> {
    pub fn new(ambient: Arc<Ambient>) -> Self {
        GradedAlgebra {
            ambient,
            components: BTreeMap::new(),
        }
    }

    /// Spans homogeneous labelled generators per declared degree, without
    /// closing under bracket.
    pub fn from_generators(
        ambient: Arc<Ambient>,
        generators: &[(String, i64, VectorField<F>)],
    ) -> Result<Self, GradedError> {
        let mut g = GradedAlgebra::new(ambient);
        for (label, declared, x) in generators {
            if x.is_zero() {
                g.components
                    .entry(*declared)
                    .or_insert_with(|| Subspace::zero(g.ambient.basis(*declared).len()));
                continue;
            }
            let d = g
                .ambient
                .degree_of(x)
                .ok_or_else(|| GradedError::Inhomogeneous { label: label.clone() })?;
            if x.parity(g.ambient.spec()).is_none() {
                return Err(GradedError::Inhomogeneous { label: label.clone() });
            }
            if d != *declared {
                return Err(GradedError::WrongDegree {
                    label: label.clone(),
                    declared: *declared,
                    found: d,
                });
            }
            g.insert(d, x)?;
        }
        Ok(g)
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn set_component(&mut self, k: i64, s: Subspace<F>) {
        self.components.insert(k, s);
    }

    pub fn remove_component(&mut self, k: i64) {
        self.components.remove(&k);
    }

    /// Whether degree `k` has been computed or declared (possibly zero).
    pub fn has(&self, k: i64) -> bool {
        self.components.contains_key(&k)
    }

    pub fn component(&self, k: i64) -> Subspace<F> {
        self.components
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.ambient.basis(k).len()))
    }

    pub fn component_ref(&self, k: i64) -> Option<&Subspace<F>> {
        self.components.get(&k)
    }

    /// Adds a degree-`k` element. Returns `true` if the component grew.
    pub fn insert(&mut self, k: i64, x: &VectorField<F>) -> Result<bool, FieldError> {
        let c = self.ambient.coords(x, k)?;
        let n = c.len();
        Ok(self
            .components
            .entry(k)
            .or_insert_with(|| Subspace::zero(n))
            .insert(c)?)
    }

    pub fn contains(&self, k: i64, x: &VectorField<F>) -> Result<bool, FieldError> {
        if x.is_zero() {
            return Ok(true);
        }
        let c = self.ambient.coords(x, k)?;
        match self.components.get(&k) {
            Some(s) => Ok(s.contains(&c)?),
            None => Ok(false),
        }
    }

    /// Degrees carrying a nonzero component.
    pub fn degrees(&self) -> Vec<i64> {
        self.components
            .iter()
            .filter(|(_, s)| !s.is_zero())
            .map(|(k, _)| *k)
            .collect()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.degrees().first().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.degrees().last().copied()
    }

    pub fn depth(&self) -> i64 {
        self.min_degree().map(|d| (-d).max(0)).unwrap_or(0)
    }

    pub fn sdim(&self, k: i64) -> Sdim {
        match self.components.get(&k) {
            Some(s) => {
                let (e, o) = self.ambient.sdim(k, s);
                Sdim::new(e, o)
            }
            None => Sdim::ZERO,
        }
    }

    pub fn sdims(&self) -> BTreeMap<i64, Sdim> {
        self.degrees().into_iter().map(|k| (k, self.sdim(k))).collect()
    }

    /// Superdimensions of `g_1, g_2, ...` up to the last nonzero one.
    pub fn positive_profile(&self) -> Vec<Sdim> {
        let top = self.max_degree().unwrap_or(0);
        (1..=top).map(|k| self.sdim(k)).collect()
    }

    pub fn total_sdim(&self) -> Sdim {
        self.degrees().into_iter().map(|k| self.sdim(k)).sum()
    }

    pub fn fields(&self, k: i64) -> Vec<VectorField<F>> {
        match self.components.get(&k) {
            Some(s) => self.ambient.fields_of(k, s),
            None => Vec::new(),
        }
    }

    /// Basis of each component, split into even and odd homogeneous elements.
    pub fn homogeneous_basis(&self, k: i64) -> Vec<VectorField<F>> {
        match self.components.get(&k) {
            Some(s) => {
                let (e, o) = self.ambient.parity_parts(k, s);
                let mut v = self.ambient.fields_of(k, &e);
                v.extend(self.ambient.fields_of(k, &o));
                v
            }
            None => Vec::new(),
        }
    }

    /// All homogeneous basis elements, by increasing degree.
    pub fn elements(&self) -> Vec<Element<F>> {
        let mut out = Vec::new();
        for k in self.degrees() {
            for x in self.homogeneous_basis(k) {
                out.push((k, x));
            }
        }
        out
    }

    pub fn parity(&self, x: &VectorField<F>) -> Parity {
        x.parity(self.ambient.spec()).unwrap_or(Parity::Even)
    }

    /// The components in `[lo, hi]`.
    pub fn truncated(&self, lo: i64, hi: i64) -> Self {
        GradedAlgebra {
            ambient: self.ambient.clone(),
            components: self.components.range(lo..=hi).map(|(k, s)| (*k, s.clone())).collect(),
        }
    }

    /// Checks `[g_i, g_j] ⊆ g_{i+j}` on all basis pairs, where degrees not
    /// present count as zero. Returns the first violation.
    pub fn check_closure(&self) -> Result<(), GradedError> {
        let els = self.elements();
        for (a, (i, x)) in els.iter().enumerate() {
            for (j, y) in els[a..].iter() {
                let z = self.ambient.bracket(x, y);
                if !self.contains(i + j, &z)? {
                    let spec = self.ambient.spec();
                    return Err(GradedError::NotClosed {
                        degree: i + j,
                        x: x.render(spec),
                        y: y.render(spec),
                        z: z.render(spec),
                    });
                }
            }
        }
        Ok(())
    }

    /// Componentwise `self ⊆ other`.
    pub fn is_subalgebra_of(&self, other: &Self) -> bool {
        self.components.iter().all(|(k, s)| {
            s.is_zero()
                || other
                    .components
                    .get(k)
                    .map(|o| s.is_subspace_of(o).unwrap_or(false))
                    .unwrap_or(false)
        })
    }

    /// Span of `[A, B]` for homogeneous spanning sets, in degree `i + j`.
    pub fn bracket_span(&self, a: &[Element<F>], b: &[Element<F>]) -> Result<Self, FieldError> {
        let mut out = GradedAlgebra::new(self.ambient.clone());
        for (i, x) in a {
            for (j, y) in b {
                let z = self.ambient.bracket(x, y);
                if !z.is_zero() {
                    out.insert(i + j, &z)?;
                }
            }
        }
        Ok(out)
    }

    /// Smallest subspace containing `seeds` and stable under `ad` of
    /// `actors` (which may include elements outside the seeds' span).
    /// With `actors = None` the seeds' own span acts, giving the generated
    /// subalgebra.
    pub fn closure(&self, seeds: &[Element<F>], actors: Option<&[Element<F>]>) -> Result<Self, FieldError> {
        let mut out = GradedAlgebra::new(self.ambient.clone());
        let mut basis: Vec<Element<F>> = Vec::new();
        let mut queue: Vec<Element<F>> = Vec::new();
        for (k, x) in seeds {
            if out.insert(*k, x)? {
                queue.push((*k, x.clone()));
            }
        }
        while let Some((k, x)) = queue.pop() {
            let acting: Vec<Element<F>> = match actors {
                Some(a) => a.to_vec(),
                None => {
                    let mut v = basis.clone();
                    v.push((k, x.clone()));
                    v
                }
            };
            for (j, y) in &acting {
                let z = self.ambient.bracket(y, &x);
                if !z.is_zero() && out.insert(k + j, &z)? {
                    queue.push((k + j, z));
                }
            }
            basis.push((k, x));
        }
        for (k, _) in seeds {
            out.components
                .entry(*k)
                .or_insert_with(|| Subspace::zero(self.ambient.basis(*k).len()));
        }
        Ok(out)
    }

    /// Subalgebra generated by `seeds`.
    pub fn generated(&self, seeds: &[Element<F>]) -> Result<Self, FieldError> {
        self.closure(seeds, None)
    }

    /// Ideal of `self` generated by `seeds`.
    pub fn ideal(&self, seeds: &[Element<F>]) -> Result<Self, FieldError> {
        let host = self.elements();
        self.closure(seeds, Some(&host))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divided::VariableSpec;
    use crate::field::Fp;
    use crate::vectorfield::WeightGrading;

    type F3 = Fp<3>;

    fn linear(m: usize) -> (Arc<Ambient>, GradedAlgebra<F3>) {
        let s = VariableSpec::standard(3, &vec![1; m], 0).unwrap();
        let amb = Arc::new(Ambient::new(s.clone(), WeightGrading::standard(&s)));
        let g = GradedAlgebra::new(amb.clone());
        (amb, g)
    }

    #[test]
    fn sdim_parse_and_display() {
        let s: Sdim = "4|2".parse().unwrap();
        assert_eq!(s, Sdim::new(4, 2));
        assert_eq!(s.to_string(), "4|2");
        assert!("4".parse::<Sdim>().is_err());
    }

    #[test]
    fn generated_subalgebra_of_sl2() {
        let (amb, host) = linear(2);
        let s = amb.spec().clone();
        let mut e = VectorField::<F3>::zero();
        e.add_term(s.variable_power(1, 1).unwrap(), 0, F3::new(1));
        let mut f = VectorField::<F3>::zero();
        f.add_term(s.variable_power(0, 1).unwrap(), 1, F3::new(1));
        let g = host.generated(&[(0, e), (0, f)]).unwrap();
        assert_eq!(g.sdim(0), Sdim::new(3, 0));
        g.check_closure().unwrap();
    }

    #[test]
    fn closure_detects_violation() {
        let (amb, _) = linear(1);
        let s = amb.spec().clone();
        let mut x = VectorField::<F3>::zero();
        x.add_term(s.variable_power(0, 2).unwrap(), 0, F3::new(1));
        let d = VectorField::partial(&s, 0);
        let g = GradedAlgebra::from_generators(amb, &[("d".into(), -1, d), ("x".into(), 1, x)]).unwrap();
        assert!(matches!(
            g.check_closure(),
            Err(GradedError::NotClosed { degree: 0, .. })
        ));
    }

    #[test]
    fn wrong_degree_is_reported() {
        let (amb, _) = linear(1);
        let d = VectorField::<F3>::partial(amb.spec(), 0);
        let r = GradedAlgebra::from_generators(amb, &[("d".into(), 0, d)]);
        assert!(matches!(
            r,
            Err(GradedError::WrongDegree {
                declared: 0,
                found: -1,
                ..
            })
        ));
    }
}
