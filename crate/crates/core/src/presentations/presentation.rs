//! Presentations by generators and relations: graded quotient dimensions
//! and relation checks on images of the generators.

use std::collections::{BTreeMap, BTreeSet};

use crate::divided::Parity;
use crate::field::PrimeField;
use crate::graded::Sdim;

use super::dsl::{DslError, LieSuper, Relation};
use super::free::{Quotient, TensorAlgebra};
use super::PresentationError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub parity: Parity,
    pub degree: i64,
}

impl Generator {
    pub fn new(name: &str, parity: Parity, degree: i64) -> Self {
        Generator {
            name: name.to_string(),
            parity,
            degree,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
}

impl Presentation {
    /// Checks that names are distinct, relations use only declared
    /// generators, and every relation is homogeneous.
    pub fn new(generators: Vec<Generator>, relations: Vec<Relation>) -> Result<Self, PresentationError> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.name.clone()) {
                return Err(PresentationError::Duplicate(g.name.clone()));
            }
        }
        let p = Presentation { generators, relations };
        let w = p.weights();
        for r in &p.relations {
            r.element().weight(&w)?;
        }
        Ok(p)
    }

    pub fn weights(&self) -> BTreeMap<String, (i64, Parity)> {
        self.generators
            .iter()
            .map(|g| (g.name.clone(), (g.degree, g.parity)))
            .collect()
    }

    /// Appends relations, keeping the checks of [`Presentation::new`].
    pub fn with_relations(&self, more: impl IntoIterator<Item = Relation>) -> Result<Self, PresentationError> {
        let mut rels = self.relations.clone();
        rels.extend(more);
        Presentation::new(self.generators.clone(), rels)
    }

    fn tensor_algebra(&self) -> TensorAlgebra {
        TensorAlgebra::new(
            self.generators.iter().map(|g| g.parity).collect(),
            self.generators.iter().map(|g| g.degree).collect(),
        )
    }
}

/// The free Lie superalgebra on the generators modulo the ideal of the
/// relations, up to `max_degree`. Generator degrees must be positive.
pub fn quotient<F: PrimeField>(p: &Presentation, max_degree: i64) -> Result<Quotient<F>, PresentationError> {
    if let Some(g) = p.generators.iter().find(|g| g.degree <= 0) {
        return Err(PresentationError::NonPositiveDegree(g.name.clone()));
    }
    let alg = p.tensor_algebra();
    let env: BTreeMap<String, _> = p
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| (g.name.clone(), alg.letter::<F>(i)))
        .collect();
    let rels = p
        .relations
        .iter()
        .map(|r| r.element().eval(&alg, &env))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Quotient::by_relations(alg, &rels, max_degree))
}

/// Per-degree superdimensions of the quotient.
pub fn quotient_dims<F: PrimeField>(
    p: &Presentation,
    max_degree: i64,
) -> Result<BTreeMap<i64, Sdim>, PresentationError> {
    Ok(quotient::<F>(p, max_degree)?.sdims())
}

/// One relation evaluated on the images.
#[derive(Debug, Clone)]
pub struct Residual<E> {
    pub relation: Relation,
    pub value: E,
    pub vanishes: bool,
}

#[derive(Debug, Clone)]
pub struct Verification<E> {
    pub holds: bool,
    pub residuals: Vec<Residual<E>>,
}

impl<E> Verification<E> {
    pub fn failures(&self) -> impl Iterator<Item = &Residual<E>> {
        self.residuals.iter().filter(|r| !r.vanishes)
    }
}

/// Evaluates every relation on `images`, which must bind every generator.
pub fn verify_relations<F: PrimeField, A: LieSuper<F>>(
    p: &Presentation,
    alg: &A,
    images: &BTreeMap<String, A::Elem>,
) -> Result<Verification<A::Elem>, DslError> {
    if let Some(g) = p.generators.iter().find(|g| !images.contains_key(&g.name)) {
        return Err(DslError::Unbound(g.name.clone()));
    }
    let mut residuals = Vec::new();
    for r in &p.relations {
        let value = r.element().eval(alg, images)?;
        let vanishes = alg.is_zero(&value);
        residuals.push(Residual {
            relation: r.clone(),
            value,
            vanishes,
        });
    }
    Ok(Verification {
        holds: residuals.iter().all(|r| r.vanishes),
        residuals,
    })
}
