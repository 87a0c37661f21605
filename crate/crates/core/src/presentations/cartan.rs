//! Cartan matrices with parity-aware diagonal tags, and the Chevalley
//! skeleton presentation they define.

use std::fmt;

use crate::divided::Parity;
use crate::field::PrimeField;
use crate::linalg::rank;

use super::dsl::{Expr, Relation};
use super::presentation::{Generator, Presentation};
use super::PresentationError;

/// Diagonal entry of a normalized Cartan matrix. An odd root has `1` or
/// `0`. An even root has `2` or `0`, the latter written `ev`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagTag {
    Two,
    Ev,
    One,
    Zero,
}

impl DiagTag {
    pub fn parity(self) -> Parity {
        match self {
            DiagTag::Two | DiagTag::Ev => Parity::Even,
            DiagTag::One | DiagTag::Zero => Parity::Odd,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            DiagTag::Two => 2,
            DiagTag::One => 1,
            DiagTag::Ev | DiagTag::Zero => 0,
        }
    }
}

impl std::str::FromStr for DiagTag {
    type Err = PresentationError;
    fn from_str(s: &str) -> Result<Self, PresentationError> {
        match s.trim() {
            "2" => Ok(DiagTag::Two),
            "ev" => Ok(DiagTag::Ev),
            "1" => Ok(DiagTag::One),
            "0" => Ok(DiagTag::Zero),
            other => Err(PresentationError::DiagonalTag(other.to_string())),
        }
    }
}

impl fmt::Display for DiagTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagTag::Two => "2",
            DiagTag::Ev => "ev",
            DiagTag::One => "1",
            DiagTag::Zero => "0",
        })
    }
}

/// A square Cartan matrix with integer off-diagonal entries and tagged
/// diagonal. Generator `i` is odd exactly when its tag is `1` or `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanSpec {
    entries: Vec<Vec<i64>>,
    tags: Vec<DiagTag>,
}

impl CartanSpec {
    /// From textual rows; diagonal entries are tags, the rest integers.
    pub fn parse<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self, PresentationError> {
        let n = rows.len();
        let mut entries = vec![vec![0; n]; n];
        let mut tags = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(PresentationError::NotSquare(n, row.len()));
            }
            for (j, e) in row.iter().enumerate() {
                let e = e.as_ref();
                if i == j {
                    let t: DiagTag = e.parse()?;
                    entries[i][i] = t.value();
                    tags.push(t);
                } else {
                    entries[i][j] = e.trim().parse().map_err(|_| PresentationError::Entry(e.to_string()))?;
                }
            }
        }
        Ok(CartanSpec { entries, tags })
    }

    pub fn size(&self) -> usize {
        self.tags.len()
    }

    pub fn tags(&self) -> &[DiagTag] {
        &self.tags
    }

    pub fn parities(&self) -> Vec<Parity> {
        self.tags.iter().map(|t| t.parity()).collect()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn matrix<F: PrimeField>(&self) -> Vec<Vec<F>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&x| F::from_i64(x)).collect())
            .collect()
    }

    pub fn rank<F: PrimeField>(&self) -> usize {
        rank(&self.matrix::<F>(), self.size()).expect("square")
    }

    /// `dim h = 2n - rank A`: the coroots plus enough derivations to
    /// separate the simple roots.
    pub fn cartan_dim<F: PrimeField>(&self) -> usize {
        2 * self.size() - self.rank::<F>()
    }
}

impl fmt::Display for CartanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.size() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for j in 0..self.size() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                if i == j {
                    write!(f, "{}", self.tags[i])?;
                } else {
                    write!(f, "{}", self.entries[i][j])?;
                }
            }
            write!(f, ")")?;
        }
        write!(f, ")")
    }
}

pub fn raising_name(i: usize) -> String {
    format!("Xp{}", i + 1)
}

pub fn lowering_name(i: usize) -> String {
    format!("Xm{}", i + 1)
}

pub fn coroot_name(i: usize) -> String {
    format!("H{}", i + 1)
}

fn scaled(c: i64, e: Expr) -> Expr {
    match c {
        0 => Expr::zero(),
        1 => e,
        _ => Expr::Sum(vec![(c, e)]),
    }
}

/// Generators `Xp_i`, `Xm_i`, `H_i` of degrees `r_i`, `-r_i`, `0` (all
/// `r_i = 1` by default), with `[Xp_i, Xm_j] = δ_ij H_i`,
/// `[H_i, Xp_j] = A_ij Xp_j`, `[H_i, Xm_j] = -A_ij Xm_j` and `[H_i, H_j] = 0`.
/// Serre-type relations are not part of the skeleton.
pub fn chevalley_skeleton(a: &CartanSpec, r: Option<&[i64]>) -> Result<Presentation, PresentationError> {
    let n = a.size();
    let ones = vec![1; n];
    let r = r.unwrap_or(&ones);
    if r.len() != n {
        return Err(PresentationError::Grading(r.len(), n));
    }
    let mut gens = Vec::new();
    for (i, p) in a.parities().into_iter().enumerate() {
        gens.push(Generator::new(&raising_name(i), p, r[i]));
        gens.push(Generator::new(&lowering_name(i), p, -r[i]));
    }
    for i in 0..n {
        gens.push(Generator::new(&coroot_name(i), Parity::Even, 0));
    }
    let g = |name: String| Expr::Gen(name);
    let mut rels = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let rhs = if i == j { g(coroot_name(i)) } else { Expr::zero() };
            rels.push(Relation::new(
                Expr::bracket(g(raising_name(i)), g(lowering_name(j))),
                rhs,
            ));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let c = a.entry(i, j);
            rels.push(Relation::new(
                Expr::bracket(g(coroot_name(i)), g(raising_name(j))),
                scaled(c, g(raising_name(j))),
            ));
            rels.push(Relation::new(
                Expr::bracket(g(coroot_name(i)), g(lowering_name(j))),
                scaled(-c, g(lowering_name(j))),
            ));
        }
        for j in i + 1..n {
            rels.push(Relation::new(
                Expr::bracket(g(coroot_name(i)), g(coroot_name(j))),
                Expr::zero(),
            ));
        }
    }
    Presentation::new(gens, rels)
}
