//! Split simple Lie algebras of types E and F over the integers, built from
//! their root systems, and realizations of non-positive parts of their
//! gradings by vector fields on the negative part.
//!
//! Simply-laced algebras use the sign cocycle construction:
//! `[e_a, e_b] = eps(a, b) e_{a+b}` with a bimultiplicative `eps`, and
//! `[e_a, e_{-a}] = -a`. Type F4 is the fixed subalgebra of the diagram
//! automorphism of E6.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::field::PrimeField;
use crate::graded::Sdim;
use crate::linalg::rank;
use crate::scenarios::{
    BorelDecl, Claim, ClaimKind, ElementDecl, Origin, ParityDecl, ScenarioSpec, Status, VariableDecl,
};

/// Sparse integer combination of basis vectors.
pub type Combo = BTreeMap<usize, i64>;

fn add_into(acc: &mut Combo, k: usize, c: i64) {
    if c == 0 {
        return;
    }
    let e = acc.entry(k).or_insert(0);
    *e += c;
    if *e == 0 {
        acc.remove(&k);
    }
}

/// Cartan matrix of `E_n`, `n = 6, 7, 8`, in Bourbaki numbering.
pub fn cartan_e(n: usize) -> Vec<Vec<i64>> {
    let edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];
    let mut a = vec![vec![0; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (i, j) in edges {
        if i <= n && j <= n {
            a[i - 1][j - 1] = -1;
            a[j - 1][i - 1] = -1;
        }
    }
    a
}

/// Cartan matrix of `F_4` with `a_ij = <alpha_j, alpha_i^vee>`; roots 1, 2
/// are long.
pub fn cartan_f4() -> Vec<Vec<i64>> {
    vec![
        vec![2, -1, 0, 0],
        vec![-1, 2, -1, 0],
        vec![0, -2, 2, -1],
        vec![0, 0, -1, 2],
    ]
}

/// Positive roots in simple-root coordinates, by height, from root strings.
pub fn positive_roots(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let unit = |i: usize| (0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut level: Vec<Vec<i64>> = (0..n).map(unit).collect();
    let mut out = Vec::new();
    while !level.is_empty() {
        seen.extend(level.iter().cloned());
        let mut next = Vec::new();
        for b in &level {
            for i in 0..n {
                let pairing: i64 = (0..n).map(|j| b[j] * a[i][j]).sum();
                let mut down = b.clone();
                let mut p = 0;
                loop {
                    down[i] -= 1;
                    if !seen.contains(&down) {
                        break;
                    }
                    p += 1;
                }
                if p - pairing > 0 {
                    let mut up = b.clone();
                    up[i] += 1;
                    if !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort();
        out.append(&mut level);
        level = next;
    }
    out
}

/// A Lie algebra over the integers, given by structure constants.
#[derive(Debug, Clone)]
pub struct IntegralLie {
    /// Weight of each basis vector in simple-root coordinates of the
    /// construction; zero on the Cartan part.
    pub weights: Vec<Vec<i64>>,
    table: Vec<Vec<Combo>>,
}

impl IntegralLie {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &Combo {
        &self.table[i][j]
    }

    pub fn bracket(&self, x: &Combo, y: &Combo) -> Combo {
        let mut out = Combo::new();
        for (&i, &a) in x {
            for (&j, &b) in y {
                for (&k, &c) in &self.table[i][j] {
                    add_into(&mut out, k, a * b * c);
                }
            }
        }
        out
    }

    /// Degree of each basis vector for the grading `sum_i r_i c_i`.
    pub fn degrees(&self, r: &[i64]) -> Vec<i64> {
        self.weights
            .iter()
            .map(|w| w.iter().zip(r).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `[x, [y, z]] - [[x, y], z] - [y, [x, z]]` on basis vectors.
    pub fn jacobi_defect(&self, x: usize, y: usize, z: usize) -> Combo {
        let b = |i: usize| Combo::from([(i, 1)]);
        let mut d = self.bracket(&b(x), &self.table[y][z]);
        for (k, c) in self.bracket(&self.table[x][y], &b(z)) {
            add_into(&mut d, k, -c);
        }
        for (k, c) in self.bracket(&b(y), &self.table[x][z]) {
            add_into(&mut d, k, -c);
        }
        d
    }

    /// The split simple algebra of a simply-laced Cartan matrix: positive
    /// roots, then their negatives, then the simple coroots.
    pub fn simply_laced(a: &[Vec<i64>]) -> Self {
        let n = a.len();
        let pos = positive_roots(a);
        let m = pos.len();
        let mut weights: Vec<Vec<i64>> = pos.clone();
        weights.extend(pos.iter().map(|r| r.iter().map(|c| -c).collect::<Vec<_>>()));
        weights.extend((0..n).map(|_| vec![0; n]));
        let index: HashMap<Vec<i64>, usize> = weights[..2 * m]
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect();
        let form = |x: &[i64], y: &[i64]| -> i64 {
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| x[i] * a[i][j] * y[j])
                .sum()
        };
        // eps(alpha_i, alpha_j) = -1 for i = j and for linked i < j
        let eps = |x: &[i64], y: &[i64]| -> i64 {
            let mut e = 0;
            for i in 0..n {
                for j in 0..n {
                    if i == j || (i < j && a[i][j] == -1) {
                        e += x[i] * y[j];
                    }
                }
            }
            if e.rem_euclid(2) == 0 {
                1
            } else {
                -1
            }
        };
        let dim = 2 * m + n;
        let mut table = vec![vec![Combo::new(); dim]; dim];
        for i in 0..2 * m {
            for j in 0..2 * m {
                let (x, y) = (&weights[i], &weights[j]);
                let s: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                if s.iter().all(|&c| c == 0) {
                    for (t, &c) in x.iter().enumerate() {
                        add_into(&mut table[i][j], 2 * m + t, -c);
                    }
                } else if let Some(&k) = index.get(&s) {
                    table[i][j].insert(k, eps(x, y));
                }
            }
            for t in 0..n {
                let mut unit = vec![0; n];
                unit[t] = 1;
                let c = form(&unit, &weights[i]);
                add_into(&mut table[2 * m + t][i], i, c);
                add_into(&mut table[i][2 * m + t], i, -c);
            }
        }
        IntegralLie { weights, table }
    }

    /// The fixed subalgebra of the automorphism induced by the diagram
    /// symmetry `sigma` of the simply-laced algebra built from `a`, with
    /// `e_i -> e_sigma(i)` and `f_i -> f_sigma(i)`.
    pub fn fold(a: &[Vec<i64>], sigma: &[usize]) -> Self {
        let g = IntegralLie::simply_laced(a);
        let n = a.len();
        let m = (g.dim() - n) / 2;
        let index: HashMap<&[i64], usize> = g.weights[..2 * m]
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_slice(), i))
            .collect();
        let permute = |w: &[i64]| {
            let mut out = vec![0; n];
            for (i, &c) in w.iter().enumerate() {
                out[sigma[i]] += c;
            }
            out
        };
        let simple = |i: usize| index[(0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>().as_slice()];
        // image of each basis vector as (index, sign)
        let mut image: Vec<Option<(usize, i64)>> = vec![None; g.dim()];
        for i in 0..m {
            let w = &g.weights[i];
            let target = index[permute(w).as_slice()];
            let sign = if w.iter().sum::<i64>() == 1 {
                1
            } else {
                let t = (0..n)
                    .find(|&t| {
                        let mut b = w.clone();
                        b[t] -= 1;
                        index.get(b.as_slice()).is_some_and(|&k| k < m)
                    })
                    .expect("a root of height above one has a positive predecessor");
                let mut b = w.clone();
                b[t] -= 1;
                let beta = index[b.as_slice()];
                let (sb, eta_b) = image[beta].expect("lower heights come first");
                let sa = simple(sigma[t]);
                g.table[beta][simple(t)][&i] * eta_b * g.table[sb][sa][&target]
            };
            image[i] = Some((target, sign));
            image[i + m] = Some((target + m, sign));
        }
        for t in 0..n {
            image[2 * m + t] = Some((2 * m + sigma[t], 1));
        }
        let mut vectors: Vec<Combo> = Vec::new();
        let mut leads = Vec::new();
        for (k, im) in image.iter().enumerate() {
            let (t, s) = im.expect("every basis vector has an image");
            if t == k && s == 1 {
                vectors.push(Combo::from([(k, 1)]));
            } else if k < t {
                vectors.push(Combo::from([(k, 1), (t, s)]));
            } else {
                continue;
            }
            leads.push(k);
        }
        let d = vectors.len();
        let mut table = vec![vec![Combo::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let b = g.bracket(&vectors[i], &vectors[j]);
                for (new, &lead) in leads.iter().enumerate() {
                    if let Some(&c) = b.get(&lead) {
                        table[i][j].insert(new, c);
                    }
                }
            }
        }
        IntegralLie {
            weights: leads.iter().map(|&k| g.weights[k].clone()).collect(),
            table,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("depth {0} is not supported: fields are written for depth at most 2")]
    Depth(i64),
    #[error("grading is not a Z-grading with negative part")]
    Grading,
}

/// One of the bundled exceptional gradings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exceptional {
    F4,
    E6,
    E7,
    E8,
}

impl Exceptional {
    pub const ALL: [Exceptional; 4] = [Exceptional::F4, Exceptional::E6, Exceptional::E7, Exceptional::E8];

    pub fn name(self) -> &'static str {
        match self {
            Exceptional::F4 => "f4",
            Exceptional::E6 => "e6",
            Exceptional::E7 => "e7",
            Exceptional::E8 => "e8",
        }
    }

    /// The selected endpoint node, 1-based in Bourbaki numbering.
    pub fn node(self) -> usize {
        match self {
            Exceptional::F4 => 4,
            Exceptional::E6 => 1,
            Exceptional::E7 => 7,
            Exceptional::E8 => 8,
        }
    }

    /// The algebra with the degree of each basis vector.
    pub fn graded(self) -> (IntegralLie, Vec<i64>) {
        let (g, r) = match self {
            // node 4 of F4 restricts from nodes 1 and 6 of E6
            Exceptional::F4 => (
                IntegralLie::fold(&cartan_e(6), &[5, 1, 4, 3, 2, 0]),
                vec![1, 0, 0, 0, 0, 1],
            ),
            Exceptional::E6 | Exceptional::E7 | Exceptional::E8 => {
                let n = match self {
                    Exceptional::E6 => 6,
                    Exceptional::E7 => 7,
                    _ => 8,
                };
                let mut r = vec![0; n];
                r[self.node() - 1] = 1;
                (IntegralLie::simply_laced(&cartan_e(n)), r)
            }
        };
        let d = g.degrees(&r);
        (g, d)
    }

    /// The optional scenario: the non-positive part realized over `F`.
    pub fn scenario<F: PrimeField>(self) -> Result<ScenarioSpec, SplitError> {
        let (g, degrees) = self.graded();
        let mut spec = nonpositive_scenario::<F>(&g, &degrees)?;
        let p = F::CHARACTERISTIC;
        spec.name = format!("{}_p{p}", self.name());
        spec.title = format!(
            "{}({}) at p = {p} graded by the endpoint node {}",
            &self.name()[..1],
            &self.name()[1..],
            self.node()
        );
        spec.citation = "the prolong of the non-positive part is the whole algebra".into();
        spec.notes = vec!["generated from the root system by `cargo run --example exceptional_fixtures`".into()];
        Ok(spec)
    }
}

/// Realizes `g_{<=0}` of a graded algebra of depth at most 2 on `g_-`:
/// `a -> -(a + [a, x]/2) . d` for `a` in `g_-` and `h -> -[h, x] . d` for
/// `h` in `g_0`, with one variable per basis vector of `g_-`. The
/// expected profile is the positive part of the algebra.
pub fn nonpositive_scenario<F: PrimeField>(g: &IntegralLie, degrees: &[i64]) -> Result<ScenarioSpec, SplitError> {
    let depth = -degrees.iter().copied().min().unwrap_or(0);
    if depth == 0 {
        return Err(SplitError::Grading);
    }
    if depth > 2 {
        return Err(SplitError::Depth(depth));
    }
    let of_degree = |d: i64| (0..g.dim()).filter(move |&k| degrees[k] == d);
    let negative: Vec<usize> = (1..=depth).flat_map(|d| of_degree(-d)).collect();
    let var: HashMap<usize, usize> = negative.iter().enumerate().map(|(v, &k)| (k, v)).collect();
    let zero: Vec<usize> = of_degree(0).collect();
    let half = F::from_i64(2).inv().expect("odd characteristic");

    // (variable or constant, derivative) -> coefficient
    type Field<F> = BTreeMap<(Option<usize>, usize), F>;
    let push = |f: &mut Field<F>, key: (Option<usize>, usize), c: F| {
        let e = f.entry(key).or_insert(F::zero());
        *e += c;
        if e.is_zero() {
            f.remove(&key);
        }
    };
    let render = |f: &Field<F>| -> String {
        if f.is_empty() {
            return "0".into();
        }
        let terms: Vec<String> = f
            .iter()
            .map(|(&(x, d), &c)| {
                let mut t = String::new();
                if c != F::one() {
                    t.push_str(&format!("{}*", c.value()));
                }
                if let Some(x) = x {
                    t.push_str(&format!("x{}*", x + 1));
                }
                t.push_str(&format!("d{}", d + 1));
                t
            })
            .collect();
        terms.join(" + ")
    };

    let mut generators = Vec::new();
    for &a in &negative {
        let mut f = Field::new();
        push(&mut f, (None, var[&a]), -F::one());
        for &b in negative.iter().filter(|&&b| degrees[b] == -1) {
            for (&k, &c) in g.basis_bracket(a, b) {
                push(&mut f, (Some(var[&b]), var[&k]), -half * F::from_i64(c));
            }
        }
        generators.push(ElementDecl {
            label: format!("Y{}", var[&a] + 1),
            degree: Some(degrees[a]),
            parity: Some(ParityDecl::Even),
            field: Some(render(&f)),
            function: None,
            note: None,
        });
    }
    let mut action = Vec::new();
    for (i, &h) in zero.iter().enumerate() {
        let mut f = Field::new();
        let mut row = vec![F::zero(); negative.len() * negative.len()];
        for &b in &negative {
            for (&k, &c) in g.basis_bracket(h, b) {
                push(&mut f, (Some(var[&b]), var[&k]), -F::from_i64(c));
                row[var[&b] * negative.len() + var[&k]] += F::from_i64(c);
            }
        }
        action.push(row);
        generators.push(ElementDecl {
            label: format!("G{}", i + 1),
            degree: Some(0),
            parity: Some(ParityDecl::Even),
            field: Some(render(&f)),
            function: None,
            note: None,
        });
    }

    let variables = negative
        .iter()
        .map(|&k| VariableDecl {
            name: format!("x{}", var[&k] + 1),
            parity: ParityDecl::Even,
            weight: -degrees[k],
            height: 1,
        })
        .collect();
    let count = |d: i64| Sdim::new(of_degree(d).count(), 0);
    let faithful = rank(&action, negative.len() * negative.len()).expect("rectangular");
    let mut nonpositive: Vec<i64> = (-depth..=0).collect();
    nonpositive.sort();
    let sdims = nonpositive
        .iter()
        .map(|&d| if d == 0 { Sdim::new(faithful, 0) } else { count(d) })
        .collect();
    let claims = vec![
        Claim {
            case: None,
            heights: None,
            origin: Origin::Derived,
            source: "root counts of the grading; g_0 modulo the kernel of its action on g_-".into(),
            kind: ClaimKind::Nonpositive {
                degrees: nonpositive,
                sdims,
            },
        },
        Claim {
            case: None,
            heights: None,
            origin: Origin::Reported,
            source: "the prolong returns the algebra".into(),
            kind: ClaimKind::Profile {
                profile: (1..=depth).map(count).collect(),
            },
        },
    ];
    Ok(ScenarioSpec {
        name: String::new(),
        title: String::new(),
        citation: String::new(),
        status: Status::Optional,
        prime: F::CHARACTERISTIC,
        power: Default::default(),
        prime_pinned: true,
        notes: Vec::new(),
        variables,
        contact: None,
        generators,
        borel: BorelDecl::default(),
        vectors: Vec::new(),
        pairing: None,
        cases: Vec::new(),
        claims,
    })
}

/// Fixture text for an exceptional scenario.
pub fn fixture_text<F: PrimeField>(e: Exceptional) -> Result<String, SplitError> {
    let spec = e.scenario::<F>()?;
    Ok(toml::to_string(&spec).expect("fixture serializes"))
}
