//! Randomized property suites over F_3 and F_5, shared by the `properties`
//! test target and the acceptance harness.

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use superprolong::divided::{Parity, SuperMonomial, SuperPolynomial, VariableSpec};
use superprolong::graded::{Element, GradedAlgebra};
use superprolong::linalg::{kernel, rank};
use superprolong::prolong::{complete_prolong, der0, partial_prolong, prolong_step, DepthConstraint, ProlongOptions};
use superprolong::structure::module_span;
use superprolong::vectorfield::{Ambient, VectorField, WeightGrading};
use superprolong::{PrimeField, F3, F5};

pub const CASES: u32 = 1000;

pub struct Suite {
    pub name: &'static str,
    pub run: fn(u32, u32) -> Result<(), String>,
}

pub const SUITES: [Suite; 9] = [
    Suite {
        name: "super anti-symmetry",
        run: |p, n| by_prime(p, n, antisymmetry::<F3>, antisymmetry::<F5>),
    },
    Suite {
        name: "super Jacobi",
        run: |p, n| by_prime(p, n, jacobi::<F3>, jacobi::<F5>),
    },
    Suite {
        name: "super-Leibniz",
        run: |p, n| by_prime(p, n, leibniz::<F3>, leibniz::<F5>),
    },
    Suite {
        name: "grading additivity",
        run: |p, n| by_prime(p, n, grading::<F3>, grading::<F5>),
    },
    Suite {
        name: "prolong idempotence",
        run: |p, n| by_prime(p, n, idempotence::<F3>, idempotence::<F5>),
    },
    Suite {
        name: "partial within complete",
        run: |p, n| by_prime(p, n, partial_within::<F3>, partial_within::<F5>),
    },
    Suite {
        name: "bracket closure of prolongs",
        run: |p, n| by_prime(p, n, closure::<F3>, closure::<F5>),
    },
    Suite {
        name: "divided powers vs factorials",
        run: |p, n| by_prime(p, n, divided_powers::<F3>, divided_powers::<F5>),
    },
    Suite {
        name: "rank-nullity",
        run: |p, n| by_prime(p, n, rank_nullity::<F3>, rank_nullity::<F5>),
    },
];

fn by_prime(
    p: u32,
    cases: u32,
    f3: fn(&mut TestRunner) -> Result<(), String>,
    f5: fn(&mut TestRunner) -> Result<(), String>,
) -> Result<(), String> {
    let mut runner = runner(cases);
    match p {
        3 => f3(&mut runner),
        5 => f5(&mut runner),
        _ => Err(format!("no suite over F_{p}")),
    }
}

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

/// Runs one suite for both primes and panics with the failing input.
#[allow(dead_code)]
pub fn check(name: &str) {
    let s = SUITES.iter().find(|s| s.name == name).expect("suite");
    for p in [3, 5] {
        if let Err(e) = (s.run)(p, CASES) {
            panic!("{name} over F_{p}: {e}");
        }
    }
}

fn fail<E: std::fmt::Display>(e: E) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

/// `t, x` even and `ξ` odd: small enough for a thousand prolongs in a
/// debug build.
fn layout<F: PrimeField>() -> VariableSpec {
    VariableSpec::standard(F::CHARACTERISTIC, &[1, 1], 1).unwrap()
}

/// Coefficients of random parity-homogeneous fields, as `(term, coeff)`
/// indices into the list of fields `x^(a) ξ_J ∂_i` of that parity.
fn raw_field() -> impl Strategy<Value = (bool, Vec<(usize, i64)>)> {
    (any::<bool>(), prop::collection::vec((0usize..1 << 16, 1i64..5), 1..5))
}

fn keys(s: &VariableSpec, odd: bool) -> Vec<(SuperMonomial, usize)> {
    let want = if odd { Parity::Odd } else { Parity::Even };
    let mut out = Vec::new();
    for m in s.monomials() {
        for i in 0..s.len() {
            if m.parity().add(s.var(i).parity) == want {
                out.push((m.clone(), i));
            }
        }
    }
    out
}

fn field_of<F: PrimeField>(keys: &[(SuperMonomial, usize)], terms: &[(usize, i64)]) -> VectorField<F> {
    let mut x = VectorField::zero();
    for &(t, c) in terms {
        let (m, i) = &keys[t % keys.len()];
        x.add_term(m.clone(), *i, F::from_i64(c));
    }
    x
}

fn poly_of<F: PrimeField>(ms: &[SuperMonomial], terms: &[(usize, i64)]) -> SuperPolynomial<F> {
    let mut f = SuperPolynomial::zero();
    for &(t, c) in terms {
        f.add_term(ms[t % ms.len()].clone(), F::from_i64(c));
    }
    f
}

fn parity_of(odd: bool) -> Parity {
    if odd {
        Parity::Odd
    } else {
        Parity::Even
    }
}

fn antisymmetry<F: PrimeField>(r: &mut TestRunner) -> Result<(), String> {
    let s = layout::<F>();
    let ks = [keys(&s, false), keys(&s, true)];
    r.run(&(raw_field(), raw_field()), |((px, tx), (py, ty))| {
        let x = field_of::<F>(&ks[px as usize], &tx);
        let y = field_of::<F>(&ks[py as usize], &ty);
        let sign = parity_of(px).koszul::<F>(parity_of(py));
        let xy = superprolong::vectorfield::bracket(&s, &x, &y);
        prop_assert_eq!(xy.clone(), superprolong::vectorfield::bracket(&s, &y, &x).scale(-sign));
        if !xy.is_zero() {
            prop_assert_eq!(xy.parity(&s), Some(parity_of(px ^ py)));
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn jacobi<F: PrimeField>(r: &mut TestRunner) -> Result<(), String> {
    let s = layout::<F>();
    let ks = [keys(&s, false), keys(&s, true)];
    r.run(
        &(raw_field(), raw_field(), raw_field()),
        |((px, tx), (py, ty), (pz, tz))| {
            let b = |a: &VectorField<F>, c: &VectorField<F>| superprolong::vectorfield::bracket(&s, a, c);
            let x = field_of::<F>(&ks[px as usize], &tx);
            let y = field_of::<F>(&ks[py as usize], &ty);
            let z = field_of::<F>(&ks[pz as usize], &tz);
            let lhs = b(&x, &b(&y, &z));
            let mut rhs = b(&b(&x, &y), &z);
            rhs.add_scaled(&b(&y, &b(&x, &z)), parity_of(px).koszul(parity_of(py)));
            prop_assert_eq!(lhs, rhs);
            Ok(())
        },
    )
    .map_err(|e| e.to_string())
}

/// Fields act as superderivations, and the bracket is their supercommutator.
fn leibniz<F: PrimeField>(r: &mut TestRunner) -> Result<(), String> {
    let s = layout::<F>();
    let ks = [keys(&s, false), keys(&s, true)];
    let ms = s.monomials();
    let ms_by = [
        ms.iter()
            .filter(|m| m.parity() == Parity::Even)
            .cloned()
            .collect::<Vec<_>>(),
        ms.iter()
            .filter(|m| m.parity() == Parity::Odd)
            .cloned()
            .collect::<Vec<_>>(),
    ];
    r.run(
        &(raw_field(), raw_field(), raw_field(), raw_field()),
        |((px, tx), (py, ty), (pf, tf), (_, tg))| {
            let x = field_of::<F>(&ks[px as usize], &tx);
            let y = field_of::<F>(&ks[py as usize], &ty);
            let f = poly_of::<F>(&ms_by[pf as usize], &tf);
            let g = poly_of::<F>(&ms, &tg);
            let left = x.apply(&s, &s.multiply(&f, &g));
            let mut right = s.multiply(&x.apply(&s, &f), &g);
            right.add_assign_scaled(&s.multiply(&f, &x.apply(&s, &g)), parity_of(px).koszul(parity_of(pf)));
            prop_assert_eq!(left, right);

            let xy = superprolong::vectorfield::bracket(&s, &x, &y);
            let mut comm = x.apply(&s, &y.apply(&s, &g));
            comm.add_assign_scaled(
                &y.apply(&s, &x.apply(&s, &g)),
                -parity_of(px).koszul::<F>(parity_of(py)),
            );
            prop_assert_eq!(xy.apply(&s, &g), comm);
            Ok(())
        },
    )
    .map_err(|e| e.to_string())
}

fn weights() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1i64..4, 4)
}

/// Random homogeneous fields of random degrees under random weights.
fn grading<F: PrimeField>(r: &mut TestRunner) -> Result<(), String> {
    let s = layout::<F>();
    let field = || (any::<i64>(), prop::collection::vec((any::<usize>(), 1i64..5), 1..4));
    r.run(&(weights(), field(), field()), |(w, (dx, tx), (dy, ty))| {
        let w: Vec<i64> = w[..s.len()].to_vec();
        let amb = Ambient::new(s.clone(), WeightGrading::new(&s, w).map_err(fail)?);
        let span = amb.max_degree() - amb.min_degree() + 1;
        let pick = |d: i64, t: &[(usize, i64)]| -> Option<(i64, VectorField<F>)> {
            let k = amb.min_degree() + d.rem_euclid(span);
            let b = amb.basis(k);
            if b.is_empty() {
                return None;
            }
            let mut v = vec![F::zero(); b.len()];
            for &(i, c) in t {
                v[i % b.len()] += F::from_i64(c);
            }
            Some((k, amb.field(k, &v)))
        };
        let (Some((kx, x)), Some((ky, y))) = (pick(dx, &tx), pick(dy, &ty)) else {
            return Ok(());
        };
        for x in x.homogeneous_parts(&s, amb.grading()).into_values() {
            for y in y.homogeneous_parts(&s, amb.grading()).into_values() {
                let z = amb.bracket(&x, &y);
                if z.is_zero() {
                    continue;
                }
                prop_assert_eq!(amb.degree_of(&z), Some(kx + ky));
                let (px, py) = (x.parity(&s).unwrap(), y.parity(&s).unwrap());
                prop_assert_eq!(z.parity(&s), Some(px.add(py)));
            }
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

/// A random non-positive part: the negative part is one of a few fixed
/// shapes, `g_0` is generated by random homogeneous elements of `der_0`.
#[derive(Debug, Clone)]
struct Recipe {
    shape: usize,
    seeds: Vec<(bool, Vec<(usize, i64)>)>,
    h1: Vec<(bool, Vec<(usize, i64)>)>,
    keep: usize,
}

fn recipe() -> impl Strategy<Value = Recipe> {
    let seeds = prop::collection::vec(raw_field(), 0..4);
    let h1 = prop::collection::vec(raw_field(), 1..4);
    (0usize..3, seeds, h1, 0usize..4).prop_map(|(shape, seeds, h1, keep)| Recipe { shape, seeds, h1, keep })
}

struct Shape<F: PrimeField> {
    amb: Arc<Ambient>,
    neg: GradedAlgebra<F>,
    der0: [Vec<VectorField<F>>; 2],
}

/// Negative parts: all partials in the standard grading, all partials with
/// `t` of weight 2, and `∂_x, ∂_ξ + ξ∂_t` generating a depth-2 part.
fn shapes<F: PrimeField>() -> Vec<Shape<F>> {
    let s = layout::<F>();
    let contact = {
        let mut y = VectorField::<F>::partial(&s, 2);
        let mut xi = SuperMonomial::one(s.even_count());
        xi.odd = 1;
        y.add_term(xi, 0, F::one());
        vec![VectorField::partial(&s, 1), y]
    };
    let partials: Vec<VectorField<F>> = (0..s.len()).map(|i| VectorField::partial(&s, i)).collect();
    let layouts = vec![
        (vec![1, 1, 1], partials.clone()),
        (vec![2, 1, 1], partials),
        (vec![2, 1, 1], contact),
    ];
    layouts
        .into_iter()
        .map(|(w, gens)| {
            let amb = Arc::new(Ambient::new(s.clone(), WeightGrading::new(&s, w).unwrap()));
            let seeds: Vec<Element<F>> = gens.iter().map(|x| (amb.degree_of(x).unwrap(), x.clone())).collect();
            let neg = GradedAlgebra::new(amb.clone()).generated(&seeds).unwrap();
            let d0 = der0(&neg).unwrap();
            let (e, o) = amb.parity_parts(0, &d0);
            let der0 = [amb.fields_of(0, &e), amb.fields_of(0, &o)];
            Shape { amb, neg, der0 }
        })
        .collect()
}

fn combination<F: PrimeField>(basis: &[VectorField<F>], terms: &[(usize, i64)]) -> Option<VectorField<F>> {
    if basis.is_empty() {
        return None;
    }
    let mut x = VectorField::zero();
    for &(t, c) in terms {
        x.add_scaled(&basis[t % basis.len()], F::from_i64(c));
    }
    (!x.is_zero()).then_some(x)
}

fn nonpositive<F: PrimeField>(sh: &Shape<F>, r: &Recipe) -> Result<GradedAlgebra<F>, TestCaseError> {
    let seeds: Vec<Element<F>> = r
        .seeds
        .iter()
        .filter_map(|(odd, t)| combination(&sh.der0[*odd as usize], t).map(|x| (0, x)))
        .collect();
    let g0 = GradedAlgebra::new(sh.amb.clone()).generated(&seeds).map_err(fail)?;
    let mut g = sh.neg.clone();
    g.set_component(0, g0.component(0));
    Ok(g)
}

fn with_prolongs<F: PrimeField>(
    r: &mut TestRunner,
    check: impl Fn(&Shape<F>, &Recipe, &GradedAlgebra<F>, &GradedAlgebra<F>) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let shapes = shapes::<F>();
    r.run(&recipe(), |rc| {
        let sh = &shapes[rc.shape];
        let base = nonpositive(sh, &rc)?;
        let g = complete_prolong(&base, ProlongOptions::default())
            .map_err(fail)?
            .algebra;
        check(sh, &rc, &base, &g)
    })
    .map_err(|e| e.to_string())
}

/// Re-running a prolong step on the computed components returns the next
/// one unchanged, and the `depth` steps after the top are zero.
fn idempotence<F: PrimeField>(r: &mut TestRunner) -> Result<(), String> {
    with_prolongs::<F>(r, |_, _, base, g| {
        let top = g.max_degree().unwrap_or(0).max(0);
        for i in 0..top + g.depth() {
            let mut t = g.truncated(i64::MIN, i);
            for k in 0..=i {
                if !t.has(k) {
                    t.set_component(k, g.component(k));
                }
            }
            let next = prolong_step(&t, i, DepthConstraint::AllJ).map_err(fail)?;
            prop_assert_eq!(next, g.component(i + 1), "degree {}", i + 1);
        }
        let again = complete_prolong(&g.truncated(i64::MIN, 0), ProlongOptions::default()).map_err(fail)?;
        prop_assert_eq!(&again.algebra, g);
        prop_assert_eq!(g.truncated(i64::MIN, 0), base.clone());
        Ok(())
    })
}

/// Partial prolongs from `g_0`-submodules of `g_1` sit inside the complete
/// prolong, and a smaller submodule never gives a larger component.
fn partial_within<F: PrimeField>(r: &mut TestRunner) -> Result<(), String> {
    with_prolongs::<F>(r, |sh, rc, base, g| {
        let amb = &sh.amb;
        let (e, o) = amb.parity_parts(1, &g.component(1));
        let g1 = [amb.fields_of(1, &e), amb.fields_of(1, &o)];
        let seeds: Vec<VectorField<F>> = rc
            .h1
            .iter()
            .filter_map(|(odd, t)| combination(&g1[*odd as usize], t))
            .collect();
        let action = base.fields(0);
        let span = |xs: &[VectorField<F>]| -> Result<Vec<VectorField<F>>, TestCaseError> {
            let m = module_span(amb, 1, xs, &action).map_err(fail)?;
            Ok(amb.fields_of(1, &m))
        };
        let h = partial_prolong(base, &span(&seeds)?, ProlongOptions::default())
            .map_err(fail)?
            .algebra;
        let small = partial_prolong(
            base,
            &span(&seeds[..rc.keep.min(seeds.len())])?,
            ProlongOptions::default(),
        )
        .map_err(fail)?
        .algebra;
        prop_assert!(h.is_subalgebra_of(g));
        prop_assert!(small.is_subalgebra_of(&h));
        h.check_closure().map_err(fail)?;
        Ok(())
    })
}

/// `[g_i, g_j] ⊆ g_{i+j}` on all basis pairs of the complete prolong.
fn closure<F: PrimeField>(r: &mut TestRunner) -> Result<(), String> {
    with_prolongs::<F>(r, |_, _, _, g| {
        g.check_closure().map_err(fail)?;
        Ok(())
    })
}

fn factorial_binom(a: u128, b: u128) -> u128 {
    let f = |n: u128| (1..=n).product::<u128>();
    f(a) / (f(b) * f(a - b))
}

/// Product of two monomials from integer factorials and a sign counted by
/// explicit transpositions of the odd indices.
fn oracle(s: &VariableSpec, a: &SuperMonomial, b: &SuperMonomial) -> Option<(i64, SuperMonomial)> {
    let p = s.prime() as u128;
    let mut c: u128 = 1;
    let mut exps = Vec::new();
    for k in 0..a.exps.len() {
        let sum = a.exps[k] + b.exps[k];
        if sum >= s.bound(k) {
            return None;
        }
        c = c * factorial_binom(sum as u128, a.exps[k] as u128) % p;
        exps.push(sum);
    }
    let left: Vec<u32> = (0..64).filter(|k| a.odd >> k & 1 == 1).collect();
    let right: Vec<u32> = (0..64).filter(|k| b.odd >> k & 1 == 1).collect();
    if left.iter().any(|k| right.contains(k)) || c == 0 {
        return None;
    }
    let inversions = left
        .iter()
        .map(|&l| right.iter().filter(|&&r| r < l).count())
        .sum::<usize>();
    let c = if inversions % 2 == 1 { (p - c) % p } else { c };
    Some((
        c as i64,
        SuperMonomial {
            exps,
            odd: a.odd | b.odd,
        },
    ))
}

fn divided_powers<F: PrimeField>(r: &mut TestRunner) -> Result<(), String> {
    let p = F::CHARACTERISTIC;
    let strat = (
        prop::collection::vec(1u32..3, 1..4),
        0usize..4,
        any::<usize>(),
        any::<usize>(),
    );
    r.run(&strat, |(heights, odd, i, j)| {
        let s = VariableSpec::standard(p, &heights, odd).map_err(fail)?;
        let ms = s.monomials();
        let (a, b) = (&ms[i % ms.len()], &ms[j % ms.len()]);
        let got = s.multiply_monomials::<F>(a, b).map(|(c, m)| (c.value() as i64, m));
        prop_assert_eq!(got, oracle(&s, a, b));
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn rank_nullity<F: PrimeField>(r: &mut TestRunner) -> Result<(), String> {
    let p = F::CHARACTERISTIC as i64;
    let strat = (1usize..8, 1usize..8).prop_flat_map(move |(rows, cols)| {
        (
            Just(cols),
            prop::collection::vec(prop::collection::vec(0..p, cols), rows),
        )
    });
    r.run(&strat, |(cols, m)| {
        let a: Vec<Vec<F>> = m
            .iter()
            .map(|row| row.iter().map(|&v| F::from_i64(v)).collect())
            .collect();
        let rk = rank(&a, cols).map_err(fail)?;
        let ker = kernel(&a, cols).map_err(fail)?;
        prop_assert_eq!(rk + ker.dim(), cols);
        for v in ker.rows() {
            for row in &a {
                let dot = row.iter().zip(v).fold(F::zero(), |acc, (&x, &y)| acc + x * y);
                prop_assert!(dot.is_zero());
            }
        }
        let t: Vec<Vec<F>> = (0..cols).map(|c| a.iter().map(|row| row[c]).collect()).collect();
        prop_assert_eq!(rank(&t, a.len()).map_err(fail)?, rk);
        Ok(())
    })
    .map_err(|e| e.to_string())
}
