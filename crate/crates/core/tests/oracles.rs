//! Scenario-level values recomputed independently of the prolong engine.

use num_traits::Zero;

use superprolong::divided::Parity;
use superprolong::graded::Sdim;
use superprolong::linalg::{kernel, rank};
use superprolong::prolong::der0;
use superprolong::report::{self, RunSettings};
use superprolong::scenarios::{self, Status};
use superprolong::structure::{weight_decompose, Torus};
use superprolong::{PrimeField, F3, F5};

/// `osp(m|2n)` over F_p: supermatrices X with
/// `B(Xu, v) + (-1)^{p(X)p(u)} B(u, Xv) = 0` for the standard form, solved
/// entry by entry.
fn osp_sdim<F: PrimeField>(m: usize, n: usize) -> Sdim {
    let d = m + 2 * n;
    let parity = |i: usize| i >= m;
    let mut b = vec![vec![F::zero(); d]; d];
    for i in 0..m {
        b[i][i] = F::one();
    }
    for k in 0..n {
        b[m + k][m + n + k] = F::one();
        b[m + n + k][m + k] = -F::one();
    }
    let mut out = [0; 2];
    for (slot, odd) in [(0, false), (1, true)] {
        // unknowns: entries X_ij of the given parity, p(i) + p(j) = odd
        let entries: Vec<(usize, usize)> = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .filter(|&(i, j)| (parity(i) != parity(j)) == odd)
            .collect();
        let mut rows = Vec::new();
        for u in 0..d {
            for v in 0..d {
                let sign = if odd && parity(u) { -F::one() } else { F::one() };
                let row: Vec<F> = entries
                    .iter()
                    .map(|&(i, j)| {
                        // X e_j = sum_i X_ij e_i
                        let mut c = F::zero();
                        if j == u {
                            c += b[i][v];
                        }
                        if j == v {
                            c += sign * b[u][i];
                        }
                        c
                    })
                    .collect();
                rows.push(row);
            }
        }
        out[slot] = kernel(&rows, entries.len()).unwrap().dim();
    }
    Sdim::new(out[0], out[1])
}

#[test]
fn osp_dimensions_by_brute_force() {
    assert_eq!(osp_sdim::<F3>(1, 1), Sdim::new(3, 2));
    assert_eq!(osp_sdim::<F3>(3, 1), Sdim::new(6, 6));
    let osp24 = osp_sdim::<F3>(2, 2);
    assert_eq!(osp24, Sdim::new(11, 8));

    // the partial prolong of Bj(3;N|3) from g_1'' has this sdim
    let spec = scenarios::load("bj3N3").unwrap();
    let r = report::run(
        &spec,
        &RunSettings {
            partial: Some("g1pp".into()),
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(r.algebra.total, osp24);
}

#[test]
fn bj2_4_g0_acts_on_g_minus_one_as_osp_3_2() {
    let sc = scenarios::load("bj2_4").unwrap().build::<F3>(None).unwrap();
    let amb = &sc.ambient;
    let minus = sc.nonpositive.fields(-1);
    let mut parts = [Vec::new(), Vec::new()];
    for x in sc.nonpositive.fields(0) {
        let slot = usize::from(x.parity(amb.spec()) == Some(Parity::Odd));
        let flat: Vec<F3> = minus
            .iter()
            .flat_map(|y| amb.coords(&amb.bracket(&x, y), -1).unwrap())
            .collect();
        parts[slot].push(flat);
    }
    let width = parts[0].first().or(parts[1].first()).unwrap().len();
    let found = Sdim::new(rank(&parts[0], width).unwrap(), rank(&parts[1], width).unwrap());
    assert_eq!(found, osp_sdim::<F3>(3, 1));
}

#[test]
fn bj3n3_negative_part_closes_on_the_listed_vectors() {
    let sc = scenarios::load("bj3N3").unwrap().build::<F3>(None).unwrap();
    let amb = &sc.ambient;
    let b = amb.bracket(sc.label("Y2"), sc.label("Y5"));
    let span = amb.span(-2, &[sc.label("Y6").clone(), sc.label("Y8").clone()]).unwrap();
    assert!(!b.is_zero());
    assert!(span.contains(&amb.coords(&b, -2).unwrap()).unwrap());
}

#[test]
fn bj3n3_parity_counts_of_the_table() {
    let spec = scenarios::load("bj3N3").unwrap();
    let sc = spec.build::<F3>(None).unwrap();
    for d in [-2, -1, 0] {
        let mut count = Sdim::ZERO;
        for g in spec.generators.iter().filter(|g| g.degree == Some(d)) {
            match g.parity.map(Parity::from) {
                Some(Parity::Even) => count.even += 1,
                Some(Parity::Odd) => count.odd += 1,
                None => panic!("{} has no declared parity", g.label),
            }
        }
        assert_eq!(sc.nonpositive.sdim(d), count, "degree {d}");
    }
    assert_eq!(sc.nonpositive.sdim(0), Sdim::new(5, 2));
}

#[test]
fn weights_of_g_minus_one_by_direct_brackets() {
    let sc = scenarios::load("bj3N3").unwrap().build::<F3>(None).unwrap();
    let amb = &sc.ambient;
    let torus = Torus::new(amb, &sc.borel.cartan).unwrap();
    let spaces = weight_decompose(amb, &torus, -1, &sc.nonpositive.component(-1)).unwrap();
    let mut from_decomposition: Vec<Vec<u32>> = Vec::new();
    let mut direct: Vec<Vec<u32>> = Vec::new();
    for (w, s) in &spaces {
        for x in amb.fields_of(-1, s) {
            from_decomposition.push(w.clone());
            // [H, x] = lambda x, with lambda read off a nonzero coordinate
            let cx = amb.coords(&x, -1).unwrap();
            let pivot = cx.iter().position(|c| !c.is_zero()).unwrap();
            let lambda: Vec<u32> = sc
                .borel
                .cartan
                .iter()
                .map(|h| {
                    let hx = amb.coords(&amb.bracket(h, &x), -1).unwrap();
                    let l = hx[pivot] / cx[pivot];
                    assert_eq!(hx, cx.iter().map(|&c| c * l).collect::<Vec<_>>());
                    l.value()
                })
                .collect();
            direct.push(lambda);
        }
    }
    from_decomposition.sort();
    direct.sort();
    assert_eq!(from_decomposition.len(), sc.nonpositive.sdim(-1).total());
    assert_eq!(from_decomposition, direct);
}

fn assert_der0_contains_g0<F: PrimeField>(spec: &scenarios::ScenarioSpec) {
    let sc = spec.build::<F>(None).unwrap();
    let d = der0(&sc.nonpositive).unwrap();
    for x in sc.g0() {
        assert!(d.contains(&sc.ambient.coords(&x, 0).unwrap()).unwrap(), "{}", spec.name);
    }
}

#[test]
fn der0_contains_the_declared_g0() {
    for name in scenarios::names() {
        let spec = scenarios::load(name).unwrap();
        if spec.status == Status::Optional {
            continue;
        }
        match spec.prime {
            3 => assert_der0_contains_g0::<F3>(&spec),
            5 => assert_der0_contains_g0::<F5>(&spec),
            p => panic!("{name}: unexpected characteristic {p}"),
        }
    }
}
