use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use superprolong::report::{self, RunSettings, Verdict};
use superprolong::scenarios;
use superprolong::split::{cartan_e, fixture_text, Exceptional, IntegralLie};
use superprolong::F3;

#[test]
fn bundled_fixtures_match_the_generator() {
    for e in Exceptional::ALL {
        let name = format!("{}_p3", e.name());
        let text = fixture_text::<F3>(e).unwrap();
        assert_eq!(
            scenarios::source(&name).unwrap(),
            text,
            "{name}: rerun the fixture generator"
        );
        assert_eq!(scenarios::load(&name).unwrap().status, scenarios::Status::Optional);
    }
}

#[test]
fn e7_and_e8_satisfy_jacobi_on_random_triples() {
    let mut rng = StdRng::seed_from_u64(7);
    for n in [7, 8] {
        let g = IntegralLie::simply_laced(&cartan_e(n));
        assert_eq!(g.dim(), if n == 7 { 133 } else { 248 });
        for _ in 0..20_000 {
            let (x, y, z) = (
                rng.gen_range(0..g.dim()),
                rng.gen_range(0..g.dim()),
                rng.gen_range(0..g.dim()),
            );
            assert!(g.jacobi_defect(x, y, z).is_empty(), "E{n}: {x} {y} {z}");
        }
    }
}

#[test]
fn nonpositive_parts_realize_as_closed_subalgebras() {
    // building checks degrees and closure under the bracket of vector fields
    for e in [Exceptional::F4, Exceptional::E6, Exceptional::E7] {
        let spec = e.scenario::<F3>().unwrap();
        let sc = spec.build::<F3>(None).unwrap();
        let (g, degrees) = e.graded();
        let negative = degrees.iter().filter(|&&d| d < 0).count();
        assert_eq!(sc.ambient.spec().len(), negative);
        assert_eq!(
            g.dim(),
            [52, 78, 133][Exceptional::ALL.iter().position(|&x| x == e).unwrap()]
        );
    }
}

#[test]
fn depth_one_prolongs_return_the_algebra() {
    for name in ["e6_p3", "e7_p3"] {
        let spec = scenarios::load(name).unwrap();
        let r = report::run(&spec, &RunSettings::default()).unwrap();
        assert!(r.claims.iter().all(|c| c.verdict == Verdict::Match), "{name}");
    }
}
