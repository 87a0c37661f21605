mod common;

#[test]
fn super_anti_symmetry() {
    common::check("super anti-symmetry");
}

#[test]
fn super_jacobi() {
    common::check("super Jacobi");
}

#[test]
fn super_leibniz() {
    common::check("super-Leibniz");
}

#[test]
fn grading_additivity() {
    common::check("grading additivity");
}

#[test]
fn prolong_idempotence() {
    common::check("prolong idempotence");
}

#[test]
fn partial_within_complete() {
    common::check("partial within complete");
}

#[test]
fn bracket_closure_of_prolongs() {
    common::check("bracket closure of prolongs");
}

#[test]
fn divided_powers_vs_factorials() {
    common::check("divided powers vs factorials");
}

#[test]
fn rank_nullity() {
    common::check("rank-nullity");
}
