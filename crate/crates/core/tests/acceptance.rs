//! The nine acceptance criteria, one test each. Every test prints a single
//! `PASS` or `FAIL` line (run with `--nocapture` to see them) before
//! asserting.

use std::time::Instant;

use arbordim::verify::{self, Check, SuiteReport};

fn report(id: u32, title: &str, checks: &[Check], started: Instant) {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    let status = if failed.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "criterion {id} {status}: {title} ({} checks, {:.1}s)",
        checks.len(),
        started.elapsed().as_secs_f64()
    );
    for c in &failed {
        println!("    failed {}: {}", c.name, c.detail);
    }
    assert!(failed.is_empty(), "criterion {id} failed: {failed:?}");
}

fn checks(suites: Vec<SuiteReport>) -> Vec<Check> {
    suites.into_iter().flat_map(|s| s.checks).collect()
}

#[test]
fn criterion_1_order_formula() {
    let t = Instant::now();
    let c = checks(vec![verify::aut_orders().unwrap()]);
    report(1, "enumerated automorphism groups match d!^((d^n-1)/(d-1))", &c, t);
}

#[test]
fn criterion_2_abelian_bound() {
    let t = Instant::now();
    let c = checks(vec![verify::abelian_bound().unwrap()]);
    report(2, "abelian subgroups satisfy |G| <= 2^I(T/G)", &c, t);
}

#[test]
fn criterion_3_tower_degrees() {
    let t = Instant::now();
    let c = checks(vec![verify::towers().unwrap()]);
    report(3, "tower degrees are powers of 2 divisible by the Frobenius lcm", &c, t);
}

#[test]
fn criterion_4_collapse_and_periodic_bounds() {
    use arbordim::dynamics::{parse_map, ProjPoint};
    let t = Instant::now();
    let mut c = verify::collapse_and_periodic_bounds(&parse_map("x^2-2").unwrap(), &ProjPoint::int(2), &[2, 1], 4).unwrap();
    c.extend(verify::collapse_and_periodic_bounds(&parse_map("x^2-1").unwrap(), &ProjPoint::int(0), &[2], 4).unwrap());
    report(4, "estimates stay below 1 - d^-m and the collapse recursion holds", &c, t);
}

#[test]
fn criterion_5_periodic_claim() {
    let t = Instant::now();
    let suite = verify::periodic_claim().unwrap();
    let c: Vec<Check> = suite.checks.into_iter().filter(|c| c.name.contains("N=")).collect();
    assert_eq!(c.len(), 2);
    report(5, "periodic base points: orbit claim and omitted-branch degree", &c, t);
}

#[test]
fn criterion_6_chebyshev() {
    let t = Instant::now();
    let c = checks(vec![verify::chebyshev()]);
    assert!(c[0].detail.starts_with("66 identities"), "{}", c[0].detail);
    report(6, "Chebyshev identities for de <= 12", &c, t);
}

#[test]
fn criterion_7_rescaling() {
    let t = Instant::now();
    let c = checks(vec![verify::rescale(verify::DEFAULT_SEED).unwrap()]);
    report(7, "rescaling identity and shared-iterate equivalence", &c, t);
}

#[test]
fn criterion_8_power_map_trend() {
    let t = Instant::now();
    let c = verify::power_map_trend().unwrap();
    report(8, "x^2 at 2: deg_n <= 4^n and a_3 < a_1", &c, t);
}

#[test]
fn criterion_9_specialization_bound() {
    let t = Instant::now();
    let c = verify::specialization_boundary().unwrap();
    report(9, "specialization tail bound at M = 1 and M = |Aut(T_m)|", &c, t);
}
